import math

import numpy as np
import pytest

from bodymeasure.core import landmarks
from bodymeasure.core.exceptions import EmptyRegionError, EmptySectionError, InvalidInputError, JointLookupError
from bodymeasure.schemas.body import Skeleton
from bodymeasure.services import geometry, measure


def _skeleton(**points):
    joints = {
        "neck": (0.0, 150.0, 0.0),
        "mid_spine": (0.0, 125.0, 0.0),
        "pelvis": (0.0, 100.0, 0.0),
        "hip_left": (10.0, 95.0, 0.0),
        "hip_right": (-10.0, 95.0, 0.0),
        "shoulder_left": (20.0, 145.0, 0.0),
        "shoulder_right": (-20.0, 145.0, 0.0),
        "wrist_left": (75.0, 145.0, 0.0),
        "wrist_right": (-75.0, 145.0, 0.0),
        "ankle_left": (10.0, 10.0, 0.0),
        "ankle_right": (-10.0, 10.0, 0.0),
    }
    joints.update(points)
    return Skeleton(joints=joints)


def test_cylinder_circumference_matches_inscribed_polygon():
    mesh = geometry.cylinder(10.0, 1.0, resolution=256)
    expected = 2 * 256 * 10 * math.sin(math.pi / 256)
    assert measure.circumference_at(mesh, 0.5) == pytest.approx(expected, abs=1e-9)
    assert abs(measure.circumference_at(mesh, 0.5) - 62.829) <= 0.06


def test_cross_section_points_lie_on_cylinder():
    mesh = geometry.cylinder(10.0, 1.0, resolution=256)
    section = measure.cross_section(mesh, 0.5)
    radii = np.linalg.norm(section.points, axis=1)
    chord_tolerance = 10.0 * (1 - math.cos(math.pi / 256))
    assert np.max(np.abs(radii - 10.0)) <= chord_tolerance + 1e-9
    assert section.component_count == 1
    assert section.y_level == 0.5


def test_slice_above_mesh_is_empty_section():
    mesh = geometry.cylinder(10.0, 1.0)
    with pytest.raises(EmptySectionError):
        measure.cross_section(mesh, 2.0)


def test_empty_mesh_is_invalid_input():
    empty = geometry.TriMesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64))
    with pytest.raises(InvalidInputError):
        measure.cross_section(empty, 0.0)


def test_square_prism_circumference():
    mesh = geometry.square_prism(20.0, 10.0)
    assert measure.circumference_at(mesh, 5.0) == pytest.approx(80.0, abs=1e-9)


def test_two_cylinders_hull_perimeter():
    left = geometry.cylinder(5.0, 10.0, resolution=256, base=(-10.0, 0.0, 0.0))
    right = geometry.cylinder(5.0, 10.0, resolution=256, base=(10.0, 0.0, 0.0))
    mesh = geometry.TriMesh.concat([left, right])

    expected = 2 * math.pi * 5 + 2 * 20
    assert measure.circumference_at(mesh, 5.0) == pytest.approx(expected, rel=1e-3)
    assert measure.cross_section(mesh, 5.0).component_count == 2


def test_body_sliced_at_thigh_level_has_two_legs(male_body):
    joints = male_body.skeleton.joints
    pelvis_y, ankle_y = joints["pelvis"][1], joints["ankle_left"][1]
    level = pelvis_y - landmarks.THIGH_DROP * (pelvis_y - ankle_y)
    assert measure.cross_section(male_body, level).component_count == 2


def test_frustum_extremes_land_on_region_ends():
    mesh = geometry.frustum(10.0, 15.0, 100.0)

    y_min, circ_min = measure.extremal_circumference(mesh, 20.0, 40.0, "minimal", 64)
    assert y_min == pytest.approx(20.0)
    assert circ_min == pytest.approx(2 * math.pi * 11, rel=1e-3)

    y_max, circ_max = measure.extremal_circumference(mesh, 20.0, 40.0, "maximal", 64)
    assert y_max == pytest.approx(40.0)
    assert circ_max == pytest.approx(2 * math.pi * 12, rel=1e-3)


@pytest.mark.parametrize("mode", list(measure.Extremum))
def test_constant_cylinder_ties_break_to_lower_level(mode):
    mesh = geometry.cylinder(10.0, 1.0)
    y, _ = measure.extremal_circumference(mesh, 0.2, 0.8, mode, 16)
    assert y == pytest.approx(0.2)


def test_extremal_region_outside_mesh():
    mesh = geometry.cylinder(10.0, 1.0)
    with pytest.raises(EmptyRegionError):
        measure.extremal_circumference(mesh, 5.0, 6.0, "minimal", 8)


def test_extremal_rejects_bad_arguments():
    mesh = geometry.cylinder(10.0, 1.0)
    with pytest.raises(InvalidInputError):
        measure.extremal_circumference(mesh, 0.8, 0.2)
    with pytest.raises(InvalidInputError):
        measure.extremal_circumference(mesh, 0.2, 0.8, levels=1)


def test_joint_distance():
    skeleton = _skeleton(head=(0.0, 0.0, 0.0), knee_left=(3.0, 4.0, 0.0), elbow_left=(0.0, 50.0, 0.0))
    assert measure.joint_distance(skeleton, "head", "elbow_left") == 50.0
    assert measure.joint_distance(skeleton, "head", "knee_left") == 5.0
    assert measure.joint_distance(skeleton, "pelvis", "pelvis") == 0.0


def test_joint_distance_unknown_joint():
    with pytest.raises(JointLookupError):
        measure.joint_distance(_skeleton(), "neck", "tail")


def test_hull_perimeter_bounds_raw_loop():
    # 오목한 별 모양: 헐 둘레는 원래 다각형 둘레보다 길 수 없다
    theta = np.linspace(0, 2 * np.pi, 20, endpoint=False)
    radius = np.where(np.arange(20) % 2 == 0, 10.0, 4.0)
    star = np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])
    assert geometry.hull_perimeter(star) <= geometry.polygon_perimeter(star)
    assert geometry.hull_perimeter(star) > 0


def test_collinear_points_count_as_doubled_segment():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]])
    assert geometry.hull_perimeter(points) == pytest.approx(6.0)


def test_superellipse_ring_has_unit_perimeter():
    ring = geometry.superellipse_ring(128, 2.5, 0.72)
    assert geometry.polygon_perimeter(ring) == pytest.approx(1.0)
    assert geometry.polygon_perimeter(ring * 83.0) == pytest.approx(83.0)


def test_uv_sphere_equator():
    sphere = geometry.uv_sphere(10.0, n_lat=64, n_lon=256)
    assert measure.circumference_at(sphere, 0.0) == pytest.approx(2 * math.pi * 10, rel=1e-3)
