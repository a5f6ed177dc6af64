import numpy as np
import pytest

from bodymeasure.core import landmarks as lm
from bodymeasure.schemas.body import Sex
from bodymeasure.schemas.measurement import MEASUREMENT_KEYS, MeasureConfig
from bodymeasure.services import bodygen, measure

LENGTH_KEYS = ("shoulder_to_wrist", "torso_length", "leg_length", "shoulder_width", "stature")


@pytest.fixture(scope="module")
def reference_body(reference_spec):
    return bodygen.build_body(reference_spec, 256)


@pytest.fixture(scope="module")
def reference_measurements(reference_body):
    return measure.measure_all(reference_body)


def test_all_sixteen_measurements_positive(reference_measurements):
    assert list(reference_measurements.values) == list(MEASUREMENT_KEYS)
    assert all(v > 0 for v in reference_measurements.values.values())


def test_lengths_match_construction(reference_spec, reference_measurements):
    m = reference_measurements
    assert m["torso_length"] == pytest.approx(reference_spec.torso_len, abs=1e-9)
    assert m["leg_length"] == pytest.approx(reference_spec.leg_len, abs=1e-9)
    assert m["shoulder_to_wrist"] == pytest.approx(reference_spec.arm_len, abs=1e-9)
    assert m["shoulder_width"] == pytest.approx(reference_spec.shoulder_width, abs=1e-9)
    assert m["stature"] == pytest.approx(reference_spec.stature, abs=1e-9)


def test_girths_match_construction(reference_spec, reference_measurements):
    m = reference_measurements
    assert m["waist_circumference"] == pytest.approx(reference_spec.waist_circ, rel=0.01)
    assert m["pelvis_circumference"] == pytest.approx(reference_spec.pelvis_circ, rel=0.01)
    g = reference_spec.aux_girths
    for name in ("chest", "thigh", "calf", "bicep", "forearm", "wrist", "ankle"):
        assert m[f"{name}_circumference"] == pytest.approx(g[name], rel=1e-6), name


def test_waist_is_a_minimum_near_mid_spine(reference_body, reference_spec):
    mid = reference_body.skeleton.joints["mid_spine"][1]
    half = 0.05 * reference_spec.stature
    y, circ = measure.extremal_circumference(reference_body, mid - half, mid + half, measure.Extremum.minimal)
    assert abs(y - mid) <= 2 * half / 63 + 1e-9
    assert circ <= measure.circumference_at(reference_body, mid + 0.9 * half)


@pytest.mark.parametrize("k", [0.5, 2.0])
def test_scale_equivariance(reference_body, reference_measurements, k):
    scaled = measure.measure_all(reference_body.transformed(scale=k))
    for key in MEASUREMENT_KEYS:
        assert scaled[key] == pytest.approx(k * reference_measurements[key], rel=1e-6), key


def test_translation_invariance(reference_body, reference_measurements):
    moved = measure.measure_all(reference_body.transformed(offset=(0.0, 12.5, -4.0)))
    for key in MEASUREMENT_KEYS:
        assert moved[key] == pytest.approx(reference_measurements[key], rel=1e-6), key


def test_finer_level_grid_agrees(reference_body, reference_measurements):
    fine = measure.measure_all(reference_body, MeasureConfig(levels=128))
    for key in ("waist_circumference", "pelvis_circumference"):
        assert fine[key] == pytest.approx(reference_measurements[key], rel=0.005)


def test_measured_waist_grows_with_spec_waist(reference_spec):
    measured = []
    for waist in (70.0, 80.0, 90.0, 100.0):
        body = bodygen.build_body(reference_spec.model_copy(update={"waist_circ": waist}), 64)
        measured.append(measure.measure_all(body)["waist_circumference"])
    assert all(b > a for a, b in zip(measured, measured[1:]))


def test_neck_and_head_levels_follow_landmarks(reference_body, reference_measurements):
    joints = reference_body.skeleton.joints
    neck_y, head_y = joints["neck"][1], joints["head"][1]
    level = neck_y + lm.NECK_LEVEL * (head_y - neck_y)
    assert reference_measurements["neck_circumference"] == pytest.approx(measure.circumference_at(reference_body, level))
    assert reference_measurements["head_circumference"] == pytest.approx(measure.circumference_at(reference_body, head_y))


def test_left_limb_only(reference_body, reference_spec):
    joints = reference_body.skeleton.joints
    ankle_y = joints["ankle_left"][1]
    left = measure.limb_circumference(reference_body, ankle_y, positive_x=True)
    right = measure.limb_circumference(reference_body, ankle_y, positive_x=False)
    both = measure.circumference_at(reference_body, ankle_y)
    assert left == pytest.approx(reference_spec.aux_girths["ankle"], rel=1e-6)
    assert right == pytest.approx(left, rel=1e-6)
    assert both > left + right


def test_body_without_skeleton_rejected(reference_body):
    from bodymeasure.core.exceptions import JointLookupError
    from bodymeasure.services.geometry import TriMesh

    bare = TriMesh(reference_body.vertices, reference_body.faces)
    with pytest.raises(JointLookupError):
        measure.measure_all(bare)


@pytest.mark.slow
def test_round_trip_over_sampled_population(ranges):
    for i in range(200):
        sex = Sex.male if i % 2 == 0 else Sex.female
        spec = bodygen.sample_body_spec(sex, 1000 + i, ranges)
        m = measure.measure_all(bodygen.build_body(spec, 256))
        assert m["waist_circumference"] == pytest.approx(spec.waist_circ, rel=0.01)
        assert m["pelvis_circumference"] == pytest.approx(spec.pelvis_circ, rel=0.01)
        assert m["torso_length"] == pytest.approx(spec.torso_len, abs=1e-6)
        assert m["leg_length"] == pytest.approx(spec.leg_len, abs=1e-6)
        assert m["shoulder_to_wrist"] == pytest.approx(spec.arm_len, abs=1e-6)
        assert np.isclose(m["stature"], spec.stature, atol=1e-6)
