# 메시 단면 기반 인체 측정
"""
BodyMesh 에서 정답 신체 치수를 잰다.

둘레는 줄자 둘레다. 절단 평면과 메시가 만나는 모든 점의 볼록 껍질 둘레를 쓴다.
길이는 관절 사이 거리다.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from bodymeasure.core import landmarks as lm
from bodymeasure.core.exceptions import EmptyRegionError, EmptySectionError, InvalidInputError, JointLookupError
from bodymeasure.schemas.body import Skeleton
from bodymeasure.schemas.measurement import MeasureConfig, MeasurementSet
from bodymeasure.services.geometry import PLANE_AXES, BodyMesh, TriMesh, hull_perimeter

logger = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-9


class Extremum(str, Enum):
    minimal = "minimal"
    maximal = "maximal"


@dataclass(frozen=True, eq=False)
class CrossSection:
    y_level: float
    points: np.ndarray  # (M, 2) XZ
    component_count: int


def _check_mesh(mesh: TriMesh) -> None:
    if mesh is None or mesh.is_empty:
        raise InvalidInputError("mesh is empty")


def _signed_distances(mesh: TriMesh, axis: int, level: float) -> np.ndarray:
    return mesh.vertices[:, axis] - level


def section_points(mesh: TriMesh, level: float, axis: int = 1) -> np.ndarray:
    """평면 (axis = level) 과 메시 모서리의 교점들을 평면 좌표로 반환"""
    _check_mesh(mesh)
    d = _signed_distances(mesh, axis, level)
    edges, _ = mesh.edge_table
    da, db = d[edges[:, 0]], d[edges[:, 1]]
    crossing = da * db < 0

    va = mesh.vertices[edges[crossing, 0]]
    vb = mesh.vertices[edges[crossing, 1]]
    t = (da[crossing] / (da[crossing] - db[crossing]))[:, None]
    points = va + (vb - va) * t

    on_plane = np.unique(mesh.faces[d[mesh.faces] == 0])
    points = np.vstack([points, mesh.vertices[on_plane]])

    if len(points) == 0:
        raise EmptySectionError(f"plane {'XYZ'[axis]}={level:.4f} misses the mesh")
    return points[:, list(PLANE_AXES[axis])]


def _count_components(mesh: TriMesh, d: np.ndarray) -> int:
    edges, face_edges = mesh.edge_table
    n_edges = len(edges)
    edge_active = d[edges[:, 0]] * d[edges[:, 1]] < 0
    vertex_active = d == 0

    # 노드: 교차하는 모서리 [0, E) + 평면 위 정점 [E, E+V)
    node_ids = np.hstack([face_edges, mesh.faces + n_edges])
    active = np.hstack([edge_active[face_edges], vertex_active[mesh.faces]])
    touched = active.any(axis=1)
    node_ids, active = node_ids[touched], active[touched]
    if len(node_ids) == 0:
        return 0

    first = node_ids[np.arange(len(node_ids)), active.argmax(axis=1)]
    rows = np.repeat(first, active.sum(axis=1))
    cols = node_ids[active]
    size = n_edges + len(mesh.vertices)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    _, labels = connected_components(graph, directed=False)
    return int(len(np.unique(labels[cols])))


def cross_section(mesh: TriMesh, y: float) -> CrossSection:
    points = section_points(mesh, y, axis=1)
    d = _signed_distances(mesh, 1, y)
    return CrossSection(y_level=float(y), points=points, component_count=_count_components(mesh, d))


def circumference_at(mesh: TriMesh, y: float) -> float:
    return hull_perimeter(section_points(mesh, y, axis=1))


def limb_circumference(mesh: TriMesh, level: float, axis: int = 1, positive_x: bool = True) -> float:
    """
    팔다리 하나의 둘레: 단면에서 피험자 왼쪽(x > 0) 또는 오른쪽 점만 남기고
    볼록 껍질 둘레를 잰다.
    """
    points = section_points(mesh, level, axis=axis)
    if axis == 1:
        side = points[:, 0] > 0 if positive_x else points[:, 0] < 0
        points = points[side]
        if len(points) == 0:
            raise EmptySectionError(f"no {'left' if positive_x else 'right'} limb at y={level:.4f}")
    return hull_perimeter(points)


def extremal_circumference(
    mesh: TriMesh,
    y_min: float,
    y_max: float,
    mode: Extremum = Extremum.minimal,
    levels: int = 64,
) -> Tuple[float, float]:
    """
    [y_min, y_max] (양 끝 포함)을 `levels` 개 등간격 평면으로 잘라 가장 작거나
    큰 둘레의 (y*, 둘레)를 돌려준다. 같으면 낮은 높이를 고른다.
    """
    if not y_min < y_max:
        raise InvalidInputError(f"empty region [{y_min}, {y_max}]")
    if levels < 2:
        raise InvalidInputError("levels must be >= 2")
    _check_mesh(mesh)
    mode = Extremum(mode)

    best: Optional[Tuple[float, float]] = None
    for y in np.linspace(y_min, y_max, levels):
        try:
            circ = circumference_at(mesh, float(y))
        except EmptySectionError:
            continue
        if best is None:
            best = (float(y), circ)
            continue
        # 부동소수점 잡음 수준의 차이는 동률로 본다
        tol = TIE_TOLERANCE * abs(best[1])
        if mode is Extremum.minimal and circ < best[1] - tol:
            best = (float(y), circ)
        elif mode is Extremum.maximal and circ > best[1] + tol:
            best = (float(y), circ)

    if best is None:
        raise EmptyRegionError(f"region [{y_min:.3f}, {y_max:.3f}] lies outside the mesh")
    return best


def joint_distance(skeleton: Skeleton, a: str, b: str) -> float:
    for name in (a, b):
        if name not in skeleton.joints:
            raise JointLookupError(f"unknown joint {name!r}")
    pa = np.asarray(skeleton.joints[a], dtype=np.float64)
    pb = np.asarray(skeleton.joints[b], dtype=np.float64)
    return float(np.linalg.norm(pa - pb))


def _joint(skeleton: Skeleton, name: str) -> np.ndarray:
    try:
        return np.asarray(skeleton.joints[name], dtype=np.float64)
    except KeyError:
        raise JointLookupError(f"unknown joint {name!r}") from None


def measure_all(mesh: BodyMesh, config: Optional[MeasureConfig] = None) -> MeasurementSet:
    config = config or MeasureConfig()
    _check_mesh(mesh)
    skeleton = getattr(mesh, "skeleton", None)
    if skeleton is None:
        raise JointLookupError("mesh has no skeleton")

    lo, hi = mesh.bounds()
    stature = float(hi[1] - lo[1])

    neck = _joint(skeleton, "neck")
    pelvis = _joint(skeleton, "pelvis")
    mid_spine = _joint(skeleton, "mid_spine")
    hip = _joint(skeleton, "hip_left")
    ankle = _joint(skeleton, "ankle_left")
    shoulder = _joint(skeleton, "shoulder_left")
    wrist = _joint(skeleton, "wrist_left")

    half = config.waist_region_fraction * stature
    waist_y, waist = extremal_circumference(
        mesh, mid_spine[1] - half, mid_spine[1] + half, Extremum.minimal, config.levels
    )
    pelvis_y, pelvis_circ = extremal_circumference(
        mesh, min(hip[1], pelvis[1]), max(hip[1], pelvis[1]), Extremum.maximal, config.levels
    )
    logger.debug("waist level %.3f, pelvis level %.3f", waist_y, pelvis_y)

    leg_vertical = pelvis[1] - ankle[1]
    torso_vertical = neck[1] - pelvis[1]
    arm_run = wrist[0] - shoulder[0]
    head_y = _joint(skeleton, "head")[1] if "head" in skeleton.joints else neck[1] + lm.HEAD_CENTER * (hi[1] - neck[1])

    values: Dict[str, float] = {
        "waist_circumference": waist,
        "pelvis_circumference": pelvis_circ,
        "shoulder_to_wrist": joint_distance(skeleton, "shoulder_left", "wrist_left"),
        "torso_length": joint_distance(skeleton, "neck", "pelvis"),
        "leg_length": joint_distance(skeleton, "pelvis", "ankle_left"),
        "stature": stature,
        "head_circumference": circumference_at(mesh, head_y),
        "neck_circumference": circumference_at(mesh, neck[1] + lm.NECK_LEVEL * (head_y - neck[1])),
        "chest_circumference": circumference_at(mesh, pelvis[1] + lm.CHEST_RISE * torso_vertical),
        "thigh_circumference": limb_circumference(mesh, pelvis[1] - lm.THIGH_DROP * leg_vertical),
        "calf_circumference": limb_circumference(mesh, ankle[1] + lm.CALF_RISE * leg_vertical),
        "ankle_circumference": limb_circumference(mesh, ankle[1]),
        "bicep_circumference": limb_circumference(mesh, shoulder[0] + lm.BICEP_RUN * arm_run, axis=0),
        "forearm_circumference": limb_circumference(mesh, shoulder[0] + lm.FOREARM_RUN * arm_run, axis=0),
        "wrist_circumference": limb_circumference(mesh, wrist[0], axis=0),
        "shoulder_width": joint_distance(skeleton, "shoulder_left", "shoulder_right"),
    }
    return MeasurementSet(values=values)
