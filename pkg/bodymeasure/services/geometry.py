# 삼각형 메시 자료구조와 로프트 유틸리티
"""
센티미터 단위 삼각형 메시. Y 가 위, Z 가 카메라 쪽이다.

튜브는 평면 링을 쌓아 로프트한다. 한 튜브의 링은 모두 꼭짓점 수가 같아서
이웃한 링을 사각형 단위로 잇는다.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from bodymeasure.schemas.body import Skeleton

# 링 평면의 두 좌표축 (로프트 축 → 나머지 축)
PLANE_AXES = {0: (1, 2), 1: (0, 2), 2: (0, 1)}


@dataclass(frozen=True, eq=False)
class TriMesh:
    vertices: np.ndarray  # (V, 3) float64
    faces: np.ndarray  # (F, 3) int64

    def __post_init__(self):
        vertices = np.ascontiguousarray(self.vertices, dtype=np.float64)
        faces = np.ascontiguousarray(self.faces, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[1] != 3:
            raise ValueError(f"vertices must be (V, 3), got {vertices.shape}")
        if faces.size and (faces.ndim != 2 or faces.shape[1] != 3):
            raise ValueError(f"faces must be (F, 3), got {faces.shape}")
        faces = faces.reshape(-1, 3)
        if faces.size and (faces.min() < 0 or faces.max() >= len(vertices)):
            raise ValueError("face index out of range")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "faces", faces)

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0 or len(self.faces) == 0

    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    @cached_property
    def edge_table(self) -> Tuple[np.ndarray, np.ndarray]:
        """(고유 모서리 (E, 2), 면별 모서리 id (F, 3))"""
        pairs = self.faces[:, [[0, 1], [1, 2], [2, 0]]].reshape(-1, 2)
        pairs = np.sort(pairs, axis=1)
        edges, inverse = np.unique(pairs, axis=0, return_inverse=True)
        return edges, inverse.reshape(-1, 3)

    def transformed(self, scale: float = 1.0, offset: Sequence[float] = (0.0, 0.0, 0.0)) -> "TriMesh":
        return TriMesh(self.vertices * scale + np.asarray(offset, dtype=np.float64), self.faces.copy())

    @staticmethod
    def concat(meshes: Iterable["TriMesh"]) -> "TriMesh":
        vertices, faces, base = [], [], 0
        for mesh in meshes:
            vertices.append(mesh.vertices)
            faces.append(mesh.faces + base)
            base += len(mesh.vertices)
        if not vertices:
            return TriMesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64))
        return TriMesh(np.vstack(vertices), np.vstack(faces))


@dataclass(frozen=True, eq=False)
class BodyMesh(TriMesh):
    skeleton: Optional[Skeleton] = field(default=None)

    def transformed(self, scale: float = 1.0, offset: Sequence[float] = (0.0, 0.0, 0.0)) -> "BodyMesh":
        moved = super().transformed(scale, offset)
        skeleton = self.skeleton.transformed(scale, tuple(offset)) if self.skeleton else None
        return BodyMesh(moved.vertices, moved.faces, skeleton)


def polygon_perimeter(points: np.ndarray) -> float:
    """닫힌 다각형 둘레"""
    closed = np.vstack([points, points[:1]])
    return float(np.linalg.norm(np.diff(closed, axis=0), axis=1).sum())


def hull_perimeter(points: np.ndarray) -> float:
    """2D 볼록 껍질 둘레. 한 직선 위의 점들은 선분 길이의 두 배로 친다."""
    points = np.asarray(points, dtype=np.float64)
    if len(points) == 0:
        return 0.0
    try:
        hull = ConvexHull(points)
    except (QhullError, ValueError):
        anchor = points[np.argmax(np.linalg.norm(points - points[0], axis=1))]
        return 2.0 * float(np.linalg.norm(points - anchor, axis=1).max())
    return polygon_perimeter(points[hull.vertices])


def circle_ring(radius: float, resolution: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(resolution) / resolution
    return np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])


def superellipse_ring(resolution: int, exponent: float = 2.0, aspect: float = 1.0) -> np.ndarray:
    """둘레 1 인 초타원 다각형. 둘레값을 곱하면 정확히 그 둘레가 된다."""
    theta = 2.0 * np.pi * np.arange(resolution) / resolution
    c, s = np.cos(theta), np.sin(theta)
    power = 2.0 / exponent
    ring = np.column_stack([np.sign(c) * np.abs(c) ** power, aspect * np.sign(s) * np.abs(s) ** power])
    return ring / polygon_perimeter(ring)


def loft(
    axis: int,
    levels: Sequence[float],
    center: Tuple[float, float],
    rings: Sequence[np.ndarray],
    cap_start: Optional[float] = None,
    cap_end: Optional[float] = None,
) -> TriMesh:
    """
    `axis` 방향으로 쌓인 평면 링들을 튜브로 잇는다.

    rings[i] 는 PLANE_AXES[axis] 평면의 2D 오프셋이며 `center` 기준 levels[i] 높이에 놓인다.
    cap_start / cap_end 는 해당 높이의 꼭짓점 하나로 부채꼴 뚜껑을 만든다 (끝 높이와 같으면 평평한 뚜껑).
    """
    if len(levels) != len(rings) or len(levels) < 2:
        raise ValueError("need at least two rings, one per level")
    resolution = len(rings[0])
    u, v = PLANE_AXES[axis]

    blocks = []
    for level, ring in zip(levels, rings):
        if len(ring) != resolution:
            raise ValueError("all rings of a tube must share one resolution")
        block = np.empty((resolution, 3))
        block[:, axis] = level
        block[:, u] = center[0] + ring[:, 0]
        block[:, v] = center[1] + ring[:, 1]
        blocks.append(block)
    vertices = [np.vstack(blocks)]

    k = np.arange(resolution)
    k_next = (k + 1) % resolution
    faces = []
    for i in range(len(levels) - 1):
        a, b = i * resolution + k, i * resolution + k_next
        c, d = (i + 1) * resolution + k, (i + 1) * resolution + k_next
        faces.append(np.column_stack([a, b, d]))
        faces.append(np.column_stack([a, d, c]))

    n = len(levels) * resolution
    for apex_level, ring_index in ((cap_start, 0), (cap_end, len(levels) - 1)):
        if apex_level is None:
            continue
        apex = np.zeros(3)
        apex[axis] = apex_level
        apex[u], apex[v] = center
        vertices.append(apex[None, :])
        base = ring_index * resolution
        faces.append(np.column_stack([np.full(resolution, n), base + k_next, base + k]))
        n += 1

    return TriMesh(np.vstack(vertices), np.vstack(faces))


# ---------------------------------------------------------------------------
# 기본 도형 (테스트 오라클과 디버그 출력용)
# ---------------------------------------------------------------------------
def cylinder(radius: float, height: float, resolution: int = 256, base: Tuple[float, float, float] = (0.0, 0.0, 0.0)) -> TriMesh:
    ring = circle_ring(radius, resolution)
    y0 = base[1]
    return loft(1, [y0, y0 + height], (base[0], base[2]), [ring, ring], cap_start=y0, cap_end=y0 + height)


def frustum(r_bottom: float, r_top: float, height: float, resolution: int = 256) -> TriMesh:
    return loft(
        1,
        [0.0, height],
        (0.0, 0.0),
        [circle_ring(r_bottom, resolution), circle_ring(r_top, resolution)],
        cap_start=0.0,
        cap_end=height,
    )


def square_prism(side: float, height: float) -> TriMesh:
    h = side / 2.0
    ring = np.array([[h, h], [-h, h], [-h, -h], [h, -h]])
    return loft(1, [0.0, height], (0.0, 0.0), [ring, ring], cap_start=0.0, cap_end=height)


def uv_sphere(radius: float, n_lat: int = 64, n_lon: int = 128, center: Tuple[float, float, float] = (0.0, 0.0, 0.0)) -> TriMesh:
    # 위도 링을 Y 축으로 쌓고 양 극점은 캡으로 닫는다
    phi = np.pi * np.arange(1, n_lat) / n_lat
    levels = center[1] - radius * np.cos(phi)
    rings = [circle_ring(radius * np.sin(p), n_lon) for p in phi]
    return loft(
        1,
        list(levels),
        (center[0], center[2]),
        rings,
        cap_start=center[1] - radius,
        cap_end=center[1] + radius,
    )
