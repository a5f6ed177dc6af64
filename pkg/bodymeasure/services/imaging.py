# 정면 실루엣 렌더링과 모델 입력 변환
"""
삼각형 메시를 정면 직교 투영으로 8비트 그레이스케일 이미지에 렌더링한다.

꼭짓점은 1/256 px 고정소수점 격자에 맞추고, 삼각형은 픽셀 중심에서 정수
에지 함수와 top-left 규칙으로 채운다. 같은 메시와 RenderConfig 면 결과가 비트 단위로 같다.
"""
import io
import logging
from pathlib import Path
from typing import Sequence, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from bodymeasure.core.exceptions import ImageDecodeError, InvalidInputError, OutOfFrameError, StorageError
from bodymeasure.schemas.render import RenderConfig, ShadingMode
from bodymeasure.schemas.training import IMAGENET_MEAN, IMAGENET_STD
from bodymeasure.services.geometry import TriMesh

logger = logging.getLogger(__name__)

MODEL_INPUT_SIZE = 224
SUBPIXEL_BITS = 8
SUBPIXEL = 1 << SUBPIXEL_BITS

ImageSource = Union[np.ndarray, Image.Image, bytes, str, Path]


def project(mesh: TriMesh, cfg: RenderConfig) -> np.ndarray:
    """월드 좌표(cm) → 이미지 좌표(px, y 아래 방향). 바닥은 floor_margin_px 위에 놓인다."""
    v = mesh.vertices
    u = cfg.image_width_px / 2.0 + v[:, 0] * cfg.px_per_cm
    w = cfg.image_height_px - cfg.floor_margin_px - v[:, 1] * cfg.px_per_cm
    return np.column_stack([u, w])


def _shade(z: np.ndarray, cfg: RenderConfig) -> np.ndarray:
    lo, hi = cfg.depth_range_cm
    t = np.clip((z - lo) / (hi - lo), 0.0, 1.0)
    levels = cfg.depth_far_level + t * (cfg.depth_near_level - cfg.depth_far_level)
    return np.rint(levels).astype(np.uint8)


def render_silhouette(mesh: TriMesh, cfg: RenderConfig = RenderConfig()) -> np.ndarray:
    """+Z 에서 본 `mesh` 를 래스터화해 (H, W) uint8 배열로 돌려준다"""
    if mesh is None or mesh.is_empty:
        raise InvalidInputError("cannot render an empty mesh")

    height, width = cfg.image_height_px, cfg.image_width_px
    uv = project(mesh, cfg)
    if uv[:, 0].min() < 0 or uv[:, 0].max() > width or uv[:, 1].min() < 0 or uv[:, 1].max() > height:
        raise OutOfFrameError(
            f"mesh spans x∈[{uv[:, 0].min():.1f}, {uv[:, 0].max():.1f}] "
            f"y∈[{uv[:, 1].min():.1f}, {uv[:, 1].max():.1f}] px, frame is {width}x{height}"
        )

    fixed = np.rint(uv * SUBPIXEL).astype(np.int64)
    depth_mode = cfg.shading is ShadingMode.depth
    zbuf = np.full((height, width), -np.inf)
    covered = np.zeros((height, width), dtype=bool)
    z = mesh.vertices[:, 2]

    for tri in mesh.faces:
        p = fixed[tri]
        a, b, c = p[0], p[1], p[2]
        area = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if area == 0:
            continue
        zs = z[tri]
        if area < 0:
            b, c = c, b
            zs = zs[[0, 2, 1]]
            area = -area

        col0 = max(int(min(a[0], b[0], c[0])) >> SUBPIXEL_BITS, 0)
        col1 = min(int(max(a[0], b[0], c[0])) >> SUBPIXEL_BITS, width - 1)
        row0 = max(int(min(a[1], b[1], c[1])) >> SUBPIXEL_BITS, 0)
        row1 = min(int(max(a[1], b[1], c[1])) >> SUBPIXEL_BITS, height - 1)
        if col1 < col0 or row1 < row0:
            continue

        px = (np.arange(col0, col1 + 1, dtype=np.int64) << SUBPIXEL_BITS) + SUBPIXEL // 2
        py = (np.arange(row0, row1 + 1, dtype=np.int64) << SUBPIXEL_BITS) + SUBPIXEL // 2
        px, py = px[None, :], py[:, None]

        inside = np.ones((len(py), px.shape[1]), dtype=bool)
        weights = []
        # 변 (s→e) 의 가중치는 맞은편 꼭짓점에 붙는다
        for s, e in ((b, c), (c, a), (a, b)):
            dx, dy = e[0] - s[0], e[1] - s[1]
            edge = dx * (py - s[1]) - dy * (px - s[0])
            top_left = dy < 0 or (dy == 0 and dx > 0)
            inside &= edge >= 0 if top_left else edge > 0
            weights.append(edge)
        if not inside.any():
            continue

        window = (slice(row0, row1 + 1), slice(col0, col1 + 1))
        if depth_mode:
            depth = (weights[0] * zs[0] + weights[1] * zs[1] + weights[2] * zs[2]) / float(area)
            nearer = inside & (depth > zbuf[window])
            zbuf[window] = np.where(nearer, depth, zbuf[window])
        covered[window] |= inside

    image = np.full((height, width), cfg.background_level, dtype=np.uint8)
    if depth_mode:
        image[covered] = _shade(zbuf[covered], cfg)
    else:
        image[covered] = cfg.foreground_level
    logger.debug("rendered %d faces, %d foreground px", len(mesh.faces), int(covered.sum()))
    return image


def _decode(image: ImageSource) -> Image.Image:
    if isinstance(image, Image.Image):
        return image
    if isinstance(image, np.ndarray):
        if image.size == 0:
            raise InvalidInputError("empty image array")
        array = image
        if array.ndim == 3 and array.shape[2] in (3, 4):
            return Image.fromarray(np.ascontiguousarray(array[..., :3], dtype=np.uint8))
        if array.ndim != 2:
            raise InvalidInputError(f"unsupported image shape {array.shape}")
        return Image.fromarray(np.ascontiguousarray(array, dtype=np.uint8))

    source = io.BytesIO(image) if isinstance(image, (bytes, bytearray)) else Path(image)
    if isinstance(image, (bytes, bytearray)) and len(image) == 0:
        raise InvalidInputError("empty image buffer")
    try:
        with Image.open(source) as opened:
            opened.load()
            return opened.copy()
    except FileNotFoundError as exc:
        raise StorageError(str(image), "image not found") from exc
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise ImageDecodeError(f"cannot decode image: {exc}") from exc


def to_model_input(
    image: ImageSource,
    mean: Sequence[float] = IMAGENET_MEAN,
    std: Sequence[float] = IMAGENET_STD,
) -> np.ndarray:
    """
    디코딩 → 그레이스케일 → 224x224 (bilinear) 리사이즈 → 3채널 복제 후
    채널별로 (v/255 - mean) / std 정규화한다.

    반환값: (224, 224, 3) float32 배열
    """
    decoded = _decode(image)
    if decoded.width == 0 or decoded.height == 0:
        raise InvalidInputError("image has no pixels")
    gray = decoded.convert("L")
    if gray.size != (MODEL_INPUT_SIZE, MODEL_INPUT_SIZE):
        gray = gray.resize((MODEL_INPUT_SIZE, MODEL_INPUT_SIZE), Image.Resampling.BILINEAR)

    values = np.asarray(gray, dtype=np.float32) / 255.0
    rgb = np.repeat(values[:, :, None], 3, axis=2)
    mean = np.asarray(mean, dtype=np.float32).reshape(1, 1, 3)
    std = np.asarray(std, dtype=np.float32).reshape(1, 1, 3)
    return (rgb - mean) / std


def save_png(image: np.ndarray, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(np.ascontiguousarray(image, dtype=np.uint8)).save(path, format="PNG", optimize=False)
    except OSError as exc:
        raise StorageError(path, "cannot write image") from exc
    return path


def load_image(path: Union[str, Path]) -> np.ndarray:
    """저장된 PNG 를 (H, W) uint8 배열로 읽는다"""
    return np.asarray(_decode(Path(path)).convert("L"), dtype=np.uint8)
