# 절차적 T-포즈 인체 생성기
"""
T-포즈 파라메트릭 인체.

인체는 로프트 튜브의 묶음이다. 몸통 + 목 + 머리는 +Y, 두 다리는 Y, 두 팔은
±X 방향이다. 몸통 링은 서로 닮은 초타원이라 두 링 사이 둘레는 높이에 대해
선형으로 변하고, 팔다리는 정다각형 링을 쓴다. 각 링의 다각형 둘레는 목표
둘레와 정확히 같다.
"""
import json
import logging
import math
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from bodymeasure.core import landmarks as lm
from bodymeasure.core.config import settings
from bodymeasure.core.exceptions import BodyValidationError, ConfigurationError, InvalidInputError
from bodymeasure.schemas.body import AUX_GIRTHS, RANGE_PARAMS, BodySpec, GenerationRanges, Sex, Skeleton
from bodymeasure.services.geometry import BodyMesh, TriMesh, loft, superellipse_ring
from bodymeasure.utils.hashing import seed_entropy

logger = logging.getLogger(__name__)

MIN_RESOLUTION = 16
MAX_SAMPLE_ATTEMPTS = 1000

# 목+머리+발목 높이로 남는 길이의 허용 범위 (stature 비율)
REMAINDER_WINDOW = (0.15, 0.27)

SEX_INDEX = {Sex.male: 0, Sex.female: 1}

# 머리 링: (head center 기준 상대 높이, head girth 배율)
HEAD_PROFILE = ((-0.6, 0.80), (0.0, 1.00), (0.5, 0.87), (0.85, 0.53))


def load_ranges(path: Optional[Union[str, Path]] = None) -> GenerationRanges:
    """TOML 또는 JSON 범위 파일을 읽어 검증한다"""
    path = Path(path or settings.DEFAULT_RANGES_PATH)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigurationError(f"cannot read ranges file {path}: {exc.strerror}") from exc
    try:
        data = json.loads(raw) if path.suffix == ".json" else tomllib.loads(raw.decode("utf-8"))
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigurationError(f"cannot parse ranges file {path}: {exc}") from exc
    return parse_ranges(data)


def parse_ranges(data: Dict) -> GenerationRanges:
    try:
        return GenerationRanges.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(f"malformed generation ranges: {exc.errors()[0]['msg']}") from exc


@dataclass(frozen=True)
class BodyLayout:
    """스펙에서 유도한 관절 높이와 보조 치수 (cm)"""

    stature: float
    neck_y: float
    pelvis_y: float
    ankle_y: float
    hip_y: float
    crotch_y: float
    shoulder_y: float
    mid_spine_y: float
    chest_y: float
    head_base_y: float
    head_y: float
    neck_level_y: float
    hip_offset: float
    shoulder_x: float
    leg_vertical: float


def _radius(girth: float) -> float:
    return girth / (2.0 * math.pi)


def _torso_half_width(girth: float) -> float:
    # 단위 둘레 초타원의 x 반축 × girth
    unit = superellipse_ring(64, lm.TORSO_EXPONENT, lm.TORSO_ASPECT)
    return float(unit[:, 0].max()) * girth


def layout_for(spec: BodySpec) -> BodyLayout:
    g = spec.aux_girths
    hip_offset = lm.LEG_SPREAD * _radius(g["thigh"])
    if not spec.leg_len > hip_offset:
        raise BodyValidationError("leg_len shorter than the hip offset")
    leg_vertical = math.sqrt(spec.leg_len**2 - hip_offset**2)

    remainder = spec.stature - spec.torso_len - spec.leg_len
    head_neck = lm.HEAD_NECK_SHARE * remainder
    neck_y = spec.stature - head_neck
    pelvis_y = neck_y - spec.torso_len
    ankle_y = pelvis_y - leg_vertical
    head_base_y = neck_y + lm.NECK_FRACTION * head_neck
    head_y = neck_y + lm.HEAD_CENTER * head_neck

    return BodyLayout(
        stature=spec.stature,
        neck_y=neck_y,
        pelvis_y=pelvis_y,
        ankle_y=ankle_y,
        hip_y=pelvis_y - lm.HIP_DROP * (pelvis_y - ankle_y),
        crotch_y=pelvis_y - lm.CROTCH_DROP * (pelvis_y - ankle_y),
        shoulder_y=neck_y - lm.SHOULDER_DROP * (neck_y - pelvis_y),
        mid_spine_y=(pelvis_y + neck_y) / 2.0,
        chest_y=pelvis_y + lm.CHEST_RISE * (neck_y - pelvis_y),
        head_base_y=head_base_y,
        head_y=head_y,
        neck_level_y=neck_y + lm.NECK_LEVEL * (head_y - neck_y),
        hip_offset=hip_offset,
        shoulder_x=spec.shoulder_width / 2.0,
        leg_vertical=leg_vertical,
    )


def check_layout(spec: BodySpec) -> BodyLayout:
    """
    튜브 배치가 의존하는 필드 간 불변식을 검사하고 배치를 돌려준다.
    처음 어긋난 항목을 BodyValidationError 로 알린다.
    """
    if not spec.torso_len + spec.leg_len < spec.stature:
        raise BodyValidationError("torso_len + leg_len must be shorter than stature")
    if spec.torso_len < 0.21 * spec.stature:
        raise BodyValidationError("torso_len below 21% of stature leaves no room for the waist region")

    g = spec.aux_girths
    if not (g["thigh"] > g["calf"] and g["thigh"] > 1.12 * g["ankle"]):
        raise BodyValidationError("thigh must be the widest leg girth")

    layout = layout_for(spec)
    arm_start = _radius(1.05 * g["bicep"])
    arm_widest = max(arm_start, _radius(1.35 * g["wrist"]))
    if not layout.shoulder_y - arm_widest > layout.chest_y:
        raise BodyValidationError("arms hang into the chest level")
    if not layout.shoulder_y + arm_widest < layout.neck_level_y:
        raise BodyValidationError("arms reach the neck level")

    torso_girths = (spec.pelvis_circ, spec.waist_circ, g["chest"])
    widest = _torso_half_width(1.04 * max(torso_girths))
    if not widest < layout.shoulder_x + lm.BICEP_RUN * spec.arm_len:
        raise BodyValidationError("torso wider than the upper-arm measuring plane")
    if not layout.ankle_y > 0:
        raise BodyValidationError("ankle below the floor")
    return layout


def sample_body_spec(sex: Sex, seed: int, ranges: GenerationRanges) -> BodySpec:
    """
    각 파라미터를 범위 안에서 균등 추출하고, 튜브 배치를 깨는 비율은 다시 뽑는다.
    (sex, seed, ranges) 가 같으면 결과도 같다.
    """
    sex = Sex(sex)
    table = ranges.for_sex(sex)
    for name, (lo, hi) in table.items():
        if not (0 < lo <= hi):
            raise ConfigurationError(f"[{sex.value}] {name}: bad range [{lo}, {hi}]")

    rng = np.random.default_rng(np.random.SeedSequence(seed_entropy(seed, SEX_INDEX[sex])))
    for attempt in range(MAX_SAMPLE_ATTEMPTS):
        draw = {name: float(rng.uniform(*table[name])) for name in RANGE_PARAMS}
        spec = BodySpec(
            sex=sex,
            stature=draw["stature"],
            torso_len=draw["torso_len"],
            leg_len=draw["leg_len"],
            arm_len=draw["arm_len"],
            waist_circ=draw["waist_circ"],
            pelvis_circ=draw["pelvis_circ"],
            shoulder_width=draw["shoulder_width"],
            aux_girths={name: draw[name] for name in AUX_GIRTHS},
            seed=int(seed),
        )
        remainder = (spec.stature - spec.torso_len - spec.leg_len) / spec.stature
        if not REMAINDER_WINDOW[0] <= remainder <= REMAINDER_WINDOW[1]:
            continue
        try:
            check_layout(spec)
        except BodyValidationError:
            continue
        logger.debug("sampled %s seed=%d after %d rejections", sex.value, seed, attempt)
        return spec
    raise ConfigurationError(f"[{sex.value}] ranges admit no consistent body after {MAX_SAMPLE_ATTEMPTS} draws")


def _build_skeleton(spec: BodySpec, layout: BodyLayout) -> Skeleton:
    hx, sx = layout.hip_offset, layout.shoulder_x
    wx = sx + spec.arm_len
    ex = sx + lm.ELBOW_RUN * spec.arm_len
    knee_y = layout.ankle_y + lm.KNEE_RISE * layout.leg_vertical
    joints: Dict[str, Tuple[float, float, float]] = {
        "neck": (0.0, layout.neck_y, 0.0),
        "mid_spine": (0.0, layout.mid_spine_y, 0.0),
        "pelvis": (0.0, layout.pelvis_y, 0.0),
        "hip_left": (hx, layout.hip_y, 0.0),
        "hip_right": (-hx, layout.hip_y, 0.0),
        "shoulder_left": (sx, layout.shoulder_y, 0.0),
        "shoulder_right": (-sx, layout.shoulder_y, 0.0),
        "elbow_left": (ex, layout.shoulder_y, 0.0),
        "elbow_right": (-ex, layout.shoulder_y, 0.0),
        "wrist_left": (wx, layout.shoulder_y, 0.0),
        "wrist_right": (-wx, layout.shoulder_y, 0.0),
        "knee_left": (hx, knee_y, 0.0),
        "knee_right": (-hx, knee_y, 0.0),
        "ankle_left": (hx, layout.ankle_y, 0.0),
        "ankle_right": (-hx, layout.ankle_y, 0.0),
        "head": (0.0, layout.head_y, 0.0),
    }
    return Skeleton(joints=joints)


def _torso(spec: BodySpec, layout: BodyLayout, resolution: int) -> TriMesh:
    unit = superellipse_ring(resolution, lm.TORSO_EXPONENT, lm.TORSO_ASPECT)
    circle = superellipse_ring(resolution)
    g = spec.aux_girths
    P, W, C = spec.pelvis_circ, spec.waist_circ, g["chest"]
    band = lm.WAIST_SHOULDER_RING * spec.stature

    # (높이, 링) 쌍: 가랑이에서 정수리까지 아래→위 순서
    shoulder_girth = layout.shoulder_x / float(unit[:, 0].max())
    stack = [
        (layout.crotch_y, unit * (0.92 * P)),
        (layout.hip_y, unit * (0.97 * P)),
        ((layout.hip_y + layout.pelvis_y) / 2.0, unit * P),
        (layout.pelvis_y, unit * (0.97 * P)),
        (layout.mid_spine_y - band, unit * (1.04 * W)),
        (layout.mid_spine_y, unit * W),
        (layout.mid_spine_y + band, unit * (1.04 * W)),
        (layout.chest_y, unit * C),
        (layout.shoulder_y, unit * shoulder_girth),
        (layout.neck_y, circle * g["neck"]),
        (layout.head_base_y, circle * g["neck"]),
    ]
    half_head = spec.stature - layout.head_y
    for rise, scale in HEAD_PROFILE:
        stack.append((layout.head_y + rise * half_head, circle * (scale * g["head"])))

    levels = [level for level, _ in stack]
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise BodyValidationError("torso landmarks are not strictly increasing")
    return loft(1, levels, (0.0, 0.0), [ring for _, ring in stack], cap_start=layout.crotch_y, cap_end=spec.stature)


def _leg(spec: BodySpec, layout: BodyLayout, resolution: int, side: float) -> TriMesh:
    circle = superellipse_ring(resolution)
    g = spec.aux_girths
    P, A = layout.pelvis_y, layout.ankle_y
    stack = [
        (0.0, 1.10 * g["ankle"]),
        (0.45 * A, 1.12 * g["ankle"]),
        (A, g["ankle"]),
        (A + lm.CALF_RISE * (P - A), g["calf"]),
        (A + lm.KNEE_RISE * (P - A), 0.55 * g["thigh"] + 0.45 * g["calf"]),
        (P - lm.THIGH_DROP * (P - A), g["thigh"]),
        (layout.crotch_y, g["thigh"]),
    ]
    return loft(
        1,
        [level for level, _ in stack],
        (side * layout.hip_offset, 0.0),
        [circle * girth for _, girth in stack],
        cap_start=0.0,
        cap_end=layout.crotch_y,
    )


def _arm(spec: BodySpec, layout: BodyLayout, resolution: int, side: float) -> TriMesh:
    circle = superellipse_ring(resolution)
    g = spec.aux_girths
    sx, run = layout.shoulder_x, spec.arm_len
    wx = sx + run
    stack = [
        (sx, 1.05 * g["bicep"]),
        (sx + lm.BICEP_RUN * (wx - sx), g["bicep"]),
        (sx + lm.ELBOW_RUN * (wx - sx), 0.5 * (g["bicep"] + g["forearm"])),
        (sx + lm.FOREARM_RUN * (wx - sx), g["forearm"]),
        (wx, g["wrist"]),
        (sx + lm.HAND_RUN * run, 1.35 * g["wrist"]),
    ]
    return loft(
        0,
        [side * level for level, _ in stack],
        (layout.shoulder_y, 0.0),
        [circle * girth for _, girth in stack],
        cap_start=side * sx,
        cap_end=side * (sx + lm.FINGERTIP_RUN * run),
    )


def build_body(spec: BodySpec, resolution: int = 64) -> BodyMesh:
    if resolution < MIN_RESOLUTION:
        raise InvalidInputError(f"resolution must be >= {MIN_RESOLUTION}, got {resolution}")
    layout = check_layout(spec)
    skeleton = _build_skeleton(spec, layout)
    parts: List[TriMesh] = [
        _torso(spec, layout, resolution),
        _leg(spec, layout, resolution, 1.0),
        _leg(spec, layout, resolution, -1.0),
        _arm(spec, layout, resolution, 1.0),
        _arm(spec, layout, resolution, -1.0),
    ]
    mesh = TriMesh.concat(parts)
    return BodyMesh(mesh.vertices, mesh.faces, skeleton)
