# 바디 생성 스키마
import math
from enum import Enum
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

AUX_GIRTHS = ("head", "neck", "chest", "thigh", "calf", "bicep", "forearm", "wrist", "ankle")

# 생성 범위 파일에 반드시 있어야 하는 파라미터
RANGE_PARAMS = (
    "stature",
    "torso_len",
    "leg_len",
    "arm_len",
    "waist_circ",
    "pelvis_circ",
    "shoulder_width",
) + AUX_GIRTHS

REQUIRED_JOINTS = (
    "neck",
    "mid_spine",
    "pelvis",
    "hip_left",
    "hip_right",
    "shoulder_left",
    "shoulder_right",
    "wrist_left",
    "wrist_right",
    "ankle_left",
    "ankle_right",
)

Point3 = Tuple[float, float, float]


class Sex(str, Enum):
    male = "male"
    female = "female"


class BodySpec(BaseModel):
    """합성 인체 한 명의 생성 파라미터 (단위 cm)"""

    model_config = ConfigDict(frozen=True)

    sex: Sex
    stature: float = Field(gt=0)
    torso_len: float = Field(gt=0)
    leg_len: float = Field(gt=0)
    arm_len: float = Field(gt=0)
    waist_circ: float = Field(gt=0)
    pelvis_circ: float = Field(gt=0)
    aux_girths: Dict[str, float]
    shoulder_width: float = Field(gt=0)
    seed: int

    @field_validator("aux_girths")
    @classmethod
    def check_aux_girths(cls, v: Dict[str, float]) -> Dict[str, float]:
        missing = [name for name in AUX_GIRTHS if name not in v]
        if missing:
            raise ValueError(f"missing girths: {', '.join(missing)}")
        extra = sorted(set(v) - set(AUX_GIRTHS))
        if extra:
            raise ValueError(f"unknown girths: {', '.join(extra)}")
        for name, value in v.items():
            if not value > 0:
                raise ValueError(f"girth {name} must be positive")
        return v


class Skeleton(BaseModel):
    """관절 이름 → 3D 좌표(cm), Y가 위쪽"""

    model_config = ConfigDict(frozen=True)

    joints: Dict[str, Point3]

    @model_validator(mode="after")
    def check_joints(self) -> "Skeleton":
        missing = [name for name in REQUIRED_JOINTS if name not in self.joints]
        if missing:
            raise ValueError(f"missing joints: {', '.join(missing)}")
        for name, point in self.joints.items():
            if not all(math.isfinite(c) for c in point):
                raise ValueError(f"joint {name} is not finite")
        if not self.joints["pelvis"][1] < self.joints["neck"][1]:
            raise ValueError("pelvis must lie below neck")
        if not self.joints["ankle_left"][1] < self.joints["pelvis"][1]:
            raise ValueError("ankle must lie below pelvis")
        return self

    def transformed(self, scale: float = 1.0, offset: Point3 = (0.0, 0.0, 0.0)) -> "Skeleton":
        return Skeleton(
            joints={
                name: tuple(c * scale + o for c, o in zip(point, offset))
                for name, point in self.joints.items()
            }
        )


class GenerationRanges(BaseModel):
    """성별별 파라미터 [min, max] 범위 (cm)"""

    model_config = ConfigDict(frozen=True)

    version: int = 1
    male: Dict[str, Tuple[float, float]]
    female: Dict[str, Tuple[float, float]]

    @model_validator(mode="after")
    def check_ranges(self) -> "GenerationRanges":
        for sex in Sex:
            table = self.for_sex(sex)
            missing = [name for name in RANGE_PARAMS if name not in table]
            if missing:
                raise ValueError(f"[{sex.value}] missing ranges: {', '.join(missing)}")
            for name, (lo, hi) in table.items():
                if name not in RANGE_PARAMS:
                    raise ValueError(f"[{sex.value}] unknown parameter {name}")
                if not (lo > 0 and hi > 0):
                    raise ValueError(f"[{sex.value}] {name}: range must be positive")
                if lo > hi:
                    raise ValueError(f"[{sex.value}] {name}: min {lo} > max {hi}")
        return self

    def for_sex(self, sex: Sex) -> Dict[str, Tuple[float, float]]:
        return self.male if Sex(sex) is Sex.male else self.female
