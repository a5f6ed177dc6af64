# 측정값 스키마
import math
from typing import Dict, List, Sequence

from pydantic import BaseModel, ConfigDict, Field, field_validator

# 보고 대상 5개 (표 순서: 허리, 골반, 팔, 다리, 몸통)
REPORTED_KEYS = (
    "waist_circumference",
    "pelvis_circumference",
    "shoulder_to_wrist",
    "leg_length",
    "torso_length",
)
CANONICAL_KEYS = REPORTED_KEYS

AUXILIARY_KEYS = (
    "stature",
    "head_circumference",
    "neck_circumference",
    "chest_circumference",
    "thigh_circumference",
    "calf_circumference",
    "bicep_circumference",
    "forearm_circumference",
    "wrist_circumference",
    "ankle_circumference",
    "shoulder_width",
)

# 모델 출력 16개의 고정 순서
MEASUREMENT_KEYS = CANONICAL_KEYS + AUXILIARY_KEYS

# "Arm length" 표기는 shoulder_to_wrist 와 같은 양이다
REPORT_LABELS = {
    "waist_circumference": "Waist circumference",
    "pelvis_circumference": "Pelvis circumference",
    "shoulder_to_wrist": "Arm length",
    "leg_length": "Leg length",
    "torso_length": "Torso length",
}


class MeasurementSet(BaseModel):
    """16개 인체 측정값 (cm)"""

    model_config = ConfigDict(frozen=True)

    values: Dict[str, float]

    @field_validator("values")
    @classmethod
    def check_values(cls, v: Dict[str, float]) -> Dict[str, float]:
        missing = [key for key in MEASUREMENT_KEYS if key not in v]
        if missing:
            raise ValueError(f"missing measurements: {', '.join(missing)}")
        extra = sorted(set(v) - set(MEASUREMENT_KEYS))
        if extra:
            raise ValueError(f"unknown measurements: {', '.join(extra)}")
        for key, value in v.items():
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{key} must be finite and positive, got {value}")
        return {key: float(v[key]) for key in MEASUREMENT_KEYS}

    def __getitem__(self, key: str) -> float:
        return self.values[key]

    def as_vector(self) -> List[float]:
        return [self.values[key] for key in MEASUREMENT_KEYS]

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> "MeasurementSet":
        if len(vector) != len(MEASUREMENT_KEYS):
            raise ValueError(f"expected {len(MEASUREMENT_KEYS)} values, got {len(vector)}")
        return cls(values={key: float(x) for key, x in zip(MEASUREMENT_KEYS, vector)})

    def rounded(self, digits: int = 6) -> Dict[str, float]:
        return {key: round(value, digits) for key, value in self.values.items()}


class MeasureConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    # 허리 탐색 구간 반높이 = fraction × stature
    waist_region_fraction: float = Field(default=0.05, gt=0, lt=0.5)
    levels: int = Field(default=64, ge=2)
