# 스크리닝 리포트 스키마
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from bodymeasure.schemas.body import Sex


class WaistClass(str, Enum):
    normal = "normal"
    increased = "increased"
    high = "high"


class WhrClass(str, Enum):
    normal = "normal"
    increased = "increased"


class FlagStatus(str, Enum):
    flagged = "flagged"
    not_flagged = "not flagged"
    not_assessed = "not assessed"


class ScreeningThresholds(BaseModel):
    """마르판 체형 비율 상한. 기본값 없음 (사용자가 제공)"""

    model_config = ConfigDict(frozen=True)

    arm_torso_max: Optional[float] = Field(default=None, gt=0)
    leg_torso_max: Optional[float] = Field(default=None, gt=0)


class ProportionResult(BaseModel):
    ratios: Dict[str, float]
    flags: Dict[str, FlagStatus]


class ScreeningReport(BaseModel):
    sex: Sex
    inputs: Dict[str, float]
    waist_class: WaistClass
    whr: float
    whr_class: WhrClass
    ratios: Dict[str, float]
    marfanoid_flags: Dict[str, FlagStatus]
    recommendations: List[str] = Field(default_factory=list)
