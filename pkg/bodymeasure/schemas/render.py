# 렌더링 설정 스키마
from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ShadingMode(str, Enum):
    silhouette = "silhouette"
    depth = "depth"


class RenderConfig(BaseModel):
    """정면 직교 투영 렌더 설정. 기본값은 210 cm 인체가 여백을 두고 들어가는 배율이다."""

    model_config = ConfigDict(frozen=True)

    image_height_px: int = Field(default=256, gt=0)
    image_width_px: int = Field(default=256, gt=0)
    px_per_cm: float = Field(default=1.05, gt=0)
    # 바닥(y=0)이 이미지 아래쪽에서 떨어진 픽셀 수
    floor_margin_px: int = Field(default=8, ge=0)
    background_level: int = Field(default=0, ge=0, le=255)
    shading: ShadingMode = ShadingMode.depth
    foreground_level: int = Field(default=255, ge=0, le=255)
    # depth 모드: 카메라에 가까운 z(+) 일수록 밝다
    depth_near_level: int = Field(default=255, ge=0, le=255)
    depth_far_level: int = Field(default=96, ge=0, le=255)
    depth_range_cm: Tuple[float, float] = (-30.0, 30.0)

    @model_validator(mode="after")
    def check_depth_range(self) -> "RenderConfig":
        lo, hi = self.depth_range_cm
        if not lo < hi:
            raise ValueError("depth_range_cm must be increasing")
        return self
