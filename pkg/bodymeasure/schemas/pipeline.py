# 파이프라인 실행 설정
from pathlib import Path
from typing import Optional, Tuple

from pydantic import BaseModel, Field

from bodymeasure.schemas.measurement import MeasureConfig
from bodymeasure.schemas.render import RenderConfig
from bodymeasure.schemas.training import BackboneConfig, HeadConfig, TrainConfig


class PipelineConfig(BaseModel):
    dataset_root: Path = Path("data/dataset")
    # None 이면 패키지 기본 범위 파일 사용
    ranges_file: Optional[Path] = None
    mesh_resolution: int = Field(default=64, ge=16)
    n_per_sex: int = Field(default=50, ge=1)
    split_fractions: Tuple[float, float, float] = (0.70, 0.15, 0.15)
    render: RenderConfig = Field(default_factory=RenderConfig)
    measure: MeasureConfig = Field(default_factory=MeasureConfig)
    backbone: BackboneConfig = Field(default_factory=BackboneConfig)
    head: HeadConfig = Field(default_factory=HeadConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    seed: int = 0
    output_dir: Path = Path("runs")
