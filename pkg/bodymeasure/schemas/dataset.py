# 데이터셋 매니페스트 스키마
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from bodymeasure.schemas.body import Sex
from bodymeasure.schemas.measurement import MeasurementSet
from bodymeasure.schemas.render import RenderConfig

MANIFEST_VERSION = 1


class Split(str, Enum):
    train = "train"
    val = "val"
    test = "test"


class SampleRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    sample_id: str
    sex: Sex
    # 데이터셋 루트 기준 상대 경로
    image_path: str
    measurements: MeasurementSet
    spec_seed: int


class DatasetManifest(BaseModel):
    """레코드 목록 + 분할 정보 + 생성 설정 다이제스트"""

    version: int = MANIFEST_VERSION
    records: List[SampleRecord]
    split: Dict[str, Split] = Field(default_factory=dict)
    generation_digest: str
    master_seed: int
    mesh_resolution: int
    render: RenderConfig
    shuffle_seed: Optional[int] = None
    split_fractions: Optional[Tuple[float, float, float]] = None

    @property
    def is_split(self) -> bool:
        return self.shuffle_seed is not None and all(r.sample_id in self.split for r in self.records)

    def ids_in(self, split: Split) -> List[str]:
        return [r.sample_id for r in self.records if self.split.get(r.sample_id) == split]

    def record_map(self) -> Dict[str, SampleRecord]:
        return {r.sample_id: r for r in self.records}
