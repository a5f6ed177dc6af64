# 회귀 모델 / 학습 / 평가 스키마
import math
from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from bodymeasure.schemas.measurement import MEASUREMENT_KEYS

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)

HEAD_WIDTHS = (1024, 512, 128)
ACTIVATIONS = ("relu", "elu", "gelu", "tanh")


class BackboneName(str, Enum):
    vgg19 = "vgg19"
    resnet50 = "resnet50"
    densenet121 = "densenet121"
    tiny_test = "tiny_test"


class BackboneConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: BackboneName = BackboneName.tiny_test
    input_shape: Tuple[int, int, int] = (224, 224, 3)
    mean: Tuple[float, float, float] = IMAGENET_MEAN
    std: Tuple[float, float, float] = IMAGENET_STD
    frozen: Literal[True] = True
    # 모델을 만든 뒤 채워진다 (Flatten 이후 차원)
    feature_dim: Optional[int] = Field(default=None, gt=0)

    @field_validator("input_shape")
    @classmethod
    def check_input_shape(cls, v: Tuple[int, int, int]) -> Tuple[int, int, int]:
        if tuple(v) != (224, 224, 3):
            raise ValueError("input shape is fixed at 224x224x3")
        return v

    @field_validator("std")
    @classmethod
    def check_std(cls, v: Tuple[float, float, float]) -> Tuple[float, float, float]:
        if any(s <= 0 for s in v):
            raise ValueError("std must be positive")
        return v


class HeadConfig(BaseModel):
    """Flatten → [Dense → BatchNorm → activation] × 3 → Dense(16)"""

    model_config = ConfigDict(frozen=True)

    hidden_widths: Tuple[int, int, int] = HEAD_WIDTHS
    batch_norm: Literal[True] = True
    activation: str = "relu"
    output_dim: Literal[16] = 16

    @field_validator("hidden_widths")
    @classmethod
    def check_widths(cls, v: Tuple[int, int, int]) -> Tuple[int, int, int]:
        if tuple(v) != HEAD_WIDTHS:
            raise ValueError(f"hidden widths must be {list(HEAD_WIDTHS)}")
        return v

    @field_validator("activation")
    @classmethod
    def check_activation(cls, v: str) -> str:
        if v not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {', '.join(ACTIVATIONS)}")
        return v


class TrainConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    optimizer: Literal["adam"] = "adam"
    learning_rate: float = Field(default=1e-4, gt=0)
    loss: Literal["mae"] = "mae"
    max_epochs: int = Field(default=100, ge=1, le=100)
    batch_size: int = Field(default=350, ge=1)
    patience: int = Field(default=10, ge=1)
    min_delta: float = Field(default=0.0, ge=0)
    restore_best_weights: bool = True
    # 출력층 bias를 학습셋 타깃 평균으로 초기화
    init_output_bias: bool = True
    seed: int = 0


class EpochRecord(BaseModel):
    epoch: int
    train_mae: float
    val_mae: float


class TrainHistory(BaseModel):
    epochs: List[EpochRecord] = Field(default_factory=list)
    best_epoch: Optional[int] = None
    best_val_loss: Optional[float] = None
    stopped_early: bool = False

    @property
    def val_losses(self) -> List[float]:
        return [e.val_mae for e in self.epochs]


class SubsetMae(BaseModel):
    male: float
    female: float
    total: float


class EvalReport(BaseModel):
    """측정 항목별 남/여/전체 MAE 와 평균 행"""

    model_name: str
    measurements: List[str]
    rows: Dict[str, SubsetMae]
    mean: SubsetMae
    n_male: int
    n_female: int

    @model_validator(mode="after")
    def check_rows(self) -> "EvalReport":
        if set(self.rows) != set(self.measurements):
            raise ValueError("rows must cover exactly the reported measurements")
        for name, row in self.rows.items():
            for value in (row.male, row.female, row.total):
                if not math.isfinite(value):
                    raise ValueError(f"non-finite MAE for {name}")
        return self

    @property
    def n_test(self) -> int:
        return self.n_male + self.n_female


class ModelCard(BaseModel):
    backbone: BackboneConfig
    head: HeadConfig
    train: TrainConfig
    measurement_keys: List[str] = Field(default_factory=lambda: list(MEASUREMENT_KEYS))
    target_mean: Optional[List[float]] = None
    best_epoch: Optional[int] = None
    best_val_loss: Optional[float] = None
    seed: int = 0
