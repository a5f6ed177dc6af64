# 모델 생성 / 학습 / 추론 / 체크포인트
"""
측정값 회귀 모델 학습.

백본이 고정되어 있으므로 특징은 데이터셋마다 한 번만 계산하고, 헤드는 캐시된
특징 텐서 위에서 Adam 과 16개 출력(cm) 전체의 L1 (MAE) 손실로 학습한다.
"""
import copy
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import torch
from torch import nn
from torch.nn import functional as F

from bodymeasure.core.config import settings
from bodymeasure.core.exceptions import DataError, DivergenceError, InvalidInputError, StateError, StorageError
from bodymeasure.models import FEATURE_DIMS, MeasurementRegressor, RegressionHead, build_backbone
from bodymeasure.schemas.measurement import MEASUREMENT_KEYS
from bodymeasure.schemas.training import BackboneConfig, EpochRecord, HeadConfig, ModelCard, TrainConfig, TrainHistory
from bodymeasure.utils.atomic import write_text_atomic

logger = logging.getLogger(__name__)

WEIGHTS_FILE = "weights.pt"
MODEL_CARD_FILE = "model_card.json"
HISTORY_FILE = "history.csv"

FEATURE_BATCH = 64
# BatchNorm1d 학습 모드의 최소 배치 크기
MIN_TRAIN_BATCH = 2
INPUT_SHAPE = (224, 224, 3)

ArrayPair = Tuple[np.ndarray, np.ndarray]


def resolve_device(device: Optional[str] = None) -> torch.device:
    name = device or settings.DEVICE
    if name == "auto":
        name = "cuda" if torch.cuda.is_available() else "cpu"
    return torch.device(name)


def build_model(
    backbone: BackboneConfig,
    head: HeadConfig,
    seed: int = 0,
    pretrained: Optional[bool] = None,
) -> MeasurementRegressor:
    """백본을 고정하고 헤드를 seed 로 초기화한 회귀 모델"""
    frozen = build_backbone(backbone.name, pretrained=pretrained)
    torch.manual_seed(seed)
    model = MeasurementRegressor(frozen, RegressionHead(frozen.feature_dim, head))
    logger.info(
        "built %s + head %s (%d trainable parameters)",
        backbone.name.value,
        list(head.hidden_widths),
        sum(p.numel() for p in model.trainable_parameters()),
    )
    return model


def _check_inputs(inputs: np.ndarray) -> np.ndarray:
    inputs = np.asarray(inputs, dtype=np.float32)
    if inputs.ndim != 4 or tuple(inputs.shape[1:]) != INPUT_SHAPE:
        raise InvalidInputError(f"inputs must be (N, 224, 224, 3), got {tuple(inputs.shape)}")
    return inputs


def extract_features(model: MeasurementRegressor, inputs: np.ndarray, device: torch.device) -> torch.Tensor:
    inputs = _check_inputs(inputs)
    chunks = []
    for start in range(0, len(inputs), FEATURE_BATCH):
        batch = torch.from_numpy(inputs[start : start + FEATURE_BATCH]).to(device)
        chunks.append(model.features(batch))
    if not chunks:
        return torch.zeros((0, model.backbone.feature_dim), device=device)
    return torch.cat(chunks)


def _batches(n: int, batch_size: int, order: torch.Tensor) -> List[torch.Tensor]:
    # BatchNorm1d 학습 모드는 배치 크기 1을 허용하지 않으므로 남는 1개는 앞 배치에 합친다
    batches = list(torch.split(order, batch_size))
    if len(batches) > 1 and len(batches[-1]) == 1:
        batches[-2] = torch.cat([batches[-2], batches.pop()])
    return batches


class EarlyStopping:
    """최적 검증 손실을 추적하고 `patience` 에폭 동안 개선이 없으면 중단을 알린다"""

    def __init__(self, patience: int = 10, min_delta: float = 0.0, restore_best_weights: bool = True):
        if patience < 1:
            raise ValueError("patience must be >= 1")
        self.patience = patience
        self.min_delta = min_delta
        self.restore_best_weights = restore_best_weights
        self.best_loss = math.inf
        self.best_epoch: Optional[int] = None
        self.best_state: Optional[Dict[str, torch.Tensor]] = None
        self.wait = 0

    def step(self, epoch: int, val_loss: float, model: Optional[nn.Module] = None) -> bool:
        if val_loss < self.best_loss - self.min_delta:
            self.best_loss = val_loss
            self.best_epoch = epoch
            self.wait = 0
            if self.restore_best_weights and model is not None:
                self.best_state = copy.deepcopy(model.state_dict())
        else:
            self.wait += 1
        return self.wait >= self.patience

    def restore(self, model: nn.Module) -> None:
        if self.restore_best_weights and self.best_state is not None:
            model.load_state_dict(self.best_state)


class Trainer:
    """
    회귀 헤드의 에폭 루프. `validate` 는 훅이라 서브클래스가 검증 손실 출처를
    바꿀 수 있다 (루프는 에폭마다 float 하나만 필요하다).
    """

    def __init__(self, model: MeasurementRegressor, config: TrainConfig, device: Optional[Union[str, torch.device]] = None):
        self.model = model
        self.config = config
        self.batch_size = config.batch_size
        if self.batch_size < MIN_TRAIN_BATCH:
            logger.warning("batch_size %d is too small for batch normalization; training with %d", self.batch_size, MIN_TRAIN_BATCH)
            self.batch_size = MIN_TRAIN_BATCH
        self.device = device if isinstance(device, torch.device) else resolve_device(device)
        self.model.to(self.device)
        self.target_mean: Optional[List[float]] = None

    def init_output_bias(self, targets: torch.Tensor) -> None:
        mean = targets.mean(dim=0)
        with torch.no_grad():
            self.model.head.output.bias.copy_(mean)
        self.target_mean = [float(v) for v in mean.cpu()]

    def train_epoch(self, epoch: int, features: torch.Tensor, targets: torch.Tensor, optimizer: torch.optim.Optimizer) -> float:
        head = self.model.head
        head.train()
        generator = torch.Generator().manual_seed(self.config.seed * 1000003 + epoch)
        order = torch.randperm(len(features), generator=generator).to(self.device)

        total, seen = 0.0, 0
        for index in _batches(len(features), self.batch_size, order):
            optimizer.zero_grad()
            loss = F.l1_loss(head(features[index]), targets[index])
            if not torch.isfinite(loss):
                raise DivergenceError(epoch)
            loss.backward()
            optimizer.step()
            total += float(loss.detach()) * len(index)
            seen += len(index)
        return total / seen

    def validate(self, epoch: int, features: torch.Tensor, targets: torch.Tensor) -> float:
        head = self.model.head
        head.eval()
        with torch.no_grad():
            return float(F.l1_loss(head(features), targets))

    def fit(self, train_set: ArrayPair, val_set: ArrayPair) -> TrainHistory:
        train_x, train_y = train_set
        val_x, val_y = val_set
        if len(train_x) == 0 or len(val_x) == 0:
            raise StateError("train and validation sets must be non-empty")
        if len(train_x) < 2:
            raise StateError("batch normalization needs at least 2 training samples")
        if len(train_x) != len(train_y) or len(val_x) != len(val_y):
            raise InvalidInputError("inputs and targets differ in length")

        cfg = self.config
        torch.manual_seed(cfg.seed)
        train_f = extract_features(self.model, train_x, self.device)
        val_f = extract_features(self.model, val_x, self.device)
        train_t = torch.as_tensor(np.asarray(train_y), dtype=torch.float32, device=self.device)
        val_t = torch.as_tensor(np.asarray(val_y), dtype=torch.float32, device=self.device)
        if train_t.shape[1:] != (len(MEASUREMENT_KEYS),) or val_t.shape[1:] != (len(MEASUREMENT_KEYS),):
            raise InvalidInputError(f"targets must be (N, {len(MEASUREMENT_KEYS)})")

        if cfg.init_output_bias:
            self.init_output_bias(train_t)
        optimizer = torch.optim.Adam(self.model.trainable_parameters(), lr=cfg.learning_rate)
        stopper = EarlyStopping(cfg.patience, cfg.min_delta, cfg.restore_best_weights)
        history = TrainHistory()

        for epoch in range(1, cfg.max_epochs + 1):
            train_mae = self.train_epoch(epoch, train_f, train_t, optimizer)
            val_mae = self.validate(epoch, val_f, val_t)
            if not math.isfinite(val_mae):
                raise DivergenceError(epoch, f"non-finite validation loss at epoch {epoch}")
            history.epochs.append(EpochRecord(epoch=epoch, train_mae=train_mae, val_mae=val_mae))
            logger.info("epoch %3d  train MAE %.4f  val MAE %.4f", epoch, train_mae, val_mae)
            if stopper.step(epoch, val_mae, self.model):
                history.stopped_early = True
                logger.info("early stop at epoch %d (best %d)", epoch, stopper.best_epoch)
                break

        stopper.restore(self.model)
        history.best_epoch = stopper.best_epoch
        history.best_val_loss = stopper.best_loss
        self.model.eval()
        return history


def train_model(
    model: MeasurementRegressor,
    train_set: ArrayPair,
    val_set: ArrayPair,
    config: TrainConfig,
    device: Optional[str] = None,
) -> Tuple[MeasurementRegressor, TrainHistory]:
    trainer = Trainer(model, config, device)
    history = trainer.fit(train_set, val_set)
    return trainer.model, history


def predict_batch(model: MeasurementRegressor, inputs: np.ndarray, device: Optional[str] = None) -> np.ndarray:
    """추론 모드 예측값 (N, 16) float32, 단위 cm. 빈 배치는 (0, 16) 을 돌려준다."""
    inputs = np.asarray(inputs, dtype=np.float32)
    if len(inputs) == 0:
        return np.zeros((0, len(MEASUREMENT_KEYS)), dtype=np.float32)
    inputs = _check_inputs(inputs)

    target = resolve_device(device) if device else next(model.parameters()).device
    model.to(target)
    model.eval()
    outputs = []
    with torch.no_grad():
        for start in range(0, len(inputs), FEATURE_BATCH):
            batch = torch.from_numpy(inputs[start : start + FEATURE_BATCH]).to(target)
            outputs.append(model(batch).cpu().numpy())
    return np.concatenate(outputs).astype(np.float32)


# ---------------------------------------------------------------------------
# 체크포인트
# ---------------------------------------------------------------------------
def history_frame(history: TrainHistory) -> pd.DataFrame:
    return pd.DataFrame(
        [e.model_dump() for e in history.epochs], columns=["epoch", "train_mae", "val_mae"]
    )


def save_checkpoint(model: MeasurementRegressor, card: ModelCard, history: TrainHistory, directory: Union[str, Path]) -> Path:
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        tmp = directory / f".{WEIGHTS_FILE}.tmp"
        torch.save({k: v.detach().cpu() for k, v in model.state_dict().items()}, tmp)
        tmp.replace(directory / WEIGHTS_FILE)
    except OSError as exc:
        raise StorageError(directory / WEIGHTS_FILE, "cannot write weights") from exc
    write_text_atomic(directory / MODEL_CARD_FILE, card.model_dump_json(indent=2) + "\n")
    write_text_atomic(directory / HISTORY_FILE, history_frame(history).to_csv(index=False, lineterminator="\n"))
    logger.info("checkpoint written to %s", directory)
    return directory


def load_checkpoint(directory: Union[str, Path], device: Optional[str] = None) -> Tuple[MeasurementRegressor, ModelCard]:
    directory = Path(directory)
    try:
        card = ModelCard.model_validate_json((directory / MODEL_CARD_FILE).read_text(encoding="utf-8"))
    except OSError as exc:
        raise StorageError(directory / MODEL_CARD_FILE, "cannot read model card") from exc
    except ValueError as exc:
        raise DataError(f"malformed model card: {exc}") from exc
    if list(card.measurement_keys) != list(MEASUREMENT_KEYS):
        raise DataError("checkpoint was trained on a different measurement set")

    model = build_model(card.backbone, card.head, seed=card.seed, pretrained=False)
    try:
        state = torch.load(directory / WEIGHTS_FILE, map_location="cpu", weights_only=True)
    except OSError as exc:
        raise StorageError(directory / WEIGHTS_FILE, "cannot read weights") from exc
    model.load_state_dict(state)
    model.to(resolve_device(device))
    model.eval()
    return model, card


def model_card(
    backbone: BackboneConfig,
    head: HeadConfig,
    train: TrainConfig,
    history: TrainHistory,
    target_mean: Optional[Sequence[float]] = None,
) -> ModelCard:
    return ModelCard(
        backbone=backbone.model_copy(update={"feature_dim": FEATURE_DIMS[backbone.name]}),
        head=head,
        train=train,
        target_mean=list(target_mean) if target_mean is not None else None,
        best_epoch=history.best_epoch,
        best_val_loss=history.best_val_loss,
        seed=train.seed,
    )


def dump_predictions(keys: Sequence[str], rows: np.ndarray) -> List[Dict[str, float]]:
    return [{k: round(float(v), 4) for k, v in zip(keys, row)} for row in rows]
