# 테스트셋 MAE 평가와 보고서 출력
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from bodymeasure.core.exceptions import DataError, InvalidInputError, StateError, StorageError
from bodymeasure.models import MeasurementRegressor
from bodymeasure.schemas.body import Sex
from bodymeasure.schemas.dataset import DatasetManifest, Split
from bodymeasure.schemas.measurement import MEASUREMENT_KEYS, REPORT_LABELS, REPORTED_KEYS
from bodymeasure.schemas.training import EvalReport, SubsetMae
from bodymeasure.services import datakit
from bodymeasure.services.training import predict_batch
from bodymeasure.utils.atomic import write_text_atomic

logger = logging.getLogger(__name__)

REPORT_JSON = "eval_report.json"
REPORT_CSV = "eval_report.csv"
REPORT_TXT = "eval_report.txt"

COLUMNS = ("Male MAE", "Female MAE", "Total MAE")
MEAN_ROW = "Mean MAE"
BASELINE_NAME = "train-mean baseline"


def compute_mae(predictions: np.ndarray, targets: np.ndarray, index: int) -> float:
    """측정값 열 `index` 에 대한 |prediction - target| 의 샘플 평균"""
    predictions = np.asarray(predictions, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if predictions.shape != targets.shape:
        raise InvalidInputError(f"shape mismatch {predictions.shape} vs {targets.shape}")
    if predictions.ndim != 2 or len(predictions) == 0:
        raise InvalidInputError("need a non-empty (N, M) array")
    if not 0 <= index < predictions.shape[1]:
        raise InvalidInputError(f"measurement index {index} out of range")
    return float(np.mean(np.abs(predictions[:, index] - targets[:, index])))


def evaluate_predictions(
    predictions: np.ndarray,
    targets: np.ndarray,
    sexes: Sequence[Sex],
    measurements: Sequence[str] = REPORTED_KEYS,
    model_name: str = "model",
) -> EvalReport:
    """
    남성, 여성, 전체 부분집합의 측정값별 MAE.
    `predictions` / `targets` 의 열은 MEASUREMENT_KEYS 순서이고 `sexes` 가 각 행의 성별이다.
    """
    predictions = np.asarray(predictions, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    sexes = np.asarray([Sex(s).value for s in sexes])
    if len(sexes) != len(targets):
        raise InvalidInputError("one sex label per row is required")

    masks = {"male": sexes == Sex.male.value, "female": sexes == Sex.female.value}
    for name, mask in masks.items():
        if not mask.any():
            raise StateError(f"{name} test subset is empty")

    unknown = [m for m in measurements if m not in MEASUREMENT_KEYS]
    if unknown:
        raise InvalidInputError(f"unknown measurements: {', '.join(unknown)}")

    rows: Dict[str, SubsetMae] = {}
    for name in measurements:
        k = MEASUREMENT_KEYS.index(name)
        rows[name] = SubsetMae(
            male=compute_mae(predictions[masks["male"]], targets[masks["male"]], k),
            female=compute_mae(predictions[masks["female"]], targets[masks["female"]], k),
            total=compute_mae(predictions, targets, k),
        )
    mean = SubsetMae(
        male=float(np.mean([r.male for r in rows.values()])),
        female=float(np.mean([r.female for r in rows.values()])),
        total=float(np.mean([r.total for r in rows.values()])),
    )
    return EvalReport(
        model_name=model_name,
        measurements=list(measurements),
        rows=rows,
        mean=mean,
        n_male=int(masks["male"].sum()),
        n_female=int(masks["female"].sum()),
    )


def _test_targets(manifest: DatasetManifest) -> Tuple[List[str], np.ndarray, List[Sex]]:
    male, female = datakit.test_subsets(manifest)
    if not male:
        raise StateError("male test subset is empty")
    if not female:
        raise StateError("female test subset is empty")
    records = manifest.record_map()
    ids = male + female
    targets = np.array([records[sid].measurements.as_vector() for sid in ids], dtype=np.float64)
    return ids, targets, [records[sid].sex for sid in ids]


def evaluate_model(
    model: MeasurementRegressor,
    manifest: DatasetManifest,
    root: Union[str, Path],
    measurements: Sequence[str] = REPORTED_KEYS,
    model_name: Optional[str] = None,
    mean: Optional[Sequence[float]] = None,
    std: Optional[Sequence[float]] = None,
) -> EvalReport:
    ids, targets, sexes = _test_targets(manifest)
    norm = {k: v for k, v in (("mean", mean), ("std", std)) if v is not None}
    inputs, _ = datakit.load_samples(manifest, root, ids, **norm)
    predictions = predict_batch(model, inputs)
    name = model_name or model.backbone.name.value
    report = evaluate_predictions(predictions, targets, sexes, measurements, name)
    logger.info("%s: mean MAE %.3f cm over %d test samples", name, report.mean.total, report.n_test)
    return report


def baseline_report(manifest: DatasetManifest, measurements: Sequence[str] = REPORTED_KEYS) -> EvalReport:
    """상수 예측기: 모든 테스트 샘플에 학습셋 타깃 평균을 내놓는다"""
    train_ids = manifest.ids_in(Split.train)
    if not train_ids:
        raise StateError("train split is empty")
    records = manifest.record_map()
    train_mean = np.mean([records[sid].measurements.as_vector() for sid in train_ids], axis=0)
    _, targets, sexes = _test_targets(manifest)
    predictions = np.tile(train_mean, (len(targets), 1))
    return evaluate_predictions(predictions, targets, sexes, measurements, BASELINE_NAME)


# ---------------------------------------------------------------------------
# 보고서 출력
# ---------------------------------------------------------------------------
def report_frame(report: EvalReport) -> pd.DataFrame:
    """행 = 측정 항목 + 평균, 열 = 남/여/전체 MAE (cm)"""
    data = [[row.male, row.female, row.total] for row in (report.rows[m] for m in report.measurements)]
    data.append([report.mean.male, report.mean.female, report.mean.total])
    index = [REPORT_LABELS.get(m, m) for m in report.measurements] + [MEAN_ROW]
    return pd.DataFrame(data, index=pd.Index(index, name="Measurement"), columns=list(COLUMNS))


def report_table(report: EvalReport) -> str:
    frame = report_frame(report)
    header = f"{report.model_name}  (test: {report.n_male} male, {report.n_female} female)"
    return header + "\n" + frame.to_string(float_format=lambda v: f"{v:.3f}") + "\n"


def write_report(report: EvalReport, directory: Union[str, Path]) -> Path:
    directory = Path(directory)
    write_text_atomic(directory / REPORT_JSON, report.model_dump_json(indent=2) + "\n")
    write_text_atomic(directory / REPORT_CSV, report_frame(report).to_csv(float_format="%.6f", lineterminator="\n"))
    write_text_atomic(directory / REPORT_TXT, report_table(report))
    return directory


def read_report(path: Union[str, Path]) -> EvalReport:
    path = Path(path)
    if path.is_dir():
        path = path / REPORT_JSON
    try:
        return EvalReport.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise StorageError(path, "cannot read report") from exc
    except ValueError as exc:
        raise DataError(f"malformed report {path}: {exc}") from exc


def compare_reports(reports: Sequence[EvalReport]) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    여러 모델의 MAE 를 나란히 비교한다.

    반환값: ((model, subset) 열 MultiIndex 를 가진 측정값별 표, 모델당 한 행인 평균 MAE 표)
    """
    if not reports:
        raise InvalidInputError("nothing to compare")
    names = [r.model_name for r in reports]
    if len(set(names)) != len(names):
        raise InvalidInputError("model names must be unique")
    measurements = reports[0].measurements
    if any(r.measurements != measurements for r in reports):
        raise InvalidInputError("reports cover different measurements")

    frames = {r.model_name: report_frame(r).drop(index=MEAN_ROW) for r in reports}
    detail = pd.concat(frames, axis=1, names=["Model", "Subset"])
    means = pd.DataFrame(
        [[r.mean.male, r.mean.female, r.mean.total] for r in reports],
        index=pd.Index(names, name="Model"),
        columns=list(COLUMNS),
    )
    return detail, means
