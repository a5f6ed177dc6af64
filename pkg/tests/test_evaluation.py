import numpy as np
import pytest

from bodymeasure.core.exceptions import InvalidInputError, StateError
from bodymeasure.schemas.body import Sex
from bodymeasure.schemas.dataset import Split
from bodymeasure.schemas.measurement import MEASUREMENT_KEYS, REPORTED_KEYS
from bodymeasure.services import datakit, evaluation


def _table(n: int, value: float) -> np.ndarray:
    return np.full((n, len(MEASUREMENT_KEYS)), value)


def test_compute_mae_oracles():
    predictions = _table(3, 0.0)
    targets = _table(3, 0.0)
    predictions[:, 0] = [1.0, 2.0, 3.0]
    targets[:, 0] = [1.0, 1.0, 1.0]
    assert evaluation.compute_mae(predictions, targets, 0) == pytest.approx(1.0)
    assert evaluation.compute_mae(predictions, targets, 1) == 0.0

    predictions[:, 2] = [-2.0, 2.0, 0.0]
    assert evaluation.compute_mae(predictions, targets, 2) == pytest.approx(4.0 / 3.0)


def test_compute_mae_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        evaluation.compute_mae(_table(2, 0.0), _table(3, 0.0), 0)
    with pytest.raises(InvalidInputError):
        evaluation.compute_mae(_table(0, 0.0), _table(0, 0.0), 0)
    with pytest.raises(InvalidInputError):
        evaluation.compute_mae(_table(2, 0.0), _table(2, 0.0), 16)


def test_total_is_weighted_mean_of_subsets():
    rng = np.random.default_rng(3)
    targets = rng.uniform(50, 100, size=(10, 16))
    predictions = targets + rng.normal(0, 2, size=(10, 16))
    sexes = [Sex.male] * 7 + [Sex.female] * 3
    report = evaluation.evaluate_predictions(predictions, targets, sexes)
    for name in REPORTED_KEYS:
        row = report.rows[name]
        assert row.total == pytest.approx((7 * row.male + 3 * row.female) / 10)
    assert report.n_male == 7 and report.n_female == 3


def test_perfect_predictor_scores_zero():
    targets = np.random.default_rng(0).uniform(20, 100, size=(4, 16))
    report = evaluation.evaluate_predictions(targets, targets, [Sex.male, Sex.female] * 2)
    assert all(v == 0.0 for row in report.rows.values() for v in (row.male, row.female, row.total))
    assert report.mean.total == 0.0


def test_mean_row_averages_reported_measurements():
    predictions, targets = _table(2, 0.0), _table(2, 0.0)
    for k in range(5):
        predictions[:, k] = k + 1.0
    predictions[:, 10] = 100.0  # 보고 대상 아님
    report = evaluation.evaluate_predictions(predictions, targets, [Sex.male, Sex.female])
    assert report.mean.total == pytest.approx(3.0)
    assert report.mean.male == pytest.approx(3.0)


def test_empty_subset_is_an_error():
    with pytest.raises(StateError):
        evaluation.evaluate_predictions(_table(2, 0.0), _table(2, 0.0), [Sex.male, Sex.male])


def test_unknown_measurement():
    with pytest.raises(InvalidInputError):
        evaluation.evaluate_predictions(_table(2, 0.0), _table(2, 0.0), [Sex.male, Sex.female], ["wingspan"])


def test_baseline_matches_brute_force(manifest_factory):
    manifest = datakit.split_dataset(manifest_factory(20, seed=4), seed=2)
    report = evaluation.baseline_report(manifest)
    records = manifest.record_map()
    train = np.array([records[s].measurements.as_vector() for s in manifest.ids_in(Split.train)])
    test = np.array([records[s].measurements.as_vector() for s in manifest.ids_in(Split.test)])
    mean = train.mean(axis=0)
    for name in REPORTED_KEYS:
        k = MEASUREMENT_KEYS.index(name)
        assert report.rows[name].total == pytest.approx(np.abs(test[:, k] - mean[k]).mean())
    assert report.model_name == evaluation.BASELINE_NAME


def test_baseline_requires_split(manifest_factory):
    with pytest.raises(StateError):
        evaluation.baseline_report(manifest_factory(3))


def test_report_layout(manifest_factory):
    report = evaluation.baseline_report(datakit.split_dataset(manifest_factory(20), seed=0))
    frame = evaluation.report_frame(report)
    assert list(frame.columns) == ["Male MAE", "Female MAE", "Total MAE"]
    assert list(frame.index) == [
        "Waist circumference",
        "Pelvis circumference",
        "Arm length",
        "Leg length",
        "Torso length",
        "Mean MAE",
    ]
    text = evaluation.report_table(report)
    assert "Arm length" in text and "Mean MAE" in text


def test_write_and_read_report(tmp_path, manifest_factory):
    report = evaluation.baseline_report(datakit.split_dataset(manifest_factory(20), seed=0))
    evaluation.write_report(report, tmp_path)
    for name in (evaluation.REPORT_JSON, evaluation.REPORT_CSV, evaluation.REPORT_TXT):
        assert (tmp_path / name).is_file()
    assert evaluation.read_report(tmp_path) == report
    assert evaluation.read_report(tmp_path / evaluation.REPORT_JSON) == report


def test_compare_reports(manifest_factory):
    manifest = datakit.split_dataset(manifest_factory(20), seed=0)
    baseline = evaluation.baseline_report(manifest)
    other = baseline.model_copy(update={"model_name": "other"})
    detail, means = evaluation.compare_reports([baseline, other])
    assert list(means.index) == [evaluation.BASELINE_NAME, "other"]
    assert detail.shape == (5, 6)
    assert detail[("other", "Total MAE")].tolist() == detail[(evaluation.BASELINE_NAME, "Total MAE")].tolist()
    with pytest.raises(InvalidInputError):
        evaluation.compare_reports([baseline, baseline])
    with pytest.raises(InvalidInputError):
        evaluation.compare_reports([])
