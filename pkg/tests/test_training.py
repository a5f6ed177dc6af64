import numpy as np
import pytest
import torch

from bodymeasure.core.exceptions import ConfigurationError, DivergenceError, InvalidInputError, StateError
from bodymeasure.models import FEATURE_DIMS, build_backbone
from bodymeasure.schemas.dataset import Split
from bodymeasure.schemas.training import BackboneConfig, BackboneName, HeadConfig, TrainConfig
from bodymeasure.services import datakit, evaluation, training

BACKBONE = BackboneConfig(name=BackboneName.tiny_test)
HEAD = HeadConfig()


def _inputs(n: int, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).normal(size=(n, 224, 224, 3)).astype(np.float32)


def _targets(n: int, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).uniform(20.0, 120.0, size=(n, 16)).astype(np.float32)


@pytest.fixture
def model():
    return training.build_model(BACKBONE, HEAD, seed=0)


class ScriptedTrainer(training.Trainer):
    """검증 손실을 미리 정한 값으로 대체한다"""

    def __init__(self, *args, losses, **kwargs):
        super().__init__(*args, **kwargs)
        self.losses = losses

    def validate(self, epoch, features, targets):
        return self.losses[epoch - 1]


def test_output_shape_and_frozen_backbone(model):
    out = model(torch.from_numpy(_inputs(4)))
    assert out.shape == (4, 16)
    trainable = {id(p) for p in model.trainable_parameters()}
    assert trainable
    assert not any(id(p) in trainable for p in model.backbone.parameters())
    assert all(id(p) in trainable for p in model.head.parameters())
    assert model.backbone.feature_dim == FEATURE_DIMS[BackboneName.tiny_test]


def test_backbone_stays_in_eval_mode(model):
    model.train()
    assert not model.backbone.training
    assert model.head.training


def test_unknown_backbone():
    with pytest.raises(ConfigurationError):
        build_backbone("alexnet")


def test_one_step_updates_only_the_head(model):
    trainer = training.Trainer(model, TrainConfig(batch_size=8), device="cpu")
    backbone_before = {k: v.clone() for k, v in model.backbone.state_dict().items()}
    head_before = {k: v.clone() for k, v in model.head.named_parameters()}

    features = training.extract_features(model, _inputs(8), trainer.device)
    targets = torch.from_numpy(_targets(8))
    optimizer = torch.optim.Adam(model.trainable_parameters(), lr=1e-4)
    trainer.train_epoch(1, features, targets, optimizer)

    for key, value in model.backbone.state_dict().items():
        assert torch.equal(value, backbone_before[key]), key
    # BatchNorm 앞 Linear 의 bias 는 기울기가 0 이다
    changed = [n for n in head_before if n.endswith("weight") or n == "output.bias"]
    for name, parameter in model.head.named_parameters():
        if name in changed:
            assert not torch.equal(parameter, head_before[name]), name


def test_early_stopping_with_scripted_losses(model):
    losses = [10.0, 9.0, 8.0, 7.0, 6.0] + [6.5] * 95
    config = TrainConfig(batch_size=4, patience=10, max_epochs=100)
    trainer = ScriptedTrainer(model, config, device="cpu", losses=losses)
    history = trainer.fit((_inputs(4), _targets(4)), (_inputs(2, 1), _targets(2, 1)))
    assert len(history.epochs) == 15
    assert history.stopped_early
    assert history.best_epoch == 5
    assert history.best_val_loss == 6.0


def test_best_weights_are_restored(model):
    stopper = training.EarlyStopping(patience=2)
    assert not stopper.step(1, 5.0, model)
    snapshot = {k: v.clone() for k, v in model.head.state_dict().items()}
    with torch.no_grad():
        model.head.output.weight.add_(1.0)
    assert not stopper.step(2, 9.0, model)
    assert stopper.step(3, 9.0, model)
    stopper.restore(model)
    for key, value in model.head.state_dict().items():
        assert torch.equal(value, snapshot[key]), key


def test_early_stopping_min_delta():
    stopper = training.EarlyStopping(patience=2, min_delta=0.5)
    assert not stopper.step(1, 10.0)
    assert not stopper.step(2, 9.8)
    assert stopper.step(3, 9.7)
    assert stopper.best_epoch == 1


def test_non_finite_loss_raises(model):
    targets = _targets(4)
    targets[0, 0] = np.nan
    trainer = training.Trainer(model, TrainConfig(batch_size=4, init_output_bias=False), device="cpu")
    with pytest.raises(DivergenceError) as info:
        trainer.fit((_inputs(4), targets), (_inputs(2, 1), _targets(2, 1)))
    assert info.value.epoch == 1
    assert info.value.exit_code == 4


def test_training_needs_data(model):
    trainer = training.Trainer(model, TrainConfig(), device="cpu")
    with pytest.raises(StateError):
        trainer.fit((_inputs(0), _targets(0)), (_inputs(2), _targets(2)))
    with pytest.raises(StateError):
        trainer.fit((_inputs(1), _targets(1)), (_inputs(2), _targets(2)))


def test_batch_size_one_trains_in_pairs(model, caplog):
    config = TrainConfig(batch_size=1, max_epochs=1)
    with caplog.at_level("WARNING", logger="bodymeasure.services.training"):
        _, history = training.train_model(model, (_inputs(5), _targets(5)), (_inputs(2, 1), _targets(2, 1)), config, device="cpu")
    assert len(history.epochs) == 1
    assert np.isfinite(history.epochs[0].train_mae)
    assert "batch_size 1" in caplog.text


def test_output_bias_starts_at_target_mean(model):
    targets = _targets(6)
    trainer = training.Trainer(model, TrainConfig(), device="cpu")
    trainer.init_output_bias(torch.from_numpy(targets))
    assert model.head.output.bias.detach().numpy() == pytest.approx(targets.mean(axis=0), rel=1e-5)
    assert trainer.target_mean == pytest.approx(targets.mean(axis=0).tolist(), rel=1e-5)


def test_validation_loss_is_mean_of_per_measurement_mae(model):
    inputs, targets = _inputs(6), _targets(6)
    trainer = training.Trainer(model, TrainConfig(), device="cpu")
    features = training.extract_features(model, inputs, trainer.device)
    loss = trainer.validate(1, features, torch.from_numpy(targets))
    predictions = training.predict_batch(model, inputs)
    per_key = [evaluation.compute_mae(predictions, targets, k) for k in range(16)]
    assert loss == pytest.approx(float(np.mean(per_key)), rel=1e-4)


def test_fits_constant_targets(model):
    inputs = _inputs(64)
    targets = np.full((64, 16), 50.0, dtype=np.float32)
    config = TrainConfig(batch_size=2, learning_rate=1e-2, max_epochs=50, patience=50, init_output_bias=False)
    _, history = training.train_model(model, (inputs, targets), (inputs[:4], targets[:4]), config, device="cpu")
    assert len(history.epochs) <= 50
    assert history.epochs[-1].train_mae < 0.05 * history.epochs[0].train_mae


def test_predictions_are_deterministic_and_batch_independent(model):
    inputs = _inputs(8)
    a = training.predict_batch(model, inputs)
    b = training.predict_batch(model, inputs)
    assert a.shape == (8, 16)
    assert np.array_equal(a, b)
    single = np.concatenate([training.predict_batch(model, inputs[i : i + 1]) for i in range(8)])
    assert np.allclose(single, a, atol=1e-4)


def test_predict_empty_and_bad_shape(model):
    assert training.predict_batch(model, np.zeros((0, 224, 224, 3))).shape == (0, 16)
    with pytest.raises(InvalidInputError):
        training.predict_batch(model, np.zeros((2, 128, 128, 3)))


def test_checkpoint_round_trip(tmp_path, model):
    config = TrainConfig(seed=3)
    history = training.TrainHistory(best_epoch=1, best_val_loss=2.5)
    card = training.model_card(BACKBONE, HEAD, config, history, target_mean=[1.0] * 16)
    training.save_checkpoint(model, card, history, tmp_path)

    loaded, loaded_card = training.load_checkpoint(tmp_path, device="cpu")
    assert loaded_card.backbone.feature_dim == FEATURE_DIMS[BackboneName.tiny_test]
    assert loaded_card.best_val_loss == 2.5
    inputs = _inputs(3)
    assert np.array_equal(training.predict_batch(model, inputs), training.predict_batch(loaded, inputs))


def test_train_on_generated_dataset(tiny_dataset):
    root, manifest = tiny_dataset
    train = datakit.load_samples(manifest, root, manifest.ids_in(Split.train))
    val = datakit.load_samples(manifest, root, manifest.ids_in(Split.val))
    model = training.build_model(BACKBONE, HEAD, seed=1)
    model, history = training.train_model(model, train, val, TrainConfig(batch_size=4, max_epochs=3), device="cpu")
    assert 1 <= len(history.epochs) <= 3
    assert all(np.isfinite(e.train_mae) and np.isfinite(e.val_mae) for e in history.epochs)
    report = evaluation.evaluate_model(model, manifest, root)
    assert report.n_male == report.n_female == 1


@pytest.mark.slow
def test_learning_beats_train_mean_baseline(tmp_path, ranges):
    from bodymeasure.cli import deps
    from bodymeasure.core.config import PACKAGE_DIR
    from bodymeasure.schemas.render import RenderConfig

    desk = deps.load_config(PACKAGE_DIR / "data" / "pipeline.example.toml")
    assert desk.backbone.name is BackboneName.tiny_test
    assert desk.train.batch_size == 32 and desk.train.max_epochs <= 50

    root = tmp_path / "learn"
    manifest = datakit.generate_dataset(256, ranges, RenderConfig(), root, master_seed=5, mesh_resolution=32)
    manifest = datakit.split_dataset(manifest, seed=5)
    train = datakit.load_samples(manifest, root, manifest.ids_in(Split.train))
    val = datakit.load_samples(manifest, root, manifest.ids_in(Split.val))

    model = training.build_model(desk.backbone, desk.head, seed=5)
    config = desk.train.model_copy(update={"seed": 5})
    model, _ = training.train_model(model, train, val, config, device="cpu")
    report = evaluation.evaluate_model(model, manifest, root)
    baseline = evaluation.baseline_report(manifest)
    assert report.mean.total <= 0.6 * baseline.mean.total
