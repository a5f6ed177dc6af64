# 회귀 모델 학습 커맨드
from pathlib import Path
from typing import Optional

import click

from bodymeasure.cli import deps
from bodymeasure.schemas.dataset import Split
from bodymeasure.schemas.training import BackboneName
from bodymeasure.services import datakit, training


@click.command("train")
@deps.config_option
@deps.seed_option
@click.option("--dataset", type=click.Path(path_type=Path, file_okay=False), default=None, help="분할된 데이터셋 루트")
@click.option("--out", type=click.Path(path_type=Path, file_okay=False), default=None, help="체크포인트 디렉토리")
@click.option("--backbone", type=click.Choice([b.value for b in BackboneName]), default=None)
@click.option("--batch-size", type=int, default=None)
@click.option("--max-epochs", type=int, default=None)
def command(
    config_path: Optional[Path],
    seed: Optional[int],
    dataset: Optional[Path],
    out: Optional[Path],
    backbone: Optional[str],
    batch_size: Optional[int],
    max_epochs: Optional[int],
) -> None:
    """
    고정 백본 + 헤드를 학습하고 체크포인트를 저장한다
    """
    config = deps.resolve_config(
        config_path, seed=seed, dataset=dataset, out=out, backbone=backbone, batch_size=batch_size, max_epochs=max_epochs
    )
    manifest = deps.load_split_manifest(config.dataset_root)
    norm = {"mean": config.backbone.mean, "std": config.backbone.std}
    train_set = datakit.load_samples(manifest, config.dataset_root, manifest.ids_in(Split.train), **norm)
    val_set = datakit.load_samples(manifest, config.dataset_root, manifest.ids_in(Split.val), **norm)

    model = training.build_model(config.backbone, config.head, seed=config.train.seed)
    trainer = training.Trainer(model, config.train)
    history = trainer.fit(train_set, val_set)

    card = training.model_card(config.backbone, config.head, config.train, history, trainer.target_mean)
    training.save_checkpoint(trainer.model, card, history, config.output_dir)
    datakit.write_provenance(
        config.output_dir,
        command="train",
        seed=config.train.seed,
        config={**config.model_dump(mode="json"), "generation_digest": manifest.generation_digest},
    )
    click.echo(
        f"best epoch {history.best_epoch} (val MAE {history.best_val_loss:.3f} cm); checkpoint in {config.output_dir}"
    )
