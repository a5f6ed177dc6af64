# 테스트셋 평가 커맨드
from pathlib import Path
from typing import Optional

import click

from bodymeasure.cli import deps
from bodymeasure.core.exceptions import ConfigurationError
from bodymeasure.services import datakit, evaluation, training


@click.command("eval")
@deps.config_option
@click.option("--dataset", type=click.Path(path_type=Path, file_okay=False), default=None, help="분할된 데이터셋 루트")
@click.option("--checkpoint", type=click.Path(path_type=Path, file_okay=False), default=None, help="train 출력 디렉토리")
@click.option("--baseline", is_flag=True, help="학습셋 평균을 예측하는 기준 모델을 평가")
@click.option("--name", default=None, help="보고서에 표시할 모델 이름")
@click.option("--out", type=click.Path(path_type=Path, file_okay=False), default=None, help="보고서 디렉토리")
def command(
    config_path: Optional[Path],
    dataset: Optional[Path],
    checkpoint: Optional[Path],
    baseline: bool,
    name: Optional[str],
    out: Optional[Path],
) -> None:
    """
    남/여/전체 테스트셋의 측정 항목별 MAE 보고서를 쓴다
    """
    config = deps.resolve_config(config_path, dataset=dataset)
    manifest = deps.load_split_manifest(config.dataset_root)

    if baseline:
        report = evaluation.baseline_report(manifest)
        seed = manifest.shuffle_seed
        source = {"baseline": True}
    else:
        if checkpoint is None:
            raise ConfigurationError("--checkpoint is required unless --baseline is given")
        model, card = training.load_checkpoint(checkpoint)
        report = evaluation.evaluate_model(
            model,
            manifest,
            config.dataset_root,
            model_name=name or card.backbone.name.value,
            mean=card.backbone.mean,
            std=card.backbone.std,
        )
        seed = card.seed
        source = {"checkpoint": str(checkpoint), "model_card": card.model_dump(mode="json")}

    if name and baseline:
        report = report.model_copy(update={"model_name": name})
    target = out or (checkpoint if checkpoint is not None else config.output_dir)
    evaluation.write_report(report, target)
    datakit.write_provenance(
        target,
        command="eval",
        seed=seed if seed is not None else 0,
        config={**source, "generation_digest": manifest.generation_digest, "shuffle_seed": manifest.shuffle_seed},
    )
    click.echo(evaluation.report_table(report), nl=False)
