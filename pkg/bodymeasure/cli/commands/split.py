# 학습/검증/테스트 분할 커맨드
from pathlib import Path
from typing import Optional

import click

from bodymeasure.cli import deps
from bodymeasure.schemas.dataset import Split
from bodymeasure.services import datakit


@click.command("split")
@deps.config_option
@deps.seed_option
@click.option("--dataset", type=click.Path(path_type=Path, file_okay=False), default=None, help="데이터셋 루트 디렉토리")
def command(config_path: Optional[Path], seed: Optional[int], dataset: Optional[Path]) -> None:
    """
    성별 층화 분할을 계산해 매니페스트를 다시 쓴다
    """
    config = deps.resolve_config(config_path, seed=seed, dataset=dataset)
    root = config.dataset_root
    manifest = datakit.split_dataset(datakit.read_manifest(root), config.split_fractions, config.seed)
    datakit.write_manifest(manifest, root)
    datakit.write_provenance(
        root,
        command="split",
        seed=config.seed,
        config={"fractions": list(config.split_fractions), "generation_digest": manifest.generation_digest},
    )
    counts = "/".join(str(len(manifest.ids_in(s))) for s in Split)
    click.echo(f"split {counts} (train/val/test) written to {root}")
