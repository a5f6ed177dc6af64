# 데이터셋 생성 커맨드
from pathlib import Path
from typing import Optional

import click

from bodymeasure.cli import deps
from bodymeasure.services import datakit


@click.command("gen")
@deps.config_option
@deps.seed_option
@click.option("--out", type=click.Path(path_type=Path, file_okay=False), default=None, help="데이터셋 루트 디렉토리")
@click.option("--n-per-sex", type=int, default=None, help="성별당 샘플 수")
@click.option("--workers", type=int, default=None, help="프로세스 수 (기본: NUM_WORKERS)")
def command(config_path: Optional[Path], seed: Optional[int], out: Optional[Path], n_per_sex: Optional[int], workers: Optional[int]) -> None:
    """
    합성 인체를 생성하고 측정/렌더링해 데이터셋을 만든다
    """
    config = deps.resolve_config(config_path, seed=seed, dataset=out, n_per_sex=n_per_sex)
    ranges = deps.load_ranges(config)
    manifest = datakit.generate_dataset(
        n_per_sex=config.n_per_sex,
        ranges=ranges,
        render_cfg=config.render,
        out_dir=config.dataset_root,
        master_seed=config.seed,
        mesh_resolution=config.mesh_resolution,
        measure_cfg=config.measure,
        num_workers=workers,
    )
    click.echo(f"{len(manifest.records)} samples written to {config.dataset_root}")
