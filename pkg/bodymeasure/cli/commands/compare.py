# 백본 비교표 커맨드
from pathlib import Path
from typing import Optional, Tuple

import click

from bodymeasure.services import evaluation
from bodymeasure.utils.atomic import write_text_atomic


@click.command("compare")
@click.argument("reports", nargs=-1, required=True, type=click.Path(path_type=Path))
@click.option("--out", type=click.Path(path_type=Path, file_okay=False), default=None, help="비교표 CSV 디렉토리")
def command(reports: Tuple[Path, ...], out: Optional[Path]) -> None:
    """
    여러 eval 보고서(JSON 또는 보고서 디렉토리)를 모델별로 나란히 비교한다
    """
    detail, means = evaluation.compare_reports([evaluation.read_report(p) for p in reports])
    if out is not None:
        write_text_atomic(out / "comparison.csv", detail.to_csv(float_format="%.6f", lineterminator="\n"))
        write_text_atomic(out / "mean_mae.csv", means.to_csv(float_format="%.6f", lineterminator="\n"))
    fmt = lambda v: f"{v:.3f}"  # noqa: E731
    click.echo(detail.to_string(float_format=fmt))
    click.echo("")
    click.echo(means.to_string(float_format=fmt))
