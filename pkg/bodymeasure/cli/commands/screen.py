# 스크리닝 커맨드
from pathlib import Path
from typing import Dict, Optional

import click

from bodymeasure.cli import deps
from bodymeasure.core.exceptions import ConfigurationError
from bodymeasure.schemas.body import Sex
from bodymeasure.services import screening
from bodymeasure.utils.atomic import write_text_atomic

# 직접 입력 플래그 → 측정 키
FLAG_KEYS = {
    "waist": "waist_circumference",
    "pelvis": "pelvis_circumference",
    "arm": "shoulder_to_wrist",
    "leg": "leg_length",
    "torso": "torso_length",
}


def _from_file(path: Path) -> Dict[str, float]:
    data = deps.read_json(path)
    # predict 출력은 {"measurements": {...}} 형태
    if isinstance(data, dict) and isinstance(data.get("measurements"), dict):
        data = data["measurements"]
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: expected a JSON object of measurements")
    return data


@click.command("screen")
@click.option("--sex", type=click.Choice([s.value for s in Sex]), required=True)
@click.option("--measurements", "measurements_file", type=click.Path(path_type=Path, dir_okay=False), default=None)
@click.option("--waist", type=float, default=None)
@click.option("--pelvis", type=float, default=None)
@click.option("--arm", type=float, default=None)
@click.option("--leg", type=float, default=None)
@click.option("--torso", type=float, default=None)
@click.option("--thresholds", type=click.Path(path_type=Path, dir_okay=False), default=None, help="마르판 비율 임계값 파일")
@click.option("--out", type=click.Path(path_type=Path, dir_okay=False), default=None, help="리포트 JSON 출력 파일")
def command(
    sex: str,
    measurements_file: Optional[Path],
    thresholds: Optional[Path],
    out: Optional[Path],
    **direct: Optional[float],
) -> None:
    """
    측정값(JSON 파일 또는 직접 입력)과 성별로 스크리닝 리포트를 만든다
    """
    values = _from_file(measurements_file) if measurements_file else {}
    # 직접 입력이 파일 값보다 우선
    values.update({FLAG_KEYS[flag]: v for flag, v in direct.items() if v is not None})

    report = screening.screen_subject(values, Sex(sex), screening.load_thresholds(thresholds))
    if out is not None:
        write_text_atomic(out, report.model_dump_json(indent=2) + "\n")
    click.echo(screening.render_text(report), nl=False)
