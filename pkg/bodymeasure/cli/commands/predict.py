# 단일 이미지 추론 커맨드
import json
from pathlib import Path
from typing import Optional

import click
import numpy as np

from bodymeasure.schemas.measurement import MEASUREMENT_KEYS
from bodymeasure.services import imaging, training
from bodymeasure.utils.atomic import write_text_atomic
from bodymeasure.utils.hashing import config_digest


@click.command("predict")
@click.argument("image", type=click.Path(path_type=Path, dir_okay=False))
@click.option("--checkpoint", type=click.Path(path_type=Path, file_okay=False), required=True)
@click.option("--out", type=click.Path(path_type=Path, dir_okay=False), default=None, help="측정값 JSON 출력 파일")
def command(image: Path, checkpoint: Path, out: Optional[Path]) -> None:
    """
    실루엣 이미지 한 장에서 16개 측정값(cm)을 예측한다
    """
    model, card = training.load_checkpoint(checkpoint)
    inputs = imaging.to_model_input(image, card.backbone.mean, card.backbone.std)
    prediction = training.predict_batch(model, inputs[np.newaxis])[0]

    payload = {
        "image": str(image),
        "model": card.backbone.name.value,
        "seed": card.seed,
        "model_card_digest": config_digest(card),
        "measurements": training.dump_predictions(MEASUREMENT_KEYS, prediction[np.newaxis])[0],
    }
    text = json.dumps(payload, indent=2) + "\n"
    if out is not None:
        write_text_atomic(out, text)
    click.echo(text, nl=False)
