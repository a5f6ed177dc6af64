# CLI 진입점
import logging
import os

from bodymeasure.cli.api import cli
from bodymeasure.core.config import settings

log_level = os.environ.get("LOGLEVEL", settings.LOGLEVEL).upper()
logging.basicConfig(
    level=getattr(logging, log_level, logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)


def main() -> None:
    cli(prog_name=settings.PROJECT_NAME)


if __name__ == "__main__":
    main()
