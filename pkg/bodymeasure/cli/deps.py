# 커맨드 공통 의존성: 설정 로드와 플래그 적용
import json
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Optional

import click
from pydantic import ValidationError

from bodymeasure.core.exceptions import ConfigurationError, StateError
from bodymeasure.schemas.body import GenerationRanges
from bodymeasure.schemas.dataset import DatasetManifest
from bodymeasure.schemas.pipeline import PipelineConfig
from bodymeasure.services import bodygen, datakit

logger = logging.getLogger(__name__)


def load_config(path: Optional[Path]) -> PipelineConfig:
    """TOML 파이프라인 설정. 경로가 없으면 기본값."""
    if path is None:
        return PipelineConfig()
    try:
        data = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"cannot parse config {path}: {exc}") from exc
    return _validate(data, str(path))


def _validate(data: Dict[str, Any], source: str) -> PipelineConfig:
    try:
        return PipelineConfig.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        location = ".".join(str(part) for part in error["loc"])
        raise ConfigurationError(f"{source}: {location}: {error['msg']}") from exc


def apply_overrides(config: PipelineConfig, **flags: Any) -> PipelineConfig:
    """
    CLI 플래그를 설정 위에 덮어쓴다. None 인 플래그는 무시한다.
    지원 키: seed, out, dataset, n_per_sex, backbone, batch_size, max_epochs
    """
    data = config.model_dump(mode="json")
    if flags.get("seed") is not None:
        data["seed"] = flags["seed"]
        data["train"]["seed"] = flags["seed"]
    if flags.get("dataset") is not None:
        data["dataset_root"] = str(flags["dataset"])
    if flags.get("out") is not None:
        data["output_dir"] = str(flags["out"])
    if flags.get("n_per_sex") is not None:
        data["n_per_sex"] = flags["n_per_sex"]
    if flags.get("backbone") is not None:
        data["backbone"]["name"] = flags["backbone"]
    if flags.get("batch_size") is not None:
        data["train"]["batch_size"] = flags["batch_size"]
    if flags.get("max_epochs") is not None:
        data["train"]["max_epochs"] = flags["max_epochs"]
    return _validate(data, "command line")


def resolve_config(config_path: Optional[Path], **flags: Any) -> PipelineConfig:
    config = apply_overrides(load_config(config_path), **flags)
    logger.debug("pipeline config: %s", config.model_dump_json())
    return config


def load_ranges(config: PipelineConfig) -> GenerationRanges:
    return bodygen.load_ranges(config.ranges_file)


def load_split_manifest(root: Path) -> DatasetManifest:
    manifest = datakit.read_manifest(root)
    if not manifest.is_split:
        raise StateError(f"dataset {root} has not been split; run `split` first")
    return manifest


def read_json(path: Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc.strerror}") from exc
    except ValueError as exc:
        raise ConfigurationError(f"{path} is not valid JSON: {exc}") from exc


# 공통 옵션
config_option = click.option(
    "--config", "config_path", type=click.Path(path_type=Path, dir_okay=False), default=None, help="파이프라인 TOML 설정 파일"
)
seed_option = click.option("--seed", type=int, default=None, help="재현용 시드")
