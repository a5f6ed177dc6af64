# 데이터셋 생성 / 저장 / 분할
"""
데이터셋 구성: 인체를 추출해 측정하고 렌더링한 뒤 데이터셋 루트 아래
`manifest.header.json` + `manifest.records.jsonl` 로 저장한다.
이미지는 `images/<sex>/<sample_id>.png` 에 둔다.

여기서 쓰는 파일에는 타임스탬프가 없어서 같은 인자로 두 번 실행하면
바이트 단위로 같은 파일이 나온다.
"""
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import ValidationError

from bodymeasure.core.config import settings
from bodymeasure.core.exceptions import ConfigurationError, DataError, StateError, StorageError
from bodymeasure.schemas.body import GenerationRanges, Sex
from bodymeasure.schemas.dataset import MANIFEST_VERSION, DatasetManifest, SampleRecord, Split
from bodymeasure.schemas.measurement import MEASUREMENT_KEYS, MeasureConfig, MeasurementSet
from bodymeasure.schemas.render import RenderConfig
from bodymeasure.schemas.training import IMAGENET_MEAN, IMAGENET_STD
from bodymeasure.services import bodygen, imaging, measure
from bodymeasure.utils.atomic import staging_dir, write_text_atomic
from bodymeasure.utils.hashing import config_digest, seed_entropy

logger = logging.getLogger(__name__)

HEADER_FILE = "manifest.header.json"
RECORDS_FILE = "manifest.records.jsonl"
PROVENANCE_FILE = "provenance.json"

SEX_ORDER = (Sex.male, Sex.female)
FRACTION_TOLERANCE = 1e-9

PathLike = Union[str, Path]


def derive_sample_seed(master_seed: int, sex: Sex, index: int) -> int:
    """(master_seed, sex, index) → 32비트 샘플 시드"""
    sequence = np.random.SeedSequence(seed_entropy(master_seed), spawn_key=(SEX_ORDER.index(Sex(sex)), int(index)))
    return int(sequence.generate_state(1)[0])


def sample_id(sex: Sex, index: int) -> str:
    return f"{Sex(sex).value}-{index:06d}"


def _generate_one(task: Tuple[Sex, int, int, GenerationRanges, RenderConfig, int, MeasureConfig, str]) -> SampleRecord:
    sex, index, seed, ranges, render_cfg, resolution, measure_cfg, stage = task
    spec = bodygen.sample_body_spec(sex, seed, ranges)
    mesh = bodygen.build_body(spec, resolution)
    values = measure.measure_all(mesh, measure_cfg).rounded(6)

    sid = sample_id(sex, index)
    relative = f"images/{Sex(sex).value}/{sid}.png"
    imaging.save_png(imaging.render_silhouette(mesh, render_cfg), Path(stage) / relative)
    logger.debug("%s seed=%d", sid, seed)
    return SampleRecord(
        sample_id=sid,
        sex=sex,
        image_path=relative,
        measurements=MeasurementSet(values=values),
        spec_seed=seed,
    )


def generation_digest(
    ranges: GenerationRanges,
    render_cfg: RenderConfig,
    mesh_resolution: int,
    measure_cfg: MeasureConfig,
    n_per_sex: int,
    master_seed: int,
) -> str:
    return config_digest(
        {
            "ranges": ranges.model_dump(mode="json"),
            "render": render_cfg.model_dump(mode="json"),
            "mesh_resolution": mesh_resolution,
            "measure": measure_cfg.model_dump(mode="json"),
            "n_per_sex": n_per_sex,
            "master_seed": master_seed,
        }
    )


def generate_dataset(
    n_per_sex: int,
    ranges: GenerationRanges,
    render_cfg: RenderConfig,
    out_dir: PathLike,
    master_seed: int,
    mesh_resolution: int = 64,
    measure_cfg: Optional[MeasureConfig] = None,
    num_workers: Optional[int] = None,
) -> DatasetManifest:
    """
    성별마다 `n_per_sex` 개 샘플을 `out_dir` 에 만들고 매니페스트를 쓴다.
    스테이징 디렉토리에서 조립한 뒤 모든 샘플이 성공했을 때만 제자리로 옮긴다.
    """
    if n_per_sex < 1:
        raise ConfigurationError(f"n_per_sex must be >= 1, got {n_per_sex}")
    if mesh_resolution < bodygen.MIN_RESOLUTION:
        raise ConfigurationError(f"mesh_resolution must be >= {bodygen.MIN_RESOLUTION}")
    measure_cfg = measure_cfg or MeasureConfig()
    workers = settings.NUM_WORKERS if num_workers is None else num_workers
    out_dir = Path(out_dir)

    digest = generation_digest(ranges, render_cfg, mesh_resolution, measure_cfg, n_per_sex, master_seed)
    logger.info("generating %d samples per sex into %s (digest %s)", n_per_sex, out_dir, digest[:12])

    with staging_dir(out_dir) as stage:
        tasks = [
            (sex, i, derive_sample_seed(master_seed, sex, i), ranges, render_cfg, mesh_resolution, measure_cfg, str(stage))
            for sex in SEX_ORDER
            for i in range(n_per_sex)
        ]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                records = list(pool.map(_generate_one, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
        else:
            records = [_generate_one(task) for task in tasks]

        manifest = DatasetManifest(
            records=records,
            generation_digest=digest,
            master_seed=master_seed,
            mesh_resolution=mesh_resolution,
            render=render_cfg,
        )
        write_manifest(manifest, stage)
        write_provenance(
            stage,
            command="gen",
            seed=master_seed,
            config={
                "n_per_sex": n_per_sex,
                "mesh_resolution": mesh_resolution,
                "ranges": ranges.model_dump(mode="json"),
                "render": render_cfg.model_dump(mode="json"),
                "measure": measure_cfg.model_dump(mode="json"),
            },
        )

    logger.info("wrote %d records to %s", len(manifest.records), out_dir)
    return manifest


def check_fractions(fractions: Sequence[float]) -> Tuple[float, float, float]:
    if len(fractions) != 3:
        raise ConfigurationError("split fractions must be (train, val, test)")
    if any(not math.isfinite(f) or f < 0 for f in fractions):
        raise ConfigurationError(f"split fractions must be non-negative, got {tuple(fractions)}")
    if abs(sum(fractions) - 1.0) > FRACTION_TOLERANCE:
        raise ConfigurationError(f"split fractions must sum to 1, got {sum(fractions):.6f}")
    return tuple(float(f) for f in fractions)


def split_dataset(
    manifest: DatasetManifest,
    fractions: Sequence[float] = (0.70, 0.15, 0.15),
    seed: int = 0,
) -> DatasetManifest:
    """
    성별 층화 분할. 성별마다 (seed, sex) 로 시드한 생성기로 id 를 섞고,
    val 과 test 가 각각 floor(n * fraction) 개를 가져가며 나머지는 train 이다.
    """
    _, f_val, f_test = check_fractions(fractions)
    assignment: Dict[str, Split] = {}
    for sex in SEX_ORDER:
        ids = sorted(r.sample_id for r in manifest.records if r.sex is sex)
        n = len(ids)
        n_val = int(math.floor(n * f_val + FRACTION_TOLERANCE))
        n_test = int(math.floor(n * f_test + FRACTION_TOLERANCE))
        n_train = n - n_val - n_test
        exact_train = n * (1.0 - f_val - f_test)
        if abs(n_train - exact_train) > 1e-6:
            logger.warning("%s: %d samples do not split evenly; %d extra go to train", sex.value, n, round(n_train - exact_train))

        rng = np.random.default_rng(np.random.SeedSequence(seed_entropy(seed, SEX_ORDER.index(sex))))
        order = [ids[k] for k in rng.permutation(n)]
        for k, sid in enumerate(order):
            if k < n_train:
                assignment[sid] = Split.train
            elif k < n_train + n_val:
                assignment[sid] = Split.val
            else:
                assignment[sid] = Split.test

    split = manifest.model_copy(
        update={"split": assignment, "shuffle_seed": int(seed), "split_fractions": tuple(float(f) for f in fractions)}
    )
    logger.info(
        "split %d/%d/%d (train/val/test)",
        len(split.ids_in(Split.train)),
        len(split.ids_in(Split.val)),
        len(split.ids_in(Split.test)),
    )
    return split


def test_subsets(manifest: DatasetManifest) -> Tuple[List[str], List[str]]:
    if not manifest.is_split:
        raise StateError("manifest has no split assignment; run split first")
    records = manifest.record_map()
    test_ids = manifest.ids_in(Split.test)
    male = [sid for sid in test_ids if records[sid].sex is Sex.male]
    female = [sid for sid in test_ids if records[sid].sex is Sex.female]
    return male, female


# ---------------------------------------------------------------------------
# 매니페스트 입출력
# ---------------------------------------------------------------------------
def _record_line(record: SampleRecord) -> str:
    # sort_keys 없이: 측정값은 MEASUREMENT_KEYS 순서를 유지한다
    return json.dumps(
        {
            "sample_id": record.sample_id,
            "sex": record.sex.value,
            "image_path": record.image_path,
            "spec_seed": record.spec_seed,
            "measurements": record.measurements.values,
        },
        separators=(",", ":"),
        ensure_ascii=False,
    )


def write_manifest(manifest: DatasetManifest, root: PathLike) -> Path:
    root = Path(root)
    header = manifest.model_dump(mode="json", exclude={"records"})
    header["split"] = {sid: header["split"][sid] for sid in sorted(header["split"])}
    write_text_atomic(root / RECORDS_FILE, "".join(_record_line(r) + "\n" for r in manifest.records))
    write_text_atomic(root / HEADER_FILE, json.dumps(header, sort_keys=True, indent=2) + "\n")
    return root / HEADER_FILE


def read_manifest(root: PathLike) -> DatasetManifest:
    root = Path(root)
    try:
        header = json.loads((root / HEADER_FILE).read_text(encoding="utf-8"))
        lines = (root / RECORDS_FILE).read_text(encoding="utf-8").splitlines()
    except FileNotFoundError as exc:
        raise StorageError(exc.filename, "manifest file not found") from exc
    except OSError as exc:
        raise StorageError(root, f"cannot read manifest ({exc.strerror})") from exc
    except ValueError as exc:
        raise DataError(f"malformed manifest header: {exc}") from exc

    try:
        records = []
        for line in lines:
            if not line.strip():
                continue
            raw = json.loads(line)
            raw["measurements"] = {"values": raw["measurements"]}
            records.append(SampleRecord.model_validate(raw))
        manifest = DatasetManifest.model_validate({**header, "records": records})
    except (ValueError, KeyError) as exc:
        detail = exc.errors()[0]["msg"] if isinstance(exc, ValidationError) else str(exc)
        raise DataError(f"malformed manifest: {detail}") from exc

    if manifest.version != MANIFEST_VERSION:
        raise DataError(f"unsupported manifest version {manifest.version}")
    known = {r.sample_id for r in manifest.records}
    stray = sorted(set(manifest.split) - known)
    if stray:
        raise DataError(f"split references unknown samples: {', '.join(stray[:3])}")
    return manifest


def read_provenance(directory: PathLike) -> Dict[str, Any]:
    path = Path(directory) / PROVENANCE_FILE
    if not path.exists():
        return {}
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise StorageError(path, "cannot read provenance") from exc


def write_provenance(directory: PathLike, command: str, seed: int, config: Dict[str, Any]) -> Path:
    """
    디렉토리의 provenance.json 에 `command` 의 (seed, 설정 다이제스트, 설정)을 기록한다.
    다른 커맨드 항목은 그대로 두므로 데이터셋 디렉토리에는 `gen` 과 `split` 이 함께 남는다.
    """
    payload = read_provenance(directory)
    payload[command] = {
        "seed": seed,
        "config_digest": config_digest(config),
        "config": config,
    }
    return write_text_atomic(Path(directory) / PROVENANCE_FILE, json.dumps(payload, sort_keys=True, indent=2) + "\n")


def load_samples(
    manifest: DatasetManifest,
    root: PathLike,
    ids: Sequence[str],
    mean: Sequence[float] = IMAGENET_MEAN,
    std: Sequence[float] = IMAGENET_STD,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    `ids` 의 이미지를 모델 입력 (N, 224, 224, 3) float32 로, 측정값을 타깃
    (N, 16) float32 로 쌓는다. 둘 다 `ids` 순서를 따른다.
    """
    root = Path(root)
    records = manifest.record_map()
    inputs = np.empty((len(ids), imaging.MODEL_INPUT_SIZE, imaging.MODEL_INPUT_SIZE, 3), dtype=np.float32)
    targets = np.empty((len(ids), len(MEASUREMENT_KEYS)), dtype=np.float32)
    for row, sid in enumerate(ids):
        try:
            record = records[sid]
        except KeyError:
            raise DataError(f"unknown sample id {sid!r}") from None
        inputs[row] = imaging.to_model_input(root / record.image_path, mean, std)
        targets[row] = record.measurements.as_vector()
    return inputs, targets
