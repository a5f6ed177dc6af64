# 공통 pytest 설정과 픽스처
import numpy as np
import pytest

from bodymeasure.schemas.body import BodySpec, Sex
from bodymeasure.schemas.dataset import DatasetManifest, SampleRecord
from bodymeasure.schemas.measurement import MEASUREMENT_KEYS, MeasurementSet
from bodymeasure.schemas.render import RenderConfig
from bodymeasure.services import bodygen, datakit


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="오래 걸리는 검증 테스트도 실행")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 수 분 걸리는 검증 테스트 (--runslow 로 실행)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="--runslow 옵션이 필요합니다")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def ranges():
    return bodygen.load_ranges()


@pytest.fixture(scope="session")
def male_spec(ranges):
    return bodygen.sample_body_spec(Sex.male, 7, ranges)


@pytest.fixture(scope="session")
def female_spec(ranges):
    return bodygen.sample_body_spec(Sex.female, 7, ranges)


@pytest.fixture(scope="session")
def male_body(male_spec):
    return bodygen.build_body(male_spec, 64)


def fake_measurements(offset: float = 0.0) -> MeasurementSet:
    return MeasurementSet(values={key: 10.0 + i + offset for i, key in enumerate(MEASUREMENT_KEYS)})


def make_manifest(n_per_sex: int, seed: int = 0) -> DatasetManifest:
    """이미지 없이 레코드만 가진 매니페스트 (분할/평가 테스트용)"""
    rng = np.random.default_rng(seed)
    records = []
    for sex in (Sex.male, Sex.female):
        for i in range(n_per_sex):
            sid = datakit.sample_id(sex, i)
            records.append(
                SampleRecord(
                    sample_id=sid,
                    sex=sex,
                    image_path=f"images/{sex.value}/{sid}.png",
                    measurements=fake_measurements(float(rng.uniform(0, 20))),
                    spec_seed=i,
                )
            )
    return DatasetManifest(
        records=records,
        generation_digest="0" * 64,
        master_seed=seed,
        mesh_resolution=64,
        render=RenderConfig(),
    )


@pytest.fixture(scope="session")
def tiny_dataset(tmp_path_factory, ranges):
    """성별당 6개 샘플을 실제로 생성하고 분할한 데이터셋 (root, manifest)"""
    root = tmp_path_factory.mktemp("dataset") / "tiny"
    manifest = datakit.generate_dataset(
        n_per_sex=6,
        ranges=ranges,
        render_cfg=RenderConfig(),
        out_dir=root,
        master_seed=11,
        mesh_resolution=32,
        num_workers=0,
    )
    manifest = datakit.split_dataset(manifest, (0.5, 0.25, 0.25), seed=3)
    datakit.write_manifest(manifest, root)
    return root, manifest


@pytest.fixture
def manifest_factory():
    return make_manifest


REFERENCE_GIRTHS = {
    "head": 57.0,
    "neck": 39.0,
    "chest": 100.0,
    "thigh": 58.0,
    "calf": 37.0,
    "bicep": 30.0,
    "forearm": 27.0,
    "wrist": 17.0,
    "ankle": 23.0,
}


@pytest.fixture(scope="session")
def reference_spec():
    """손으로 고른 남성 스펙: 모든 레이아웃 검사를 여유 있게 통과한다"""
    return BodySpec(
        sex=Sex.male,
        stature=175.0,
        torso_len=55.0,
        leg_len=88.0,
        arm_len=58.0,
        waist_circ=85.0,
        pelvis_circ=100.0,
        shoulder_width=40.0,
        aux_girths=dict(REFERENCE_GIRTHS),
        seed=0,
    )
