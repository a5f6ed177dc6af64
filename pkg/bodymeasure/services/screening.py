# 심혈관 위험 / 마르판 체형 스크리닝
"""
다섯 가지 기본 측정값에서 얻는 스크리닝 지표.

허리둘레 기준은 이상(>=), WHR 기준은 초과(>)로 판정한다. 마르판형 비율
기준값은 기본값이 없으며 임계값 파일에서 읽어야 한다.
"""
import json
import logging
import math
import numbers
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Dict, Mapping, Optional, Union

from pydantic import ValidationError

from bodymeasure.core.exceptions import BodyValidationError, ConfigurationError, InvalidInputError
from bodymeasure.schemas.body import Sex
from bodymeasure.schemas.measurement import CANONICAL_KEYS, MeasurementSet
from bodymeasure.schemas.screening import (
    FlagStatus,
    ProportionResult,
    ScreeningReport,
    ScreeningThresholds,
    WaistClass,
    WhrClass,
)

logger = logging.getLogger(__name__)

# (increased, high) 허리둘레 기준 (cm, 이상)
WAIST_CUTOFFS = {
    Sex.male: (94.0, 102.0),
    Sex.female: (80.0, 88.0),
}

# WHR 기준 (초과)
WHR_CUTOFFS = {
    Sex.male: 0.90,
    Sex.female: 0.85,
}

RECOMMENDATIONS = {
    "waist": (
        "Waist circumference is above the risk cutoff: evaluate blood glucose, lipid profile "
        "and blood pressure before starting vigorous physical activity."
    ),
    "whr": "Waist-to-hip ratio indicates an abdominal fat distribution associated with elevated cardiovascular risk.",
    "proportions": (
        "Limb-to-torso proportions exceed the configured limits; consider referral for "
        "connective-tissue (marfanoid habitus) assessment."
    ),
}

RATIO_NAMES = ("arm_torso", "leg_torso")


def _positive(name: str, value: float) -> float:
    if isinstance(value, bool) or not (isinstance(value, numbers.Real) and math.isfinite(value) and value > 0):
        raise InvalidInputError(f"{name} must be a positive number, got {value}")
    return float(value)


def classify_waist(sex: Sex, waist: float) -> WaistClass:
    waist = _positive("waist", waist)
    increased, high = WAIST_CUTOFFS[Sex(sex)]
    if waist >= high:
        return WaistClass.high
    if waist >= increased:
        return WaistClass.increased
    return WaistClass.normal


def waist_to_hip_ratio(waist: float, pelvis: float) -> float:
    _positive("pelvis", pelvis)
    return _positive("waist", waist) / float(pelvis)


def classify_whr(sex: Sex, whr: float) -> WhrClass:
    whr = _positive("whr", whr)
    return WhrClass.increased if whr > WHR_CUTOFFS[Sex(sex)] else WhrClass.normal


def proportion_ratios(arm: float, leg: float, torso: float, thresholds: Optional[ScreeningThresholds] = None) -> ProportionResult:
    torso = _positive("torso", torso)
    ratios = {
        "arm_torso": _positive("arm", arm) / torso,
        "leg_torso": _positive("leg", leg) / torso,
    }
    thresholds = thresholds or ScreeningThresholds()
    limits = {"arm_torso": thresholds.arm_torso_max, "leg_torso": thresholds.leg_torso_max}

    flags: Dict[str, FlagStatus] = {}
    for name in RATIO_NAMES:
        limit = limits[name]
        if limit is None:
            flags[name] = FlagStatus.not_assessed
        else:
            flags[name] = FlagStatus.flagged if ratios[name] > limit else FlagStatus.not_flagged
    return ProportionResult(ratios=ratios, flags=flags)


def _canonical_inputs(measurements: Union[MeasurementSet, Mapping[str, float]]) -> Dict[str, float]:
    values = measurements.values if isinstance(measurements, MeasurementSet) else dict(measurements)
    for key in CANONICAL_KEYS:
        if key not in values:
            raise BodyValidationError(f"missing measurement: {key}")
    return {key: float(values[key]) for key in CANONICAL_KEYS}


def screen_subject(
    measurements: Union[MeasurementSet, Mapping[str, float]],
    sex: Sex,
    thresholds: Optional[ScreeningThresholds] = None,
) -> ScreeningReport:
    sex = Sex(sex)
    inputs = _canonical_inputs(measurements)
    waist, pelvis = inputs["waist_circumference"], inputs["pelvis_circumference"]

    waist_class = classify_waist(sex, waist)
    whr = waist_to_hip_ratio(waist, pelvis)
    whr_class = classify_whr(sex, whr)
    proportions = proportion_ratios(
        inputs["shoulder_to_wrist"], inputs["leg_length"], inputs["torso_length"], thresholds
    )

    recommendations = []
    if waist_class is not WaistClass.normal:
        recommendations.append(RECOMMENDATIONS["waist"])
    if whr_class is WhrClass.increased:
        recommendations.append(RECOMMENDATIONS["whr"])
    if FlagStatus.flagged in proportions.flags.values():
        recommendations.append(RECOMMENDATIONS["proportions"])

    return ScreeningReport(
        sex=sex,
        inputs=inputs,
        waist_class=waist_class,
        whr=whr,
        whr_class=whr_class,
        ratios=proportions.ratios,
        marfanoid_flags=proportions.flags,
        recommendations=recommendations,
    )


def render_text(report: ScreeningReport) -> str:
    lines = [
        f"Sex:                 {report.sex.value}",
        f"Waist circumference: {report.inputs['waist_circumference']:.1f} cm  -> {report.waist_class.value}",
        f"Pelvis circumference:{report.inputs['pelvis_circumference']:>6.1f} cm",
        f"Waist-to-hip ratio:  {report.whr:.3f}  -> {report.whr_class.value}",
        f"Arm / torso:         {report.ratios['arm_torso']:.3f}  ({report.marfanoid_flags['arm_torso'].value})",
        f"Leg / torso:         {report.ratios['leg_torso']:.3f}  ({report.marfanoid_flags['leg_torso'].value})",
    ]
    if report.recommendations:
        lines.append("")
        lines.append("Recommendations:")
        lines += [f"  - {text}" for text in report.recommendations]
    return "\n".join(lines) + "\n"


def load_thresholds(path: Optional[Union[str, Path]] = None) -> ScreeningThresholds:
    """TOML/JSON 임계값 파일. 경로가 없으면 모든 비율이 'not assessed' 로 남는다."""
    if path is None:
        return ScreeningThresholds()
    path = Path(path)
    try:
        raw = path.read_bytes()
        data = json.loads(raw) if path.suffix == ".json" else tomllib.loads(raw.decode("utf-8"))
        return ScreeningThresholds.model_validate(data)
    except OSError as exc:
        raise ConfigurationError(f"cannot read thresholds file {path}: {exc.strerror}") from exc
    except ValidationError as exc:
        raise ConfigurationError(f"invalid thresholds in {path}: {exc.errors()[0]['msg']}") from exc
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigurationError(f"cannot parse thresholds file {path}: {exc}") from exc
