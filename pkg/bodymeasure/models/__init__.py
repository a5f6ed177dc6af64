from bodymeasure.models.backbone import FEATURE_DIMS, FrozenBackbone, build_backbone
from bodymeasure.models.regressor import MeasurementRegressor, RegressionHead

# 학습 대상 신경망 모듈
__all__ = [
    "FEATURE_DIMS",
    "FrozenBackbone",
    "build_backbone",
    "MeasurementRegressor",
    "RegressionHead",
]
