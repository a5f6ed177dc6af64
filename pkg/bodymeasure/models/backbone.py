# 고정(frozen) 합성곱 백본
import logging
from typing import Optional

import torch
from torch import nn

from bodymeasure.core.config import settings
from bodymeasure.core.exceptions import ConfigurationError
from bodymeasure.schemas.training import BackboneName

logger = logging.getLogger(__name__)

# 224x224 입력 기준 Flatten 이후 차원
FEATURE_DIMS = {
    BackboneName.vgg19: 512 * 7 * 7,
    BackboneName.resnet50: 2048 * 7 * 7,
    BackboneName.densenet121: 1024 * 7 * 7,
    BackboneName.tiny_test: 32 * 14 * 14,
}

# tiny_test 초기화 시드 (전역 RNG 와 무관하게 고정)
TINY_INIT_SEED = 20240917


class FrozenBackbone(nn.Module):
    """
    최적화에서 제외된 합성곱 특징 추출기.

    파라미터는 requires_grad 가 꺼져 있고, 상위 모델이 train 모드가 되어도 eval
    모드를 유지하므로 사전학습 백본 안의 배치 정규화 통계가 바뀌지 않는다.
    """

    def __init__(self, name: BackboneName, features: nn.Module):
        super().__init__()
        self.name = BackboneName(name)
        self.features = features
        self.flatten = nn.Flatten()
        for parameter in self.features.parameters():
            parameter.requires_grad_(False)
        super().train(False)

    @property
    def feature_dim(self) -> int:
        return FEATURE_DIMS[self.name]

    def train(self, mode: bool = True) -> "FrozenBackbone":
        return super().train(False)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.flatten(self.features(x))


def _tiny_features() -> nn.Sequential:
    # 평균 풀링: 실루엣 경계의 부분 점유율이 특징값에 연속적으로 남는다
    features = nn.Sequential(
        nn.Conv2d(3, 16, kernel_size=3, stride=2, padding=1),
        nn.ReLU(inplace=True),
        nn.AvgPool2d(2),
        nn.Conv2d(16, 32, kernel_size=3, padding=1),
        nn.ReLU(inplace=True),
        nn.AvgPool2d(2),
        nn.Conv2d(32, 32, kernel_size=3, padding=1),
        nn.ReLU(inplace=True),
        nn.AvgPool2d(2),
    )
    generator = torch.Generator().manual_seed(TINY_INIT_SEED)
    with torch.no_grad():
        for module in features:
            if isinstance(module, nn.Conv2d):
                fan_in = module.in_channels * module.kernel_size[0] * module.kernel_size[1]
                bound = (6.0 / fan_in) ** 0.5
                module.weight.copy_(torch.rand(module.weight.shape, generator=generator) * 2 * bound - bound)
                module.bias.zero_()
    return features


def _torchvision_features(name: BackboneName, pretrained: bool) -> nn.Module:
    from torchvision import models

    builders = {
        BackboneName.vgg19: (models.vgg19, models.VGG19_Weights.IMAGENET1K_V1),
        BackboneName.resnet50: (models.resnet50, models.ResNet50_Weights.IMAGENET1K_V2),
        BackboneName.densenet121: (models.densenet121, models.DenseNet121_Weights.IMAGENET1K_V1),
    }
    builder, weights = builders[name]
    try:
        net = builder(weights=weights if pretrained else None)
    except (OSError, RuntimeError) as exc:
        logger.warning("pretrained weights for %s unavailable (%s); using random init", name.value, exc)
        net = builder(weights=None)

    if name is BackboneName.vgg19:
        return net.features
    if name is BackboneName.resnet50:
        # avgpool, fc 제외
        return nn.Sequential(*list(net.children())[:-2])
    return nn.Sequential(net.features, nn.ReLU(inplace=False))


def build_backbone(name: BackboneName, pretrained: Optional[bool] = None) -> FrozenBackbone:
    try:
        name = BackboneName(name)
    except ValueError:
        raise ConfigurationError(f"unknown backbone {name!r}") from None
    pretrained = settings.PRETRAINED_WEIGHTS if pretrained is None else pretrained
    if name is BackboneName.tiny_test:
        return FrozenBackbone(name, _tiny_features())
    return FrozenBackbone(name, _torchvision_features(name, pretrained))
