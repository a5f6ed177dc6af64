# 측정값 회귀 모델: 고정 백본 + 완전연결 헤드
from typing import Iterator, List

import torch
from torch import nn

from bodymeasure.models.backbone import FrozenBackbone
from bodymeasure.schemas.training import HeadConfig

ACTIVATION_LAYERS = {
    "relu": nn.ReLU,
    "elu": nn.ELU,
    "gelu": nn.GELU,
    "tanh": nn.Tanh,
}


class RegressionHead(nn.Module):
    """은닉 폭마다 [Linear → BatchNorm1d → activation], 마지막은 선형 출력층"""

    def __init__(self, in_features: int, config: HeadConfig):
        super().__init__()
        layers: List[nn.Module] = []
        width = in_features
        for hidden in config.hidden_widths:
            layers += [nn.Linear(width, hidden), nn.BatchNorm1d(hidden), ACTIVATION_LAYERS[config.activation]()]
            width = hidden
        self.hidden = nn.Sequential(*layers)
        self.output = nn.Linear(width, config.output_dim)

    def forward(self, features: torch.Tensor) -> torch.Tensor:
        return self.output(self.hidden(features))


class MeasurementRegressor(nn.Module):
    """
    (N, 224, 224, 3) 모델 입력 배치를 (N, 16) 측정값(cm)으로 매핑한다.
    """

    def __init__(self, backbone: FrozenBackbone, head: RegressionHead):
        super().__init__()
        self.backbone = backbone
        self.head = head

    def features(self, inputs: torch.Tensor) -> torch.Tensor:
        with torch.no_grad():
            return self.backbone(inputs.permute(0, 3, 1, 2).contiguous())

    def forward(self, inputs: torch.Tensor) -> torch.Tensor:
        return self.head(self.features(inputs))

    def trainable_parameters(self) -> Iterator[nn.Parameter]:
        return (p for p in self.parameters() if p.requires_grad)
