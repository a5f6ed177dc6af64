# 커스텀 예외 클래스
"""
파이프라인 예외 계층.

각 예외는 CLI 종료 코드(exit_code)와 기계 판독용 분류명(error_class)을 가진다.
"""
from pathlib import Path
from typing import Optional, Union


class PipelineError(Exception):
    """모든 파이프라인 예외의 기반 클래스"""

    exit_code: int = 1
    error_class: str = "pipeline_error"

    def __init__(self, detail: str = "Pipeline failure"):
        super().__init__(detail)
        self.detail = detail

    def one_line(self) -> str:
        detail = " ".join(str(self.detail).split())
        return f"error: {self.error_class}: {detail}"


class ConfigurationError(PipelineError):
    """설정 파일이나 인자가 잘못되었을 때 발생하는 예외"""

    exit_code = 2
    error_class = "configuration_error"

    def __init__(self, detail: str = "Invalid configuration"):
        super().__init__(detail)


class DataError(PipelineError):
    """입력 데이터(메시, 이미지, 매니페스트)가 계약을 어겼을 때"""

    exit_code = 3
    error_class = "data_error"

    def __init__(self, detail: str = "Invalid data"):
        super().__init__(detail)


class BodyValidationError(DataError):
    error_class = "validation_error"


class InvalidInputError(DataError, ValueError):
    error_class = "invalid_input"


class JointLookupError(DataError, KeyError):
    error_class = "joint_lookup_error"

    def __str__(self) -> str:
        return str(self.detail)


class EmptySectionError(DataError):
    """평면이 메시와 만나지 않을 때"""

    error_class = "empty_section"


class EmptyRegionError(DataError):
    error_class = "empty_region"


class OutOfFrameError(DataError):
    error_class = "out_of_frame"


class ImageDecodeError(DataError):
    error_class = "decode_error"


class StateError(DataError):
    """선행 단계(분할 등)가 끝나지 않은 상태에서 호출했을 때"""

    error_class = "state_error"


class DivergenceError(PipelineError):
    """학습 손실이 유한하지 않을 때 발생하는 예외"""

    exit_code = 4
    error_class = "training_divergence"

    def __init__(self, epoch: int, detail: Optional[str] = None):
        super().__init__(detail or f"non-finite loss at epoch {epoch}")
        self.epoch = epoch


class StorageError(PipelineError):
    """파일 입출력 실패. 실패한 경로를 함께 보고한다."""

    exit_code = 5
    error_class = "io_error"

    def __init__(self, path: Union[str, Path], detail: str = "I/O failure"):
        super().__init__(f"{detail}: {path}")
        self.path = Path(path)
