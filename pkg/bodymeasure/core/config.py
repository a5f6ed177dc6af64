# 설정 클래스
import os
from pathlib import Path
from typing import Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings

PACKAGE_DIR = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    PROJECT_NAME: str = "bodymeasure"
    LOGLEVEL: str = os.getenv("LOGLEVEL", "INFO")

    # 연산 장치 선택: "auto" | "cpu" | "cuda" | "cuda:N"
    DEVICE: str = "auto"

    # gen 단계 프로세스 풀 크기 (0이면 단일 프로세스)
    NUM_WORKERS: int = 0

    DEFAULT_RANGES_PATH: Path = PACKAGE_DIR / "data" / "default_ranges.toml"

    # torchvision 사전학습 가중치 다운로드 허용 여부
    PRETRAINED_WEIGHTS: bool = True

    @field_validator("LOGLEVEL", mode="before")
    @classmethod
    def normalize_loglevel(cls, v: str) -> str:
        return str(v).upper()

    @field_validator("DEVICE", mode="before")
    @classmethod
    def check_device(cls, v: Optional[str]) -> str:
        if v is None or v == "":
            return "auto"
        v = str(v).strip().lower()
        if v in ("auto", "cpu", "cuda") or (v.startswith("cuda:") and v[5:].isdigit()):
            return v
        raise ValueError(f"unknown device {v!r}")

    @field_validator("NUM_WORKERS")
    @classmethod
    def check_workers(cls, v: int) -> int:
        if v < 0:
            raise ValueError("NUM_WORKERS must be >= 0")
        return v

    class Config:
        case_sensitive = True
        env_file = ".env"


settings = Settings()
