# 설정 다이제스트 유틸리티
import hashlib
import json
from typing import Any, List

from pydantic import BaseModel


def canonical_json(payload: Any) -> str:
    """키 정렬 + 공백 없는 JSON. pydantic 모델은 json 모드로 덤프한다."""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def config_digest(payload: Any) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def seed_entropy(seed: int, *salt: int) -> List[int]:
    """
    SeedSequence 엔트로피. 고정 길이 salt + 부호 뒤에 |seed| 전체를 두므로
    2**32 차이 나는 시드나 부호만 다른 시드도 서로 다른 스트림을 얻는다.
    """
    seed = int(seed)
    return [*(int(s) for s in salt), 1 if seed < 0 else 0, abs(seed)]
