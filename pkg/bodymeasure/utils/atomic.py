# 원자적 파일 쓰기 유틸리티
"""
출력은 최종 위치 옆에 먼저 쓰고 os.replace 로 옮긴다. 중단된 실행이 최종
이름으로 반쯤 쓰인 파일이나 디렉토리를 남기지 않는다.
"""
import logging
import os
import shutil
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Union

from bodymeasure.core.exceptions import StorageError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def write_text_atomic(path: PathLike, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise StorageError(path, f"cannot write file ({exc.strerror})") from exc
    return path


@contextmanager
def staging_dir(final: PathLike) -> Iterator[Path]:
    """
    `final` 옆에 임시 디렉토리를 만들어 넘긴다. 정상 종료하면 `final` 을 대체하고,
    오류가 나면 임시 디렉토리를 지우고 `final` 은 그대로 둔다.
    """
    final = Path(final)
    try:
        final.parent.mkdir(parents=True, exist_ok=True)
        stage = Path(tempfile.mkdtemp(dir=final.parent, prefix=f".{final.name}.staging-"))
    except OSError as exc:
        raise StorageError(final, f"cannot create output directory ({exc.strerror})") from exc

    try:
        yield stage
    except BaseException:
        shutil.rmtree(stage, ignore_errors=True)
        raise

    try:
        if final.exists():
            backup = final.with_name(f".{final.name}.old")
            shutil.rmtree(backup, ignore_errors=True)
            os.replace(final, backup)
            os.replace(stage, final)
            shutil.rmtree(backup, ignore_errors=True)
        else:
            os.replace(stage, final)
    except OSError as exc:
        shutil.rmtree(stage, ignore_errors=True)
        raise StorageError(final, f"cannot move staged output into place ({exc.strerror})") from exc
    logger.debug("committed %s", final)
