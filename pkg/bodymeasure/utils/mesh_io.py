# 메시 파일 출력
from pathlib import Path
from typing import Union

import numpy as np

from bodymeasure.services.geometry import TriMesh
from bodymeasure.utils.atomic import write_text_atomic


def export_obj(mesh: TriMesh, path: Union[str, Path]) -> Path:
    """Wavefront OBJ (1-based 인덱스, 법선 없음)"""
    lines = ["# bodymeasure mesh", f"# vertices {len(mesh.vertices)} faces {len(mesh.faces)}"]
    lines += [f"v {x:.6f} {y:.6f} {z:.6f}" for x, y, z in mesh.vertices]
    lines += [f"f {a} {b} {c}" for a, b, c in (np.asarray(mesh.faces) + 1)]
    return write_text_atomic(path, "\n".join(lines) + "\n")
