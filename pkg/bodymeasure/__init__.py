"""bodymeasure: 실루엣 기반 인체 측정 추정 파이프라인"""

__version__ = "0.1.0"
