"""services 패키지"""
