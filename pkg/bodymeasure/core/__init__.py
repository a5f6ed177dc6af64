"""core 패키지"""
