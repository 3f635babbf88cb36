"""
자동화 파이프라인 테스트 패키지
"""
