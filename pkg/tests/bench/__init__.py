"""
backend 벤치마크 테스트 패키지
"""
