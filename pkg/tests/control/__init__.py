"""
펄스 제어 모듈 테스트 패키지
"""
