"""
시간 전파 모듈 테스트 패키지
"""
