"""
큐비트 기저 모듈 테스트 패키지
"""
