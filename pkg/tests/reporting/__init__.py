"""
리포트 생성 모듈 테스트 패키지
"""
