"""
DQD 시뮬레이터 core 모듈 테스트 패키지
"""
