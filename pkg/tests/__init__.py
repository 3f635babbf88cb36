"""
DQD 전하 큐비트 시뮬레이터 테스트 패키지
"""
