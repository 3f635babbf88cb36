"""
DQD 포텐셜/정상 상태/보정 테스트 패키지
"""
