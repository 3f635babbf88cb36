"""
Errors Module
=============

Exception and warning types shared by every DQD component.
"""

from typing import Any, Dict, Optional


class DQDError(Exception):
    """모든 DQD 시뮬레이터 예외의 기본 클래스입니다."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class DimensionError(DQDError, ValueError):
    """서로 다른 격자 위의 배열을 결합하려 할 때 발생합니다."""


class ConfigurationError(DQDError, ValueError):
    """실행 설정 값이 잘못되었을 때 발생합니다."""


class PulseSpecError(DQDError, ValueError):
    """펄스 구간 길이가 음수인 등 펄스 정의가 잘못되었을 때 발생합니다."""


class CalibrationError(DQDError, RuntimeError):
    """λ 보정 중 분리 에너지가 단조 증가하지 않을 때 발생합니다."""


class SolverError(DQDError, RuntimeError):
    """고유값 풀이가 수렴하지 않거나 잔차가 허용치를 넘을 때 발생합니다."""


class DegenerateSpectrumError(SolverError):
    """E_AB - E_B 가 너무 작아 본딩/안티본딩 상태를 구분할 수 없을 때 발생합니다."""


class AmbiguityError(DQDError, RuntimeError):
    """최대 국소화 행렬의 고유값이 겹쳐 (α, β) 가 정해지지 않을 때 발생합니다."""


class InstabilityError(DQDError, RuntimeError):
    """leapfrog 적분 중 NaN/Inf 또는 노름 폭주가 감지되었을 때 발생합니다."""

    def __init__(self, message: str, step_index: int, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.step_index = step_index


class SubspaceViolationError(DQDError, RuntimeError):
    """펄스 후 큐비트 부분공간 밖으로 새어 나간 확률이 허용치를 넘을 때 발생합니다."""


class DecompositionError(DQDError, RuntimeError):
    """회전 각도가 펄스 길이에 대해 선형으로 맞춰지지 않을 때 발생합니다."""


class SweepRangeError(DQDError, RuntimeError):
    """준비 펄스 스윕 범위 안에 쓸만한 격자점이 없을 때 발생합니다."""


class BackendError(DQDError, RuntimeError):
    """커널 백엔드를 사용할 수 없거나 정확성 검사를 통과하지 못했을 때 발생합니다."""


class LeakageWarning(UserWarning):
    """측정 확률이 큐비트 구간 [P1, P0] 밖에 있을 때 발생하는 경고입니다."""


class NonRotationWarning(UserWarning):
    """단층촬영 결과가 SO(3) 회전으로 잘 설명되지 않을 때 발생하는 경고입니다."""
