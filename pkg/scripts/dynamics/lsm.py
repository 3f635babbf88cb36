"""
LSM Module
==========

Localised state model: the effective two-level Hamiltonian
H = ½ε σ_z − ½Δ σ_x (+ offset) in the (ψ0, ψ1) basis, its eigenvectors and a
fourth-order Magnus propagator with closed-form SU(2) exponentials.
"""

import cmath
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from scripts.core.errors import ConfigurationError
from scripts.core.units import HBAR_MEV_PS, UEV_PER_MEV
from scripts.dynamics.schedule import DetuningSchedule

logger = logging.getLogger(__name__)

HBAR_UEV_PS = HBAR_MEV_PS * UEV_PER_MEV
DEFAULT_SUBSTEP_PS = 0.05

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

_GAUSS_OFFSET = np.sqrt(3.0) / 6.0


@dataclass(frozen=True)
class TwoLevelHamiltonian:
    """
    유효 2준위 해밀토니안입니다 (단위 μeV).

    Args:
        epsilon (float): 디튜닝 ε
        delta (float): 터널 분리 Δ
        offset (float): (E_B + E_AB)/2. 전역 위상에만 영향을 줍니다.
    """
    epsilon: float
    delta: float
    offset: float = 0.0

    @property
    def splitting(self) -> float:
        return float(np.hypot(self.epsilon, self.delta))

    def matrix(self) -> np.ndarray:
        return 0.5 * self.epsilon * SIGMA_Z - 0.5 * self.delta * SIGMA_X + self.offset * IDENTITY


@dataclass(frozen=True)
class QubitState:
    """
    (ψ0, ψ1) 기저의 복소 진폭입니다.

    블로흐 각은 ψ = cos(θ/2)ψ0 + e^{−iφ} sin(θ/2)ψ1 규약을 따릅니다.
    """
    a: complex
    b: complex

    def __post_init__(self):
        norm = abs(self.a) ** 2 + abs(self.b) ** 2
        if not np.isclose(norm, 1.0, rtol=0.0, atol=1e-9):
            raise ConfigurationError(f"|a|² + |b|² = {norm} 이 1 이 아닙니다.")
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))

    @classmethod
    def from_vector(cls, vec: Sequence[complex], normalize: bool = False) -> "QubitState":
        vec = np.asarray(vec, dtype=complex)
        if normalize:
            vec = vec / np.linalg.norm(vec)
        return cls(vec[0], vec[1])

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "QubitState":
        return cls(np.cos(theta / 2.0), np.exp(-1j * phi) * np.sin(theta / 2.0))

    def vector(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)

    @property
    def theta(self) -> float:
        return float(2.0 * np.arctan2(abs(self.b), abs(self.a)))

    @property
    def phi(self) -> float:
        if abs(self.a) < 1e-15 or abs(self.b) < 1e-15:
            return 0.0
        return float(np.mod(np.angle(self.a) - np.angle(self.b), 2.0 * np.pi))

    def bloch_vector(self) -> np.ndarray:
        return bloch_vector(self.a, self.b)


def bloch_vector(a: complex, b: complex) -> np.ndarray:
    """(2Re(a*b), −2Im(a*b), |a|² − |b|²)."""
    ab = np.conj(a) * b
    return np.array([2.0 * ab.real, -2.0 * ab.imag, abs(a) ** 2 - abs(b) ** 2])


def lsm_eigenvectors(epsilon: float, delta: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    본딩(낮은 에너지)/안티본딩 고유벡터 (a_ε, b_ε) 를 반환합니다. 둘 다 a > 0 입니다.

    Raises:
        ConfigurationError: Δ <= 0 인 경우
    """
    if delta <= 0:
        raise ConfigurationError(f"Δ 는 양수여야 합니다: {delta}")
    s = np.hypot(epsilon, delta)
    # cancellation-free branch for each sign of ε
    bonding = np.array([delta, epsilon + s]) if epsilon >= 0 else np.array([s - epsilon, delta])
    bonding = bonding / np.linalg.norm(bonding)
    antibonding = np.array([bonding[1], -bonding[0]])
    return bonding, antibonding


def su2_exp(M: np.ndarray) -> np.ndarray:
    """2×2 행렬 지수함수 exp(M) 의 닫힌 형태 (trace 부분 분리)."""
    half_trace = 0.5 * (M[0, 0] + M[1, 1])
    traceless = M - half_trace * IDENTITY
    q = cmath.sqrt(-(traceless[0, 0] * traceless[1, 1] - traceless[0, 1] * traceless[1, 0]))
    if abs(q) < 1e-14:
        core = IDENTITY + traceless
    else:
        core = cmath.cosh(q) * IDENTITY + (cmath.sinh(q) / q) * traceless
    return cmath.exp(half_trace) * core


def _generator(epsilon: float, delta: float, offset: float) -> np.ndarray:
    return -1j * TwoLevelHamiltonian(epsilon, delta, offset).matrix() / HBAR_UEV_PS


def magnus4_step(eps_of_t, t: float, h: float, delta: float, offset: float = 0.0) -> np.ndarray:
    """
    [t, t+h] 구간의 4차 Magnus 전파 행렬입니다.

    Ω = h/2 (A1 + A2) + √3 h²/12 [A2, A1], A_j = −iH(t + c_j h)/ħ.
    """
    a1 = _generator(eps_of_t(t + (0.5 - _GAUSS_OFFSET) * h), delta, offset)
    a2 = _generator(eps_of_t(t + (0.5 + _GAUSS_OFFSET) * h), delta, offset)
    omega = 0.5 * h * (a1 + a2) + (np.sqrt(3.0) / 12.0) * h * h * (a2 @ a1 - a1 @ a2)
    return su2_exp(omega)


def _epsilon_function(schedule: DetuningSchedule, lam: float):
    return lambda t: lam * UEV_PER_MEV * schedule.value(t)


def lsm_unitary(
    schedule: DetuningSchedule,
    lam: float,
    delta: float,
    t0: float,
    t1: float,
    substep_ps: float = DEFAULT_SUBSTEP_PS,
    offset: float = 0.0,
) -> np.ndarray:
    """
    t0 → t1 시간 순서 전파 행렬 U (2×2) 를 계산합니다.

    스케줄이 일정한 구간은 한 번의 정확한 지수함수로, 기울어진 구간은
    substep_ps 이하의 4차 Magnus 단계로 처리합니다.
    """
    if t1 < t0:
        raise ConfigurationError(f"t1({t1}) < t0({t0})")
    eps_of_t = _epsilon_function(schedule, lam)
    knots = np.concatenate([[t0], schedule.times[(schedule.times > t0) & (schedule.times < t1)], [t1]])
    U = IDENTITY.copy()
    for lo, hi in zip(knots[:-1], knots[1:]):
        length = hi - lo
        if length <= 0:
            continue
        if schedule.is_constant_on(lo, hi):
            U = su2_exp(_generator(eps_of_t(lo), delta, offset) * length) @ U
            continue
        n_sub = max(1, int(np.ceil(length / substep_ps - 1e-12)))
        h = length / n_sub
        for j in range(n_sub):
            U = magnus4_step(eps_of_t, lo + j * h, h, delta, offset) @ U
    return U


@dataclass
class LsmTrace:
    times: np.ndarray
    states: List[QubitState] = field(default_factory=list)

    @property
    def final(self) -> QubitState:
        return self.states[-1]

    def to_frame(self) -> pd.DataFrame:
        bloch = np.array([s.bloch_vector() for s in self.states])
        return pd.DataFrame({
            "time_ps": self.times,
            "p0": [abs(s.a) ** 2 for s in self.states],
            "p1": [abs(s.b) ** 2 for s in self.states],
            "bloch_x": bloch[:, 0],
            "bloch_y": bloch[:, 1],
            "bloch_z": bloch[:, 2],
            "theta": [s.theta for s in self.states],
            "phi": [s.phi for s in self.states],
        })


def lsm_propagate(
    state: QubitState,
    schedule: DetuningSchedule,
    lam: float,
    delta: float,
    t_final: float,
    sample_times: Optional[Sequence[float]] = None,
    substep_ps: float = DEFAULT_SUBSTEP_PS,
    offset: float = 0.0,
) -> LsmTrace:
    """
    2준위 상태를 스케줄 시작 시각부터 t_final [ps] 동안 전파합니다.

    Args:
        state (QubitState): 시작 상태
        schedule (DetuningSchedule): v_slope(t) [meV]
        lam (float): ε = λ·v_slope 보정 상수
        delta (float): Δ [μeV]
        t_final (float): 전파 길이 [ps]
        sample_times (Sequence[float], optional): 기록할 상대 시각. 기본값은 [0, t_final]
        substep_ps (float): 기울어진 구간의 Magnus 단계 크기
        offset (float): 전역 위상 오프셋 [μeV]

    Returns:
        LsmTrace: 표본 시각과 상태 목록
    """
    if t_final < 0:
        raise ConfigurationError(f"t_final 은 음수일 수 없습니다: {t_final}")
    times = np.array(sorted(set([0.0, float(t_final)] if sample_times is None else [float(t) for t in sample_times])))
    if times.size and (times[0] < 0 or times[-1] > t_final + 1e-12):
        raise ConfigurationError("표본 시각은 [0, t_final] 안에 있어야 합니다.")
    start = schedule.start
    vec = state.vector()
    current = 0.0
    trace = LsmTrace(times=times)
    for t in times:
        if t > current:
            vec = lsm_unitary(schedule, lam, delta, start + current, start + t, substep_ps, offset) @ vec
            current = t
        trace.states.append(QubitState.from_vector(vec, normalize=True))
    return trace
