"""
Pulses Module
=============

Trapezoidal and spin-echo detuning pulses with finite rise time τ.

Amplitudes are offsets from the baseline detuning. Node tables (time, ε):

    trapezoid:  (0, b) (τ, b+A) (τ+t_p, b+A) (2τ+t_p, b)
    spin echo:  (0, b) (τ, b+Ā′) (2τ, b+A′) (2τ+t_h, b+A′) (3τ+t_h, b+Ā′) (4τ+t_h, b)

with t_h = t_p − 4τ, so t_p is the plateau length of the trapezoid and the
total active time of the spin echo.
"""

from dataclasses import asdict, dataclass, replace
from typing import Dict, List, Literal, Tuple

import numpy as np

from scripts.core.errors import PulseSpecError
from scripts.core.units import UEV_PER_MEV
from scripts.dynamics.schedule import DetuningSchedule

PulseKind = Literal["trapezoid", "spin_echo"]

# separation used when two nodes share a time but not a value
STEP_EPSILON_PS = 1e-9


@dataclass(frozen=True)
class PulseSpec:
    """
    디튜닝 펄스 정의입니다 (에너지 μeV, 시간 ps).

    Args:
        kind: 'trapezoid' 또는 'spin_echo'
        baseline: 펄스 전후의 정적 디튜닝
        amplitude: 평탄부 오프셋 A (spin_echo 에서는 A′)
        counter_amplitude: 역디튜닝 오프셋 Ā′ (spin_echo 전용)
        plateau_time: t_p
        rise_time: τ
    """
    kind: str = "trapezoid"
    baseline: float = 0.0
    amplitude: float = 0.0
    counter_amplitude: float = 0.0
    plateau_time: float = 0.0
    rise_time: float = 90.0

    def __post_init__(self):
        if self.kind not in ("trapezoid", "spin_echo"):
            raise PulseSpecError(f"알 수 없는 펄스 종류: {self.kind}")
        if self.rise_time < 0 or self.plateau_time < 0:
            raise PulseSpecError(f"구간 길이가 음수입니다: τ={self.rise_time}, t_p={self.plateau_time}")
        if self.kind == "spin_echo" and self.hold < -1e-9:
            raise PulseSpecError(
                f"spin echo 는 t_p ≥ 4τ 이어야 합니다: t_p={self.plateau_time}, τ={self.rise_time}",
                {"hold_ps": self.hold},
            )

    @property
    def hold(self) -> float:
        """평탄부(A 또는 A′) 유지 시간."""
        if self.kind == "trapezoid":
            return self.plateau_time
        return self.plateau_time - 4.0 * self.rise_time

    @property
    def duration(self) -> float:
        if self.kind == "trapezoid":
            return self.plateau_time + 2.0 * self.rise_time
        return self.plateau_time

    @property
    def time_offset(self) -> float:
        """회전각 선형식 ϑ₀ + κ(t_p − c·τ) 의 c·τ (사다리꼴 c=2, spin echo c=4)."""
        return (2.0 if self.kind == "trapezoid" else 4.0) * self.rise_time

    def with_hold(self, hold: float) -> "PulseSpec":
        if self.kind == "trapezoid":
            return replace(self, plateau_time=hold)
        return replace(self, plateau_time=hold + 4.0 * self.rise_time)

    def with_plateau_time(self, plateau_time: float) -> "PulseSpec":
        return replace(self, plateau_time=plateau_time)

    def nodes(self) -> List[Tuple[float, float]]:
        """(시각 [ps], ε [μeV]) 꺾은점 목록 (길이 0 구간 포함)."""
        b, tau = self.baseline, self.rise_time
        if self.kind == "trapezoid":
            top = b + self.amplitude
            return [(0.0, b), (tau, top), (tau + self.plateau_time, top), (2 * tau + self.plateau_time, b)]
        th = max(0.0, self.hold)
        counter, top = b + self.counter_amplitude, b + self.amplitude
        return [
            (0.0, b), (tau, counter), (2 * tau, top), (2 * tau + th, top),
            (3 * tau + th, counter), (4 * tau + th, b),
        ]

    def plateau_window(self) -> Tuple[float, float]:
        """(평탄부 시작 시각, 유지 시간)."""
        start = self.rise_time if self.kind == "trapezoid" else 2.0 * self.rise_time
        return start, max(0.0, self.hold)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def _clean_nodes(nodes: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
    cleaned: List[Tuple[float, float]] = []
    for t, value in nodes:
        if cleaned and t <= cleaned[-1][0]:
            if value == cleaned[-1][1]:
                continue
            t = cleaned[-1][0] + STEP_EPSILON_PS
        cleaned.append((t, value))
    return cleaned


def epsilon_waveform(spec: PulseSpec, t) -> np.ndarray:
    """ε(t) [μeV]; 펄스 밖에서는 baseline."""
    nodes = _clean_nodes(spec.nodes())
    times = np.array([n[0] for n in nodes])
    values = np.array([n[1] for n in nodes])
    result = np.interp(t, times, values)
    return float(result) if np.ndim(t) == 0 else result


def waveform(spec: PulseSpec, t, lam: float):
    """
    시각 t 의 v_slope [meV] = ε(t)/(1000·λ).

    Raises:
        PulseSpecError: λ 가 양수가 아닐 경우
    """
    if lam <= 0:
        raise PulseSpecError(f"λ 는 양수여야 합니다: {lam}")
    return epsilon_waveform(spec, t) / (lam * UEV_PER_MEV)


def to_schedule(spec: PulseSpec, lam: float) -> DetuningSchedule:
    """펄스를 0 에서 시작하는 v_slope 스케줄로 바꿉니다."""
    if lam <= 0:
        raise PulseSpecError(f"λ 는 양수여야 합니다: {lam}")
    nodes = _clean_nodes(spec.nodes())
    return DetuningSchedule(
        np.array([n[0] for n in nodes]),
        np.array([n[1] for n in nodes]) / (lam * UEV_PER_MEV),
    )


def suffix_schedule(spec: PulseSpec, lam: float) -> Tuple[DetuningSchedule, float]:
    """평탄부 이후 꼬리 구간의 스케줄과 길이 (유지 시간과 무관)."""
    start, hold = spec.plateau_window()
    schedule = to_schedule(spec, lam)
    t0 = start + hold
    return schedule.window(t0, spec.duration), spec.duration - t0
