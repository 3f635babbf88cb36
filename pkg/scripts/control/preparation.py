"""
Preparation Module
==================

Qubit initialisation: find the trapezoid pulse that carries the ground state
at the static baseline detuning into ψ0.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Sequence

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar
from tqdm import tqdm

from scripts.control.dynamics import QubitDynamics
from scripts.control.pulses import PulseSpec
from scripts.core.errors import SweepRangeError

logger = logging.getLogger(__name__)

MAX_USABLE_DISTANCE = 0.5


@dataclass
class PreparationResult:
    """
    준비 펄스 탐색 결과입니다.

    Attributes:
        spec: 정제된 최적 사다리꼴 펄스
        distance: 정제 후 S(ψ0, ψ_final)
        grid_spec, grid_distance: 격자 최소점
        localisation_score: P_R(진화한 바닥상태) + P_L(진화한 첫 들뜬상태)
        table: (t_p, A, S) 전체 격자
        refinement: 좌표 하강 기록
    """
    spec: PulseSpec
    distance: float
    grid_spec: PulseSpec
    grid_distance: float
    localisation_score: float
    table: pd.DataFrame = field(repr=False)
    refinement: pd.DataFrame = field(repr=False)

    @property
    def plateau_time(self) -> float:
        return self.spec.plateau_time

    @property
    def amplitude(self) -> float:
        return self.spec.amplitude

    def summary(self) -> Dict[str, Any]:
        return {
            "plateau_time_ps": self.spec.plateau_time,
            "amplitude_uev": self.spec.amplitude,
            "distance": self.distance,
            "grid_plateau_time_ps": self.grid_spec.plateau_time,
            "grid_amplitude_uev": self.grid_spec.amplitude,
            "grid_distance": self.grid_distance,
            "localisation_score": self.localisation_score,
            "baseline_uev": self.spec.baseline,
            "rise_time_ps": self.spec.rise_time,
        }


def grid_distances(dynamics: QubitDynamics, baseline: float, plateau_times: Sequence[float],
                   amplitudes: Sequence[float], rise_time: float, initial: Any = None,
                   show_progress: bool = True) -> pd.DataFrame:
    """
    (t_p, A) 격자의 S(ψ0, ψ_final). 진폭마다 평탄부 스캔 한 번으로 t_p 전체를 계산합니다.
    """
    if initial is None:
        initial = dynamics.eigenstate(baseline, 0)
    plateau_times = np.asarray(plateau_times, dtype=np.float64)
    rows = []
    for amplitude in tqdm(amplitudes, desc="준비 펄스 격자", disable=not show_progress):
        spec = PulseSpec("trapezoid", baseline, float(amplitude), 0.0, float(plateau_times.max()), rise_time)
        amps = dynamics.scan(spec, plateau_times, [initial])[:, 0, 0]
        distance = np.clip(1.0 - np.abs(amps) ** 2, 0.0, 1.0)
        rows.append(pd.DataFrame({
            "plateau_time_ps": plateau_times,
            "amplitude_uev": float(amplitude),
            "distance": distance,
        }))
    return pd.concat(rows, ignore_index=True)


def localisation_score(dynamics: QubitDynamics, spec: PulseSpec) -> float:
    """P_R(U ψ_g) + P_L(U ψ_e); 완벽한 준비에서 P0 + 1 − P1 에 가깝습니다."""
    ground = dynamics.evolve(spec, dynamics.eigenstate(spec.baseline, 0))
    excited = dynamics.evolve(spec, dynamics.eigenstate(spec.baseline, 1))
    return float(dynamics.p_right(ground) + 1.0 - dynamics.p_right(excited))


def prepare_qubit(
    dynamics: QubitDynamics,
    baseline: float,
    plateau_times: Sequence[float],
    amplitudes: Sequence[float],
    rise_time: float = 90.0,
    refine_rounds: int = 3,
    show_progress: bool = True,
) -> PreparationResult:
    """
    바닥상태 → ψ0 준비 펄스를 격자 탐색 + 좌표 하강으로 찾습니다.

    Args:
        dynamics (QubitDynamics): 전파 엔진
        baseline (float): 정적 디튜닝 ε₀ [μeV]
        plateau_times: t_p 격자 [ps]
        amplitudes: A 격자 [μeV] (baseline 기준 오프셋)
        rise_time (float): τ [ps]
        refine_rounds (int): 좌표 하강 횟수

    Returns:
        PreparationResult: 최적 펄스와 탐색 기록

    Raises:
        SweepRangeError: 격자에 S < 0.5 인 점이 없을 경우
    """
    initial = dynamics.eigenstate(baseline, 0)
    table = grid_distances(dynamics, baseline, plateau_times, amplitudes, rise_time, initial, show_progress)
    best = table.loc[table["distance"].idxmin()]
    grid_distance = float(best["distance"])
    if grid_distance >= MAX_USABLE_DISTANCE:
        raise SweepRangeError(
            f"격자 안에 S < {MAX_USABLE_DISTANCE} 인 점이 없습니다 (최소 S={grid_distance:.4f}).",
            {"min_distance": grid_distance},
        )
    grid_spec = PulseSpec("trapezoid", baseline, float(best["amplitude_uev"]), 0.0,
                          float(best["plateau_time_ps"]), rise_time)
    logger.info(f"격자 최소점: t_p={grid_spec.plateau_time} ps, A={grid_spec.amplitude} μeV, S={grid_distance:.3e}")

    def distance(tp: float, amplitude: float) -> float:
        spec = PulseSpec("trapezoid", baseline, amplitude, 0.0, max(0.0, tp), rise_time)
        a, _ = dynamics.pulse_amplitudes(spec, initial)
        return float(min(1.0, max(0.0, 1.0 - abs(a) ** 2)))

    tp_values = np.unique(np.asarray(plateau_times, dtype=np.float64))
    amp_values = np.unique(np.asarray(amplitudes, dtype=np.float64))
    tp_step = float(np.min(np.diff(tp_values))) if tp_values.size > 1 else 1.0
    amp_step = float(np.min(np.diff(amp_values))) if amp_values.size > 1 else 1.0

    tp, amplitude, current = grid_spec.plateau_time, grid_spec.amplitude, grid_distance
    history = []
    for round_index in range(refine_rounds):
        lo = max(0.0, tp - tp_step)
        found = minimize_scalar(lambda t: distance(t, amplitude), bounds=(lo, tp + tp_step),
                                method="bounded", options={"xatol": 1e-3})
        if found.fun < current:
            tp, current = float(found.x), float(found.fun)
        history.append({"round": round_index, "coordinate": "plateau_time_ps", "value": tp, "distance": current})

        found = minimize_scalar(lambda a: distance(tp, a), bounds=(amplitude - amp_step, amplitude + amp_step),
                                method="bounded", options={"xatol": 1e-4})
        if found.fun < current:
            amplitude, current = float(found.x), float(found.fun)
        history.append({"round": round_index, "coordinate": "amplitude_uev", "value": amplitude, "distance": current})
        tp_step, amp_step = tp_step / 2.0, amp_step / 2.0

    spec = PulseSpec("trapezoid", baseline, amplitude, 0.0, tp, rise_time)
    score = localisation_score(dynamics, spec)
    logger.info(f"정제 결과: t_p={tp:.3f} ps, A={amplitude:.4f} μeV, S={current:.3e}, 국소화 점수={score:.4f}")
    return PreparationResult(spec, current, grid_spec, grid_distance, score, table, pd.DataFrame(history))
