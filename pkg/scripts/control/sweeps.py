"""
Sweeps Module
=============

Oscillation-amplitude maps over pulse detunings.

Each grid point is an independent t_p scan starting from ψ0; the recorded
oscillation amplitude is max − min of P(ψ1) over the scan. With certification
on, the same scan is tomographed at every hold time and the resulting rotation
family is checked against the σx and σz gates. Points run in worker processes
and are reduced by grid index.
"""

import logging
import warnings
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from scripts.control.dynamics import QubitDynamics
from scripts.control.pulses import PulseSpec
from scripts.control.tomography import (
    MAX_RESIDUAL, TEST_STATES, certify_sigma_x, certify_sigma_z, decompose_rotation, estimate_from_amplitudes,
    sigma_x_score,
)
from scripts.core.errors import DQDError, NonRotationWarning

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    "counter_uev", "amplitude_uev", "oscillation_amplitude", "p1_min", "p1_max",
    "plateau_time_at_max_ps", "error",
]
CERTIFICATION_COLUMNS = [
    "sigma_x_score", "sigma_x_axis_deg", "sigma_x_certified",
    "sigma_z_axis_deg", "sigma_z_phase_rad", "sigma_z_certified", "certification_error",
]
SIGMA_X_THRESHOLD = 0.99



@dataclass
class SweepResult:
    kind: str
    baseline: float
    rise_time: float
    holds: np.ndarray
    table: pd.DataFrame = field(repr=False)

    def amplitude_map(self) -> pd.DataFrame:
        """행 Ā′, 열 A′ 의 진동 진폭 표."""
        return self.table.pivot(index="counter_uev", columns="amplitude_uev", values="oscillation_amplitude")

    def best(self, largest: bool = True) -> pd.Series:
        valid = self.table.dropna(subset=["oscillation_amplitude"])
        index = valid["oscillation_amplitude"].idxmax() if largest else valid["oscillation_amplitude"].idxmin()
        return valid.loc[index]

    @property
    def failed(self) -> int:
        return int(self.table["error"].fillna("").astype(bool).sum())

    @property
    def certified(self) -> bool:
        return "sigma_x_certified" in self.table.columns

    def certification_table(self) -> pd.DataFrame:
        """격자점별 σx/σz 인증 결과 (certify=True 로 스윕한 경우)."""
        return self.table[["counter_uev", "amplitude_uev"] + CERTIFICATION_COLUMNS]

    def certification_summary(self) -> Dict[str, Any]:
        table = self.table
        scores = table["sigma_x_score"].fillna(0.0)
        summary = {
            "sigma_x_certified_points": int(table["sigma_x_certified"].sum()),
            "sigma_z_certified_points": int(table["sigma_z_certified"].sum()),
            "max_sigma_x_score": float(scores.max()),
            "uncertified_points": int(table["certification_error"].fillna("").astype(bool).sum()),
        }
        # trapezoids never reach σx; the spin echo must show both gate regions
        if self.kind == "trapezoid":
            summary["checks"] = {"trapezoid_no_sigma_x": _status(summary["max_sigma_x_score"] < SIGMA_X_THRESHOLD)}
        else:
            summary["checks"] = {
                "sigma_x_region": _status(summary["sigma_x_certified_points"] > 0),
                "sigma_z_region": _status(summary["sigma_z_certified_points"] > 0),
            }
        return summary

    def summary(self) -> Dict[str, Any]:
        top, bottom = self.best(True), self.best(False)
        summary = {
            "kind": self.kind,
            "points": int(len(self.table)),
            "failed": self.failed,
            "max_amplitude": float(top["oscillation_amplitude"]),
            "max_at": [float(top["counter_uev"]), float(top["amplitude_uev"])],
            "min_amplitude": float(bottom["oscillation_amplitude"]),
            "min_at": [float(bottom["counter_uev"]), float(bottom["amplitude_uev"])],
        }
        if self.certified:
            summary.update(self.certification_summary())
        return summary


def _status(ok: bool) -> str:
    return "PASS" if ok else "FLAGGED"


def sweep_specs(kind: str, counters: Sequence[float], amplitudes: Sequence[float],
                baseline: float, rise_time: float) -> List[Tuple[int, PulseSpec]]:
    """격자 순서(Ā′ 바깥, A′ 안쪽)의 (index, 펄스) 목록. 사다리꼴은 Ā′ 를 0 하나로 둡니다."""
    if kind == "trapezoid":
        counters = [0.0]
    # zero hold: t_p = 4τ for the spin echo
    plateau_time = 4.0 * rise_time if kind == "spin_echo" else 0.0
    specs = []
    for counter in counters:
        for amplitude in amplitudes:
            specs.append(PulseSpec(kind, baseline, float(amplitude), float(counter), plateau_time, rise_time))
    return list(enumerate(specs))


def certify_scan(spec: PulseSpec, holds: np.ndarray, blocks: np.ndarray, amplitude: float) -> Dict[str, Any]:
    """
    유지 시간별 큐비트 블록으로 회전 묶음을 분해하고 σx/σz 인증을 판정합니다.

    Args:
        spec (PulseSpec): 유지 시간 0 의 펄스
        holds (np.ndarray): 유지 시간 [ps]
        blocks (np.ndarray): shape (len(holds), 2, 2) 의 Q 행렬
        amplitude (float): ψ0 시험 상태의 진동 진폭

    Returns:
        Dict[str, Any]: CERTIFICATION_COLUMNS 값. 분해에 실패하면 두 인증 모두 False
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonRotationWarning)
        estimates = [estimate_from_amplitudes(TEST_STATES @ block.T, spec.with_hold(float(h))) for block, h in zip(blocks, holds)]
    worst = max(e.residual for e in estimates)
    if worst > MAX_RESIDUAL:
        return _uncertified(f"NonRotationWarning: SO(3) 맞춤 잔차 {worst:.4f}")
    family = decompose_rotation(estimates)
    sigma_x = certify_sigma_x(family, amplitude, min_amplitude=SIGMA_X_THRESHOLD)
    sigma_z = certify_sigma_z(family, estimates, amplitude)
    return {
        "sigma_x_score": sigma_x_score(family, amplitude),
        "sigma_x_axis_deg": sigma_x.axis_error_deg,
        "sigma_x_certified": sigma_x.passed,
        "sigma_z_axis_deg": sigma_z.axis_error_deg,
        "sigma_z_phase_rad": sigma_z.phase_error_rad,
        "sigma_z_certified": sigma_z.passed,
        "certification_error": "",
    }


def _uncertified(message: str) -> Dict[str, Any]:
    return {
        "sigma_x_score": np.nan, "sigma_x_axis_deg": np.nan, "sigma_x_certified": False,
        "sigma_z_axis_deg": np.nan, "sigma_z_phase_rad": np.nan, "sigma_z_certified": False,
        "certification_error": message,
    }


def sweep_point(index: int, spec: PulseSpec, holds: np.ndarray, dynamics: QubitDynamics,
                certify: bool = False) -> Dict[str, Any]:
    """격자점 하나. DQD 예외는 기록만 하고 나머지 점은 계속 진행합니다."""
    row: Dict[str, Any] = {"index": index, "counter_uev": spec.counter_amplitude, "amplitude_uev": spec.amplitude}
    try:
        if certify:
            blocks = dynamics.qubit_block_scan(spec, holds)
            amps = blocks[:, 1, 0]
        else:
            amps = dynamics.scan(spec, holds, [dynamics.basis_state(1.0, 0.0)])[:, 0, 1]
        p1 = np.abs(amps) ** 2
        row.update({
            "oscillation_amplitude": float(p1.max() - p1.min()),
            "p1_min": float(p1.min()),
            "p1_max": float(p1.max()),
            "plateau_time_at_max_ps": float(spec.with_hold(float(holds[int(np.argmax(p1))])).plateau_time),
            "error": "",
        })
    except DQDError as exc:
        logger.error(f"스윕 점 {index} 실패 ({type(exc).__name__}): {exc.message}")
        row.update({
            "oscillation_amplitude": np.nan, "p1_min": np.nan, "p1_max": np.nan,
            "plateau_time_at_max_ps": np.nan, "error": f"{type(exc).__name__}: {exc.message}",
        })
        if certify:
            row.update(_uncertified(row["error"]))
        return row

    if certify:
        try:
            row.update(certify_scan(spec, holds, blocks, row["oscillation_amplitude"]))
        except DQDError as exc:
            logger.debug(f"스윕 점 {index} 인증 불가 ({type(exc).__name__}): {exc.message}")
            row.update(_uncertified(f"{type(exc).__name__}: {exc.message}"))
    return row


def amplitude_sweep(
    dynamics: QubitDynamics,
    kind: str,
    counters: Sequence[float],
    amplitudes: Sequence[float],
    holds: Sequence[float],
    baseline: float = 0.0,
    rise_time: float = 90.0,
    workers: int = 1,
    show_progress: bool = True,
    certify: bool = False,
) -> SweepResult:
    """
    (Ā′, A′) 격자마다 유지 시간을 스캔해 진동 진폭 지도를 만듭니다.

    Args:
        dynamics (QubitDynamics): 전파 엔진 (프로세스로 복사됨)
        kind (str): 'spin_echo' 또는 'trapezoid'
        counters, amplitudes: Ā′, A′ 격자 [μeV]
        holds: 평탄부 유지 시간 [ps] (spin echo 는 t_p − 4τ)
        workers (int): 프로세스 수 (1 이면 순차 실행)
        certify (bool): True 이면 격자점마다 σx/σz 인증 열을 추가 (유지 시간 5개 이상 필요)

    Returns:
        SweepResult: 격자 순서로 정렬된 결과
    """
    holds = np.asarray(holds, dtype=np.float64)
    tasks = sweep_specs(kind, counters, amplitudes, baseline, rise_time)
    rows: Dict[int, Dict[str, Any]] = {}
    logger.info(f"{kind} 스윕 시작: {len(tasks)} 점 × {holds.size} 유지 시간, workers={workers}, certify={certify}")
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(sweep_point, index, spec, holds, dynamics, certify) for index, spec in tasks]
            for future in tqdm(as_completed(futures), total=len(futures), desc="진폭 스윕 (병렬)", disable=not show_progress):
                row = future.result()
                rows[row["index"]] = row
    else:
        for index, spec in tqdm(tasks, desc="진폭 스윕", disable=not show_progress):
            rows[index] = sweep_point(index, spec, holds, dynamics, certify)

    columns = SWEEP_COLUMNS + (CERTIFICATION_COLUMNS if certify else [])
    table = pd.DataFrame([rows[i] for i in sorted(rows)]).drop(columns="index")[columns]
    result = SweepResult(kind, baseline, rise_time, holds, table)
    if result.failed:
        logger.warning(f"스윕 점 {result.failed} 개가 실패했습니다.")
    if certify:
        counts = result.certification_summary()
        logger.info(f"인증: σx {counts['sigma_x_certified_points']} 점, σz {counts['sigma_z_certified_points']} 점")
    return result


def static_rabi_limit(baseline: float, delta: float) -> float:
    """정적 디튜닝 ε₀ 에서 ψ0 의 최대 P(ψ1) = Δ²/(ε₀² + Δ²)."""
    return float(delta ** 2 / (baseline ** 2 + delta ** 2))


def trapezoid_min_amplitude(result: SweepResult) -> Dict[str, float]:
    """사다리꼴 스윕에서 가장 작은 진동 진폭 (σz 후보)."""
    bottom = result.best(largest=False)
    return {"min_amplitude": float(bottom["oscillation_amplitude"]), "amplitude_uev": float(bottom["amplitude_uev"])}
