"""
Bench Harness Module
====================

Backend comparison for the leapfrog kernel: a bit-identity gate against the
serial kernel followed by timed runs on a fixed workload.
"""

import hashlib
import logging
import time
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from scripts.core.errors import BackendError
from scripts.core.units import Grid, UnitSystem
from scripts.core.wavefunction import Wavefunction, norm_squared, normalize
from scripts.dqd.potential import DqdParams
from scripts.dynamics.backends import get_executor
from scripts.dynamics.propagator import Propagator
from scripts.dynamics.schedule import DetuningSchedule

logger = logging.getLogger(__name__)

GATE_POINTS = 256
GATE_STEPS = 10_000
WARMUP_STEPS = 1_000
MAX_NORM_DRIFT = 1e-6


@dataclass
class BenchReport:
    backend: str
    n_points: int
    steps: int
    wall_s: float
    steps_per_s: float
    norm_drift: float
    valid: bool
    checksum: str = ""
    speedup: float = float("nan")
    note: str = ""


@dataclass
class GateResult:
    backend: str
    passed: bool
    checksum: str
    reference_checksum: str
    max_abs_diff: float = 0.0
    first_mismatch: int = -1


def state_checksum(psi: Wavefunction) -> str:
    """re, im, im_prev 바이트의 sha256."""
    digest = hashlib.sha256()
    for array in (psi.re, psi.im, psi.im_prev if psi.im_prev is not None else np.zeros(0)):
        digest.update(np.ascontiguousarray(array, dtype=np.float64).tobytes())
    return digest.hexdigest()


def _workload(params: DqdParams, n_points: int, units: UnitSystem):
    """왼쪽 점에 놓인 가우시안 파속과 0.1 meV 기울기 램프."""
    outer = 1.1 * params.w2
    grid = Grid(-outer, outer, n_points)
    center, width = -0.25 * (params.w1 + params.w2), 0.15 * params.w2
    psi = normalize(Wavefunction.from_real(np.exp(-((grid.x - center) / width) ** 2)), grid)
    schedule = DetuningSchedule.from_breakpoints([(0.0, 0.0), (50.0, 0.1), (100.0, 0.1)])
    return grid, psi, schedule


def _propagator(params: DqdParams, grid: Grid, units: UnitSystem, backend: str, workers: Optional[int]) -> Propagator:
    executor = get_executor(backend, workers=workers)
    return Propagator.for_dqd(params, grid, units, max_abs_slope=0.1, executor=executor, check_every=GATE_STEPS)


def _run(propagator: Propagator, psi: Wavefunction, schedule: DetuningSchedule, steps: int) -> Wavefunction:
    return propagator.evolve(psi, schedule, steps * propagator.dt, t_start=0.0, stride_ps=None).final


def correctness_gate(backends: Sequence[str], params: DqdParams = DqdParams(), units: UnitSystem = UnitSystem(),
                     n_points: int = GATE_POINTS, steps: int = GATE_STEPS,
                     workers: Optional[int] = None) -> Dict[str, GateResult]:
    """
    각 backend 의 최종 상태가 serial 과 비트 단위로 같은지 확인합니다.

    Returns:
        Dict[str, GateResult]: backend 별 결과 (serial 포함)
    """
    grid, psi, schedule = _workload(params, n_points, units)
    with _propagator(params, grid, units, "serial", None) as reference_propagator:
        reference = _run(reference_propagator, psi, schedule, steps)
    reference_sum = state_checksum(reference)
    results = {"serial": GateResult("serial", True, reference_sum, reference_sum)}
    for backend in backends:
        if backend == "serial":
            continue
        try:
            with _propagator(params, grid, units, backend, workers) as propagator:
                final = _run(propagator, psi, schedule, steps)
        except BackendError as exc:
            logger.error(f"FAIL 정확성 검사: {backend} 를 실행할 수 없습니다: {exc.message}")
            results[backend] = GateResult(backend, False, "", reference_sum, float("nan"), -1)
            continue
        checksum = state_checksum(final)
        diff = np.concatenate([final.re - reference.re, final.im - reference.im])
        mismatch = np.flatnonzero(diff != 0.0)
        passed = (np.array_equal(final.re, reference.re) and np.array_equal(final.im, reference.im)
                  and checksum == reference_sum)
        results[backend] = GateResult(
            backend, passed, checksum, reference_sum,
            float(np.max(np.abs(diff))) if diff.size else 0.0,
            int(mismatch[0] % n_points) if mismatch.size else -1,
        )
        if passed:
            logger.info(f"PASS 정확성 검사: {backend} (sha256 {checksum[:12]})")
        else:
            logger.error(
                f"FAIL 정확성 검사: {backend} 최대 차이 {results[backend].max_abs_diff:.3e}, "
                f"첫 불일치 인덱스 {results[backend].first_mismatch}"
            )
    return results


def run_bench(backends: Sequence[str], grid_sizes: Sequence[int], steps: int,
              params: DqdParams = DqdParams(), units: UnitSystem = UnitSystem(),
              workers: Optional[int] = None, show_progress: bool = True) -> List[BenchReport]:
    """
    정확성 검사를 통과한 backend 를 격자 크기별로 측정합니다.

    워밍업 실행은 측정에서 제외하며, 검사에 실패한 backend 는 valid=False 보고만 남깁니다.
    """
    gate = correctness_gate(backends, params, units, workers=workers)
    reports: List[BenchReport] = []
    for backend in backends:
        result = gate.get(backend)
        if result is None or not result.passed:
            note = "correctness gate failed"
            if result is not None:
                note += f" (max diff {result.max_abs_diff:.3e}, index {result.first_mismatch})"
            for n in grid_sizes:
                reports.append(BenchReport(backend, int(n), int(steps), float("nan"), float("nan"),
                                           float("nan"), False, note=note))
            continue
        for n in tqdm(grid_sizes, desc=f"bench {backend}", disable=not show_progress):
            grid, psi, schedule = _workload(params, int(n), units)
            try:
                with _propagator(params, grid, units, backend, workers) as propagator:
                    _run(propagator, psi, schedule, min(WARMUP_STEPS, steps))
                    start = time.perf_counter()
                    final = _run(propagator, psi, schedule, steps)
                    wall = time.perf_counter() - start
            except BackendError as exc:
                logger.error(f"{backend} n={n} 실행 실패: {exc.message}")
                reports.append(BenchReport(backend, int(n), int(steps), float("nan"), float("nan"),
                                           float("nan"), False, note=exc.message))
                continue
            drift = abs(norm_squared(final, grid) - norm_squared(psi, grid))
            report = BenchReport(backend, int(n), int(steps), wall, steps / wall if wall > 0 else float("inf"),
                                 drift, drift <= MAX_NORM_DRIFT, state_checksum(final))
            if not report.valid:
                logger.warning(f"{backend} n={n}: 노름 변화 {drift:.3e} > {MAX_NORM_DRIFT}")
            logger.info(f"{backend} n={n}: {report.steps_per_s:.3e} steps/s")
            reports.append(report)
    _attach_speedups(reports)
    return reports


def _attach_speedups(reports: List[BenchReport]) -> None:
    serial = {r.n_points: r.wall_s for r in reports if r.backend == "serial" and r.valid}
    by_backend: Dict[str, List[BenchReport]] = {}
    for report in reports:
        if report.n_points in serial and report.wall_s == report.wall_s and report.wall_s > 0:
            report.speedup = serial[report.n_points] / report.wall_s
        by_backend.setdefault(report.backend, []).append(report)
    for backend, rows in by_backend.items():
        speedups = [r.speedup for r in sorted(rows, key=lambda r: r.n_points) if r.speedup == r.speedup]
        if any(b < a for a, b in zip(speedups, speedups[1:])):
            logger.warning(f"WARN {backend}: 격자 크기에 따라 속도 향상이 단조 증가하지 않습니다 {speedups}")


def reports_frame(reports: Sequence[BenchReport]) -> pd.DataFrame:
    return pd.DataFrame([asdict(r) for r in reports])
