"""
Propagator Module
=================

Explicit staggered-leapfrog integrator for the time-dependent Schrödinger
equation on the grid.

The real part u lives on even step indices and the imaginary part v on odd
ones. One update advances a single array by two steps using the other array:

    u^{k+1} = u^{k-1} + [(2a_x + b V^k) v^k - a_x (v^k_{m+1} + v^k_{m-1})]
    v^{k+2} = v^k     - [(2a_x + b V^{k+1}) u^{k+1} - a_x (u^{k+1}_{m+1} + u^{k+1}_{m-1})]

with a_x = 2K dt/(ħ dx²), b = 2 dt/ħ and K = ħ²/2m*. Observables are taken
after a v-update from u^k + i (v^{k+1} + v^{k-1})/2.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.linalg import LinAlgError, eigh_tridiagonal

from scripts.core.errors import ConfigurationError, DimensionError, InstabilityError, SolverError
from scripts.core.units import Grid, UnitSystem
from scripts.core.wavefunction import Wavefunction, half_line_probability, inner_product, norm_squared
from scripts.dqd.potential import DqdParams, bias_profile, evaluate_dqd
from scripts.dqd.stationary import TridiagonalHamiltonian, build_hamiltonian, hamiltonian_from_potential
from scripts.dynamics.backends import KernelExecutor, SerialExecutor, get_executor
from scripts.dynamics.schedule import DetuningSchedule

logger = logging.getLogger(__name__)

Observer = Callable[[float, Wavefunction], Dict[str, float]]

RESAMPLE_TOLERANCE_MEV = 1e-12
NORM_BLOWUP = 2.0


# ---------------------------------------------------------------- stability
def largest_eigenvalue(H: TridiagonalHamiltonian) -> float:
    """
    양 끝 고유값을 이분법(LAPACK stebz)으로 구해 |E|_max 를 반환합니다.

    Raises:
        SolverError: 고유값 풀이 실패
    """
    n = H.size
    try:
        ends = [
            eigh_tridiagonal(H.diag, H.off, eigvals_only=True, select="i", select_range=(i, i))[0]
            for i in (0, n - 1)
        ]
    except (LinAlgError, ValueError) as e:
        raise SolverError(f"E_max 계산 실패: {e}", {"size": n})
    return float(max(abs(e) for e in ends))


def max_stable_dt(
    p: DqdParams,
    max_abs_slope: float,
    grid: Grid,
    units: UnitSystem = UnitSystem(),
    safety_factor: float = 0.8,
) -> float:
    """
    안정 조건 dt ≤ ħ/E_max 에 안전계수를 곱한 시간 간격 [ps] 을 반환합니다.

    E_max 는 ±max_abs_slope 두 경우 중 큰 값을 사용합니다.
    """
    if not 0 < safety_factor <= 1:
        raise ConfigurationError(f"safety_factor 는 (0, 1] 범위여야 합니다: {safety_factor}")
    e_max = max(
        largest_eigenvalue(build_hamiltonian(p, slope, grid, units))
        for slope in {abs(max_abs_slope), -abs(max_abs_slope)}
    )
    return safety_factor * units.hbar / e_max


# ------------------------------------------------------------------- state
@dataclass
class LeapfrogState:
    """
    leapfrog 적분 상태입니다.

    step_index 가 홀수이면 마지막 갱신이 v 였고 다음 갱신은 u 입니다.
    """
    u_prev: np.ndarray
    u_curr: np.ndarray
    v_prev: np.ndarray
    v_curr: np.ndarray
    step_index: int
    a_x: float
    b: float

    @classmethod
    def start(cls, psi: Wavefunction, H: TridiagonalHamiltonian, dt: float, units: UnitSystem = UnitSystem()) -> "LeapfrogState":
        """
        u⁰ = Re ψ 와 2차 테일러 전개로 얻은 v^{±1} 로 시작 상태를 만듭니다.

        dt 가 음수이면 시간을 거꾸로 진행하는 상태가 됩니다.
        """
        psi = psi.destagger()
        u0, v0 = np.array(psi.re), np.array(psi.im)
        c = dt / units.hbar
        h_u = H.apply(u0)
        hh_v = H.apply(H.apply(v0))
        v_next = v0 - c * h_u - 0.5 * c * c * hh_v
        v_back = v0 + c * h_u - 0.5 * c * c * hh_v
        a_x = 2.0 * units.kinetic_prefactor * dt / (units.hbar * H.grid.dx ** 2)
        b = 2.0 * dt / units.hbar
        return cls(u_prev=u0.copy(), u_curr=u0, v_prev=v_back, v_curr=v_next, step_index=1, a_x=a_x, b=b)

    @property
    def next_is_u(self) -> bool:
        return self.step_index % 2 == 1

    def wavefunction(self) -> Wavefunction:
        """u^k + i(v^{k+1} + v^{k-1})/2 (마지막 갱신이 v 일 때)."""
        if self.next_is_u:
            return Wavefunction(self.u_curr, self.v_curr, staggered=True, im_prev=self.v_prev)
        return Wavefunction(self.u_curr, self.v_curr)


def step(state: LeapfrogState, V: np.ndarray) -> LeapfrogState:
    """
    배열 하나를 한 번 갱신한 새 상태를 반환합니다 (입력 상태는 바뀌지 않음).

    Args:
        state (LeapfrogState): 현재 상태
        V (np.ndarray): 이 스텝 시각의 포텐셜 [meV], 길이 n_points

    Returns:
        LeapfrogState: step_index 가 1 증가한 상태

    Raises:
        DimensionError: V 길이가 배열 길이와 다를 경우
        InstabilityError: NaN/Inf 가 생긴 경우
    """
    V = np.asarray(V, dtype=np.float64)
    if V.shape != state.u_curr.shape:
        raise DimensionError(f"포텐셜 길이({V.shape})가 상태 길이({state.u_curr.shape})와 다릅니다.")
    d = 2.0 * state.a_x + state.b * V[1:-1]
    if state.next_is_u:
        src, old, sign = state.v_curr, state.u_curr, 1.0
    else:
        src, old, sign = state.u_curr, state.v_curr, -1.0
    new = old.copy()
    new[1:-1] += sign * (d * src[1:-1] - state.a_x * (src[2:] + src[:-2]))
    new[0] = new[-1] = 0.0
    k = state.step_index + 1
    if not np.all(np.isfinite(new)):
        raise InstabilityError(f"스텝 {k} 에서 NaN/Inf 가 감지되었습니다.", k)
    if state.next_is_u:
        return replace(state, u_prev=old, u_curr=new, step_index=k)
    return replace(state, v_prev=old, v_curr=new, step_index=k)


# --------------------------------------------------------------- observers
def norm_observer(grid: Grid) -> Observer:
    return lambda t, psi: {"norm": norm_squared(psi, grid)}


def half_line_observer(grid: Grid) -> Observer:
    def observe(t: float, psi: Wavefunction) -> Dict[str, float]:
        return {
            "p_left": half_line_probability(psi, grid, "left"),
            "p_right": half_line_probability(psi, grid, "right"),
        }
    return observe


def projection_observer(grid: Grid, states: Dict[str, Wavefunction]) -> Observer:
    """states 의 각 이름에 대해 re_<name>, im_<name> = ⟨state|ψ⟩ 를 기록합니다."""
    def observe(t: float, psi: Wavefunction) -> Dict[str, float]:
        row = {}
        for name, ref in states.items():
            value = inner_product(ref, psi, grid)
            row[f"re_{name}"] = value.real
            row[f"im_{name}"] = value.imag
        return row
    return observe


def standard_observers(grid: Grid, psi0: Optional[Wavefunction] = None, psi1: Optional[Wavefunction] = None) -> List[Observer]:
    """CSV 추적 열 time_ps, norm, p_left, p_right, re/im_psi0, re/im_psi1 에 맞춘 관측자 목록."""
    observers = [norm_observer(grid), half_line_observer(grid)]
    states = {name: s for name, s in (("psi0", psi0), ("psi1", psi1)) if s is not None}
    if states:
        observers.append(projection_observer(grid, states))
    return observers


# -------------------------------------------------------------- propagator
@dataclass
class PropagationResult:
    final: Wavefunction
    trace: pd.DataFrame
    captures: Dict[float, Wavefunction] = field(default_factory=dict)
    steps: int = 0
    dt: float = 0.0


class Propagator:
    """
    고정 포텐셜 + (기울기 × 바이어스 모양) 해밀토니안으로 파동함수를 전파합니다.

    Args:
        static_potential (np.ndarray): 시간에 무관한 포텐셜 [meV]
        profile (np.ndarray): 단위 기울기당 바이어스 모양 (V = static + slope·profile)
        grid (Grid): 격자
        units (UnitSystem): 단위계
        dt (float, optional): 시간 간격 [ps]. None 이면 grid.dt, 그것도 없으면 안정 조건으로 정함
        max_abs_slope (float): dt 를 정할 때 사용할 최대 |기울기| [meV]
        executor (KernelExecutor, optional): 커널 실행기 (기본 serial)
        dt_safety (float): 안전계수
        check_every (int): 불안정 검사 간격 (갱신 수)
        enforce_stability (bool): 전파 전 dt·E_max/ħ ≤ 1 검사 여부
    """

    def __init__(
        self,
        static_potential: np.ndarray,
        profile: np.ndarray,
        grid: Grid,
        units: UnitSystem = UnitSystem(),
        dt: Optional[float] = None,
        max_abs_slope: float = 0.0,
        executor: Optional[KernelExecutor] = None,
        dt_safety: float = 0.8,
        check_every: int = 1000,
        enforce_stability: bool = True,
    ):
        self.static_potential = np.asarray(static_potential, dtype=np.float64)
        self.profile = np.asarray(profile, dtype=np.float64)
        if self.static_potential.shape != (grid.n_points,) or self.profile.shape != (grid.n_points,):
            raise DimensionError("포텐셜/바이어스 배열 길이가 격자 크기와 다릅니다.")
        self.grid = grid
        self.units = units
        self.executor = executor or SerialExecutor()
        self.check_every = max(2, int(check_every) // 2 * 2)
        self.enforce_stability = enforce_stability
        self._emax_cache: Dict[float, float] = {}
        self._checked_versions: set = set()
        if dt is None:
            dt = grid.dt
        if dt is None:
            dt = dt_safety * units.hbar / self.e_max(max_abs_slope)
        if dt <= 0:
            raise ConfigurationError(f"dt 는 양수여야 합니다: {dt}")
        self.dt = float(dt)

    @classmethod
    def for_dqd(cls, p: DqdParams, grid: Grid, units: UnitSystem = UnitSystem(), **kwargs) -> "Propagator":
        return cls(evaluate_dqd(grid.x, p), bias_profile(grid.x, p), grid, units, **kwargs)

    @classmethod
    def from_config(cls, config, max_abs_slope: float, workers: Optional[int] = None) -> "Propagator":
        """RunConfig 로부터 DQD 전파기를 만듭니다."""
        executor = get_executor(config.kernel_backend(), workers=workers or config.workers)
        return cls.for_dqd(
            config.dqd_params(), config.grid(), config.unit_system(),
            dt=config.dt_ps, max_abs_slope=config.max_abs_slope_mev if config.max_abs_slope_mev is not None else max_abs_slope,
            executor=executor, dt_safety=config.dt_safety,
        )

    def __getstate__(self):
        state = self.__dict__.copy()
        # thread pools and device queues do not cross process boundaries
        state["executor"] = SerialExecutor()
        return state

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.executor.close()

    # ------------------------------------------------------------------
    def hamiltonian(self, slope: float) -> TridiagonalHamiltonian:
        return hamiltonian_from_potential(self.static_potential + slope * self.profile, self.grid, self.units)

    def e_max(self, slope: float) -> float:
        key = round(abs(float(slope)), 12)
        if key not in self._emax_cache:
            self._emax_cache[key] = max(largest_eigenvalue(self.hamiltonian(s)) for s in (key, -key))
        return self._emax_cache[key]

    def check_stability(self, schedule: DetuningSchedule) -> None:
        """
        Raises:
            InstabilityError: dt·E_max/ħ > 1 인 경우 (step_index = 0)
        """
        if schedule.version in self._checked_versions:
            return
        ratio = self.dt * self.e_max(schedule.max_abs_slope()) / self.units.hbar
        if ratio > 1.0:
            raise InstabilityError(
                f"dt={self.dt:.3e} ps 가 안정 조건을 넘습니다 (dt·E_max/ħ = {ratio:.3f}).", 0, {"ratio": ratio}
            )
        self._checked_versions.add(schedule.version)

    @staticmethod
    def _slopes(schedule: DetuningSchedule, t0: float, dt: float, lo: int, hi: int) -> np.ndarray:
        """갱신 lo+1..hi 에 쓸 기울기. 1e-12 meV 격자로 양자화해 작은 변화는 재사용합니다."""
        raw = np.asarray(schedule.value(t0 + dt * np.arange(lo + 1, hi + 1)), dtype=np.float64)
        return np.round(raw / RESAMPLE_TOLERANCE_MEV) * RESAMPLE_TOLERANCE_MEV

    def evolve(
        self,
        psi: Wavefunction,
        schedule: DetuningSchedule,
        duration: float,
        t_start: Optional[float] = None,
        direction: int = 1,
        observers: Sequence[Observer] = (),
        stride_ps: Optional[float] = 1.0,
        capture_times: Sequence[float] = (),
    ) -> PropagationResult:
        """
        ψ 를 t_start 에서 duration 만큼 (direction=-1 이면 거꾸로) 전파합니다.

        갱신 횟수는 ceil(duration/dt) 를 짝수로 올린 값이며, 마지막 시각이
        정확히 t_start ± duration 이 되도록 실제 간격을 duration/횟수 로 줄입니다.

        Args:
            psi (Wavefunction): 시작 상태
            schedule (DetuningSchedule): v_slope(t)
            duration (float): 전파 길이 [ps] (>= 0)
            t_start (float, optional): 시작 시각. 기본값은 스케줄 시작(정방향)/끝(역방향)
            direction (int): +1 정방향, -1 역방향
            observers: 관측 함수 목록
            stride_ps (float, optional): 관측 간격 [ps]. None 이면 시작/끝만
            capture_times: 상태를 저장할 상대 시각 [ps] 목록

        Returns:
            PropagationResult: 최종 상태, 관측 추적, 저장된 상태

        Raises:
            InstabilityError: 안정 조건 위반 또는 적분 중 발산
        """
        if duration < 0:
            raise ConfigurationError(f"duration 은 음수일 수 없습니다: {duration}")
        if direction not in (1, -1):
            raise ConfigurationError(f"direction 은 +1 또는 -1 이어야 합니다: {direction}")
        if psi.n_points != self.grid.n_points:
            raise DimensionError(f"상태 길이({psi.n_points})가 격자 크기({self.grid.n_points})와 다릅니다.")
        if t_start is None:
            t_start = schedule.start if direction == 1 else schedule.end
        if self.enforce_stability:
            self.check_stability(schedule)

        rows: List[Dict[str, float]] = []

        def observe(t: float, state: Wavefunction) -> None:
            if observers:
                row = {"time_ps": t}
                for obs in observers:
                    row.update(obs(t, state))
                rows.append(row)

        start_state = psi.destagger()
        if duration == 0.0:
            observe(t_start, start_state)
            captures = {float(t): start_state for t in capture_times}
            return PropagationResult(start_state, pd.DataFrame(rows), captures, 0, 0.0)

        n_total = 2 * math.ceil(duration / (2.0 * self.dt) - 1e-12)
        dt = duration / n_total
        signed_dt = direction * dt

        H0 = self.hamiltonian(schedule.value(t_start))
        state = LeapfrogState.start(start_state, H0, signed_dt, self.units)
        u, v = state.u_curr.copy(), state.v_curr.copy()
        v_prev = state.v_prev.copy()
        static = np.zeros(self.grid.n_points)
        static[1:-1] = 2.0 * abs(state.a_x) + abs(state.b) * self.static_potential[1:-1]
        bias = abs(state.b) * self.profile
        a_x = abs(state.a_x)
        sign = float(direction)

        def to_count(t_rel: float) -> int:
            return int(min(n_total, max(0, 2 * round(t_rel / (2.0 * dt)))))

        observe(t_start, start_state)
        obs_counts = set()
        if observers and stride_ps:
            stride = max(2, 2 * round(stride_ps / (2.0 * dt)))
            obs_counts = set(range(stride, n_total + 1, stride))
        capture_counts: Dict[int, List[float]] = {}
        for t in capture_times:
            capture_counts.setdefault(to_count(float(t)), []).append(float(t))
        captures: Dict[float, Wavefunction] = {}
        for t in capture_counts.get(0, []):
            captures[t] = start_state

        boundaries = sorted(
            set(range(self.check_every, n_total, self.check_every)) | obs_counts | set(capture_counts) | {n_total}
        )
        boundaries = [b for b in boundaries if b > 0]
        done = 0
        for boundary in boundaries:
            slopes = self._slopes(schedule, t_start, signed_dt, done, boundary)
            needs_state = boundary in obs_counts or boundary in capture_counts or boundary == n_total
            if needs_state:
                if slopes.size > 1:
                    self.executor.advance(u, v, static, bias, a_x, slopes[:-1], sign, "u")
                v_prev = v.copy()
                self.executor.advance(u, v, static, bias, a_x, slopes[-1:], sign, "v")
            else:
                self.executor.advance(u, v, static, bias, a_x, slopes, sign, "u")
            done = boundary
            rough = float(np.sum(u * u + v * v) * self.grid.dx)
            if not np.isfinite(rough) or rough > NORM_BLOWUP:
                raise InstabilityError(
                    f"스텝 {done} 에서 발산이 감지되었습니다 (rough norm={rough:.3e}).", done, {"dt_ps": dt}
                )
            if needs_state:
                current = Wavefunction(u, v, staggered=True, im_prev=v_prev)
                t_now = t_start + signed_dt * done
                if boundary in obs_counts:
                    observe(t_now, current)
                for t in capture_counts.get(boundary, []):
                    captures[t] = current

        final = Wavefunction(u, v, staggered=True, im_prev=v_prev)
        if observers and (not rows or rows[-1]["time_ps"] != t_start + signed_dt * n_total):
            observe(t_start + signed_dt * n_total, final)
        return PropagationResult(final, pd.DataFrame(rows), captures, n_total, dt)

    def propagate(
        self,
        psi0: Wavefunction,
        schedule: DetuningSchedule,
        t_final: float,
        observers: Sequence[Observer] = (),
        stride_ps: Optional[float] = 1.0,
    ) -> PropagationResult:
        """스케줄 시작 시각부터 t_final [ps] 동안 정방향으로 전파합니다."""
        return self.evolve(psi0, schedule, t_final, observers=observers, stride_ps=stride_ps)


def propagate(
    psi0: Wavefunction,
    schedule: DetuningSchedule,
    t_final: float,
    observers: Sequence[Observer],
    propagator: Propagator,
    stride_ps: Optional[float] = 1.0,
) -> PropagationResult:
    """
    ψ0 를 스케줄에 따라 t_final 동안 전파하고 관측 추적을 함께 반환합니다.
    """
    return propagator.propagate(psi0, schedule, t_final, observers, stride_ps)
