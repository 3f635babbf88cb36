import pytest
import numpy as np
from scipy.linalg import expm
from scripts.core.errors import ConfigurationError, DimensionError, InstabilityError
from scripts.core.config import RunConfig
from scripts.core.units import Grid, UnitSystem
from scripts.core.wavefunction import Wavefunction, inner_product, l2_distance, norm_squared, normalize
from scripts.dqd.potential import DqdParams
from scripts.dqd.stationary import bonding_antibonding
from scripts.dynamics.propagator import (
    LeapfrogState, Propagator, largest_eigenvalue, max_stable_dt, standard_observers, step,
)
from scripts.dynamics.schedule import DetuningSchedule

GRID = Grid(-264.0, 264.0, 128)
PARAMS = DqdParams()

def _right_localised() -> Wavefunction:
    bonding, antibonding = bonding_antibonding(PARAMS, 0.0, GRID)
    return normalize(bonding.state + antibonding.state, GRID)

def _propagator(max_abs_slope: float = 0.1, **kwargs) -> Propagator:
    return Propagator.for_dqd(PARAMS, GRID, max_abs_slope=max_abs_slope, **kwargs)

def test_matches_matrix_exponential():
    """일정 바이어스에서 exp(−iHt/ħ) 와 일치"""
    units = UnitSystem()
    propagator = _propagator()
    psi0 = _right_localised()
    result = propagator.evolve(psi0, DetuningSchedule.constant(0.1), 20.0)
    H = propagator.hamiltonian(0.1).to_dense()
    exact = np.zeros(GRID.n_points, dtype=complex)
    exact[GRID.interior] = expm(-1j * H * 20.0 / units.hbar) @ psi0.to_complex()[GRID.interior]
    assert l2_distance(result.final, Wavefunction.from_complex(exact), GRID) < 1e-5

def test_final_time_is_exact():
    """갱신 횟수는 짝수이고 dt_eff·횟수 = duration"""
    propagator = _propagator()
    result = propagator.evolve(_right_localised(), DetuningSchedule.constant(0.0), 3.3)
    assert result.steps % 2 == 0
    assert result.dt <= propagator.dt
    assert result.dt * result.steps == pytest.approx(3.3, rel=1e-12)

def test_norm_is_conserved():
    """램프 스케줄에서도 노름이 보존됨"""
    schedule = DetuningSchedule.from_breakpoints([(0.0, 0.0), (10.0, 0.1), (30.0, 0.1)])
    propagator = _propagator()
    result = propagator.evolve(_right_localised(), schedule, 30.0, observers=standard_observers(GRID), stride_ps=1.0)
    np.testing.assert_allclose(result.trace["norm"], 1.0, atol=1e-5)
    np.testing.assert_allclose(result.trace["p_left"] + result.trace["p_right"], result.trace["norm"], atol=1e-12)
    assert result.trace["time_ps"].iloc[0] == 0.0
    assert result.trace["time_ps"].iloc[-1] == pytest.approx(30.0)

def test_time_reversal():
    """정방향 후 역방향 전파로 시작 상태 복원"""
    schedule = DetuningSchedule.from_breakpoints([(0.0, 0.0), (5.0, 0.1), (10.0, 0.05)])
    propagator = _propagator()
    psi0 = _right_localised()
    forward = propagator.evolve(psi0, schedule, 10.0)
    back = propagator.evolve(forward.final, schedule, 10.0, direction=-1)
    assert l2_distance(back.final, psi0, GRID) < 1e-5

def test_captures_and_projections():
    """capture_times 의 상태와 ψ0/ψ1 투영 열"""
    bonding, antibonding = bonding_antibonding(PARAMS, 0.0, GRID)
    propagator = _propagator()
    psi0 = _right_localised()
    observers = standard_observers(GRID, bonding.state, antibonding.state)
    result = propagator.evolve(psi0, DetuningSchedule.constant(0.0), 4.0, observers=observers, capture_times=[0.0, 2.0])
    assert set(result.captures) == {0.0, 2.0}
    assert l2_distance(result.captures[0.0], psi0, GRID) == 0.0
    assert {"re_psi0", "im_psi0", "re_psi1", "im_psi1"} <= set(result.trace.columns)
    populations = result.trace["re_psi0"] ** 2 + result.trace["im_psi0"] ** 2
    np.testing.assert_allclose(populations, 0.5, atol=1e-5)

def test_zero_duration():
    """duration = 0 이면 시작 상태 그대로"""
    psi0 = _right_localised()
    result = _propagator().evolve(psi0, DetuningSchedule.constant(0.0), 0.0)
    assert result.steps == 0
    assert l2_distance(result.final, psi0, GRID) == 0.0

def test_stability_precondition():
    """dt 가 안정 조건을 넘으면 step_index 0 의 InstabilityError"""
    propagator = _propagator(dt=1.0)
    with pytest.raises(InstabilityError) as excinfo:
        propagator.evolve(_right_localised(), DetuningSchedule.constant(0.0), 10.0)
    assert excinfo.value.step_index == 0

def test_blow_up_detected():
    """안정 검사를 끄고 큰 dt 로 전파하면 발산이 감지됨"""
    propagator = _propagator(dt=1.0, enforce_stability=False)
    with np.errstate(over="ignore", invalid="ignore"):
        with pytest.raises(InstabilityError) as excinfo:
            propagator.evolve(_right_localised(), DetuningSchedule.constant(0.0), 100.0)
    assert excinfo.value.step_index > 0

def test_max_stable_dt():
    """안정 dt 는 ħ/E_max 에 안전계수를 곱한 값"""
    units = UnitSystem()
    dt = max_stable_dt(PARAMS, 0.1, GRID, units, safety_factor=0.5)
    propagator = _propagator(dt_safety=0.5)
    assert dt == pytest.approx(propagator.dt, rel=1e-9)
    H = propagator.hamiltonian(0.1)
    assert largest_eigenvalue(H) == pytest.approx(np.abs(np.linalg.eigvalsh(H.to_dense())).max(), rel=1e-9)
    with pytest.raises(ConfigurationError):
        max_stable_dt(PARAMS, 0.1, GRID, units, safety_factor=1.5)

def test_single_step():
    """step() 은 배열 하나만 갱신하고 입력 상태는 그대로"""
    propagator = _propagator()
    H = propagator.hamiltonian(0.0)
    state = LeapfrogState.start(_right_localised(), H, propagator.dt)
    assert state.next_is_u
    new = step(state, H.potential)
    assert new.step_index == state.step_index + 1
    assert not new.next_is_u
    np.testing.assert_array_equal(new.v_curr, state.v_curr)
    assert not np.array_equal(new.u_curr, state.u_curr)
    with pytest.raises(DimensionError):
        step(state, np.zeros(5))

def test_invalid_arguments():
    """음수 duration, 잘못된 방향, 다른 격자 상태"""
    propagator = _propagator()
    schedule = DetuningSchedule.constant(0.0)
    with pytest.raises(ConfigurationError):
        propagator.evolve(_right_localised(), schedule, -1.0)
    with pytest.raises(ConfigurationError):
        propagator.evolve(_right_localised(), schedule, 1.0, direction=2)
    with pytest.raises(DimensionError):
        propagator.evolve(Wavefunction.from_real(np.ones(10)), schedule, 1.0)

@pytest.mark.slow
def test_norm_over_million_steps():
    """기본 설정 격자에서 10⁶ 단계 후에도 |‖ψ‖² − 1| ≤ 1e−6"""
    config = RunConfig()
    grid = config.grid()
    bonding, antibonding = bonding_antibonding(config.dqd_params(), 0.0, grid, config.unit_system())
    psi0 = normalize(bonding.state + antibonding.state, grid)
    propagator = Propagator.for_dqd(config.dqd_params(), grid, config.unit_system(), max_abs_slope=0.1)
    result = propagator.evolve(psi0, DetuningSchedule.constant(0.0), 1_000_000 * propagator.dt, stride_ps=None)
    assert result.steps >= 1_000_000
    assert abs(norm_squared(result.final.destagger(), grid) - 1.0) <= 1e-6

def test_serial_run_forces_serial_kernel():
    """serial 실행이면 설정의 threaded backend 대신 serial 커널"""
    config = RunConfig(n_points=128, backend="threaded", workers=4)
    with Propagator.from_config(config, 0.1) as propagator:
        assert propagator.executor.name == "threaded"
    with Propagator.from_config(config.replace(serial=True), 0.1) as propagator:
        assert propagator.executor.name == "serial"

def test_propagation_is_linear():
    """U(aψ + bφ) = aUψ + bUφ"""
    bonding, antibonding = bonding_antibonding(PARAMS, 0.0, GRID)
    psi, phi = _right_localised(), normalize(bonding.state - antibonding.state, GRID)
    a, b = 0.6, 0.8j
    schedule = DetuningSchedule.from_breakpoints([(0.0, 0.0), (4.0, 0.1), (8.0, 0.02)])
    propagator = _propagator()
    mixed = Wavefunction.from_complex(a * psi.to_complex() + b * phi.to_complex())
    combined = propagator.evolve(mixed, schedule, 8.0).final
    separate = (
        a * propagator.evolve(psi, schedule, 8.0).final.to_complex()
        + b * propagator.evolve(phi, schedule, 8.0).final.to_complex()
    )
    assert l2_distance(combined, Wavefunction.from_complex(separate), GRID) < 1e-10

def test_stationary_state_keeps_density_and_rotates_phase():
    """고유 상태는 밀도가 변하지 않고 위상이 E/ħ 로 회전"""
    units = UnitSystem()
    bonding, _ = bonding_antibonding(PARAMS, 0.05, GRID)
    duration = 5.0
    final = _propagator(dt=5e-4).evolve(bonding.state, DetuningSchedule.constant(0.05), duration).final
    reference = bonding.state.density()
    np.testing.assert_allclose(final.density(), reference, atol=1e-4 * reference.max())
    overlap = inner_product(bonding.state, final, GRID)
    assert abs(overlap) == pytest.approx(1.0, abs=1e-4)
    expected = np.angle(np.exp(-1j * bonding.energy * duration / units.hbar))
    assert np.angle(overlap * np.exp(-1j * expected)) == pytest.approx(0.0, abs=1e-3)

def test_free_gaussian_spreads():
    """퍼텐셜이 없으면 가우시안 폭이 σ₀√(1 + (ħt/2mσ₀²)²) 로 커짐"""
    units = UnitSystem()
    grid = Grid(-400.0, 400.0, 2049)
    sigma0 = 10.0
    psi0 = normalize(Wavefunction.from_real(np.exp(-grid.x ** 2 / (4.0 * sigma0 ** 2))), grid)
    zeros = np.zeros(grid.n_points)
    propagator = Propagator(zeros, zeros, grid, units)
    spread_time = np.sqrt(3.0) * sigma0 ** 2 * units.hbar / units.kinetic_prefactor
    final = propagator.evolve(psi0, DetuningSchedule.constant(0.0), spread_time).final.destagger()

    def width(psi: Wavefunction) -> float:
        density = psi.density()
        return float(np.sqrt(np.sum(grid.x ** 2 * density) / np.sum(density)))

    assert width(psi0) == pytest.approx(sigma0, rel=1e-6)
    assert width(final) == pytest.approx(2.0 * sigma0, rel=1e-3)
    assert norm_squared(final, grid) == pytest.approx(1.0, abs=1e-6)
