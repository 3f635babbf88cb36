import pytest
import numpy as np
from scripts.control.dynamics import GridDynamics, TwoLevelDynamics
from scripts.control.pulses import PulseSpec
from scripts.dynamics.lsm import HBAR_UEV_PS
from scripts.dynamics.propagator import Propagator

def _grid_dynamics(system, basis, max_abs_epsilon: float) -> GridDynamics:
    propagator = Propagator.for_dqd(system.params, system.grid, system.units,
                                    max_abs_slope=abs(system.slope(max_abs_epsilon)) * 1.05)
    return GridDynamics(system, basis, propagator)

def test_lsm_scan_matches_evolve(lsm):
    """유지 시간 스캔 결과가 펄스별 전체 전파와 일치"""
    spec = PulseSpec("spin_echo", baseline=5.0, amplitude=30.0, counter_amplitude=-40.0, plateau_time=40.0, rise_time=10.0)
    holds = [0.0, 12.5, 40.0]
    initials = [lsm.basis_state(1.0, 0.0), lsm.eigenstate(5.0, 1)]
    scanned = lsm.scan(spec, holds, initials)
    assert scanned.shape == (3, 2, 2)
    for h, hold in enumerate(holds):
        for k, init in enumerate(initials):
            np.testing.assert_allclose(scanned[h, k], lsm.pulse_amplitudes(spec.with_hold(hold), init), atol=1e-10)

def test_lsm_qubit_block_is_unitary(lsm):
    """LSM 의 2×2 블록은 유니터리"""
    spec = PulseSpec("trapezoid", baseline=-20.0, amplitude=60.0, plateau_time=35.0, rise_time=15.0)
    Q = lsm.qubit_block(spec)
    np.testing.assert_allclose(Q.conj().T @ Q, np.eye(2), atol=1e-12)

def test_lsm_p_right():
    """P_R = |a|²P0 + |b|²P1"""
    dynamics = TwoLevelDynamics(0.42254, 12.0, p0=0.98, p1=0.02)
    state = dynamics.basis_state(np.sqrt(0.25), np.sqrt(0.75))
    assert dynamics.p_right(state) == pytest.approx(0.25 * 0.98 + 0.75 * 0.02)

def test_grid_scan_matches_evolve(system, basis):
    """격자 엔진의 스캔(정방향 + 꼬리 역전파)이 직접 전파와 일치"""
    dynamics = _grid_dynamics(system, basis, 25.0)
    spec = PulseSpec("trapezoid", baseline=0.0, amplitude=20.0, plateau_time=10.0, rise_time=5.0)
    holds = [0.0, 4.0, 10.0]
    scanned = dynamics.scan(spec, holds, [basis.psi0])
    for h, hold in enumerate(holds):
        direct = dynamics.pulse_amplitudes(spec.with_hold(hold), basis.psi0)
        np.testing.assert_allclose(scanned[h, 0], direct, atol=1e-3)

@pytest.mark.slow
def test_grid_agrees_with_lsm(system, basis):
    """운영 범위 안의 펄스에서 격자 엔진과 LSM 의 블록이 가까움"""
    grid = _grid_dynamics(system, basis, 30.0)
    lsm = TwoLevelDynamics.from_basis(system.lam, basis)
    spec = PulseSpec("trapezoid", baseline=0.0, amplitude=-12.0, plateau_time=60.0, rise_time=20.0)
    Q_grid = grid.qubit_block(spec)
    Q_lsm = lsm.qubit_block(spec)
    np.testing.assert_allclose(np.abs(Q_grid) ** 2, np.abs(Q_lsm) ** 2, atol=0.02)
    leakage = 1.0 - np.sum(np.abs(Q_grid) ** 2, axis=0)
    assert np.all(leakage < 0.01)

@pytest.mark.slow
def test_grid_rabi_half_period(system, basis):
    """ε = 0 에서 t = πħ/Δ 이면 ψ0 → ψ1 (격자 엔진, 1% 이내)"""
    dynamics = _grid_dynamics(system, basis, 5.0)
    spec = PulseSpec("trapezoid", plateau_time=np.pi * HBAR_UEV_PS / basis.delta, rise_time=0.0)
    a, b = dynamics.pulse_amplitudes(spec, basis.psi0)
    assert abs(b) ** 2 == pytest.approx(1.0, abs=0.01)

@pytest.mark.slow
def test_grid_rabi_full_period(system, basis):
    """ε = 0 에서 ψ0 가 다시 돌아오는 시각이 h/Δ 와 1% 이내로 일치 (격자 엔진)"""
    dynamics = _grid_dynamics(system, basis, 5.0)
    period = 2.0 * np.pi * HBAR_UEV_PS / basis.delta
    holds = np.linspace(0.9 * period, 1.1 * period, 81)
    spec = PulseSpec("trapezoid", plateau_time=0.0, rise_time=0.0)
    returned = np.abs(dynamics.scan(spec, holds, [basis.psi0])[:, 0, 0]) ** 2
    assert returned.max() > 0.99
    assert holds[int(np.argmax(returned))] == pytest.approx(period, rel=0.01)
