import pytest
import numpy as np
from scipy.spatial.transform import Rotation
from scripts.control.pulses import PulseSpec
from scripts.control.tomography import (
    TEST_STATES, X_AXIS, Z_AXIS, certify_sigma_x, certify_sigma_z, decompose_rotation, estimate_from_amplitudes,
    oscillation_amplitude, relabel_minus_psi1, swing_twist, tomography, tomography_family,
)
from scripts.core.errors import DecompositionError, NonRotationWarning, SubspaceViolationError
from scripts.dynamics.lsm import HBAR_UEV_PS

DELTA = 12.0

def _wrap(angle: float) -> float:
    return float(np.angle(np.exp(1j * angle)))

def test_null_pulse_is_identity(lsm):
    """길이 0 펄스는 항등 회전"""
    estimate = tomography(PulseSpec("trapezoid", rise_time=0.0), lsm)
    np.testing.assert_allclose(estimate.rotation_matrix, np.eye(3), atol=1e-10)
    assert estimate.angle == pytest.approx(0.0, abs=1e-10)
    assert estimate.leakage == pytest.approx(0.0, abs=1e-12)

def test_zero_detuning_is_x_rotation(lsm):
    """ε = 0 의 t 길이 펄스는 x 축 Δt/ħ 회전"""
    estimate = tomography(PulseSpec("trapezoid", plateau_time=100.0, rise_time=0.0), lsm)
    np.testing.assert_allclose(estimate.axis, X_AXIS, atol=1e-9)
    assert estimate.angle == pytest.approx(DELTA * 100.0 / HBAR_UEV_PS, rel=1e-9)
    assert estimate.residual < 1e-9
    assert estimate.to_dict()["pulse"]["plateau_time"] == 100.0

def test_family_decomposition(lsm):
    """A = 0 묶음: κ = Δ/ħ, 축 x, ϑ₀ = wrap(κ·2τ), 고정 회전 없음"""
    tps = np.arange(100.0, 201.0, 20.0)
    spec = PulseSpec("trapezoid", amplitude=0.0, plateau_time=100.0, rise_time=90.0)
    estimates = tomography_family(spec, tps, lsm)
    family = decompose_rotation(estimates)
    kappa = DELTA / HBAR_UEV_PS
    assert family.kappa == pytest.approx(kappa, rel=1e-9)
    assert family.axis_error_deg(X_AXIS) < 1e-6
    assert family.offset_ps == 180.0
    assert family.theta0 == pytest.approx(_wrap(360.0 * kappa), abs=1e-7)
    assert family.fixed_angle == pytest.approx(0.0, abs=1e-7)
    assert family.max_residual < 1e-9
    predicted = family.rotation_at(150.0).as_matrix()
    measured = tomography(spec.with_plateau_time(150.0), lsm).rotation_matrix
    np.testing.assert_allclose(predicted, measured, atol=1e-7)

def test_decomposition_errors(lsm):
    """결과 5개 미만과 중복 t_p 는 DecompositionError"""
    spec = PulseSpec("trapezoid", plateau_time=100.0, rise_time=0.0)
    estimates = tomography_family(spec, [100.0, 110.0, 120.0, 130.0], lsm)
    with pytest.raises(DecompositionError):
        decompose_rotation(estimates)
    estimates = tomography_family(spec, [100.0, 110.0, 120.0, 130.0, 140.0], lsm)
    with pytest.raises(DecompositionError):
        decompose_rotation(estimates, plateau_times=[100.0, 110.0, 110.0, 130.0, 140.0])

def test_leakage_and_collinear_test_states():
    """누설이 크면 SubspaceViolationError, 한 직선이면 DecompositionError"""
    with pytest.raises(SubspaceViolationError):
        estimate_from_amplitudes(0.9 * TEST_STATES)
    with pytest.raises(DecompositionError):
        estimate_from_amplitudes(np.tile(TEST_STATES[0], (3, 1)))

def test_reflection_warns():
    """시험 상태 두 개를 바꾸면 반사라서 NonRotationWarning"""
    with pytest.warns(NonRotationWarning):
        estimate = estimate_from_amplitudes(TEST_STATES[[1, 0, 2]])
    assert estimate.residual > 0.01

def test_swing_twist():
    """R_z(a)·R_x(b) → twist a, swing R_x(b)"""
    rotation = Rotation.from_rotvec(0.7 * Z_AXIS) * Rotation.from_rotvec(0.4 * X_AXIS)
    twist, swing = swing_twist(rotation, Z_AXIS)
    assert twist == pytest.approx(0.7, abs=1e-12)
    np.testing.assert_allclose(swing.as_rotvec(), 0.4 * X_AXIS, atol=1e-12)

def test_relabel_minus_psi1():
    """ψ1 → −ψ1 재표기는 R_z(π) 를 왼쪽에 곱함"""
    np.testing.assert_allclose(relabel_minus_psi1(np.eye(3)), np.diag([-1.0, -1.0, 1.0]), atol=1e-12)

def test_certify_sigma_x(lsm):
    """한 주기 이상 스캔한 ε = 0 묶음은 σx 인증 통과"""
    tps = np.arange(100.0, 461.0, 10.0)
    spec = PulseSpec("trapezoid", plateau_time=100.0, rise_time=90.0)
    estimates = tomography_family(spec, tps, lsm)
    family = decompose_rotation(estimates)
    amplitude = oscillation_amplitude(estimates)
    assert amplitude > 0.99
    certification = certify_sigma_x(family, amplitude)
    assert certification.passed
    assert certification.axis_error_deg < 1e-6

def test_certify_sigma_z(lsm):
    """큰 디튜닝 묶음은 z 축 근처 회전으로 σz 인증 통과"""
    tps = np.arange(10.0, 12.01, 0.5)
    spec = PulseSpec("trapezoid", amplitude=2000.0, plateau_time=10.0, rise_time=0.0)
    estimates = tomography_family(spec, tps, lsm)
    family = decompose_rotation(estimates)
    amplitude = oscillation_amplitude(estimates)
    assert amplitude < 1e-3
    certification = certify_sigma_z(family, estimates, amplitude)
    assert certification.passed
    assert certification.axis_error_deg < 1.0
    assert not certify_sigma_x(family, amplitude).passed
