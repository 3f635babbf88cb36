import pytest
import numpy as np
from scripts.core.errors import ConfigurationError
from scripts.dqd.potential import (
    BiasSpec, DqdParams, bias_profile, detuning_from_slope, evaluate_bias, evaluate_dqd, slope_from_detuning,
    total_potential,
)

def test_dqd_potential_landmarks():
    """중앙 장벽 z0, 점 바닥 0, 바깥 벽 z2"""
    p = DqdParams()
    assert evaluate_dqd(0.0, p) == pytest.approx(p.z0)
    assert evaluate_dqd(p.w1, p) == pytest.approx(0.0, abs=1e-12)
    assert evaluate_dqd(-p.w1, p) == pytest.approx(0.0, abs=1e-12)
    assert evaluate_dqd(p.w2, p) == pytest.approx(p.z2)
    assert evaluate_dqd(10 * p.w2, p) == pytest.approx(p.z2)

def test_dqd_potential_is_continuous_and_even():
    """포텐셜은 연속이고 대칭 매개변수에서 짝함수"""
    p = DqdParams()
    x = np.linspace(-300.0, 300.0, 6001)
    v = evaluate_dqd(x, p)
    np.testing.assert_allclose(v, v[::-1], atol=1e-12)
    assert np.max(np.abs(np.diff(v))) < 0.05

def test_asymmetric_dot():
    """왼쪽 점 매개변수만 바꾸면 왼쪽만 달라짐"""
    p = DqdParams(z2_left=8.0)
    assert not p.is_symmetric
    assert evaluate_dqd(-250.0, p) == pytest.approx(8.0)
    assert evaluate_dqd(250.0, p) == pytest.approx(p.z2)

@pytest.mark.parametrize("kwargs", [{"w1": 300.0}, {"z2": 0.5}, {"w1_left": -1.0}])
def test_invalid_params(kwargs):
    """0 < w1 < w2, z2 > z0 > 0 위반은 ConfigurationError"""
    with pytest.raises(ConfigurationError):
        DqdParams(**kwargs)

def test_bias_is_linear_and_odd():
    """바이어스 v·x/(2 w2)"""
    p = DqdParams()
    assert evaluate_bias(p.w2, 0.2, p.w2) == pytest.approx(0.1)
    assert evaluate_bias(-p.w2, 0.2, p.w2) == pytest.approx(-0.1)
    x = np.linspace(-100.0, 100.0, 5)
    np.testing.assert_allclose(total_potential(x, p, 0.3), evaluate_dqd(x, p) + 0.3 * bias_profile(x, p))

def test_detuning_conversion():
    """ε [μeV] = λ·1000·v [meV] 와 그 역변환"""
    lam = 0.42254
    assert detuning_from_slope(0.1, lam) == pytest.approx(42.254)
    assert slope_from_detuning(42.254, lam) == pytest.approx(0.1)
    assert BiasSpec(0.1, lam).detuning_uev == pytest.approx(42.254)
    with pytest.raises(ConfigurationError):
        slope_from_detuning(1.0, 0.0)
