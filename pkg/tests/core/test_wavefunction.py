import pytest
import numpy as np
from scripts.core.errors import ConfigurationError, DimensionError
from scripts.core.units import Grid, UnitSystem
from scripts.core.wavefunction import (
    Wavefunction, half_line_probability, half_line_weights, inner_product, is_normalized, l2_distance,
    norm_squared, normalize,
)

def test_grid_spacing_and_symmetry():
    """격자 간격과 대칭 여부 테스트"""
    grid = Grid(-5.0, 5.0, 11)
    assert grid.dx == pytest.approx(1.0)
    assert grid.is_symmetric()
    assert not Grid(-5.0, 6.0, 12).is_symmetric()

@pytest.mark.parametrize("args", [(0.0, 1.0, 2), (1.0, 0.0, 10), (0.0, 1.0, 10, -1.0)])
def test_invalid_grid(args):
    """잘못된 격자는 ConfigurationError"""
    with pytest.raises(ConfigurationError):
        Grid(*args)

def test_unit_system():
    """GaAs 유효질량의 ħ²/2m* 와 μeV 단위 ħ"""
    units = UnitSystem()
    assert units.kinetic_prefactor == pytest.approx(38.0998 / 0.067)
    assert units.hbar_uev == pytest.approx(658.2119569)
    with pytest.raises(ConfigurationError):
        UnitSystem(effective_mass_ratio=0.0)

def test_dirichlet_walls_are_zero():
    """벽 값은 항상 0 으로 고정"""
    psi = Wavefunction(np.ones(5), np.ones(5))
    assert psi.re[0] == psi.re[-1] == 0.0
    assert psi.im[0] == psi.im[-1] == 0.0

def test_shape_mismatch():
    """re/im 길이가 다르면 DimensionError"""
    with pytest.raises(DimensionError):
        Wavefunction(np.ones(5), np.ones(6))

def test_normalize_and_inner_product():
    """정규화 후 노름 1, 자기 자신과의 내적 1"""
    grid = Grid(-10.0, 10.0, 201)
    psi = normalize(Wavefunction.from_real(np.exp(-grid.x ** 2)), grid)
    assert is_normalized(psi, grid)
    assert inner_product(psi, psi, grid) == pytest.approx(1.0)
    assert l2_distance(psi, psi, grid) == 0.0

def test_normalize_zero_state():
    """노름이 0 인 상태는 정규화할 수 없음"""
    grid = Grid(-1.0, 1.0, 11)
    with pytest.raises(DimensionError):
        normalize(Wavefunction.from_real(np.zeros(11)), grid)

def test_inner_product_grid_mismatch():
    """격자 크기가 다르면 DimensionError"""
    with pytest.raises(DimensionError):
        inner_product(Wavefunction.from_real(np.ones(5)), Wavefunction.from_real(np.ones(5)), Grid(0.0, 1.0, 7))

def test_half_line_weights_split_node_at_origin():
    """x=0 격자점은 양쪽에 절반씩, 두 가중치의 합은 1"""
    grid = Grid(-2.0, 2.0, 5)
    np.testing.assert_array_equal(half_line_weights(grid, "right"), [0.0, 0.0, 0.5, 1.0, 1.0])
    np.testing.assert_array_equal(half_line_weights(grid, "left") + half_line_weights(grid, "right"), np.ones(5))
    with pytest.raises(ValueError):
        half_line_weights(grid, "up")

def test_half_line_probabilities_sum_to_norm():
    """P_L + P_R = 노름"""
    grid = Grid(-10.0, 10.0, 101)
    psi = normalize(Wavefunction.from_real(np.exp(-(grid.x - 2.0) ** 2)), grid)
    total = half_line_probability(psi, grid, "left") + half_line_probability(psi, grid, "right")
    assert total == pytest.approx(norm_squared(psi, grid))
    assert half_line_probability(psi, grid, "right") > 0.99

def test_destagger_averages_imaginary_part():
    """staggered 상태의 허수부는 (v^k + v^{k-1})/2"""
    psi = Wavefunction(np.ones(4), np.full(4, 2.0), staggered=True, im_prev=np.full(4, 4.0))
    np.testing.assert_array_equal(psi.destagger().im, [0.0, 3.0, 3.0, 0.0])
    with pytest.raises(DimensionError):
        Wavefunction(np.ones(4), np.ones(4), staggered=True)

def test_complex_arithmetic():
    """복소 배열 변환과 덧셈/뺄셈"""
    values = np.array([0.0, 1 + 2j, -1j, 0.0])
    psi = Wavefunction.from_complex(values)
    np.testing.assert_array_equal(psi.to_complex(), values)
    np.testing.assert_array_equal((psi + psi).to_complex(), 2 * values)
    np.testing.assert_array_equal((psi - psi).to_complex(), np.zeros(4))
