"""
Wavefunction Module
===================

Complex amplitudes on the grid, stored as separate real/imaginary arrays, and the
observables (overlaps, half-line probabilities) computed from them.
"""

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from scripts.core.errors import DimensionError
from scripts.core.units import Grid

NORM_TOLERANCE = 1e-6


@dataclass(frozen=True, eq=False)
class Wavefunction:
    """
    격자 위의 파동함수입니다.

    staggered=True 이면 im 이 re 보다 반 스텝 늦게(또는 빠르게) 샘플된 값이며,
    im_prev 에 직전 im 샘플이 함께 저장됩니다. 관측량 계산 전에 destagger() 로
    공통 시각의 값으로 바꿉니다.
    """
    re: np.ndarray
    im: np.ndarray
    staggered: bool = False
    im_prev: Optional[np.ndarray] = None

    def __post_init__(self):
        re = np.array(self.re, dtype=np.float64)
        im = np.array(self.im, dtype=np.float64)
        if re.ndim != 1 or re.shape != im.shape:
            raise DimensionError(f"re/im 배열 모양이 맞지 않습니다: {re.shape} vs {im.shape}")
        if self.staggered and (self.im_prev is None or np.shape(self.im_prev) != re.shape):
            raise DimensionError("staggered 파동함수에는 같은 길이의 im_prev 가 필요합니다.")
        # Dirichlet walls
        re[0] = re[-1] = 0.0
        im[0] = im[-1] = 0.0
        re.setflags(write=False)
        im.setflags(write=False)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        if self.im_prev is not None:
            prev = np.array(self.im_prev, dtype=np.float64)
            prev[0] = prev[-1] = 0.0
            prev.setflags(write=False)
            object.__setattr__(self, "im_prev", prev)

    @classmethod
    def from_complex(cls, psi: np.ndarray) -> "Wavefunction":
        psi = np.asarray(psi, dtype=np.complex128)
        return cls(psi.real.copy(), psi.imag.copy())

    @classmethod
    def from_real(cls, values: np.ndarray) -> "Wavefunction":
        values = np.asarray(values, dtype=np.float64)
        return cls(values.copy(), np.zeros_like(values))

    @property
    def n_points(self) -> int:
        return int(self.re.shape[0])

    def destagger(self) -> "Wavefunction":
        """(v^k + v^{k-1})/2 로 허수부를 실수부 시각에 맞춥니다."""
        if not self.staggered:
            return self
        return Wavefunction(self.re, 0.5 * (self.im + self.im_prev))

    def to_complex(self) -> np.ndarray:
        psi = self.destagger()
        return psi.re + 1j * psi.im

    def density(self) -> np.ndarray:
        psi = self.destagger()
        return psi.re ** 2 + psi.im ** 2

    def scaled(self, factor: complex) -> "Wavefunction":
        return Wavefunction.from_complex(factor * self.to_complex())

    def __add__(self, other: "Wavefunction") -> "Wavefunction":
        if other.n_points != self.n_points:
            raise DimensionError(f"격자 크기가 다릅니다: {self.n_points} vs {other.n_points}")
        return Wavefunction.from_complex(self.to_complex() + other.to_complex())

    def __sub__(self, other: "Wavefunction") -> "Wavefunction":
        return self + other.scaled(-1.0)


def _check_grid(psi: Wavefunction, grid: Grid) -> None:
    if psi.n_points != grid.n_points:
        raise DimensionError(
            f"파동함수 길이({psi.n_points})가 격자 크기({grid.n_points})와 다릅니다.",
            {"n_psi": psi.n_points, "n_grid": grid.n_points},
        )


def inner_product(a: Wavefunction, b: Wavefunction, grid: Grid) -> complex:
    """
    ⟨a, b⟩ = Σ conj(a_m) b_m dx 를 계산합니다.

    Args:
        a (Wavefunction): 브라 상태
        b (Wavefunction): 켓 상태
        grid (Grid): 두 상태가 놓인 격자

    Returns:
        complex: 겹침 적분

    Raises:
        DimensionError: 두 상태 또는 격자의 크기가 다를 경우
    """
    _check_grid(a, grid)
    _check_grid(b, grid)
    return complex(np.vdot(a.to_complex(), b.to_complex()) * grid.dx)


def norm_squared(psi: Wavefunction, grid: Grid) -> float:
    _check_grid(psi, grid)
    return float(np.sum(psi.density()) * grid.dx)


def normalize(psi: Wavefunction, grid: Grid) -> Wavefunction:
    norm = np.sqrt(norm_squared(psi, grid))
    if norm == 0.0:
        raise DimensionError("노름이 0 인 파동함수는 정규화할 수 없습니다.")
    return psi.scaled(1.0 / norm)


def is_normalized(psi: Wavefunction, grid: Grid, tolerance: float = NORM_TOLERANCE) -> bool:
    return abs(norm_squared(psi, grid) - 1.0) <= tolerance


def half_line_weights(grid: Grid, side: Literal["left", "right"] = "right") -> np.ndarray:
    """
    반직선 적분 가중치를 반환합니다.

    x=0 에 정확히 놓인 격자점은 양쪽에 절반씩 배분하고, 그 외에는 x 의 부호로
    나눕니다. 따라서 left + right 가중치의 합은 항상 1 입니다.
    """
    x = grid.x
    tol = 1e-9 * grid.dx
    right = np.where(x > tol, 1.0, 0.0)
    right[np.abs(x) <= tol] = 0.5
    if side == "right":
        return right
    if side == "left":
        return 1.0 - right
    raise ValueError(f"side 는 'left' 또는 'right' 이어야 합니다: {side}")


def half_line_probability(psi: Wavefunction, grid: Grid, side: Literal["left", "right"] = "right") -> float:
    """
    한쪽 반직선 위에서 전자를 발견할 확률을 계산합니다.

    Args:
        psi (Wavefunction): 정규화된 상태
        grid (Grid): 격자 (x=0 포함 구간)
        side (str): 'left' 또는 'right'

    Returns:
        float: 확률
    """
    _check_grid(psi, grid)
    return float(np.sum(half_line_weights(grid, side) * psi.density()) * grid.dx)


def half_line_overlap(a: Wavefunction, b: Wavefunction, grid: Grid, side: Literal["left", "right"] = "right") -> complex:
    """한쪽 반직선으로 제한한 겹침 ∫ conj(a) b dx 입니다."""
    _check_grid(a, grid)
    _check_grid(b, grid)
    weights = half_line_weights(grid, side)
    return complex(np.sum(weights * np.conj(a.to_complex()) * b.to_complex()) * grid.dx)


def l2_distance(a: Wavefunction, b: Wavefunction, grid: Grid) -> float:
    _check_grid(a, grid)
    _check_grid(b, grid)
    diff = a.to_complex() - b.to_complex()
    return float(np.sqrt(np.sum(np.abs(diff) ** 2) * grid.dx))
