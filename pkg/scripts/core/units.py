"""
Units Module
============

Unit system (meV, nm, ps) and the uniform 1D grid shared by all wavefunctions.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from scripts.core.errors import ConfigurationError

HBAR_MEV_PS = 0.6582119569
# ħ²/(2 m_e) in meV·nm²
FREE_KINETIC_MEV_NM2 = 38.0998
PLANCK_UEV_PS = 2.0 * np.pi * HBAR_MEV_PS * 1000.0
UEV_PER_MEV = 1000.0


@dataclass(frozen=True)
class UnitSystem:
    """
    유효질량 근사에서 사용하는 단위계입니다.

    Args:
        effective_mass_ratio (float): m*/m_e (기본값 GaAs 0.067)
        hbar (float): ħ [meV·ps]
    """
    effective_mass_ratio: float = 0.067
    hbar: float = HBAR_MEV_PS

    def __post_init__(self):
        if self.hbar <= 0:
            raise ConfigurationError(f"hbar 는 양수여야 합니다: {self.hbar}")
        if self.effective_mass_ratio <= 0:
            raise ConfigurationError(f"effective_mass_ratio 는 양수여야 합니다: {self.effective_mass_ratio}")

    @property
    def kinetic_prefactor(self) -> float:
        """ħ²/(2m*) [meV·nm²]"""
        return FREE_KINETIC_MEV_NM2 / self.effective_mass_ratio

    @property
    def hbar_uev(self) -> float:
        """ħ [μeV·ps]"""
        return self.hbar * UEV_PER_MEV


@dataclass(frozen=True)
class Grid:
    """
    Dirichlet 경계를 갖는 균일 1D 격자입니다.

    Args:
        x_min (float): 왼쪽 벽 위치 [nm]
        x_max (float): 오른쪽 벽 위치 [nm]
        n_points (int): 벽을 포함한 격자점 수 (>= 3)
        dt (Optional[float]): 시간 간격 [ps]. None 이면 전파 전에 안정 조건으로 정합니다.
    """
    x_min: float
    x_max: float
    n_points: int
    dt: Optional[float] = None
    x: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise ConfigurationError(f"n_points 는 3 이상의 정수여야 합니다: {self.n_points}")
        if not self.x_max > self.x_min:
            raise ConfigurationError(f"x_max({self.x_max}) 는 x_min({self.x_min}) 보다 커야 합니다.")
        if self.dt is not None and self.dt <= 0:
            raise ConfigurationError(f"dt 는 양수여야 합니다: {self.dt}")
        x = np.linspace(self.x_min, self.x_max, int(self.n_points))
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def interior(self) -> slice:
        return slice(1, self.n_points - 1)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    def same_points(self, other: "Grid") -> bool:
        """두 격자가 같은 공간점을 갖는지 확인합니다 (dt 는 비교하지 않음)."""
        return (
            self.n_points == other.n_points
            and np.isclose(self.x_min, other.x_min, rtol=0.0, atol=1e-12)
            and np.isclose(self.x_max, other.x_max, rtol=0.0, atol=1e-12)
        )

    def mirror_index(self) -> np.ndarray:
        """x -> -x 에 대응하는 인덱스 (대칭 격자에서만 의미가 있음)."""
        return np.arange(self.n_points)[::-1]

    def is_symmetric(self) -> bool:
        return bool(np.isclose(self.x_min, -self.x_max, rtol=0.0, atol=1e-9 * self.dx))
