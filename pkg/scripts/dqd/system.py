"""
System Module
=============

A calibrated double dot: potential parameters, grid, unit system and λ, with
eigenstates addressed by detuning ε [μeV].
"""

from dataclasses import dataclass
from typing import Tuple

from scripts.core.errors import ConfigurationError
from scripts.core.units import Grid, UEV_PER_MEV, UnitSystem
from scripts.dqd.potential import DqdParams, slope_from_detuning
from scripts.dqd.stationary import EigenPair, bonding_antibonding


@dataclass(frozen=True)
class DqdSystem:
    params: DqdParams
    grid: Grid
    units: UnitSystem
    lam: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ConfigurationError(f"λ 는 양수여야 합니다: {self.lam}")
        if not self.grid.x_min < 0.0 < self.grid.x_max:
            raise ConfigurationError("격자가 x = 0 을 포함해야 합니다.")

    @classmethod
    def from_config(cls, config, lam: float) -> "DqdSystem":
        return cls(config.dqd_params(), config.grid(), config.unit_system(), lam)

    def slope(self, epsilon_uev: float) -> float:
        """ε [μeV] 에 해당하는 v_slope [meV]."""
        return float(slope_from_detuning(float(epsilon_uev), self.lam))

    def epsilon(self, v_slope: float) -> float:
        return float(self.lam * v_slope * UEV_PER_MEV)

    def eigenpairs(self, epsilon_uev: float) -> Tuple[EigenPair, EigenPair]:
        """디튜닝 ε 에서의 (ψ_B, ψ_AB)."""
        return bonding_antibonding(self.params, self.slope(epsilon_uev), self.grid, self.units)

    @property
    def delta_uev(self) -> float:
        bonding, antibonding = self.eigenpairs(0.0)
        return (antibonding.energy - bonding.energy) * UEV_PER_MEV
