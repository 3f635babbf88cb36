"""
Calibration Module
==================

Detuning calibration ε = λ·V_slope from the two-level splitting relation
E_AB − E_B = √(ε² + Δ²).
"""

import logging
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
import pandas as pd
from sklearn.linear_model import LinearRegression

from scripts.core.errors import CalibrationError, ConfigurationError
from scripts.core.units import Grid, UEV_PER_MEV, UnitSystem
from scripts.dqd.potential import DqdParams
from scripts.dqd.stationary import bonding_antibonding

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CalibrationResult:
    """
    λ 보정 결과입니다.

    Attributes:
        lam (float): ε[μeV] = λ·1000·v_slope[meV] 의 λ
        delta_uev (float): v_slope = 0 에서의 분리 에너지 Δ [μeV]
        max_relative_residual (float): max|ε_i − λ v_i| / max|ε_i|
        tolerance (float): 허용 최대 상대 잔차
        table (pd.DataFrame): v_slope_mev, e_b_mev, e_ab_mev, splitting_uev, epsilon_uev, fit_uev
    """
    lam: float
    delta_uev: float
    max_relative_residual: float
    table: pd.DataFrame = field(repr=False)
    tolerance: float = 1e-5

    @property
    def within_tolerance(self) -> bool:
        return self.max_relative_residual <= self.tolerance


def _check_monotone(slopes: np.ndarray, splitting: np.ndarray) -> None:
    order = np.argsort(slopes)
    v, s = slopes[order], splitting[order]
    tol = 1e-9
    right = v >= 0
    left = v <= 0
    if np.any(np.diff(s[right]) < -tol) or np.any(np.diff(s[left]) > tol):
        raise CalibrationError(
            "분리 에너지가 |v_slope| 에 대해 단조 증가하지 않습니다.",
            {"v_slope_mev": v.tolist(), "splitting_mev": s.tolist()},
        )


def calibrate_lambda(
    p: DqdParams,
    slope_range: Tuple[float, float],
    n_samples: int,
    grid: Grid,
    units: UnitSystem = UnitSystem(),
    tolerance: float = 1e-5,
) -> CalibrationResult:
    """
    여러 v_slope 에서 E_AB − E_B 를 풀어 |ε| = √(s² − Δ²) 로 바꾼 뒤
    원점을 지나는 최소제곱 직선 ε = λ·v_slope 를 맞춥니다.

    Args:
        p (DqdParams): 포텐셜 매개변수
        slope_range (Tuple[float, float]): v_slope 구간 [meV]
        n_samples (int): 표본 수 (>= 3)
        grid (Grid): 격자
        units (UnitSystem): 단위계
        tolerance (float): 최대 상대 잔차 허용치. 넘으면 경고만 남깁니다.

    Returns:
        CalibrationResult: λ, Δ, 최대 상대 잔차, 표본 표

    Raises:
        ConfigurationError: 구간이나 표본 수가 잘못된 경우
        CalibrationError: 분리 에너지가 단조가 아닐 경우
    """
    lo, hi = float(min(slope_range)), float(max(slope_range))
    if n_samples < 3 or hi <= lo:
        raise ConfigurationError(f"보정 구간/표본 수가 잘못되었습니다: {slope_range}, {n_samples}")

    slopes = np.linspace(lo, hi, n_samples)
    bonding0, antibonding0 = bonding_antibonding(p, 0.0, grid, units)
    delta = antibonding0.energy - bonding0.energy

    rows = []
    for v in slopes:
        bonding, antibonding = bonding_antibonding(p, float(v), grid, units)
        rows.append((float(v), bonding.energy, antibonding.energy))
    table = pd.DataFrame(rows, columns=["v_slope_mev", "e_b_mev", "e_ab_mev"])
    splitting = (table["e_ab_mev"] - table["e_b_mev"]).to_numpy()
    _check_monotone(slopes, splitting)

    magnitude = np.sqrt(np.clip(splitting ** 2 - delta ** 2, 0.0, None))
    epsilon = np.sign(slopes) * magnitude * UEV_PER_MEV

    model = LinearRegression(fit_intercept=False).fit(slopes.reshape(-1, 1), epsilon)
    coef = float(model.coef_[0])
    fit = coef * slopes
    scale = float(np.max(np.abs(epsilon)))
    residual = float(np.max(np.abs(epsilon - fit)) / scale) if scale > 0 else 0.0

    table["splitting_uev"] = splitting * UEV_PER_MEV
    table["epsilon_uev"] = epsilon
    table["fit_uev"] = fit
    lam = coef / UEV_PER_MEV
    logger.info(f"λ 보정 완료: λ={lam:.6f}, Δ={delta * UEV_PER_MEV:.4f} μeV, 최대 상대 잔차={residual:.2e}")
    if residual > tolerance:
        logger.warning(f"λ 직선 잔차 {residual:.2e} 가 허용치 {tolerance:.0e} 를 넘습니다. v_slope 구간을 운영 범위로 줄이세요.")
    return CalibrationResult(lam=lam, delta_uev=delta * UEV_PER_MEV, max_relative_residual=residual, table=table,
                             tolerance=tolerance)
