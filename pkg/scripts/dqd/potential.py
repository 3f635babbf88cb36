"""
Potential Module
================

Four-parameter double-quantum-dot confinement potential and the linear Stark
bias used to detune it.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from scripts.core.errors import ConfigurationError
from scripts.core.units import UEV_PER_MEV

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class DqdParams:
    """
    DQD 포텐셜 매개변수입니다.

    Args:
        w1 (float): 안쪽 반폭 [nm]
        w2 (float): 바깥쪽 반폭 [nm]
        z0 (float): 중앙 장벽 높이 [meV]
        z2 (float): 바깥 벽 높이 [meV]
        w1_left, w2_left, z2_left (Optional[float]): 왼쪽 점에만 적용할 값 (비대칭 점)
    """
    w1: float = 130.0
    w2: float = 240.0
    z0: float = 0.865
    z2: float = 6.92
    w1_left: Optional[float] = None
    w2_left: Optional[float] = None
    z2_left: Optional[float] = None

    def __post_init__(self):
        for side, (w1, w2, z2) in (("right", self.side("right")), ("left", self.side("left"))):
            if not 0 < w1 < w2:
                raise ConfigurationError(f"{side}: 0 < w1 < w2 이어야 합니다 (w1={w1}, w2={w2})")
            if not z2 > self.z0 > 0:
                raise ConfigurationError(f"{side}: z2 > z0 > 0 이어야 합니다 (z0={self.z0}, z2={z2})")

    def side(self, which: str):
        """(w1, w2, z2) for 'left' or 'right'."""
        if which == "right":
            return self.w1, self.w2, self.z2
        return (
            self.w1 if self.w1_left is None else self.w1_left,
            self.w2 if self.w2_left is None else self.w2_left,
            self.z2 if self.z2_left is None else self.z2_left,
        )

    @property
    def is_symmetric(self) -> bool:
        return self.side("left") == self.side("right")


@dataclass(frozen=True)
class BiasSpec:
    """순간 기울기 v_slope [meV] 와 보정 상수 λ 로 정해지는 디튜닝입니다."""
    v_slope: float
    lam: float

    @property
    def detuning_uev(self) -> float:
        return detuning_from_slope(self.v_slope, self.lam)


def _branch(ax: np.ndarray, z0: float, w1: float, w2: float, z2: float) -> np.ndarray:
    inner = 0.5 * z0 * (1.0 + np.cos(np.pi * ax / w1))
    outer = 0.5 * z2 * (1.0 - np.cos(np.pi * (ax - w1) / (w2 - w1)))
    return np.where(ax <= w1, inner, np.where(ax <= w2, outer, z2))


def evaluate_dqd(x: ArrayLike, p: DqdParams) -> ArrayLike:
    """
    DQD 포텐셜 V_DQD(x) [meV] 를 계산합니다.

    |x| <= w1 에서는 ½z0[1 + cos(π|x|/w1)], w1 < |x| <= w2 에서는
    ½z2[1 − cos(π(|x|−w1)/(w2−w1))], |x| > w2 에서는 z2 로 고정합니다.

    Args:
        x (float | np.ndarray): 위치 [nm]
        p (DqdParams): 포텐셜 매개변수

    Returns:
        float | np.ndarray: 포텐셜 [meV]
    """
    xs = np.asarray(x, dtype=np.float64)
    ax = np.abs(xs)
    right = _branch(ax, p.z0, *p.side("right"))
    if p.is_symmetric:
        value = right
    else:
        value = np.where(xs >= 0, right, _branch(ax, p.z0, *p.side("left")))
    return float(value) if np.ndim(x) == 0 else value


def evaluate_bias(x: ArrayLike, v_slope: float, w2: float) -> ArrayLike:
    """선형 Stark 바이어스 v_slope·x/(2·w2) [meV]."""
    value = v_slope * np.asarray(x, dtype=np.float64) / (2.0 * w2)
    return float(value) if np.ndim(x) == 0 else value


def total_potential(x: np.ndarray, p: DqdParams, v_slope: float) -> np.ndarray:
    return evaluate_dqd(x, p) + evaluate_bias(x, v_slope, p.w2)


def bias_profile(x: np.ndarray, p: DqdParams) -> np.ndarray:
    """단위 기울기(1 meV)에 대한 바이어스 모양 x/(2·w2)."""
    return np.asarray(x, dtype=np.float64) / (2.0 * p.w2)


def detuning_from_slope(v_slope: ArrayLike, lam: float) -> ArrayLike:
    """ε [μeV] = λ·v_slope [meV]·1000."""
    return lam * np.asarray(v_slope) * UEV_PER_MEV if np.ndim(v_slope) else lam * v_slope * UEV_PER_MEV


def slope_from_detuning(epsilon_uev: ArrayLike, lam: float) -> ArrayLike:
    """v_slope [meV] = ε [μeV] / (1000·λ)."""
    if lam <= 0:
        raise ConfigurationError(f"λ 는 양수여야 합니다: {lam}")
    return np.asarray(epsilon_uev) / (lam * UEV_PER_MEV) if np.ndim(epsilon_uev) else epsilon_uev / (lam * UEV_PER_MEV)
