"""
Qubit Basis Module
==================

Maximally localised states, the correlation map D(ε, ε′), the fidelity-bounded
operating range, the optimal qubit basis (ψ0, ψ1) and the charge-readout algebra.
"""

import logging
import warnings
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
import pandas as pd

from scripts.core.errors import AmbiguityError, ConfigurationError, LeakageWarning
from scripts.core.units import Grid
from scripts.core.wavefunction import (
    Wavefunction, half_line_overlap, half_line_probability, half_line_weights, inner_product,
)
from scripts.dqd.system import DqdSystem
from scripts.dynamics.lsm import lsm_eigenvectors

logger = logging.getLogger(__name__)

AMBIGUITY_GAP = 1e-12
READOUT_SLACK = 1e-6


@dataclass(frozen=True, eq=False)
class LocalizedPair:
    """
    디튜닝 ε 에서 최대 국소화 상태 R = αψ_B + βψ_AB, L = βψ_B − αψ_AB 입니다.
    """
    epsilon: float
    alpha: float
    beta: float
    R: Wavefunction
    L: Wavefunction


@dataclass(frozen=True, eq=False)
class QubitBasis:
    """
    최적 큐비트 기저입니다.

    Attributes:
        psi0, psi1: ε=0 의 R₀, L₀ (오른쪽/왼쪽 국소화)
        delta: Δ [μeV]
        p0, p1: ψ0, ψ1 의 오른쪽 점 확률
        operating_range: (ε_min, ε_max) [μeV]
        alpha0, beta0: ε=0 의 국소화 계수
    """
    psi0: Wavefunction
    psi1: Wavefunction
    delta: float
    p0: float
    p1: float
    operating_range: Tuple[float, float]
    grid: Grid = field(repr=False)
    alpha0: float = float(1.0 / np.sqrt(2.0))
    beta0: float = float(1.0 / np.sqrt(2.0))

    def restriction(self, which: int, side: str) -> np.ndarray:
        """f_{0L}, f_{0R}, f_{1L}, f_{1R}: ψ0/ψ1 를 한쪽 반직선으로 제한한 배열."""
        psi = self.psi0 if which == 0 else self.psi1
        return half_line_weights(self.grid, side) * psi.to_complex()

    def compose(self, a: complex, b: complex) -> Wavefunction:
        return Wavefunction.from_complex(a * self.psi0.to_complex() + b * self.psi1.to_complex())

    def project(self, psi: Wavefunction) -> Tuple[complex, complex]:
        return inner_product(self.psi0, psi, self.grid), inner_product(self.psi1, psi, self.grid)


@dataclass(frozen=True, eq=False)
class OperatingRange:
    low: float
    high: float
    table: pd.DataFrame = field(repr=False)


# -------------------------------------------------------------- localization
def localized_pair(system: DqdSystem, epsilon: float) -> LocalizedPair:
    """
    M_ij = ∫₀^∞ ψ_i ψ_j dx ({ψ_B, ψ_AB}) 의 주 고유벡터로 (α, β) 를 정합니다 (α > 0).

    Args:
        system (DqdSystem): 보정된 DQD
        epsilon (float): 디튜닝 [μeV]

    Returns:
        LocalizedPair: (α, β, R, L)

    Raises:
        AmbiguityError: M 의 두 고유값 차가 1e−12 보다 작을 경우
    """
    bonding, antibonding = system.eigenpairs(epsilon)
    grid = system.grid
    b, ab = bonding.state, antibonding.state
    m01 = half_line_overlap(b, ab, grid, "right").real
    M = np.array([
        [half_line_probability(b, grid, "right"), m01],
        [m01, half_line_probability(ab, grid, "right")],
    ])
    values, vectors = np.linalg.eigh(M)
    if abs(values[1] - values[0]) < AMBIGUITY_GAP:
        raise AmbiguityError(f"ε={epsilon} μeV 에서 국소화 행렬 고유값이 겹칩니다.", {"eigenvalues": values.tolist()})
    alpha, beta = vectors[:, 1]
    if alpha < 0 or (alpha == 0 and beta < 0):
        alpha, beta = -alpha, -beta
    b_c, ab_c = b.to_complex(), ab.to_complex()
    R = Wavefunction.from_complex(alpha * b_c + beta * ab_c)
    L = Wavefunction.from_complex(beta * b_c - alpha * ab_c)
    return LocalizedPair(epsilon=float(epsilon), alpha=float(alpha), beta=float(beta), R=R, L=L)


def _density_overlap(a: Wavefunction, b: Wavefunction, grid: Grid) -> float:
    da, db = a.density(), b.density()
    norm = np.sqrt(np.sum(da * da) * np.sum(db * db))
    return float(np.sum(da * db) / norm) if norm > 0 else 0.0


def correlation_d(system: DqdSystem, epsilon: float, epsilon_prime: float, literal: bool = False,
                  pairs: Optional[Dict[float, LocalizedPair]] = None) -> float:
    """
    D(ε, ε′) = 1 − (|⟨L_ε, L_ε′⟩|² + |⟨R_ε, R_ε′⟩|²)/2.

    literal=True 이면 밀도 곱 적분을 자기 자신으로 정규화한 비교용 값을 계산합니다.
    """
    cache = pairs if pairs is not None else {}
    for eps in (epsilon, epsilon_prime):
        if eps not in cache:
            cache[eps] = localized_pair(system, eps)
    p, q = cache[epsilon], cache[epsilon_prime]
    grid = system.grid
    if literal:
        overlap = _density_overlap(p.L, q.L, grid) + _density_overlap(p.R, q.R, grid)
    else:
        overlap = abs(inner_product(p.L, q.L, grid)) ** 2 + abs(inner_product(p.R, q.R, grid)) ** 2
    return float(min(1.0, max(0.0, 1.0 - 0.5 * overlap)))


@dataclass(frozen=True, eq=False)
class DMap:
    epsilons: np.ndarray
    values: np.ndarray
    optimal_epsilon: float

    @property
    def column_average(self) -> np.ndarray:
        return self.values.mean(axis=0)

    def to_frame(self) -> pd.DataFrame:
        """긴 형식 (epsilon_uev, epsilon_prime_uev, d)."""
        e, e_prime = np.meshgrid(self.epsilons, self.epsilons, indexing="ij")
        return pd.DataFrame({"epsilon_uev": e.ravel(), "epsilon_prime_uev": e_prime.ravel(), "d": self.values.ravel()})


def d_map(system: DqdSystem, epsilons: Iterable[float], literal: bool = False) -> DMap:
    """
    D(ε, ε′) 전체 행렬과 열 평균이 가장 작은 ε′ (동률이면 |ε′| 최소) 를 구합니다.
    """
    eps = np.asarray(list(epsilons), dtype=np.float64)
    cache: Dict[float, LocalizedPair] = {}
    values = np.zeros((eps.size, eps.size))
    for i, e1 in enumerate(eps):
        for j in range(i, eps.size):
            values[i, j] = values[j, i] = correlation_d(system, float(e1), float(eps[j]), literal, cache)
    averages = values.mean(axis=0)
    best = np.flatnonzero(np.isclose(averages, averages.min(), rtol=0.0, atol=1e-12))
    optimal = float(eps[best[np.argmin(np.abs(eps[best]))]])
    logger.info(f"D 지도 계산 완료: {eps.size}×{eps.size}, 최적 ε′ = {optimal:.4g} μeV")
    return DMap(epsilons=eps, values=values, optimal_epsilon=optimal)


# ----------------------------------------------------------- qubit basis
def _basis_states(system: DqdSystem) -> Tuple[LocalizedPair, Wavefunction, Wavefunction]:
    pair0 = localized_pair(system, 0.0)
    return pair0, pair0.R, pair0.L


def basis_fidelities(system: DqdSystem, psi0: Wavefunction, psi1: Wavefunction, delta: float, epsilon: float) -> Tuple[float, float]:
    """LSM 고유벡터로 조합한 상태와 실제 본딩/안티본딩 상태의 충실도."""
    grid = system.grid
    bonding, antibonding = system.eigenpairs(epsilon)
    vec_b, vec_ab = lsm_eigenvectors(epsilon, delta)
    p0, p1 = psi0.to_complex(), psi1.to_complex()
    model_b = Wavefunction.from_complex(vec_b[0] * p0 + vec_b[1] * p1)
    model_ab = Wavefunction.from_complex(vec_ab[0] * p0 + vec_ab[1] * p1)
    return (
        abs(inner_product(model_b, bonding.state, grid)) ** 2,
        abs(inner_product(model_ab, antibonding.state, grid)) ** 2,
    )


def operating_range(
    system: DqdSystem,
    threshold: float,
    epsilon_max_search: float,
    n_samples: int = 81,
    psi0: Optional[Wavefunction] = None,
    psi1: Optional[Wavefunction] = None,
) -> OperatingRange:
    """
    본딩/안티본딩 충실도가 모두 threshold 이상인 가장 큰 대칭 구간을 찾습니다.

    Args:
        system (DqdSystem): 보정된 DQD
        threshold (float): 충실도 하한 (예: 0.99)
        epsilon_max_search (float): 탐색 한계 [μeV]
        n_samples (int): ±한계 구간 표본 수

    Returns:
        OperatingRange: (−ε, +ε) 와 표본별 충실도 표

    Raises:
        ConfigurationError: ε = 0 에서도 threshold 를 만족하지 못할 경우
    """
    if psi0 is None or psi1 is None:
        _, psi0, psi1 = _basis_states(system)
    delta = system.delta_uev
    samples = np.union1d(np.linspace(-epsilon_max_search, epsilon_max_search, n_samples), [0.0])
    rows = []
    for eps in samples:
        fid_b, fid_ab = basis_fidelities(system, psi0, psi1, delta, float(eps))
        rows.append({"epsilon_uev": float(eps), "fidelity_bonding": fid_b, "fidelity_antibonding": fid_ab})
    table = pd.DataFrame(rows)
    ok = (table["fidelity_bonding"] >= threshold) & (table["fidelity_antibonding"] >= threshold)
    table["within_threshold"] = ok
    at_zero = table.loc[table["epsilon_uev"] == 0.0]
    if not bool(at_zero["within_threshold"].iloc[0]):
        raise ConfigurationError(
            f"ε = 0 에서도 충실도 {threshold} 를 만족하지 못합니다.",
            {"fidelity_bonding": float(at_zero["fidelity_bonding"].iloc[0])},
        )
    failing = table.loc[~ok, "epsilon_uev"].abs()
    if failing.empty:
        edge = float(epsilon_max_search)
    else:
        limit = float(failing.min())
        inside = table.loc[table["epsilon_uev"].abs() < limit, "epsilon_uev"].abs()
        edge = float(inside.max())
    logger.info(f"운영 디튜닝 범위: ±{edge:.4g} μeV (충실도 ≥ {threshold})")
    return OperatingRange(low=-edge, high=edge, table=table)


def build_qubit_basis(
    system: DqdSystem,
    threshold: float = 0.99,
    epsilon_max_search: float = 250.0,
    n_samples: int = 81,
) -> QubitBasis:
    """ε = 0 의 국소화 상태로 (ψ0, ψ1) 를 만들고 P0, P1, 운영 범위를 계산합니다."""
    pair0, psi0, psi1 = _basis_states(system)
    grid = system.grid
    rng = operating_range(system, threshold, epsilon_max_search, n_samples, psi0, psi1)
    basis = QubitBasis(
        psi0=psi0,
        psi1=psi1,
        delta=system.delta_uev,
        p0=half_line_probability(psi0, grid, "right"),
        p1=half_line_probability(psi1, grid, "right"),
        operating_range=(rng.low, rng.high),
        grid=grid,
        alpha0=pair0.alpha,
        beta0=pair0.beta,
    )
    logger.info(f"큐비트 기저: Δ={basis.delta:.4f} μeV, P0={basis.p0:.6f}, P1={basis.p1:.6f}, α₀={basis.alpha0:.6f}")
    return basis


def verify_sign_convention(system: DqdSystem, basis: QubitBasis, epsilon: Optional[float] = None) -> bool:
    """
    양의 디튜닝에서 실제 바닥 상태와 LSM 본딩 상태가 같은 점(왼쪽)에 모이는지 확인합니다.

    Raises:
        ConfigurationError: 국소화 방향이 다를 경우
    """
    eps = epsilon if epsilon is not None else 4.0 * basis.delta
    bonding, _ = system.eigenpairs(eps)
    solver_right = half_line_probability(bonding.state, system.grid, "right")
    vec_b, _ = lsm_eigenvectors(eps, basis.delta)
    model_right = vec_b[0] ** 2 * basis.p0 + vec_b[1] ** 2 * basis.p1
    if (solver_right - 0.5) * (model_right - 0.5) <= 0:
        raise ConfigurationError(
            "LSM 부호 규약이 전체 해와 맞지 않습니다.",
            {"epsilon_uev": eps, "solver_p_right": solver_right, "model_p_right": model_right},
        )
    return True


def localisation_curves(system: DqdSystem, basis: QubitBasis, epsilons: Iterable[float]) -> pd.DataFrame:
    """ε 에 따른 ψ_B, ψ_AB, R_ε, L_ε, ψ0, ψ1 의 오른쪽 점 확률과 P_R(ψ_B)+P_L(ψ_AB)."""
    grid = system.grid
    rows = []
    for eps in epsilons:
        bonding, antibonding = system.eigenpairs(float(eps))
        pair = localized_pair(system, float(eps))
        p_b = half_line_probability(bonding.state, grid, "right")
        p_ab = half_line_probability(antibonding.state, grid, "right")
        rows.append({
            "epsilon_uev": float(eps),
            "p_right_bonding": p_b,
            "p_right_antibonding": p_ab,
            "p_right_R": half_line_probability(pair.R, grid, "right"),
            "p_right_L": half_line_probability(pair.L, grid, "right"),
            "p_right_psi0": basis.p0,
            "p_right_psi1": basis.p1,
            "summed_localisation": p_b + (1.0 - p_ab),
            "alpha": pair.alpha,
            "beta": pair.beta,
        })
    return pd.DataFrame(rows)


# ------------------------------------------------------------------ readout
def readout_coefficients(p_right: float, basis: QubitBasis) -> Tuple[float, float]:
    """
    |β|² = (P_R − P0)/(P1 − P0), |α|² = 1 − |β|².

    P_R 이 [min(P0,P1), max(P0,P1)] 밖이면 (1e−6 여유) LeakageWarning 을 내고
    결과를 [0, 1] 로 자릅니다.
    """
    lo, hi = min(basis.p0, basis.p1), max(basis.p0, basis.p1)
    if p_right < lo - READOUT_SLACK or p_right > hi + READOUT_SLACK:
        message = f"P_R={p_right:.6f} 이 큐비트 구간 [{lo:.6f}, {hi:.6f}] 밖입니다."
        logger.warning(message)
        warnings.warn(message, LeakageWarning, stacklevel=2)
    beta2 = (p_right - basis.p0) / (basis.p1 - basis.p0)
    beta2 = float(min(1.0, max(0.0, beta2)))
    return beta2, 1.0 - beta2


def distance_s(target: Wavefunction, psi: Wavefunction, grid: Grid) -> float:
    """S = 1 − |⟨target, ψ⟩|²."""
    return float(min(1.0, max(0.0, 1.0 - abs(inner_product(target, psi, grid)) ** 2)))
