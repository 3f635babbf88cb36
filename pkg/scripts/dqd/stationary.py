"""
Stationary Module
=================

Three-point finite-difference Hamiltonian on the grid interior and its lowest
eigenpairs (bonding/antibonding states of the double dot).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from scripts.core.errors import DegenerateSpectrumError, DimensionError, SolverError
from scripts.core.units import Grid, UnitSystem
from scripts.core.wavefunction import Wavefunction
from scripts.dqd.potential import DqdParams, total_potential

logger = logging.getLogger(__name__)

DEGENERACY_GAP_MEV = 1e-9
RESIDUAL_TOLERANCE = 1e-8
SIGN_THRESHOLD = 1e-6


@dataclass(frozen=True, eq=False)
class TridiagonalHamiltonian:
    """
    벽을 제외한 내부 격자점(n−2개)에 대한 대칭 삼중대각 해밀토니안입니다.

    diag = 2K/dx² + V(x_m), off = −K/dx² (K = ħ²/2m*).
    """
    diag: np.ndarray
    off: np.ndarray
    grid: Grid
    potential: np.ndarray

    def apply(self, values: np.ndarray) -> np.ndarray:
        """전체 격자 배열에 H 를 적용합니다. 벽 값은 0 으로 둡니다."""
        values = np.asarray(values)
        if values.shape[0] != self.grid.n_points:
            raise DimensionError(f"배열 길이({values.shape[0]})가 격자 크기({self.grid.n_points})와 다릅니다.")
        inner = values[1:-1]
        out = np.zeros_like(values)
        out[1:-1] = self.diag * inner
        out[1:-2] += self.off * inner[1:]
        out[2:-1] += self.off * inner[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)

    @property
    def size(self) -> int:
        return int(self.diag.shape[0])


@dataclass(frozen=True, eq=False)
class EigenPair:
    energy: float
    state: Wavefunction
    index: int


def hamiltonian_from_potential(potential: np.ndarray, grid: Grid, units: UnitSystem = UnitSystem()) -> TridiagonalHamiltonian:
    """
    임의의 포텐셜 배열 [meV] 로 해밀토니안을 만듭니다.

    Raises:
        DimensionError: 포텐셜 길이가 격자 크기와 다를 경우
    """
    potential = np.asarray(potential, dtype=np.float64)
    if potential.shape != (grid.n_points,):
        raise DimensionError(f"포텐셜 길이({potential.shape})가 격자 크기({grid.n_points})와 다릅니다.")
    kinetic = units.kinetic_prefactor / grid.dx ** 2
    diag = 2.0 * kinetic + potential[grid.interior]
    off = np.full(grid.n_points - 3, -kinetic)
    return TridiagonalHamiltonian(diag=diag, off=off, grid=grid, potential=potential)


def build_hamiltonian(p: DqdParams, v_slope: float, grid: Grid, units: UnitSystem = UnitSystem()) -> TridiagonalHamiltonian:
    """
    DQD + 바이어스 포텐셜의 해밀토니안을 만듭니다.

    Args:
        p (DqdParams): 포텐셜 매개변수
        v_slope (float): 바이어스 기울기 [meV]
        grid (Grid): 격자
        units (UnitSystem): 단위계

    Returns:
        TridiagonalHamiltonian: 내부 격자점 해밀토니안
    """
    return hamiltonian_from_potential(total_potential(grid.x, p, v_slope), grid, units)


def _fix_sign(values: np.ndarray, x: np.ndarray, index: int) -> np.ndarray:
    # ground: psi(0) > 0; others: positive at first significant node with x > 0
    if index == 0 and x[0] <= 0.0 <= x[-1]:
        at_origin = np.interp(0.0, x, values)
        if abs(at_origin) > SIGN_THRESHOLD:
            return values if at_origin > 0 else -values
    candidates = np.flatnonzero((x > 0) & (np.abs(values) > SIGN_THRESHOLD))
    if candidates.size == 0:
        candidates = np.flatnonzero(np.abs(values) > SIGN_THRESHOLD)
    if candidates.size == 0:
        return values
    return values if values[candidates[0]] > 0 else -values


def lowest_eigenpairs(H: TridiagonalHamiltonian, k: int = 2) -> List[EigenPair]:
    """
    가장 낮은 k 개의 고유쌍을 구합니다 (이분법 + 역반복, LAPACK stebz/stein).

    Args:
        H (TridiagonalHamiltonian): 해밀토니안
        k (int): 구할 고유쌍 수 (>= 1)

    Returns:
        List[EigenPair]: 에너지 오름차순, ∑|ψ|²dx = 1 로 정규화된 실수 상태

    Raises:
        SolverError: 수렴 실패 또는 잔차 초과
        DegenerateSpectrumError: E_1 − E_0 가 1e−9 meV 보다 작을 경우
    """
    if k < 1:
        raise ValueError(f"k 는 1 이상이어야 합니다: {k}")
    if k > H.size:
        raise ValueError(f"k({k}) 가 내부 격자점 수({H.size})보다 큽니다.")
    try:
        energies, vectors = eigh_tridiagonal(
            H.diag, H.off, select="i", select_range=(0, k - 1), lapack_driver="stebz"
        )
    except (LinAlgError, ValueError) as e:
        raise SolverError(f"삼중대각 고유값 풀이 실패: {e}", {"k": k, "size": H.size})

    if k >= 2 and energies[1] - energies[0] < DEGENERACY_GAP_MEV:
        raise DegenerateSpectrumError(
            f"E_AB − E_B = {energies[1] - energies[0]:.3e} meV 로 준위가 겹칩니다.",
            {"energies_mev": energies.tolist()},
        )

    grid = H.grid
    pairs = []
    h_norm = float(np.max(np.abs(H.diag)) + 2.0 * np.max(np.abs(H.off), initial=0.0))
    report = []
    for i in range(k):
        full = np.zeros(grid.n_points)
        full[grid.interior] = vectors[:, i]
        h_state = H.apply(full)
        residual = float(np.linalg.norm(h_state - energies[i] * full))
        allowed = max(RESIDUAL_TOLERANCE * float(np.linalg.norm(h_state)), 64 * np.finfo(float).eps * h_norm)
        report.append({"index": i, "energy_mev": float(energies[i]), "residual": residual, "allowed": allowed})
        if not np.isfinite(residual) or residual > allowed:
            raise SolverError(f"고유벡터 {i} 의 잔차({residual:.3e})가 허용치({allowed:.3e})를 넘었습니다.", {"residuals": report})
        full = _fix_sign(full / np.sqrt(grid.dx), grid.x, i)
        pairs.append(EigenPair(energy=float(energies[i]), state=Wavefunction.from_real(full), index=i))
    return pairs


@lru_cache(maxsize=4096)
def solve_dqd(p: DqdParams, v_slope: float, grid: Grid, units: UnitSystem = UnitSystem(), k: int = 2) -> Tuple[EigenPair, ...]:
    """같은 (p, v_slope, grid) 에 대한 반복 풀이를 캐시합니다."""
    return tuple(lowest_eigenpairs(build_hamiltonian(p, float(v_slope), grid, units), k))


def bonding_antibonding(p: DqdParams, v_slope: float, grid: Grid, units: UnitSystem = UnitSystem()) -> Tuple[EigenPair, EigenPair]:
    """(ψ_B, ψ_AB) 고유쌍을 반환합니다."""
    pairs = solve_dqd(p, float(v_slope), grid, units, 2)
    return pairs[0], pairs[1]


def splitting_mev(p: DqdParams, v_slope: float, grid: Grid, units: UnitSystem = UnitSystem()) -> float:
    bonding, antibonding = bonding_antibonding(p, v_slope, grid, units)
    return antibonding.energy - bonding.energy
