"""
Dynamics Module
===============

Pulse evolution seen from the qubit subspace, with two interchangeable
engines: the full grid solver and the two-level (LSM) model.

Both expose the amplitudes ⟨ψ_i|U|init⟩ for single pulses and for a family
of pulses that differ only in the plateau hold. The family is evaluated with
one forward run through the longest plateau (capturing a snapshot at every
hold) and one backward run of each basis state through the fixed tail, since
⟨ψ_i|U_tail U_hold U_head|init⟩ = ⟨U_tail† ψ_i | U_hold U_head init⟩.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Sequence, Tuple

import numpy as np

from scripts.control.pulses import PulseSpec, suffix_schedule, to_schedule
from scripts.core.wavefunction import Wavefunction, half_line_probability, inner_product
from scripts.dqd.system import DqdSystem
from scripts.dynamics.lsm import (
    DEFAULT_SUBSTEP_PS, HBAR_UEV_PS, TwoLevelHamiltonian, lsm_eigenvectors, lsm_unitary, su2_exp,
)
from scripts.dynamics.propagator import Propagator
from scripts.qubit.basis import QubitBasis

logger = logging.getLogger(__name__)


class QubitDynamics(ABC):
    """펄스 전파 엔진의 공통 인터페이스입니다."""

    name = "abstract"

    @abstractmethod
    def basis_state(self, a: complex, b: complex) -> Any:
        """a ψ0 + b ψ1."""

    @abstractmethod
    def eigenstate(self, epsilon: float, index: int = 0) -> Any:
        """디튜닝 ε 의 본딩(0)/안티본딩(1) 상태."""

    @abstractmethod
    def evolve(self, spec: PulseSpec, initial: Any) -> Any:
        """펄스 전체를 전파한 최종 상태."""

    @abstractmethod
    def amplitudes(self, state: Any) -> Tuple[complex, complex]:
        """(⟨ψ0|state⟩, ⟨ψ1|state⟩)."""

    @abstractmethod
    def p_right(self, state: Any) -> float:
        """오른쪽 점 확률."""

    @abstractmethod
    def scan(self, spec: PulseSpec, holds: Sequence[float], initials: Sequence[Any]) -> np.ndarray:
        """
        유지 시간만 다른 펄스 묶음의 진폭.

        Returns:
            np.ndarray: shape (len(holds), len(initials), 2), [h, k, i] = ⟨ψ_i|U_h|init_k⟩
        """

    # ------------------------------------------------------------------
    def pulse_amplitudes(self, spec: PulseSpec, initial: Any) -> Tuple[complex, complex]:
        return self.amplitudes(self.evolve(spec, initial))

    def qubit_block(self, spec: PulseSpec) -> np.ndarray:
        """Q_ij = ⟨ψ_i|U|ψ_j⟩ (2×2). 누설이 있으면 유니터리가 아닙니다."""
        return self.qubit_block_scan(spec, [spec.hold])[0]

    def qubit_block_scan(self, spec: PulseSpec, holds: Sequence[float]) -> np.ndarray:
        amps = self.scan(spec, holds, [self.basis_state(1.0, 0.0), self.basis_state(0.0, 1.0)])
        return np.transpose(amps, (0, 2, 1))


class GridDynamics(QubitDynamics):
    """
    격자 TDSE 엔진입니다.

    Args:
        system (DqdSystem): 보정된 이중 양자점
        basis (QubitBasis): 큐비트 기저
        propagator (Propagator): leapfrog 전파기 (system 과 같은 격자)
    """

    name = "grid"

    def __init__(self, system: DqdSystem, basis: QubitBasis, propagator: Propagator):
        self.system = system
        self.basis = basis
        self.propagator = propagator
        self.grid = system.grid

    def basis_state(self, a: complex, b: complex) -> Wavefunction:
        return self.basis.compose(a, b)

    def eigenstate(self, epsilon: float, index: int = 0) -> Wavefunction:
        return self.system.eigenpairs(epsilon)[index].state

    def evolve(self, spec: PulseSpec, initial: Wavefunction) -> Wavefunction:
        schedule = to_schedule(spec, self.system.lam)
        return self.propagator.evolve(initial, schedule, spec.duration, t_start=0.0).final.destagger()

    def amplitudes(self, state: Wavefunction) -> Tuple[complex, complex]:
        return self.basis.project(state)

    def p_right(self, state: Wavefunction) -> float:
        return half_line_probability(state, self.grid, "right")

    def scan(self, spec: PulseSpec, holds: Sequence[float], initials: Sequence[Wavefunction]) -> np.ndarray:
        holds = [float(h) for h in holds]
        template = spec.with_hold(max(holds))
        lam = self.system.lam
        schedule = to_schedule(template, lam)
        start, longest = template.plateau_window()
        tail, tail_length = suffix_schedule(template, lam)

        backs = [
            self.propagator.evolve(psi, tail, tail_length, direction=-1).final.destagger()
            for psi in (self.basis.psi0, self.basis.psi1)
        ]
        result = np.zeros((len(holds), len(initials), 2), dtype=complex)
        for k, init in enumerate(initials):
            head = self.propagator.evolve(init, schedule, start, t_start=0.0).final
            plateau = self.propagator.evolve(head, schedule, longest, t_start=start, capture_times=holds)
            for h, hold in enumerate(holds):
                snapshot = plateau.captures[hold]
                result[h, k] = [inner_product(back, snapshot, self.grid) for back in backs]
        logger.debug(f"격자 스캔 완료: {len(holds)} 유지 시간 × {len(initials)} 초기 상태")
        return result


class TwoLevelDynamics(QubitDynamics):
    """
    LSM 2준위 엔진입니다. 상태는 (ψ0, ψ1) 진폭 벡터입니다.

    Args:
        lam (float): 보정 상수 λ
        delta (float): Δ [μeV]
        p0, p1 (float): 판독 확률 (기본값은 이상적인 1, 0)
        substep_ps (float): Magnus 단계 크기
    """

    name = "lsm"

    def __init__(self, lam: float, delta: float, p0: float = 1.0, p1: float = 0.0,
                 substep_ps: float = DEFAULT_SUBSTEP_PS):
        self.lam = lam
        self.delta = delta
        self.p0 = p0
        self.p1 = p1
        self.substep_ps = substep_ps

    @classmethod
    def from_basis(cls, lam: float, basis: QubitBasis, substep_ps: float = DEFAULT_SUBSTEP_PS) -> "TwoLevelDynamics":
        return cls(lam, basis.delta, basis.p0, basis.p1, substep_ps)

    def basis_state(self, a: complex, b: complex) -> np.ndarray:
        return np.array([a, b], dtype=complex)

    def eigenstate(self, epsilon: float, index: int = 0) -> np.ndarray:
        return lsm_eigenvectors(epsilon, self.delta)[index].astype(complex)

    def _unitary(self, spec: PulseSpec) -> np.ndarray:
        schedule = to_schedule(spec, self.lam)
        return lsm_unitary(schedule, self.lam, self.delta, 0.0, spec.duration, self.substep_ps)

    def evolve(self, spec: PulseSpec, initial: np.ndarray) -> np.ndarray:
        return self._unitary(spec) @ np.asarray(initial, dtype=complex)

    def amplitudes(self, state: np.ndarray) -> Tuple[complex, complex]:
        return complex(state[0]), complex(state[1])

    def p_right(self, state: np.ndarray) -> float:
        # the ψ0/ψ1 right-dot cross term vanishes for the optimal basis
        return float(abs(state[0]) ** 2 * self.p0 + abs(state[1]) ** 2 * self.p1)

    def scan(self, spec: PulseSpec, holds: Sequence[float], initials: Sequence[np.ndarray]) -> np.ndarray:
        template = spec.with_hold(max(float(h) for h in holds))
        schedule = to_schedule(template, self.lam)
        start, longest = template.plateau_window()
        head = lsm_unitary(schedule, self.lam, self.delta, 0.0, start, self.substep_ps)
        tail = lsm_unitary(schedule, self.lam, self.delta, start + longest, template.duration, self.substep_ps)
        plateau_epsilon = template.baseline + template.amplitude
        generator = -1j * TwoLevelHamiltonian(plateau_epsilon, self.delta).matrix() / HBAR_UEV_PS
        stacked = np.column_stack([np.asarray(v, dtype=complex) for v in initials])
        result = np.zeros((len(holds), len(initials), 2), dtype=complex)
        for h, hold in enumerate(holds):
            U = tail @ su2_exp(generator * float(hold)) @ head
            result[h] = (U @ stacked).T
        return result
