"""
Tomography Module
=================

Rotation tomography on the Bloch sphere and linear decomposition of pulse
families.

Three test states ψ0, (ψ0+ψ1)/√2 and (ψ0+iψ1)/√2 are sent through a pulse; their
final Bloch vectors are fitted with the closest proper rotation. A family of
rotations measured at several plateau times is then written as

    R(t_p) = R_n(ϑ₀ + κ (t_p − c τ)) · F

where F is a fixed rotation (acting first) with no component about n.
"""

import logging
import warnings
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.spatial.transform import Rotation
from sklearn.linear_model import LinearRegression

from scripts.control.dynamics import QubitDynamics
from scripts.control.pulses import PulseSpec
from scripts.core.errors import DecompositionError, NonRotationWarning, SubspaceViolationError
from scripts.dynamics.lsm import bloch_vector

logger = logging.getLogger(__name__)

MAX_LEAKAGE = 0.02
MAX_RESIDUAL = 0.01
MAX_FIT_RESIDUAL_RAD = 0.05
COLLINEAR_TOLERANCE = 1e-6

TEST_STATES = np.array([
    [1.0, 0.0],
    [1.0 / np.sqrt(2.0), 1.0 / np.sqrt(2.0)],
    [1.0 / np.sqrt(2.0), 1j / np.sqrt(2.0)],
], dtype=complex)

X_AXIS = np.array([1.0, 0.0, 0.0])
Z_AXIS = np.array([0.0, 0.0, 1.0])


@dataclass
class RotationEstimate:
    """
    단층촬영으로 얻은 회전입니다.

    Attributes:
        rotation_matrix: 블로흐 벡터에 작용하는 3×3 SO(3) 행렬
        axis, angle: 회전축(단위벡터)과 각도 [rad, 0..π]
        leakage: 시험 상태 중 최대 누설 확률
        residual: 직교 맞춤의 Frobenius 오차
        state_leakage: 시험 상태별 누설 확률
        initial_bloch, final_bloch: 시험 상태의 시작/최종 블로흐 벡터 (행)
        spec: 펄스 정의
    """
    rotation_matrix: np.ndarray
    axis: np.ndarray
    angle: float
    leakage: float
    residual: float
    state_leakage: np.ndarray = field(default_factory=lambda: np.zeros(3))
    initial_bloch: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))
    final_bloch: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))
    spec: Optional[PulseSpec] = None

    @property
    def rotation(self) -> Rotation:
        return Rotation.from_matrix(self.rotation_matrix)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "axis": self.axis.tolist(),
            "angle_rad": self.angle,
            "leakage": self.leakage,
            "residual": self.residual,
            "state_leakage": self.state_leakage.tolist(),
            "rotation_matrix": self.rotation_matrix.tolist(),
            "final_bloch": self.final_bloch.tolist(),
            "pulse": self.spec.to_dict() if self.spec is not None else None,
        }


def axis_angle(rotation: Rotation) -> tuple:
    """(단위 축, 각도). 항등 회전의 축은 ẑ 로 둡니다."""
    rotvec = rotation.as_rotvec()
    angle = float(np.linalg.norm(rotvec))
    if angle < 1e-12:
        return Z_AXIS.copy(), 0.0
    return rotvec / angle, angle


def estimate_from_amplitudes(amplitudes: np.ndarray, spec: Optional[PulseSpec] = None,
                             max_leakage: float = MAX_LEAKAGE, max_residual: float = MAX_RESIDUAL) -> RotationEstimate:
    """
    시험 상태 최종 진폭으로부터 회전을 맞춥니다.

    Args:
        amplitudes (np.ndarray): shape (3, 2), 시험 상태별 (⟨ψ0|ψ_f⟩, ⟨ψ1|ψ_f⟩)

    Raises:
        SubspaceViolationError: 누설이 max_leakage 를 넘을 경우
        DecompositionError: 최종 블로흐 벡터가 한 직선 위에 있을 경우
    """
    amplitudes = np.asarray(amplitudes, dtype=complex)
    kept = np.sum(np.abs(amplitudes) ** 2, axis=1)
    state_leakage = np.clip(1.0 - kept, 0.0, None)
    leakage = float(state_leakage.max())
    if leakage > max_leakage:
        raise SubspaceViolationError(
            f"큐비트 부분공간 밖 누설 {leakage:.4f} 가 허용치 {max_leakage} 를 넘었습니다.",
            {"state_leakage": state_leakage.tolist()},
        )
    initial = np.array([bloch_vector(*p) for p in TEST_STATES])
    final = np.array([bloch_vector(*(a / np.sqrt(k))) for a, k in zip(amplitudes, kept)])
    singular = np.linalg.svd(final, compute_uv=False)
    if singular[1] < COLLINEAR_TOLERANCE:
        raise DecompositionError("최종 블로흐 벡터가 한 직선 위에 있어 회전을 정할 수 없습니다.")

    rotation, rssd = Rotation.align_vectors(final, initial)
    residual = float(rssd)
    if residual > max_residual:
        message = f"SO(3) 맞춤 잔차 {residual:.4f} 가 {max_residual} 를 넘었습니다."
        logger.warning(message)
        warnings.warn(message, NonRotationWarning, stacklevel=2)
    axis, angle = axis_angle(rotation)
    return RotationEstimate(
        rotation_matrix=rotation.as_matrix(), axis=axis, angle=angle, leakage=leakage, residual=residual,
        state_leakage=state_leakage, initial_bloch=initial, final_bloch=final, spec=spec,
    )


def tomography(spec: PulseSpec, dynamics: QubitDynamics) -> RotationEstimate:
    """
    펄스 하나의 회전을 단층촬영합니다.

    전파는 선형이므로 ψ0, ψ1 두 상태의 상(Q 행렬)만 구해 세 시험 상태을 조합합니다.
    """
    block = dynamics.qubit_block(spec)
    return estimate_from_amplitudes(TEST_STATES @ block.T, spec)


def tomography_family(spec: PulseSpec, plateau_times: Sequence[float], dynamics: QubitDynamics) -> List[RotationEstimate]:
    """
    t_p 만 다른 펄스 묶음을 한 번의 평탄부 스캔으로 단층촬영합니다.

    Raises:
        PulseSpecError: spin echo 에서 t_p < 4τ 인 값이 있을 경우
    """
    specs = [spec.with_plateau_time(float(tp)) for tp in plateau_times]
    blocks = dynamics.qubit_block_scan(spec, [s.hold for s in specs])
    estimates = [estimate_from_amplitudes(TEST_STATES @ block.T, s) for block, s in zip(blocks, specs)]
    logger.info(f"단층촬영 묶음 완료: {len(estimates)} 개 t_p")
    return estimates


# ------------------------------------------------------------ decomposition
@dataclass
class RotationFamily:
    """
    R(t_p) = R_n(ϑ₀ + κ(t_p − cτ)) · F 로 맞춘 회전 묶음입니다.

    Attributes:
        axis: 묶음 회전축 n
        kappa: 각속도 κ [rad/ps]
        theta0: 오프셋 ϑ₀ [rad]
        fixed_matrix: 고정 회전 F (n 방향 성분 없음)
        fixed_axis, fixed_angle: F 의 축/각
        offset_ps: c·τ
        max_residual: 선형 맞춤 최대 잔차 [rad]
        table: t_p 별 측정/맞춤 각
    """
    axis: np.ndarray
    kappa: float
    theta0: float
    fixed_matrix: np.ndarray
    fixed_axis: np.ndarray
    fixed_angle: float
    offset_ps: float
    max_residual: float
    table: pd.DataFrame = field(repr=False)

    def rotation_at(self, plateau_time: float) -> Rotation:
        theta = self.theta0 + self.kappa * (plateau_time - self.offset_ps)
        return Rotation.from_rotvec(theta * self.axis) * Rotation.from_matrix(self.fixed_matrix)

    def axis_error_deg(self, reference: np.ndarray) -> float:
        """n 과 ±reference 사이 각 [deg]."""
        cosine = abs(float(np.dot(self.axis, reference)))
        return float(np.degrees(np.arccos(min(1.0, cosine))))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "axis": self.axis.tolist(),
            "kappa_rad_per_ps": self.kappa,
            "theta0_rad": self.theta0,
            "fixed_axis": self.fixed_axis.tolist(),
            "fixed_angle_rad": self.fixed_angle,
            "offset_ps": self.offset_ps,
            "max_residual_rad": self.max_residual,
        }


def _family_axis(rotvecs: np.ndarray) -> np.ndarray:
    # principal direction of the relative rotation vectors
    _, _, vt = np.linalg.svd(rotvecs, full_matrices=False)
    axis = vt[0]
    if axis[np.argmax(np.abs(axis))] < 0:
        axis = -axis
    return axis / np.linalg.norm(axis)


def swing_twist(rotation: Rotation, axis: np.ndarray) -> tuple:
    """
    rotation = twist · swing 로 분해합니다 (swing 이 먼저 작용, n 성분 없음).

    Returns:
        tuple: (twist 각 [rad], swing Rotation)
    """
    x, y, z, w = rotation.as_quat()
    projection = float(np.dot([x, y, z], axis))
    norm = np.hypot(w, projection)
    if norm < 1e-12:
        twist = Rotation.identity()
    else:
        twist = Rotation.from_quat(np.concatenate([axis * projection / norm, [w / norm]]))
    swing = twist.inv() * rotation
    twist_angle = 2.0 * np.arctan2(projection, w) if norm >= 1e-12 else 0.0
    twist_angle = float(np.angle(np.exp(1j * twist_angle)))
    return twist_angle, swing


def decompose_rotation(estimates: Sequence[RotationEstimate], plateau_times: Optional[Sequence[float]] = None,
                       offset_ps: Optional[float] = None, max_residual: float = MAX_FIT_RESIDUAL_RAD) -> RotationFamily:
    """
    여러 t_p 의 회전을 선형 묶음과 고정 회전으로 분해합니다.

    Args:
        estimates: 같은 진폭, 서로 다른 t_p 의 단층촬영 결과 (5개 이상)
        plateau_times: 각 결과의 t_p. 없으면 estimate.spec 에서 읽습니다
        offset_ps: c·τ. 없으면 estimate.spec.time_offset

    Raises:
        DecompositionError: 결과가 5개 미만, t_p 중복, 또는 선형 맞춤 잔차 > max_residual
    """
    if len(estimates) < 5:
        raise DecompositionError(f"단층촬영 결과가 5개 이상 필요합니다: {len(estimates)}")
    if plateau_times is None:
        plateau_times = [e.spec.plateau_time for e in estimates]
    if offset_ps is None:
        offset_ps = estimates[0].spec.time_offset if estimates[0].spec is not None else 0.0
    times = np.asarray(plateau_times, dtype=np.float64)
    if np.unique(times).size != times.size:
        raise DecompositionError("t_p 값이 서로 달라야 합니다.")
    order = np.argsort(times)
    times = times[order]
    rotations = [estimates[i].rotation for i in order]

    reference = rotations[0]
    relative = np.array([(r * reference.inv()).as_rotvec() for r in rotations[1:]])
    if np.max(np.linalg.norm(relative, axis=1)) < 1e-9:
        raise DecompositionError("t_p 에 따라 회전이 변하지 않아 축을 정할 수 없습니다.")
    axis = _family_axis(relative)

    signed = np.array([0.0] + [float(np.linalg.norm(v)) * np.sign(np.dot(v, axis)) for v in relative])
    angles = np.unwrap(signed)
    x = times - offset_ps
    model = LinearRegression().fit(x.reshape(-1, 1), angles)
    kappa = float(model.coef_[0])
    fitted = model.predict(x.reshape(-1, 1))
    residuals = angles - fitted
    worst = float(np.max(np.abs(residuals)))
    if worst > max_residual:
        raise DecompositionError(
            f"회전각이 t_p 에 선형이 아닙니다 (최대 잔차 {worst:.4f} rad).", {"max_residual": worst}
        )

    pre = [Rotation.from_rotvec(-kappa * xi * axis) * r for xi, r in zip(x, rotations)]
    combined = Rotation.concatenate(pre).mean()
    theta0, fixed = swing_twist(combined, axis)
    fixed_axis, fixed_angle = axis_angle(fixed)
    table = pd.DataFrame({
        "plateau_time_ps": times,
        "shifted_time_ps": x,
        "relative_angle_rad": angles,
        "fit_rad": fitted,
        "residual_rad": residuals,
    })
    logger.info(f"회전 분해: κ={kappa:.5f} rad/ps, ϑ₀={theta0:.4f}, 고정 회전각={fixed_angle:.4f}")
    return RotationFamily(axis, kappa, theta0, fixed.as_matrix(), fixed_axis, fixed_angle, float(offset_ps), worst, table)


def relabel_minus_psi1(rotation_matrix: np.ndarray) -> np.ndarray:
    """
    최종 상태를 ψ1 → −ψ1 로 다시 표기한 회전 (R_z(π)·R).

    spin echo σx 묶음의 고정 R_z(π) 를 없앱니다.
    """
    return Rotation.from_rotvec(np.pi * Z_AXIS).as_matrix() @ np.asarray(rotation_matrix)


# ------------------------------------------------------------ certification
@dataclass
class Certification:
    gate: str
    passed: bool
    amplitude: float
    axis_error_deg: float
    phase_error_rad: float = 0.0


def oscillation_amplitude(estimates: Sequence[RotationEstimate]) -> float:
    """ψ0 시험 상태의 P(ψ1) 최대 − 최소."""
    p1 = np.array([(1.0 - e.final_bloch[0, 2]) / 2.0 for e in estimates])
    return float(p1.max() - p1.min())


def certify_sigma_x(family: RotationFamily, amplitude: float, min_amplitude: float = 0.99,
                    max_axis_deg: float = 2.0) -> Certification:
    """진폭 ≥ min_amplitude 이고 (고정 회전을 뺀) 축이 x̂ 에서 max_axis_deg 이내."""
    error = family.axis_error_deg(X_AXIS)
    passed = amplitude >= min_amplitude and error <= max_axis_deg
    return Certification("sigma_x", passed, amplitude, error)


def certify_sigma_z(family: RotationFamily, estimates: Sequence[RotationEstimate], amplitude: float,
                    max_amplitude: float = 0.01, max_axis_deg: float = 2.0,
                    max_phase_rad: float = 0.05) -> Certification:
    """진폭 ≤ max_amplitude, 축이 ẑ 근처, 적도 시험 상태의 방위각이 예측과 일치."""
    error = family.axis_error_deg(Z_AXIS)
    worst_phase = 0.0
    for estimate in estimates:
        predicted = family.rotation_at(estimate.spec.plateau_time).apply(estimate.initial_bloch[1])
        measured = estimate.final_bloch[1]
        diff = np.arctan2(measured[1], measured[0]) - np.arctan2(predicted[1], predicted[0])
        worst_phase = max(worst_phase, abs(float(np.angle(np.exp(1j * diff)))))
    passed = amplitude <= max_amplitude and error <= max_axis_deg and worst_phase <= max_phase_rad
    return Certification("sigma_z", passed, amplitude, error, worst_phase)


def sigma_x_score(family: RotationFamily, amplitude: float, max_axis_deg: float = 2.0) -> float:
    """σx 점수: 축 조건을 만족하면 진폭, 아니면 0."""
    return amplitude if family.axis_error_deg(X_AXIS) <= max_axis_deg else 0.0
