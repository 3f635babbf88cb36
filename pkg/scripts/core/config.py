"""
Configuration Module
====================

Flat, unit-suffixed run configuration for every experiment, stored as JSON.
"""

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from scripts.core.errors import ConfigurationError
from scripts.core.units import Grid, UnitSystem

KNOWN_BACKENDS = ("serial", "threaded", "opencl")
PULSE_KINDS = ("trapezoid", "spin_echo")


@dataclass
class RunConfig:
    """
    실험 실행 설정입니다. 키 이름에 단위를 붙여 JSON 으로 저장/로드합니다.
    """
    # DQD potential
    w1_nm: float = 130.0
    w2_nm: float = 240.0
    z0_mev: float = 0.865
    z2_mev: float = 6.92
    w1_left_nm: Optional[float] = None
    w2_left_nm: Optional[float] = None
    z2_left_mev: Optional[float] = None
    effective_mass_ratio: float = 0.067

    # grid and integrator
    x_min_nm: Optional[float] = None
    x_max_nm: Optional[float] = None
    n_points: int = 1024
    dt_ps: Optional[float] = None
    dt_safety: float = 0.8
    max_abs_slope_mev: Optional[float] = None
    backend: str = "serial"
    workers: int = 1
    observer_stride_ps: float = 1.0

    # calibration and basis
    lambda_calibration: Optional[float] = None
    calibration_slope_max_mev: float = 0.05
    calibration_samples: int = 21
    calibration_tolerance: float = 1e-5
    fidelity_threshold: float = 0.99
    epsilon_max_search_uev: float = 250.0
    detuning_samples: int = 81
    correlation_mode: str = "overlap"
    spectrum_samples: int = 101
    spectrum_slope_max_mev: float = 0.5

    # pulses
    tau_ps: float = 90.0
    control_baseline_uev: float = 0.0

    # state preparation (trapezoid)
    prepare_baseline_slope_mev: float = 0.06508
    prepare_tp_min_ps: float = 300.0
    prepare_tp_max_ps: float = 800.0
    prepare_tp_step_ps: float = 2.0
    prepare_amplitude_min_uev: float = 0.0
    prepare_amplitude_max_uev: float = 40.0
    prepare_amplitude_count: int = 41
    prepare_refine_rounds: int = 3

    # amplitude sweep
    sweep_kind: str = "spin_echo"
    sweep_counter_min_uev: float = -250.0
    sweep_counter_max_uev: float = 0.0
    sweep_counter_count: int = 41
    sweep_amplitude_min_uev: float = -50.0
    sweep_amplitude_max_uev: float = 250.0
    sweep_amplitude_count: int = 41
    sweep_hold_max_ps: float = 400.0
    sweep_hold_step_ps: float = 2.0
    sweep_certify: bool = True

    # tomography
    tomography_kind: str = "spin_echo"
    tomography_amplitude_uev: float = 16.5
    tomography_counter_uev: float = -167.4
    tomography_tp_ps: float = 460.0
    tomography_tau_ps: Optional[float] = None
    tomography_family_tp_ps: List[float] = field(default_factory=lambda: [360.0 + 4.0 * i for i in range(26)])

    # readout
    readout_p_right: Optional[float] = None
    readout_trace_path: Optional[str] = None

    # bench
    bench_backends: List[str] = field(default_factory=lambda: ["serial", "threaded"])
    bench_grid_sizes: List[int] = field(default_factory=lambda: [1024, 8192])
    bench_steps: int = 100000

    # run
    seed: int = 1234
    output_dir: str = "output"
    log_level: str = "INFO"
    serial: bool = False

    # ------------------------------------------------------------------ io
    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"알 수 없는 설정 키: {', '.join(unknown)}", {"unknown_keys": unknown})
        config = cls(**data)
        config.validate()
        return config

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "RunConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"설정 파일을 찾을 수 없습니다: {path}")
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"설정 파일 JSON 형식 오류: {path}: {e}")
        return cls.from_dict(data)

    def to_json(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, ensure_ascii=False, indent=2)
        return path

    def replace(self, **changes: Any) -> "RunConfig":
        data = self.to_dict()
        data.update(changes)
        return RunConfig.from_dict(data)

    # ----------------------------------------------------------- validation
    def validate(self) -> None:
        """물리적으로 의미 없는 값이 있으면 ConfigurationError 를 발생시킵니다."""
        positive = {
            "w1_nm": self.w1_nm, "w2_nm": self.w2_nm, "z0_mev": self.z0_mev, "z2_mev": self.z2_mev,
            "effective_mass_ratio": self.effective_mass_ratio, "dt_safety": self.dt_safety,
            "observer_stride_ps": self.observer_stride_ps, "calibration_slope_max_mev": self.calibration_slope_max_mev,
            "calibration_tolerance": self.calibration_tolerance, "spectrum_slope_max_mev": self.spectrum_slope_max_mev,
            "epsilon_max_search_uev": self.epsilon_max_search_uev, "prepare_tp_step_ps": self.prepare_tp_step_ps,
            "sweep_hold_step_ps": self.sweep_hold_step_ps,
        }
        for key, value in positive.items():
            if value is None or value <= 0:
                raise ConfigurationError(f"'{key}' 는 양수여야 합니다: {value}", {"key": key})
        for key in ("tau_ps", "sweep_hold_max_ps", "prepare_tp_min_ps"):
            if getattr(self, key) < 0:
                raise ConfigurationError(f"'{key}' 는 음수일 수 없습니다: {getattr(self, key)}", {"key": key})
        if not self.w1_nm < self.w2_nm:
            raise ConfigurationError(f"w1_nm({self.w1_nm}) < w2_nm({self.w2_nm}) 이어야 합니다.")
        if not self.z2_mev > self.z0_mev:
            raise ConfigurationError(f"z2_mev({self.z2_mev}) > z0_mev({self.z0_mev}) 이어야 합니다.")
        left_w1 = self.w1_left_nm if self.w1_left_nm is not None else self.w1_nm
        left_w2 = self.w2_left_nm if self.w2_left_nm is not None else self.w2_nm
        left_z2 = self.z2_left_mev if self.z2_left_mev is not None else self.z2_mev
        if not 0 < left_w1 < left_w2 or not left_z2 > self.z0_mev:
            raise ConfigurationError("왼쪽 점 매개변수가 0 < w1 < w2, z2 > z0 를 만족하지 않습니다.")
        if self.dt_ps is not None and self.dt_ps <= 0:
            raise ConfigurationError(f"dt_ps 는 양수여야 합니다: {self.dt_ps}")
        if self.dt_safety > 1.0:
            raise ConfigurationError(f"dt_safety 는 1 이하여야 합니다: {self.dt_safety}")
        if self.n_points < 3:
            raise ConfigurationError(f"n_points 는 3 이상이어야 합니다: {self.n_points}")
        if self.backend not in KNOWN_BACKENDS:
            raise ConfigurationError(f"알 수 없는 backend: {self.backend}", {"known": list(KNOWN_BACKENDS)})
        unknown_bench = [b for b in self.bench_backends if b not in KNOWN_BACKENDS]
        if unknown_bench:
            raise ConfigurationError(f"알 수 없는 bench backend: {unknown_bench}")
        if self.workers < 1:
            raise ConfigurationError(f"workers 는 1 이상이어야 합니다: {self.workers}")
        if self.sweep_kind not in PULSE_KINDS or self.tomography_kind not in PULSE_KINDS:
            raise ConfigurationError(f"펄스 종류는 {PULSE_KINDS} 중 하나여야 합니다.")
        if self.correlation_mode not in ("overlap", "literal"):
            raise ConfigurationError(f"correlation_mode 는 'overlap' 또는 'literal' 이어야 합니다: {self.correlation_mode}")
        for key in ("calibration_samples", "detuning_samples", "prepare_amplitude_count",
                    "sweep_counter_count", "sweep_amplitude_count", "spectrum_samples"):
            if getattr(self, key) < 1:
                raise ConfigurationError(f"'{key}' 는 1 이상이어야 합니다.", {"key": key})
        if self.calibration_samples < 3:
            raise ConfigurationError("calibration_samples 는 3 이상이어야 합니다.")
        if self.prepare_tp_max_ps < self.prepare_tp_min_ps:
            raise ConfigurationError("prepare_tp_max_ps 가 prepare_tp_min_ps 보다 작습니다.")
        if not 0.0 < self.fidelity_threshold <= 1.0:
            raise ConfigurationError(f"fidelity_threshold 는 (0, 1] 범위여야 합니다: {self.fidelity_threshold}")
        if self.lambda_calibration is not None and self.lambda_calibration <= 0:
            raise ConfigurationError(f"lambda_calibration 은 양수여야 합니다: {self.lambda_calibration}")
        if not self.bench_grid_sizes or min(self.bench_grid_sizes) < 3 or self.bench_steps < 1:
            raise ConfigurationError("bench_grid_sizes/bench_steps 가 올바르지 않습니다.")
        if self.readout_p_right is not None and not 0.0 <= self.readout_p_right <= 1.0:
            raise ConfigurationError(f"readout_p_right 는 [0, 1] 범위여야 합니다: {self.readout_p_right}")

    # -------------------------------------------------------- derived types
    def unit_system(self) -> UnitSystem:
        return UnitSystem(effective_mass_ratio=self.effective_mass_ratio)

    def dqd_params(self):
        from scripts.dqd.potential import DqdParams
        return DqdParams(
            w1=self.w1_nm, w2=self.w2_nm, z0=self.z0_mev, z2=self.z2_mev,
            w1_left=self.w1_left_nm, w2_left=self.w2_left_nm, z2_left=self.z2_left_mev,
        )

    def grid(self) -> Grid:
        """x 범위를 지정하지 않으면 ±1.1·w2 영역을 사용합니다."""
        outer = 1.1 * max(self.w2_nm, self.w2_left_nm or 0.0)
        x_min = self.x_min_nm if self.x_min_nm is not None else -outer
        x_max = self.x_max_nm if self.x_max_nm is not None else outer
        return Grid(x_min, x_max, self.n_points, self.dt_ps)

    def tomography_tau(self) -> float:
        return self.tau_ps if self.tomography_tau_ps is None else self.tomography_tau_ps

    def prepare_tp_grid(self) -> np.ndarray:
        count = int(np.floor((self.prepare_tp_max_ps - self.prepare_tp_min_ps) / self.prepare_tp_step_ps + 1e-9)) + 1
        return self.prepare_tp_min_ps + self.prepare_tp_step_ps * np.arange(count)

    def prepare_amplitude_grid(self) -> np.ndarray:
        return np.linspace(self.prepare_amplitude_min_uev, self.prepare_amplitude_max_uev, self.prepare_amplitude_count)

    def sweep_counter_grid(self) -> np.ndarray:
        return np.linspace(self.sweep_counter_min_uev, self.sweep_counter_max_uev, self.sweep_counter_count)

    def sweep_amplitude_grid(self) -> np.ndarray:
        return np.linspace(self.sweep_amplitude_min_uev, self.sweep_amplitude_max_uev, self.sweep_amplitude_count)

    def sweep_hold_grid(self) -> np.ndarray:
        count = int(np.floor(self.sweep_hold_max_ps / self.sweep_hold_step_ps + 1e-9)) + 1
        return self.sweep_hold_step_ps * np.arange(count)

    def effective_workers(self) -> int:
        return 1 if self.serial else self.workers

    def kernel_backend(self) -> str:
        """serial 실행이면 설정의 backend 와 무관하게 'serial'."""
        return "serial" if self.serial else self.backend
