"""
DQD 실험 자동화 파이프라인 모듈입니다.

CLI 동사(eigens, calibrate, basis, prepare, sweep, tomography, readout, bench)
하나가 메소드 하나에 대응하며, 각 실행은 CSV/JSON 결과와 gnuplot 스크립트,
manifest.json 을 출력 디렉토리에 남깁니다.
"""

import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

import scripts
from scripts.bench.harness import reports_frame, run_bench
from scripts.control.dynamics import GridDynamics
from scripts.control.preparation import prepare_qubit
from scripts.control.pulses import PulseSpec, to_schedule
from scripts.control.sweeps import SWEEP_COLUMNS, amplitude_sweep, static_rabi_limit, trapezoid_min_amplitude
from scripts.control.tomography import (
    certify_sigma_x, certify_sigma_z, decompose_rotation, oscillation_amplitude, tomography, tomography_family,
)
from scripts.core.base import DQDBase
from scripts.core.errors import ConfigurationError, DecompositionError, SolverError
from scripts.core.units import UEV_PER_MEV
from scripts.core.utils import load_csv, save_csv, save_json, save_state, write_manifest
from scripts.dqd.calibration import CalibrationResult, calibrate_lambda
from scripts.dqd.stationary import bonding_antibonding
from scripts.dqd.system import DqdSystem
from scripts.dynamics.propagator import Propagator, standard_observers
from scripts.qubit.basis import (
    QubitBasis, build_qubit_basis, d_map, localisation_curves, readout_coefficients, verify_sign_convention,
)
from scripts.reporting.dashboard import ExperimentDashboardGenerator
from scripts.reporting.excel import ExperimentWorkbookReporter
from scripts.reporting.gnuplot import write_line_plot, write_map_plot

# published values, compared with tolerance and flagged rather than failed
REFERENCE_VALUES = {
    "lambda": (0.42254, 0.05),
    "delta_uev": (12.0, 0.15),
    "prepare_plateau_time_ps": (537.0, 0.10),
    "prepare_amplitude_uev": (11.5, 0.10),
    "sigma_x_kappa_rad_per_ps": (-0.031, 0.15),
    "sigma_x_theta0_rad": (-1.416, 0.15),
    "sigma_z_kappa_rad_per_ps": (0.359, 0.15),
    "sigma_z_theta0_rad": (2.658, 0.15),
    "trapezoid_kappa_rad_per_ps": (0.029, 0.15),
}


def compare_to_reference(name: str, value: float) -> Dict[str, Any]:
    """참고값과 상대 오차를 비교해 PASS/FLAGGED 를 기록합니다."""
    reference, tolerance = REFERENCE_VALUES[name]
    relative = abs(value - reference) / abs(reference)
    return {
        "name": name, "value": float(value), "reference": reference, "tolerance": tolerance,
        "relative_error": float(relative), "status": "PASS" if relative <= tolerance else "FLAGGED",
    }


class ExperimentPipeline(DQDBase):
    """
    DQD 실험을 실행하고 결과 파일을 남기는 파이프라인 클래스입니다.

    Args:
        config (RunConfig | str | Path, optional): 설정 객체 또는 JSON 경로
        output_dir (str | Path, optional): 출력 디렉토리
        report (bool): True 이면 dashboard.html 과 experiment.xlsx 도 생성
        show_progress (bool): tqdm 진행 표시 여부
    """

    COMMANDS = ("eigens", "calibrate", "basis", "prepare", "sweep", "tomography", "readout", "bench")

    def __init__(self, config=None, output_dir=None, report: bool = False, show_progress: bool = True):
        super().__init__(config, output_dir)
        self.report = report
        self.show_progress = show_progress
        self._calibration: Optional[CalibrationResult] = None
        self._system: Optional[DqdSystem] = None
        self._basis: Optional[QubitBasis] = None
        self._outputs: List[Path] = []
        self._tables: Dict[str, pd.DataFrame] = {}
        self.logger.info("ExperimentPipeline 초기화 완료.")

    # ------------------------------------------------------------ running
    def run(self, command: str, argv: Optional[Sequence[str]] = None) -> Dict[str, Any]:
        """
        명령 하나를 실행하고 manifest 를 남깁니다.

        Returns:
            Dict[str, Any]: 명령 요약

        Raises:
            ConfigurationError: 알 수 없는 명령
            DQDError: 각 단계의 실패
        """
        if command not in self.COMMANDS:
            raise ConfigurationError(f"알 수 없는 명령: {command}", {"commands": list(self.COMMANDS)})
        self._outputs, self._tables = [], {}
        np.random.seed(self.config.seed)
        self.logger.info(f"===== {command} 시작 =====")
        start = time.perf_counter()
        summary = getattr(self, f"cmd_{command}")()
        wall = time.perf_counter() - start
        if self.report and self._tables:
            self._write_reports(summary)
        manifest = write_manifest(
            self.output_dir, command, self.config.to_dict(), self._outputs, summary,
            version=scripts.__version__, wall_time_s=wall, argv=argv,
        )
        self.logger.info(f"===== {command} 완료 ({wall:.1f} s), manifest: {manifest} =====")
        return summary

    def _write_reports(self, summary: Dict[str, Any]) -> None:
        flat = {k: v for k, v in summary.items() if not isinstance(v, (dict, list))}
        dashboard = ExperimentDashboardGenerator(self.config, self.output_dir).create_dashboard(self._tables)
        workbook = ExperimentWorkbookReporter(self.config, self.output_dir).create_report(self._tables, flat)
        self._outputs.extend(p for p in (dashboard, workbook) if p is not None)

    def _save_table(self, name: str, df: pd.DataFrame, plot: Optional[Tuple] = None) -> Path:
        path = save_csv(df, self.get_output_path(f"{name}.csv"))
        self._outputs.append(path)
        self._tables[name] = df
        if plot is not None:
            kind, *args = plot
            script = write_map_plot(path, *args) if kind == "map" else write_line_plot(path, *args)
            self._outputs.append(script)
        return path

    def _save_json(self, name: str, data: Dict[str, Any]) -> Path:
        path = save_json(data, self.get_output_path(f"{name}.json"))
        self._outputs.append(path)
        return path

    # -------------------------------------------------------------- state
    def calibration(self) -> CalibrationResult:
        if self._calibration is None:
            limit = self.config.calibration_slope_max_mev
            self._calibration = calibrate_lambda(
                self.config.dqd_params(), (-limit, limit), self.config.calibration_samples,
                self.config.grid(), self.config.unit_system(), self.config.calibration_tolerance,
            )
        return self._calibration

    def lam(self) -> float:
        if self.config.lambda_calibration is not None:
            return self.config.lambda_calibration
        return self.calibration().lam

    def system(self) -> DqdSystem:
        if self._system is None:
            self._system = DqdSystem.from_config(self.config, self.lam())
        return self._system

    def basis(self) -> QubitBasis:
        if self._basis is None:
            self._basis = build_qubit_basis(
                self.system(), self.config.fidelity_threshold, self.config.epsilon_max_search_uev,
                self.config.detuning_samples,
            )
        return self._basis

    def grid_dynamics(self, max_abs_epsilon: float) -> GridDynamics:
        """|ε| ≤ max_abs_epsilon 펄스에 안정한 dt 로 격자 엔진을 만듭니다."""
        system = self.system()
        max_abs_slope = abs(system.slope(max_abs_epsilon)) * 1.05
        propagator = Propagator.from_config(self.config, max_abs_slope, workers=self.config.workers)
        self.logger.info(f"격자 엔진: n={system.grid.n_points}, dt={propagator.dt:.3e} ps, backend={self.config.kernel_backend()}")
        return GridDynamics(system, self.basis(), propagator)

    # ----------------------------------------------------------- commands
    def cmd_eigens(self) -> Dict[str, Any]:
        """v_slope 를 훑으며 (E_B, E_AB) 스펙트럼을 기록합니다. 실패한 점은 error 열에 남깁니다."""
        limit = self.config.spectrum_slope_max_mev
        slopes = np.linspace(-limit, limit, self.config.spectrum_samples)
        params, grid, units = self.config.dqd_params(), self.config.grid(), self.config.unit_system()
        rows = []
        for v in slopes:
            try:
                bonding, antibonding = bonding_antibonding(params, float(v), grid, units)
                rows.append({"v_slope_mev": float(v), "e_b_mev": bonding.energy, "e_ab_mev": antibonding.energy,
                             "splitting_uev": (antibonding.energy - bonding.energy) * UEV_PER_MEV, "error": ""})
            except SolverError as exc:
                self.logger.error(f"v_slope={v:.4g} meV 고유값 풀이 실패: {exc.message}")
                rows.append({"v_slope_mev": float(v), "e_b_mev": np.nan, "e_ab_mev": np.nan,
                             "splitting_uev": np.nan, "error": f"{type(exc).__name__}: {exc.message}"})
        df = pd.DataFrame(rows)
        self._save_table("spectrum", df, ("line", "v_slope_mev", ["e_b_mev", "e_ab_mev"], "Bonding / antibonding", None, "E (meV)"))
        valid = df.dropna(subset=["splitting_uev"])
        best = valid.loc[valid["splitting_uev"].idxmin()] if not valid.empty else None
        return {
            "samples": int(len(df)),
            "failed": int((df["error"] != "").sum()),
            "min_splitting_uev": float(best["splitting_uev"]) if best is not None else None,
            "min_splitting_slope_mev": float(best["v_slope_mev"]) if best is not None else None,
        }

    def cmd_calibrate(self) -> Dict[str, Any]:
        result = self.calibration()
        self._save_table("calibration", result.table,
                         ("line", "v_slope_mev", ["epsilon_uev", "fit_uev"], "Detuning calibration", None, "epsilon (ueV)"))
        summary = {
            "lambda": result.lam,
            "delta_uev": result.delta_uev,
            "max_relative_residual": result.max_relative_residual,
            "residual_tolerance": result.tolerance,
            "residual_status": "PASS" if result.within_tolerance else "FLAGGED",
            "references": [compare_to_reference("lambda", result.lam),
                           compare_to_reference("delta_uev", result.delta_uev)],
        }
        if not result.within_tolerance:
            self.logger.warning(f"FLAGGED 보정 잔차: {result.max_relative_residual:.2e} > {result.tolerance:.0e}")
        for check in summary["references"]:
            self.logger.info(f"{check['status']} {check['name']}: {check['value']:.5g} (참고 {check['reference']})")
        self._save_json("calibration", summary)
        return summary

    def cmd_basis(self) -> Dict[str, Any]:
        system, basis = self.system(), self.basis()
        grid = system.grid
        verify_sign_convention(system, basis)
        for name, psi in (("psi0", basis.psi0), ("psi1", basis.psi1)):
            self._outputs.append(save_state(psi, grid, self.get_output_path(f"{name}.csv")))

        limit = self.config.epsilon_max_search_uev
        epsilons = np.linspace(-limit, limit, self.config.detuning_samples)
        dmap = d_map(system, epsilons, literal=self.config.correlation_mode == "literal")
        self._save_table("d_map", dmap.to_frame(), ("map", "epsilon_uev", "epsilon_prime_uev", "d", "D(eps, eps')"))
        averages = pd.DataFrame({"epsilon_prime_uev": dmap.epsilons, "column_average": dmap.column_average})
        self._save_table("d_average", averages, ("line", "epsilon_prime_uev", ["column_average"], "Column average of D"))
        curves = localisation_curves(system, basis, epsilons)
        self._save_table("localisation", curves, (
            "line", "epsilon_uev",
            ["p_right_bonding", "p_right_antibonding", "p_right_R", "p_right_L", "summed_localisation"],
            "Right-dot probability", None, "P_R",
        ))
        summary = {
            "lambda": system.lam,
            "delta_uev": basis.delta,
            "p0": basis.p0,
            "p1": basis.p1,
            "alpha0": basis.alpha0,
            "beta0": basis.beta0,
            "operating_range_uev": list(basis.operating_range),
            "d_map_optimal_epsilon_uev": dmap.optimal_epsilon,
            "sign_convention": "PASS",
        }
        self._save_json("basis", summary)
        return summary

    def cmd_prepare(self) -> Dict[str, Any]:
        config = self.config
        system = self.system()
        baseline = system.epsilon(config.prepare_baseline_slope_mev)
        amplitudes = config.prepare_amplitude_grid()
        extreme = max(abs(baseline + amplitudes.min()), abs(baseline + amplitudes.max()), abs(baseline))
        dynamics = self.grid_dynamics(extreme)
        result = prepare_qubit(dynamics, baseline, config.prepare_tp_grid(), amplitudes, config.tau_ps,
                               config.prepare_refine_rounds, self.show_progress)
        self._save_table("prepare_grid", result.table,
                         ("map", "plateau_time_ps", "amplitude_uev", "distance", "S(psi0, psi_final)"))
        self._save_table("prepare_refinement", result.refinement)

        schedule = to_schedule(result.spec, system.lam)
        observers = standard_observers(system.grid, dynamics.basis.psi0, dynamics.basis.psi1)
        trace = dynamics.propagator.evolve(
            dynamics.eigenstate(baseline, 0), schedule, result.spec.duration, t_start=0.0,
            observers=observers, stride_ps=config.observer_stride_ps,
        ).trace
        self._save_table("prepare_trace", trace, ("line", "time_ps", ["p_left", "p_right"], "Preparation pulse", None, "P"))

        summary = result.summary()
        summary["references"] = [
            compare_to_reference("prepare_plateau_time_ps", result.plateau_time),
            compare_to_reference("prepare_amplitude_uev", result.amplitude),
        ]
        self._save_json("prepare", summary)
        return summary

    def cmd_sweep(self) -> Dict[str, Any]:
        config = self.config
        counters, amplitudes = config.sweep_counter_grid(), config.sweep_amplitude_grid()
        baseline = config.control_baseline_uev
        extreme = abs(baseline) + max(np.abs(counters).max(), np.abs(amplitudes).max())
        dynamics = self.grid_dynamics(extreme)
        result = amplitude_sweep(
            dynamics, config.sweep_kind, counters, amplitudes, config.sweep_hold_grid(),
            baseline, config.tau_ps, config.effective_workers(), self.show_progress, config.sweep_certify,
        )
        self._save_table("sweep", result.table[SWEEP_COLUMNS],
                         ("map", "amplitude_uev", "counter_uev", "oscillation_amplitude", "Oscillation amplitude"))
        if result.certified:
            self._save_table("sweep_certification", result.certification_table(),
                             ("map", "amplitude_uev", "counter_uev", "sigma_x_score", "Certified sigma_x score"))
        summary = result.summary()
        summary["static_rabi_limit"] = static_rabi_limit(baseline, self.basis().delta)
        if config.sweep_kind == "trapezoid":
            summary.update(trapezoid_min_amplitude(result))
        for name, status in summary.get("checks", {}).items():
            log = self.logger.info if status == "PASS" else self.logger.warning
            log(f"{status} {name}")
        self._save_json("sweep", summary)
        return summary

    def cmd_tomography(self) -> Dict[str, Any]:
        config = self.config
        spec = PulseSpec(
            config.tomography_kind, config.control_baseline_uev, config.tomography_amplitude_uev,
            config.tomography_counter_uev, config.tomography_tp_ps, config.tomography_tau(),
        )
        extreme = abs(spec.baseline) + max(abs(spec.amplitude), abs(spec.counter_amplitude))
        dynamics = self.grid_dynamics(extreme)
        estimate = tomography(spec, dynamics)
        summary: Dict[str, Any] = {"estimate": estimate.to_dict()}

        family_times = [tp for tp in config.tomography_family_tp_ps if spec.with_plateau_time(tp).hold >= 0]
        estimates = tomography_family(spec, family_times, dynamics) if len(family_times) >= 5 else []
        if estimates:
            rows = [{
                "plateau_time_ps": e.spec.plateau_time, "axis_x": e.axis[0], "axis_y": e.axis[1], "axis_z": e.axis[2],
                "angle_rad": e.angle, "leakage": e.leakage, "residual": e.residual,
                "p1_from_psi0": (1.0 - e.final_bloch[0, 2]) / 2.0,
            } for e in estimates]
            self._save_table("tomography_family", pd.DataFrame(rows),
                             ("line", "plateau_time_ps", ["angle_rad", "p1_from_psi0"], "Tomography family"))
            amplitude = oscillation_amplitude(estimates)
            try:
                family = decompose_rotation(estimates)
                summary["family"] = family.to_dict()
                summary["certification"] = {
                    "sigma_x": vars(certify_sigma_x(family, amplitude)),
                    "sigma_z": vars(certify_sigma_z(family, estimates, amplitude)),
                }
                summary["references"] = self._family_references(spec, family)
            except DecompositionError as exc:
                self.logger.error(f"회전 분해 실패: {exc.message}")
                summary["family_error"] = exc.message
            summary["oscillation_amplitude"] = amplitude
        self._save_json("tomography", summary)
        self.logger.info(f"단층촬영: 축={np.round(estimate.axis, 4).tolist()}, 각={estimate.angle:.6f} rad, 누설={estimate.leakage:.2e}")
        return summary

    def _family_references(self, spec: PulseSpec, family) -> List[Dict[str, Any]]:
        if spec.kind == "trapezoid":
            return [compare_to_reference("trapezoid_kappa_rad_per_ps", family.kappa)]
        gate = "sigma_x" if family.axis_error_deg(np.array([1.0, 0.0, 0.0])) < 45.0 else "sigma_z"
        return [compare_to_reference(f"{gate}_kappa_rad_per_ps", family.kappa),
                compare_to_reference(f"{gate}_theta0_rad", family.theta0)]

    def cmd_readout(self) -> Dict[str, Any]:
        """P_R (설정값 또는 추적 CSV 의 마지막 행) 을 |β|², |α|² 로 바꿉니다."""
        config = self.config
        if config.readout_p_right is not None:
            p_right, source = config.readout_p_right, "config"
        elif config.readout_trace_path:
            trace = load_csv(config.readout_trace_path)
            if trace is None or "p_right" not in trace.columns or trace.empty:
                raise ConfigurationError(f"추적 파일에 p_right 열이 없습니다: {config.readout_trace_path}")
            p_right, source = float(trace["p_right"].iloc[-1]), str(config.readout_trace_path)
        else:
            raise ConfigurationError("readout_p_right 또는 readout_trace_path 가 필요합니다.")
        basis = self.basis()
        beta2, alpha2 = readout_coefficients(p_right, basis)
        summary = {"p_right": p_right, "source": source, "beta2": beta2, "alpha2": alpha2, "p0": basis.p0, "p1": basis.p1}
        self._save_json("readout", summary)
        print(f"|beta|^2 = {beta2:.6f}  |alpha|^2 = {alpha2:.6f}")
        return summary

    def cmd_bench(self) -> Dict[str, Any]:
        config = self.config
        reports = run_bench(config.bench_backends, config.bench_grid_sizes, config.bench_steps,
                            config.dqd_params(), config.unit_system(), config.workers, self.show_progress)
        df = reports_frame(reports)
        self._save_table("bench", df)
        return {
            "reports": int(len(df)),
            "invalid": int((~df["valid"]).sum()),
            "max_speedup": float(df["speedup"].max()) if df["speedup"].notna().any() else None,
        }
