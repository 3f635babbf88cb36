import json
import pytest
import pandas as pd
from scripts.automation.pipeline import ExperimentPipeline, compare_to_reference
from scripts.control.dynamics import TwoLevelDynamics
from scripts.cli import error_line, main
from scripts.core.errors import ConfigurationError
from scripts.core.utils import load_json

LAMBDA = 0.42254

@pytest.fixture
def pipeline_config(small_config, tmp_path):
    return small_config.replace(output_dir=str(tmp_path), lambda_calibration=LAMBDA)

def test_unknown_command(pipeline_config):
    """알 수 없는 명령은 ConfigurationError"""
    with pytest.raises(ConfigurationError):
        ExperimentPipeline(pipeline_config, show_progress=False).run("fly")

def test_eigens_writes_outputs(pipeline_config, tmp_path):
    """eigens 는 스펙트럼 CSV, gnuplot 스크립트, manifest 를 남김"""
    summary = ExperimentPipeline(pipeline_config, show_progress=False).run("eigens")
    assert summary["samples"] == pipeline_config.spectrum_samples
    assert summary["failed"] == 0
    assert abs(summary["min_splitting_slope_mev"]) < 1e-12
    spectrum = pd.read_csv(tmp_path / "spectrum.csv")
    assert (spectrum["e_ab_mev"] > spectrum["e_b_mev"]).all()
    assert (tmp_path / "spectrum.gp").exists()
    manifest = load_json(tmp_path / "manifest.json")
    assert manifest["command"] == "eigens"
    assert {f["path"] for f in manifest["outputs"]} == {"spectrum.csv", "spectrum.gp"}
    assert manifest["config"]["n_points"] == pipeline_config.n_points

def test_report_outputs(pipeline_config, tmp_path):
    """--report 이면 dashboard.html 과 experiment.xlsx 도 생성"""
    ExperimentPipeline(pipeline_config, report=True, show_progress=False).run("eigens")
    assert (tmp_path / "dashboard.html").exists()
    assert (tmp_path / "experiment.xlsx").exists()

def test_readout_from_config(pipeline_config, basis, capsys):
    """P_R = P0 이면 |β|² = 0"""
    config = pipeline_config.replace(readout_p_right=basis.p0)
    summary = ExperimentPipeline(config, show_progress=False).run("readout")
    assert summary["beta2"] == pytest.approx(0.0, abs=1e-9)
    assert summary["source"] == "config"
    assert "|beta|^2 = 0.000000" in capsys.readouterr().out

def test_readout_from_trace(pipeline_config, basis, tmp_path):
    """추적 CSV 마지막 행의 p_right 를 읽음"""
    trace = tmp_path / "trace.csv"
    pd.DataFrame({"time_ps": [0.0, 1.5], "p_right": [basis.p0, basis.p1]}).to_csv(trace, index=False)
    config = pipeline_config.replace(readout_trace_path=str(trace))
    summary = ExperimentPipeline(config, show_progress=False).run("readout")
    assert summary["beta2"] == pytest.approx(1.0, abs=1e-9)

def test_readout_requires_input(pipeline_config):
    """P_R 도 추적 파일도 없으면 ConfigurationError"""
    with pytest.raises(ConfigurationError):
        ExperimentPipeline(pipeline_config, show_progress=False).run("readout")

def test_compare_to_reference():
    """허용 오차 안이면 PASS, 밖이면 FLAGGED"""
    assert compare_to_reference("lambda", 0.43)["status"] == "PASS"
    assert compare_to_reference("delta_uev", 20.0)["status"] == "FLAGGED"

def test_cli_missing_config(tmp_path, capsys):
    """없는 설정 파일은 종료 코드 2 와 ERROR 한 줄"""
    code = main(["eigens", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path)])
    assert code == 2
    assert "ERROR code=ConfigurationError" in capsys.readouterr().err

def test_cli_success(pipeline_config, tmp_path, capsys):
    """성공하면 종료 코드 0 과 OK 요약 줄"""
    config_path = pipeline_config.to_json(tmp_path / "run.json")
    code = main(["eigens", "--config", str(config_path), "--quiet", "--serial"])
    out = capsys.readouterr().out
    assert code == 0
    line = next(l for l in out.splitlines() if l.startswith("OK command=eigens"))
    assert json.loads(line.split("summary=", 1)[1])["samples"] == pipeline_config.spectrum_samples

def test_error_line_escapes_quotes():
    """메시지 속 따옴표와 줄바꿈을 이스케이프"""
    assert error_line("X", 'a "b"\nc') == 'ERROR code=X message="a \\"b\\" c"'

def test_calibrate_reports_residual_status(pipeline_config):
    """calibrate 요약에 잔차 허용치와 PASS/FLAGGED 상태를 기록"""
    summary = ExperimentPipeline(pipeline_config, show_progress=False).run("calibrate")
    assert summary["residual_tolerance"] == pipeline_config.calibration_tolerance
    assert summary["residual_status"] == "PASS"
    flagged = pipeline_config.replace(calibration_tolerance=1e-15)
    assert ExperimentPipeline(flagged, show_progress=False).run("calibrate")["residual_status"] == "FLAGGED"

def test_trapezoid_sweep_writes_certification(pipeline_config, tmp_path, monkeypatch):
    """사다리꼴 스윕은 인증 CSV 를 남기고 σx 부재를 PASS 로 보고"""
    config = pipeline_config.replace(
        sweep_kind="trapezoid", sweep_amplitude_min_uev=-40.0, sweep_amplitude_max_uev=40.0, sweep_amplitude_count=4,
    )
    pipeline = ExperimentPipeline(config, show_progress=False)
    monkeypatch.setattr(pipeline, "grid_dynamics", lambda extreme: TwoLevelDynamics.from_basis(LAMBDA, pipeline.basis()))
    summary = pipeline.run("sweep")
    certification = pd.read_csv(tmp_path / "sweep_certification.csv")
    assert len(certification) == 4
    assert not certification["sigma_x_certified"].any()
    assert summary["checks"]["trapezoid_no_sigma_x"] == "PASS"
    assert "sigma_x_score" not in pd.read_csv(tmp_path / "sweep.csv").columns
