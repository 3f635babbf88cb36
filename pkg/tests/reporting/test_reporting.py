import pytest
import pandas as pd
from openpyxl import load_workbook
from scripts.core.config import RunConfig
from scripts.reporting.dashboard import ExperimentDashboardGenerator
from scripts.reporting.excel import ExperimentWorkbookReporter, sheet_name
from scripts.reporting.gnuplot import write_line_plot, write_map_plot

@pytest.fixture
def config(tmp_path):
    return RunConfig(output_dir=str(tmp_path))

@pytest.fixture
def tables():
    return {
        "spectrum": pd.DataFrame({"v_slope_mev": [-0.1, 0.0, 0.1], "e_b_mev": [1.0, 0.9, 1.0], "e_ab_mev": [1.2, 0.91, 1.2]}),
        "sweep": pd.DataFrame({
            "counter_uev": [0.0, 0.0, 10.0, 10.0], "amplitude_uev": [0.0, 5.0, 0.0, 5.0],
            "oscillation_amplitude": [1.0, 0.5, 0.4, 0.2],
        }),
        "prepare_trace": pd.DataFrame({"time_ps": [0.0, 1.0], "p_left": [0.5, 0.4], "p_right": [0.5, 0.6], "norm": [1.0, 1.0]}),
    }

def test_line_plot_script(tmp_path):
    """선 그래프 스크립트는 CSV 옆 .gp 로 저장되고 PNG 출력을 지정"""
    csv = tmp_path / "spectrum.csv"
    script = write_line_plot(csv, "v_slope_mev", ["e_b_mev", "e_ab_mev"], "Spectrum", None, "E (meV)")
    text = script.read_text(encoding="utf-8")
    assert script.name == "spectrum.gp"
    assert "set output 'spectrum.png'" in text
    assert "using \"v_slope_mev\":\"e_ab_mev\"" in text
    assert "set xlabel 'v_slope_mev'" in text

def test_map_plot_script(tmp_path):
    """지도 스크립트는 view map 과 image 스타일"""
    text = write_map_plot(tmp_path / "d_map.csv", "epsilon_uev", "epsilon_prime_uev", "d").read_text(encoding="utf-8")
    assert "set view map" in text
    assert "with image" in text

def test_sheet_name():
    """금지 문자는 _ 로, 길이는 31자로 제한"""
    assert sheet_name("a/b:c") == "a_b_c"
    assert len(sheet_name("x" * 40)) == 31
    assert sheet_name("") == "Sheet"

def test_workbook(config, tables, tmp_path):
    """요약 시트와 표마다 시트 하나"""
    path = ExperimentWorkbookReporter(config).create_report(tables, {"lambda": 0.42})
    assert path == tmp_path / "experiment.xlsx"
    workbook = load_workbook(path)
    assert workbook.sheetnames == ["요약", "spectrum", "sweep", "prepare_trace"]
    assert workbook["sweep"].freeze_panes == "A2"

def test_dashboard(config, tables, tmp_path):
    """알려진 표와 *_trace 표로 HTML 대시보드 생성"""
    path = ExperimentDashboardGenerator(config).create_dashboard(tables)
    html = path.read_text(encoding="utf-8")
    assert path == tmp_path / "dashboard.html"
    assert html.count("plotly-graph-div") >= 3

def test_dashboard_without_known_tables(config):
    """그릴 표가 없으면 None"""
    assert ExperimentDashboardGenerator(config).create_dashboard({"other": pd.DataFrame({"a": [1]})}) is None
