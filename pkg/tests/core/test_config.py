import pytest
from pathlib import Path
import numpy as np
from scripts.core.config import RunConfig
from scripts.core.errors import ConfigurationError

def test_default_config_is_valid():
    """기본 설정이 검증을 통과하는지 테스트"""
    config = RunConfig()
    config.validate()
    assert config.effective_workers() == 1

def test_json_round_trip(tmp_path: Path):
    """JSON 저장 후 다시 읽으면 같은 설정"""
    config = RunConfig(n_points=512, tau_ps=45.0, bench_backends=["serial"])
    path = config.to_json(tmp_path / "run.json")
    assert RunConfig.from_json(path) == config

def test_unknown_key_rejected():
    """알 수 없는 키는 ConfigurationError"""
    with pytest.raises(ConfigurationError):
        RunConfig.from_dict({"n_points": 256, "not_a_key": 1})

def test_missing_file(tmp_path: Path):
    """없는 설정 파일은 ConfigurationError"""
    with pytest.raises(ConfigurationError):
        RunConfig.from_json(tmp_path / "missing.json")

def test_invalid_json(tmp_path: Path):
    """JSON 형식 오류는 ConfigurationError"""
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        RunConfig.from_json(path)

@pytest.mark.parametrize("changes", [
    {"w1_nm": 300.0},
    {"z2_mev": 0.5},
    {"backend": "cuda"},
    {"dt_safety": 1.5},
    {"workers": 0},
    {"sweep_kind": "square"},
    {"readout_p_right": 1.2},
    {"prepare_tp_max_ps": 100.0},
])
def test_invalid_values(changes):
    """물리적으로 의미 없는 값은 ConfigurationError"""
    with pytest.raises(ConfigurationError):
        RunConfig().replace(**changes)

def test_default_grid_domain():
    """x 범위를 지정하지 않으면 ±1.1·w2"""
    grid = RunConfig(n_points=101).grid()
    assert grid.x_min == pytest.approx(-264.0)
    assert grid.x_max == pytest.approx(264.0)
    assert grid.n_points == 101

def test_derived_grids():
    """t_p, 유지 시간, 진폭 격자 계산 테스트"""
    config = RunConfig(prepare_tp_min_ps=300.0, prepare_tp_max_ps=310.0, prepare_tp_step_ps=2.0,
                       sweep_hold_max_ps=10.0, sweep_hold_step_ps=5.0)
    np.testing.assert_allclose(config.prepare_tp_grid(), [300, 302, 304, 306, 308, 310])
    np.testing.assert_allclose(config.sweep_hold_grid(), [0, 5, 10])
    assert config.tomography_tau() == config.tau_ps
    assert RunConfig(serial=True, workers=8).effective_workers() == 1
