import pytest
from pathlib import Path
import numpy as np
import pandas as pd
from scripts.core import utils
from scripts.core.errors import ConfigurationError, DimensionError
from scripts.core.units import Grid
from scripts.core.wavefunction import Wavefunction

def test_save_and_load_csv(tmp_path: Path):
    """CSV 저장 및 로드 함수 테스트"""
    df = pd.DataFrame({"time_ps": [0.0, 0.5, 1.5], "p_right": [0.1, 0.5, 0.9]})
    file_path = utils.save_csv(df, tmp_path / "nested" / "trace.csv")
    assert file_path.exists()
    loaded = utils.load_csv(file_path)
    pd.testing.assert_frame_equal(loaded, df)

def test_load_csv_nonexistent_file(tmp_path: Path):
    """존재하지 않는 CSV 파일 로드 시도 테스트"""
    assert utils.load_csv(tmp_path / "missing.csv") is None

def test_save_and_load_json(tmp_path: Path):
    """JSON 저장 및 로드 함수 테스트"""
    test_data = {"key1": "value1", "numbers": [1, 2, 3], "nested": {"a": True}}
    file_path = tmp_path / "test_data.json"
    utils.save_json(test_data, file_path)
    assert file_path.exists()
    assert utils.load_json(file_path) == test_data

def test_save_json_numpy_values(tmp_path: Path):
    """numpy 스칼라/배열이 파이썬 값으로 저장되는지 테스트"""
    file_path = utils.save_json({"lam": np.float64(0.42), "axis": np.array([1.0, 0.0, 0.0])}, tmp_path / "a.json")
    assert utils.load_json(file_path) == {"lam": 0.42, "axis": [1.0, 0.0, 0.0]}

def test_load_json_nonexistent_file(tmp_path: Path):
    """존재하지 않는 JSON 파일 로드 시도 테스트"""
    assert utils.load_json(tmp_path / "non_existent.json") is None

def test_save_and_load_state(tmp_path: Path):
    """파동함수 상태 파일 저장/로드가 값을 그대로 보존하는지 테스트"""
    grid = Grid(-10.0, 10.0, 21)
    psi = Wavefunction(np.sin(grid.x), np.cos(grid.x) * 0.5)
    path = utils.save_state(psi, grid, tmp_path / "psi0.csv")
    loaded = utils.load_state(path, grid)
    np.testing.assert_array_equal(loaded.re, psi.re)
    np.testing.assert_array_equal(loaded.im, psi.im)

def test_load_state_wrong_grid(tmp_path: Path):
    """점 수가 다른 격자로 상태를 읽으면 DimensionError"""
    grid = Grid(-1.0, 1.0, 11)
    path = utils.save_state(Wavefunction.from_real(np.ones(11)), grid, tmp_path / "psi.csv")
    with pytest.raises(DimensionError):
        utils.load_state(path, Grid(-1.0, 1.0, 13))

def test_load_state_missing_columns(tmp_path: Path):
    """열 이름이 다른 CSV 는 ConfigurationError"""
    path = utils.save_csv(pd.DataFrame({"x": [0.0], "y": [1.0]}), tmp_path / "bad.csv")
    with pytest.raises(ConfigurationError):
        utils.load_state(path)

def test_write_manifest(tmp_path: Path):
    """manifest.json 에 명령, 버전, 출력 파일 해시가 기록되는지 테스트"""
    output = utils.save_csv(pd.DataFrame({"a": [1]}), tmp_path / "table.csv")
    path = utils.write_manifest(tmp_path, "calibrate", {"n_points": 256}, [output, tmp_path / "missing.csv"],
                                {"lambda": 0.42}, version="0.1.0", wall_time_s=1.5, argv=["calibrate"])
    manifest = utils.load_json(path)
    assert manifest["command"] == "calibrate"
    assert manifest["version"] == "0.1.0"
    assert manifest["argv"] == ["calibrate"]
    assert manifest["summary"] == {"lambda": 0.42}
    assert manifest["outputs"] == [{"path": "table.csv", "sha256": utils.file_sha256(output)}]
