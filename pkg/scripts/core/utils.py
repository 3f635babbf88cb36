"""
Utilities Module
================

This module contains file helpers used throughout the project: CSV tables,
JSON documents, wavefunction state files and run manifests.
"""

import hashlib
import json
import platform
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

import numpy as np
import pandas as pd

from scripts.core.errors import ConfigurationError, DimensionError
from scripts.core.units import Grid
from scripts.core.wavefunction import Wavefunction

STATE_COLUMNS = ["x_nm", "re", "im"]


def save_csv(df: pd.DataFrame, file_path: Union[str, Path], float_format: str = "%.10g") -> Path:
    """
    DataFrame 을 헤더가 있는 CSV 로 저장합니다.

    Args:
        df (pd.DataFrame): 저장할 데이터
        file_path (Union[str, Path]): 저장할 파일 경로
        float_format (str): 부동소수점 형식

    Returns:
        Path: 저장된 파일의 경로

    Raises:
        ValueError: 저장 중 오류가 발생한 경우
    """
    try:
        file_path = Path(file_path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        df.to_csv(file_path, index=False, float_format=float_format)
        return file_path
    except Exception as e:
        raise ValueError(f"CSV 파일 저장 중 오류 발생: {str(e)}")


def load_csv(file_path: Union[str, Path]) -> Optional[pd.DataFrame]:
    """
    CSV 파일을 DataFrame 으로 로드합니다. 파일이 없거나 비어 있으면 None 을 반환합니다.
    """
    try:
        return pd.read_csv(file_path)
    except (FileNotFoundError, pd.errors.EmptyDataError):
        return None


def load_json(file_path: Union[str, Path]) -> Optional[Dict[str, Any]]:
    """
    JSON 파일을 로드합니다.

    Returns:
        Optional[Dict[str, Any]]: 로드된 데이터 또는 None (파일이 없거나 JSON 형식이 잘못된 경우)
    """
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (FileNotFoundError, json.JSONDecodeError):
        return None


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"JSON 으로 직렬화할 수 없는 값: {type(value).__name__}")


def save_json(data: Dict[str, Any], file_path: Union[str, Path], **kwargs) -> Path:
    """
    데이터를 JSON 파일로 저장합니다. numpy 스칼라/배열은 파이썬 값으로 바꿉니다.

    Raises:
        ValueError: 저장 중 오류가 발생한 경우
    """
    try:
        file_path = Path(file_path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, 'w', encoding='utf-8') as f:
            json.dump(data, f, ensure_ascii=False, indent=2, default=_json_default, **kwargs)
        return file_path
    except Exception as e:
        raise ValueError(f"JSON 파일 저장 중 오류 발생: {str(e)}")


def save_state(psi: Wavefunction, grid: Grid, file_path: Union[str, Path]) -> Path:
    """
    파동함수를 x_nm, re, im 열을 가진 CSV 로 저장합니다.

    Raises:
        DimensionError: 파동함수와 격자 크기가 다를 경우
    """
    if psi.n_points != grid.n_points:
        raise DimensionError(f"파동함수 길이({psi.n_points})와 격자 크기({grid.n_points})가 다릅니다.")
    values = psi.destagger()
    df = pd.DataFrame({"x_nm": grid.x, "re": values.re, "im": values.im})
    return save_csv(df, file_path, float_format="%.17g")


def load_state(file_path: Union[str, Path], grid: Optional[Grid] = None) -> Wavefunction:
    """
    save_state 로 저장한 파동함수를 읽습니다.

    Raises:
        ConfigurationError: 파일이 없거나 열 이름이 다를 경우
        DimensionError: grid 가 주어졌는데 점 수가 다를 경우
    """
    df = load_csv(file_path)
    if df is None:
        raise ConfigurationError(f"상태 파일을 읽을 수 없습니다: {file_path}")
    missing = [c for c in STATE_COLUMNS if c not in df.columns]
    if missing:
        raise ConfigurationError(f"상태 파일에 열이 없습니다: {missing}", {"path": str(file_path)})
    if grid is not None and len(df) != grid.n_points:
        raise DimensionError(f"상태 파일 점 수({len(df)})가 격자 크기({grid.n_points})와 다릅니다.")
    return Wavefunction(df["re"].to_numpy(), df["im"].to_numpy())


def file_sha256(file_path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with open(file_path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(
    out_dir: Union[str, Path],
    command: str,
    config: Dict[str, Any],
    outputs: Iterable[Union[str, Path]],
    extra: Optional[Dict[str, Any]] = None,
    version: Optional[str] = None,
    wall_time_s: Optional[float] = None,
    argv: Optional[Iterable[str]] = None,
) -> Path:
    """
    명령 실행 결과를 manifest.json 으로 남깁니다.

    Args:
        out_dir: 출력 디렉토리
        command (str): CLI 동사
        config (dict): 사용한 설정 (RunConfig.to_dict())
        outputs: 생성된 파일 목록. 각 파일의 sha256 을 함께 기록합니다.
        extra (dict, optional): 명령별 요약 값
        version (str, optional): 패키지 버전
        wall_time_s (float, optional): 실행 시간 [s]
        argv (Iterable[str], optional): 명령줄 인자

    Returns:
        Path: manifest 파일 경로
    """
    out_dir = Path(out_dir)
    files = []
    for path in outputs:
        path = Path(path)
        if path.exists():
            files.append({"path": str(path.relative_to(out_dir)) if path.is_relative_to(out_dir) else str(path),
                          "sha256": file_sha256(path)})
    manifest = {
        "command": command,
        "argv": list(argv) if argv is not None else None,
        "version": version,
        "wall_time_s": wall_time_s,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "python": sys.version.split()[0],
        "platform": platform.platform(),
        "numpy": np.__version__,
        "config": config,
        "outputs": files,
    }
    if extra:
        manifest["summary"] = extra
    return save_json(manifest, out_dir / "manifest.json")
