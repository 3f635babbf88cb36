"""
Gnuplot Module
==============

Writes a gnuplot script next to each CSV that renders it to PNG.
"""

import logging
from pathlib import Path
from typing import Optional, Sequence, Union

logger = logging.getLogger(__name__)


def line_script(csv_path: Union[str, Path], x: str, ys: Sequence[str], title: str = "",
                xlabel: Optional[str] = None, ylabel: str = "") -> str:
    csv_path = Path(csv_path)
    curves = ", \\\n     ".join(f"'{csv_path.name}' using \"{x}\":\"{y}\" with lines title '{y}'" for y in ys)
    return "\n".join([
        "set datafile separator ','",
        "set terminal pngcairo size 1000,650",
        f"set output '{csv_path.with_suffix('.png').name}'",
        f"set title '{title}'",
        f"set xlabel '{xlabel or x}'",
        f"set ylabel '{ylabel}'",
        "set key outside right",
        f"plot {curves}",
        "",
    ])


def map_script(csv_path: Union[str, Path], x: str, y: str, z: str, title: str = "") -> str:
    csv_path = Path(csv_path)
    return "\n".join([
        "set datafile separator ','",
        "set terminal pngcairo size 900,750",
        f"set output '{csv_path.with_suffix('.png').name}'",
        f"set title '{title}'",
        f"set xlabel '{x}'",
        f"set ylabel '{y}'",
        "set view map",
        "set palette rgbformulae 33,13,10",
        f"splot '{csv_path.name}' using \"{x}\":\"{y}\":\"{z}\" with image notitle",
        "",
    ])


def write_script(csv_path: Union[str, Path], script: str) -> Path:
    """<csv 이름>.gp 로 저장하고 경로를 반환합니다."""
    path = Path(csv_path).with_suffix(".gp")
    path.write_text(script, encoding="utf-8")
    logger.debug(f"gnuplot 스크립트 저장: {path}")
    return path


def write_line_plot(csv_path, x: str, ys: Sequence[str], title: str = "", xlabel: Optional[str] = None,
                    ylabel: str = "") -> Path:
    return write_script(csv_path, line_script(csv_path, x, ys, title, xlabel, ylabel))


def write_map_plot(csv_path, x: str, y: str, z: str, title: str = "") -> Path:
    return write_script(csv_path, map_script(csv_path, x, y, z, title))
