"""
Schedule Module
===============

Piecewise-linear bias-slope schedules V_slope(t).
"""

import itertools
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from scripts.core.errors import ConfigurationError

_versions = itertools.count(1)


@dataclass(frozen=True, eq=False)
class DetuningSchedule:
    """
    (시각 [ps], v_slope [meV]) 꺾은점으로 정의되는 구간 선형 스케줄입니다.

    범위 밖의 시각은 양 끝 값으로 고정합니다. version 은 인스턴스마다 고유하며
    전파기가 포텐셜 캐시를 무효화할 때 사용합니다.
    """
    times: np.ndarray
    slopes: np.ndarray
    version: int = field(init=False)

    def __post_init__(self):
        times = np.array(self.times, dtype=np.float64).ravel()
        slopes = np.array(self.slopes, dtype=np.float64).ravel()
        if times.size == 0 or times.shape != slopes.shape:
            raise ConfigurationError(f"스케줄 시각/기울기 개수가 맞지 않습니다: {times.size} vs {slopes.size}")
        if np.any(np.diff(times) <= 0):
            raise ConfigurationError("스케줄 시각은 엄격히 증가해야 합니다.", {"times_ps": times.tolist()})
        if not np.all(np.isfinite(times)) or not np.all(np.isfinite(slopes)):
            raise ConfigurationError("스케줄에 유한하지 않은 값이 있습니다.")
        times.setflags(write=False)
        slopes.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "slopes", slopes)
        object.__setattr__(self, "version", next(_versions))

    @classmethod
    def from_breakpoints(cls, breakpoints: Iterable[Tuple[float, float]]) -> "DetuningSchedule":
        points = list(breakpoints)
        if not points:
            raise ConfigurationError("꺾은점이 비어 있습니다.")
        times, slopes = zip(*points)
        return cls(np.asarray(times), np.asarray(slopes))

    @classmethod
    def constant(cls, v_slope: float, start: float = 0.0) -> "DetuningSchedule":
        return cls(np.array([start]), np.array([v_slope]))

    @property
    def breakpoints(self) -> List[Tuple[float, float]]:
        return list(zip(self.times.tolist(), self.slopes.tolist()))

    @property
    def start(self) -> float:
        return float(self.times[0])

    @property
    def end(self) -> float:
        return float(self.times[-1])

    @property
    def duration(self) -> float:
        return self.end - self.start

    def value(self, t):
        """v_slope(t) [meV]; 범위 밖은 끝 값으로 고정."""
        result = np.interp(t, self.times, self.slopes)
        return float(result) if np.ndim(t) == 0 else result

    def max_abs_slope(self) -> float:
        return float(np.max(np.abs(self.slopes)))

    def is_constant_on(self, t0: float, t1: float, tol: float = 1e-12) -> bool:
        lo, hi = min(t0, t1), max(t0, t1)
        inside = self.slopes[(self.times > lo) & (self.times < hi)]
        ends = np.array([self.value(lo), self.value(hi)])
        values = np.concatenate([inside, ends])
        return bool(np.ptp(values) <= tol)

    def shifted(self, offset: float) -> "DetuningSchedule":
        return DetuningSchedule(self.times + offset, self.slopes)

    def window(self, t0: float, t1: float) -> "DetuningSchedule":
        """[t0, t1] 구간을 잘라내 시각 0 부터 시작하는 스케줄로 만듭니다."""
        if t1 < t0:
            raise ConfigurationError(f"잘못된 구간: [{t0}, {t1}]")
        inner = (self.times > t0) & (self.times < t1)
        times = np.concatenate([[t0], self.times[inner], [t1]]) if t1 > t0 else np.array([t0])
        return DetuningSchedule(times - t0, self.value(times))

    def sample(self, times: Sequence[float]) -> np.ndarray:
        return np.asarray(self.value(np.asarray(times, dtype=np.float64)))
