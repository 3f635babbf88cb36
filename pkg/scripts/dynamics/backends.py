"""
Backends Module
===============

Kernel executors for the staggered-leapfrog stencil. Every executor applies
the same per-element arithmetic in the same order so results are bit-identical:

    d_m    = static_m + slope * bias_m
    target_m += sign * (d_m * src_m - a * (src_{m+1} + src_{m-1}))

Updates alternate between the u array (src = v) and the v array (src = u,
with the sign flipped).
"""

import logging
import os
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from scripts.core.errors import BackendError

logger = logging.getLogger(__name__)


def _update(target: np.ndarray, src: np.ndarray, d: np.ndarray, a_x: float, sign: float) -> None:
    delta = d * src[1:-1] - a_x * (src[2:] + src[:-2])
    target[1:-1] += sign * delta


def _run_updates(u: np.ndarray, v: np.ndarray, static: np.ndarray, bias: np.ndarray,
                 a_x: float, slopes: np.ndarray, sign: float, first: str) -> None:
    update_u = first == "u"
    last_slope, d = None, None
    for slope in slopes:
        # diagonal is rebuilt only when the slope changes
        if slope != last_slope:
            d = static[1:-1] + slope * bias[1:-1]
            last_slope = slope
        if update_u:
            _update(u, v, d, a_x, sign)
        else:
            _update(v, u, d, a_x, -sign)
        update_u = not update_u


class KernelExecutor(ABC):
    """
    leapfrog 커널 실행기 인터페이스입니다.

    advance() 는 u, v 배열을 제자리에서 len(slopes) 번 갱신합니다. slopes[j] 는
    j 번째 갱신에서 사용할 v_slope 이고, first 는 첫 갱신 대상('u' 또는 'v')입니다.
    sign = -1 이면 시간을 거꾸로 진행합니다.
    """
    name = "abstract"

    @abstractmethod
    def advance(self, u: np.ndarray, v: np.ndarray, static: np.ndarray, bias: np.ndarray,
                a_x: float, slopes: np.ndarray, sign: float = 1.0, first: str = "u") -> None:
        ...

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class SerialExecutor(KernelExecutor):
    """numpy 벡터 연산으로 한 스레드에서 실행합니다."""
    name = "serial"

    def advance(self, u, v, static, bias, a_x, slopes, sign=1.0, first="u"):
        _run_updates(u, v, static, bias, a_x, np.asarray(slopes, dtype=np.float64), sign, first)


class ThreadedExecutor(KernelExecutor):
    """
    격자를 조각으로 나눠 스레드 풀에서 실행합니다.

    각 조각은 block 만큼의 고스트 영역을 복사해 block 번의 갱신을 독립적으로
    수행한 뒤 자기 영역만 되돌려 씁니다 (시간 방향 블로킹).
    """
    name = "threaded"

    def __init__(self, workers: Optional[int] = None, block: int = 32, min_chunk: int = 256):
        self.workers = workers or os.cpu_count() or 1
        self.block = max(1, int(block))
        self.min_chunk = max(1, int(min_chunk))
        self._pool = ThreadPoolExecutor(max_workers=self.workers, thread_name_prefix="leapfrog")

    def _chunks(self, n: int) -> List[Tuple[int, int]]:
        count = max(1, min(self.workers, (n - 2) // self.min_chunk))
        edges = np.linspace(1, n - 1, count + 1).astype(int)
        return [(int(lo), int(hi)) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]

    @staticmethod
    def _run_chunk(u, v, static, bias, a_x, slopes, sign, first, lo, hi, halo):
        n = u.shape[0]
        plo, phi = max(0, lo - halo), min(n, hi + halo)
        lu, lv = u[plo:phi].copy(), v[plo:phi].copy()
        _run_updates(lu, lv, static[plo:phi], bias[plo:phi], a_x, slopes, sign, first)
        return lo, hi, lu[lo - plo:hi - plo], lv[lo - plo:hi - plo]

    def advance(self, u, v, static, bias, a_x, slopes, sign=1.0, first="u"):
        slopes = np.asarray(slopes, dtype=np.float64)
        chunks = self._chunks(u.shape[0])
        if len(chunks) == 1:
            _run_updates(u, v, static, bias, a_x, slopes, sign, first)
            return
        current = first
        for start in range(0, slopes.size, self.block):
            block = slopes[start:start + self.block]
            futures = [
                self._pool.submit(self._run_chunk, u, v, static, bias, a_x, block, sign, current, lo, hi, block.size)
                for lo, hi in chunks
            ]
            results = [f.result() for f in futures]
            for lo, hi, lu, lv in results:
                u[lo:hi] = lu
                v[lo:hi] = lv
            if block.size % 2 == 1:
                current = "v" if current == "u" else "u"

    def close(self):
        self._pool.shutdown(wait=True)


OPENCL_SOURCE = """
#pragma OPENCL EXTENSION cl_khr_fp64 : enable
#pragma OPENCL FP_CONTRACT OFF

__kernel void leapfrog_update(__global double* target,
                              __global const double* src,
                              __global const double* stat,
                              __global const double* bias,
                              const double a_x,
                              const double slope,
                              const double sign,
                              const int n)
{
    const int m = get_global_id(0) + 1;
    if (m >= n - 1) return;
    const double d = stat[m] + slope * bias[m];
    const double nb = src[m + 1] + src[m - 1];
    const double delta = d * src[m] - a_x * nb;
    target[m] = target[m] + sign * delta;
}
"""


class OpenCLExecutor(KernelExecutor):
    """pyopencl 장치에서 한 갱신당 커널 하나를 실행합니다."""
    name = "opencl"

    def __init__(self, **_):
        try:
            import pyopencl
        except ImportError as e:
            raise BackendError(f"pyopencl 을 불러올 수 없습니다: {e}")
        self._cl = pyopencl
        try:
            self.context = pyopencl.create_some_context(interactive=False)
            self.queue = pyopencl.CommandQueue(self.context)
            self.program = pyopencl.Program(self.context, OPENCL_SOURCE).build()
        except Exception as e:
            raise BackendError(f"OpenCL 장치를 초기화할 수 없습니다: {e}")

    def advance(self, u, v, static, bias, a_x, slopes, sign=1.0, first="u"):
        cl = self._cl
        mf = cl.mem_flags
        n = u.shape[0]
        buffers = {
            "u": cl.Buffer(self.context, mf.READ_WRITE | mf.COPY_HOST_PTR, hostbuf=np.ascontiguousarray(u)),
            "v": cl.Buffer(self.context, mf.READ_WRITE | mf.COPY_HOST_PTR, hostbuf=np.ascontiguousarray(v)),
        }
        stat_buf = cl.Buffer(self.context, mf.READ_ONLY | mf.COPY_HOST_PTR, hostbuf=np.ascontiguousarray(static))
        bias_buf = cl.Buffer(self.context, mf.READ_ONLY | mf.COPY_HOST_PTR, hostbuf=np.ascontiguousarray(bias))
        kernel = self.program.leapfrog_update
        current = first
        for slope in np.asarray(slopes, dtype=np.float64):
            target, src = ("u", "v") if current == "u" else ("v", "u")
            step_sign = sign if current == "u" else -sign
            kernel(self.queue, (max(1, n - 2),), None, buffers[target], buffers[src], stat_buf, bias_buf,
                   np.float64(a_x), np.float64(slope), np.float64(step_sign), np.int32(n))
            current = "v" if current == "u" else "u"
        cl.enqueue_copy(self.queue, u, buffers["u"])
        cl.enqueue_copy(self.queue, v, buffers["v"])
        self.queue.finish()


def _opencl_available() -> bool:
    try:
        import pyopencl  # noqa: F401
        return True
    except ImportError:
        return False


_REGISTRY: Dict[str, Callable[..., KernelExecutor]] = {
    "serial": lambda **kwargs: SerialExecutor(),
    "threaded": lambda **kwargs: ThreadedExecutor(workers=kwargs.get("workers"), block=kwargs.get("block", 32)),
}
if _opencl_available():
    _REGISTRY["opencl"] = lambda **kwargs: OpenCLExecutor()


def available_backends() -> List[str]:
    return list(_REGISTRY)


def get_executor(name: str, **kwargs) -> KernelExecutor:
    """
    이름으로 커널 실행기를 만듭니다.

    Raises:
        BackendError: 등록되지 않은 backend 이거나 초기화에 실패한 경우
    """
    if name not in _REGISTRY:
        raise BackendError(f"사용할 수 없는 backend: {name}", {"available": available_backends()})
    executor = _REGISTRY[name](**kwargs)
    logger.debug(f"커널 실행기 생성: {executor.name}")
    return executor
