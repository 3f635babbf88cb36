import pytest
import numpy as np
from scripts.core.errors import BackendError
from scripts.core.units import Grid
from scripts.core.wavefunction import Wavefunction, normalize
from scripts.dqd.potential import DqdParams
from scripts.dynamics.backends import SerialExecutor, ThreadedExecutor, available_backends, get_executor
from scripts.dynamics.propagator import Propagator
from scripts.dynamics.schedule import DetuningSchedule

def _packet(grid: Grid) -> Wavefunction:
    return normalize(Wavefunction.from_real(np.exp(-((grid.x + 90.0) / 36.0) ** 2)), grid)

def test_registry():
    """serial, threaded 는 항상 등록되어 있고 없는 이름은 BackendError"""
    assert {"serial", "threaded"} <= set(available_backends())
    assert isinstance(get_executor("serial"), SerialExecutor)
    with pytest.raises(BackendError):
        get_executor("quantum")

@pytest.mark.parametrize("block", [1, 7, 32])
def test_threaded_matches_serial_bitwise(block):
    """스레드 실행기의 결과가 serial 과 비트 단위로 같음"""
    grid = Grid(-264.0, 264.0, 258)
    schedule = DetuningSchedule.from_breakpoints([(0.0, 0.0), (2.0, 0.1), (4.0, 0.1)])
    psi = _packet(grid)
    serial = Propagator.for_dqd(DqdParams(), grid, max_abs_slope=0.1)
    reference = serial.evolve(psi, schedule, 4.0)
    with ThreadedExecutor(workers=4, block=block, min_chunk=16) as executor:
        threaded = Propagator.for_dqd(DqdParams(), grid, dt=serial.dt, executor=executor)
        result = threaded.evolve(psi, schedule, 4.0)
    assert result.steps == reference.steps
    np.testing.assert_array_equal(result.final.re, reference.final.re)
    np.testing.assert_array_equal(result.final.im, reference.final.im)
    np.testing.assert_array_equal(result.final.im_prev, reference.final.im_prev)

def test_threaded_chunks_cover_interior():
    """조각들이 내부 점 전체를 겹치지 않게 덮음"""
    executor = ThreadedExecutor(workers=3, min_chunk=10)
    chunks = executor._chunks(100)
    executor.close()
    assert chunks[0][0] == 1 and chunks[-1][1] == 99
    assert all(a[1] == b[0] for a, b in zip(chunks, chunks[1:]))

def test_update_order_does_not_matter():
    """한 번의 갱신에서 격자점 순서를 섞어도 결과가 비트 단위로 같음"""
    rng = np.random.default_rng(7)
    n = 64
    u, v, static, bias = (rng.standard_normal(n) for _ in range(4))
    a_x, slope = 0.7, 0.03
    expected = u.copy()
    SerialExecutor().advance(expected, v.copy(), static, bias, a_x, np.array([slope]))
    shuffled = u.copy()
    for m in rng.permutation(np.arange(1, n - 1)):
        d = static[m] + slope * bias[m]
        shuffled[m] = shuffled[m] + 1.0 * (d * v[m] - a_x * (v[m + 1] + v[m - 1]))
    np.testing.assert_array_equal(shuffled, expected)
