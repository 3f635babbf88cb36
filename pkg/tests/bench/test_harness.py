import numpy as np
from scripts.bench.harness import correctness_gate, reports_frame, run_bench, state_checksum
from scripts.core.wavefunction import Wavefunction

def test_state_checksum():
    """같은 배열은 같은 sha256, 한 비트만 달라도 다른 값"""
    psi = Wavefunction.from_real(np.linspace(0.0, 1.0, 16))
    same = Wavefunction.from_real(np.linspace(0.0, 1.0, 16))
    other = Wavefunction.from_real(np.nextafter(np.linspace(0.0, 1.0, 16), 2.0))
    assert state_checksum(psi) == state_checksum(same)
    assert state_checksum(psi) != state_checksum(other)
    assert len(state_checksum(psi)) == 64

def test_correctness_gate():
    """threaded 는 serial 과 비트 단위로 같고 없는 backend 는 실패로 기록"""
    results = correctness_gate(["serial", "threaded", "quantum"], n_points=130, steps=200, workers=2)
    assert results["serial"].passed
    assert results["threaded"].passed
    assert results["threaded"].checksum == results["serial"].checksum
    assert not results["quantum"].passed
    assert results["quantum"].first_mismatch == -1

def test_run_bench_reports():
    """격자 크기별 보고서와 실패한 backend 의 invalid 행"""
    reports = run_bench(["serial", "quantum"], [64, 128], steps=50, show_progress=False)
    frame = reports_frame(reports)
    assert len(frame) == 4
    assert set(frame["backend"]) == {"serial", "quantum"}
    assert not frame.loc[frame["backend"] == "quantum", "valid"].any()
    serial = frame.loc[frame["backend"] == "serial"]
    assert (serial["wall_s"] > 0).all()
    np.testing.assert_allclose(serial["speedup"], 1.0)
