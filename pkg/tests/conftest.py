"""
공통 pytest 픽스처: 작은 격자(256점) 설정, 보정된 DQD, 큐비트 기저, LSM 엔진.
"""

import pytest

from scripts.control.dynamics import TwoLevelDynamics
from scripts.core.config import RunConfig
from scripts.dqd.calibration import calibrate_lambda
from scripts.dqd.system import DqdSystem
from scripts.qubit.basis import build_qubit_basis

LAMBDA = 0.42254
DELTA_UEV = 12.0


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="격자 전파가 긴 테스트도 실행")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 전체 격자 전파를 여러 번 수행하는 느린 테스트")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="--runslow 옵션이 필요합니다")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def small_config(tmp_path_factory) -> RunConfig:
    return RunConfig(
        n_points=256,
        calibration_samples=11,
        detuning_samples=21,
        spectrum_samples=11,
        output_dir=str(tmp_path_factory.mktemp("run")),
    )


@pytest.fixture(scope="session")
def calibration(small_config):
    limit = small_config.calibration_slope_max_mev
    return calibrate_lambda(
        small_config.dqd_params(), (-limit, limit), small_config.calibration_samples,
        small_config.grid(), small_config.unit_system(),
    )


@pytest.fixture(scope="session")
def system(small_config, calibration) -> DqdSystem:
    return DqdSystem.from_config(small_config, calibration.lam)


@pytest.fixture(scope="session")
def basis(system):
    return build_qubit_basis(system, threshold=0.99, epsilon_max_search=250.0, n_samples=21)


@pytest.fixture
def lsm() -> TwoLevelDynamics:
    return TwoLevelDynamics(lam=LAMBDA, delta=DELTA_UEV)
