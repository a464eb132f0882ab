import pytest
from loguru import logger

from revcurv.profile_construction import ConstructionParams, build_kernel, build_profile


@pytest.fixture(scope="session")
def params():
    return ConstructionParams()


@pytest.fixture(scope="session")
def kernel(params):
    return build_kernel(params.delta, params.quad_order, params.quad_panels)


@pytest.fixture(scope="session")
def barbell(params, kernel):
    return build_profile(params, kernel=kernel)


@pytest.fixture(scope="session")
def baseline(params):
    return build_profile(params, baseline=True)


@pytest.fixture(autouse=True)
def _detach_log_sinks():
    yield
    # the CLI binds a sink to whatever stderr was current
    logger.remove()
