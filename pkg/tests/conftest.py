import pytest

from edmlab import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # JIT compilation happens once here so timed tests measure steady state.
    kernels.warmup()


@pytest.fixture()
def store_path(tmp_path):
    return tmp_path / "store"
