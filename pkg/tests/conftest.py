import pytest

from fsjunta import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Compile (or load the cached) JIT kernels once so timed tests run hot.
    _kernels.warmup()
