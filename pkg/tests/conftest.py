import pytest

from dereverb import banded


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba kernels once so timed tests see steady-state cost."""
    banded.warmup()
