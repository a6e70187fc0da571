import numpy as np
import pytest


@pytest.fixture(autouse=True)
def _strict_float_errors():
    """Fail loudly on invalid float operations inside the library under test.

    Underflow stays silent: far-tail density values legitimately flush to
    zero and the code is written to survive that.
    """
    with np.errstate(divide="raise", invalid="raise", over="raise", under="ignore"):
        yield
