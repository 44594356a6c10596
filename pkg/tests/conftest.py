import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20250811)


def finite_difference_gradient(f, p, h=1e-4):
    """Central-difference gradient of a scalar field at 2-vector ``p``."""
    p = np.asarray(p, dtype=float)
    out = np.empty(2)
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        out[i] = (f(p + e) - f(p - e)) / (2 * h)
    return out


def finite_difference_second(f, t, h=5e-3):
    """Central second difference of a scalar function of one variable.

    The default step sits near the double-precision optimum for phase
    values of a few hundred radians: smaller steps drown the estimate in
    cancellation roundoff before truncation error matters.
    """
    return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)
