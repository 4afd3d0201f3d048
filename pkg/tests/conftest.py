import mpmath
import pytest


@pytest.fixture
def mp40():
    """mpmath at 40 significant digits, restored afterwards."""
    old = mpmath.mp.dps
    mpmath.mp.dps = 40
    yield mpmath
    mpmath.mp.dps = old


def rel_diff(a, b):
    a = complex(a)
    b = complex(b)
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def richardson_derivative(f, x, h=1e-2):
    """Central difference with two Richardson steps (error O(h^6))."""

    def d(step):
        return (f(x + step) - f(x - step)) / (2.0 * step)

    d1, d2, d3 = d(h), d(h / 2), d(h / 4)
    e1 = (4 * d2 - d1) / 3
    e2 = (4 * d3 - d2) / 3
    return (16 * e2 - e1) / 15
