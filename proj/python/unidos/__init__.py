"""Random five-diagonal unitary matrices: Lyapunov exponents, density of states, path sums."""

from fractions import Fraction

from ._unidos import *  # noqa: F401,F403
from ._unidos import __version__, s_exact_balanced as _s_exact_balanced


def s_exact(n, j):
    """Exact S_{n-1}(j) at r = t as a Fraction."""
    num, den = _s_exact_balanced(n, j)
    return Fraction(int(num), int(den))
