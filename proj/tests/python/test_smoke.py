import cmath
import math
from fractions import Fraction

import pytest

import unidos


def test_version_and_coefficients():
    assert unidos.__version__
    p = unidos.Coefficients.balanced()
    assert math.isclose(p.r, math.sqrt(0.5))
    assert math.isclose(p.band_edge, math.pi / 2)
    with pytest.raises(ValueError):
        unidos.Coefficients(0.6, 0.6)


def test_transfer_determinant():
    p = unidos.Coefficients(0.6, 0.8)
    t = unidos.transfer_matrix(0.3, -1.2, 0.7 + 0.4j, p)
    det = t[0][0] * t[1][1] - t[0][1] * t[1][0]
    assert abs(det - cmath.exp(1j * 1.5)) < 1e-12


def test_uniform_lyapunov():
    p = unidos.Coefficients.balanced()
    gamma, err = unidos.lyapunov(cmath.exp(0.4j), unidos.PhaseModel.uniform(), p, n_steps=20000, n_realizations=4)
    assert abs(gamma - math.log(2)) < max(0.02, 4 * err)


def test_free_closed_forms():
    p = unidos.Coefficients(0.6, 0.8)
    assert math.isclose(unidos.free_dos(0.0, p)[1], 0.5)
    lam = 2.5
    x = (0.36 - math.cos(lam)) / 0.64
    assert math.isclose(unidos.lyapunov_free(cmath.exp(1j * lam), p), math.acosh(abs(x)), rel_tol=1e-12)
    assert abs(unidos.thouless_rhs_free(cmath.exp(1j * lam), p) - math.acosh(abs(x))) < 1e-7


def test_secular_matches_dense():
    p = unidos.Coefficients(0.6, 0.8)
    eta = unidos.PhaseModel.uniform().eta_samples(seed=3, lo=-1, hi=30)
    dense = unidos.block_eigenphases(p, -1, eta, 0, 25)
    roots = sorted(cmath.phase(z) for z in unidos.secular_roots(p, -1, eta, 0, 25))
    assert len(dense) == len(roots) == 25
    assert max(abs(a - b) for a, b in zip(dense, roots)) < 1e-9


def test_pooled_spectrum_is_reproducible():
    p = unidos.Coefficients.balanced()
    a = unidos.pooled_eigenphases(unidos.PhaseModel.uniform(), p, size=40, n_realizations=3, seed=5)
    b = unidos.pooled_eigenphases(unidos.PhaseModel.uniform(), p, size=40, n_realizations=3, seed=5, threads=2)
    assert a == b and len(a) == 120


def test_paths():
    p = unidos.Coefficients(0.6, 0.8)
    assert math.isclose(unidos.path_sum_bruteforce(2, 0, p), 0.36**2 + 2 * 0.36 * 0.64)
    (low, plus), _ = unidos.gen_poly(1, p)
    assert low == -2 and math.isclose(plus[0], 0.64) and math.isclose(plus[2], 0.36)
    assert unidos.s_exact(3, 0) == Fraction(10, 8)
    assert math.isclose(unidos.s_center(3, unidos.Coefficients.balanced()), 1.25)


def test_analyticity():
    v = unidos.analyticity_margin(1.0, 1.0, unidos.Coefficients.balanced())
    assert v["analytic"] and math.isclose(v["margin"], 1 - math.log(2))
    with pytest.raises(ValueError):
        unidos.analyticity_margin(0.5, 1.0, unidos.Coefficients.balanced())


def test_selftest():
    assert all(ok for _, ok, _ in unidos.selftest())
