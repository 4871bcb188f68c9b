import random
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from secular.exactnum import Polynomial
from secular.roots import (
    NoRootError,
    RootFindingError,
    RootSet,
    find_roots,
    find_roots_numeric,
    smallest_modulus_roots,
)


def _sorted(zs):
    return sorted(zs, key=lambda z: (float(z.real), float(z.imag)))


def test_factorable_quadratic():
    rs = find_roots(Polynomial([9, -10, 1]))
    a, b = _sorted(rs.roots)
    assert a == 1 and b == 9
    assert len(rs) == 2


def test_conjugate_pair():
    rs = find_roots(Polynomial([1, 0, 1]))
    a, b = _sorted(rs.roots)
    with mpmath.workprec(128):
        assert abs(a - mpmath.mpc(0, -1)) < 1e-35
        assert abs(b - mpmath.mpc(0, 1)) < 1e-35


def test_degree_zero_rejected():
    with pytest.raises(ValueError):
        find_roots(Polynomial([3]))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(-10, 10, max_denominator=30), min_size=6, max_size=6, unique=True))
def test_recovers_constructed_roots(rs_exact):
    p = Polynomial.from_roots(rs_exact)
    rs = find_roots(p)
    found = _sorted(rs.roots)
    with mpmath.workprec(128):
        for z, r in zip(found, sorted(rs_exact)):
            assert abs(z - mpmath.mpf(r.numerator) / r.denominator) < 1e-25


def test_random_rational_roots_seeded():
    rng = random.Random(7)
    roots = [F(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(6)]
    rs = find_roots(Polynomial.from_roots(roots))
    with mpmath.workprec(128):
        for z in rs.roots:
            assert min(abs(z - mpmath.mpf(r.numerator) / r.denominator) for r in roots) < 1e-20


def _residual_bound(p, z, bits):
    digits = bits * np.log10(2)
    maxc = max(abs(c) for c in p.coeffs)
    return mpmath.mpf(10) ** (-0.8 * digits) * mpmath.mpf(maxc.numerator) / maxc.denominator * max(1, abs(z)) ** p.degree


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=12).filter(lambda c: c[-1] != 0))
def test_residual_bound_and_conjugate_closure(coeffs):
    p = Polynomial(coeffs)
    rs = find_roots(p)
    assert len(rs.roots) == p.degree
    with mpmath.workprec(rs.precision_bits):
        for z, r in zip(rs.roots, rs.residuals):
            assert r <= _residual_bound(p, z, rs.precision_bits)
        # conjugate closure within 10^(-digits/2)
        tol = mpmath.mpf(10) ** (-rs.digits / 2) * max(1, max(abs(z) for z in rs.roots))
        for z in rs.roots:
            assert min(abs(mpmath.conj(z) - w) for w in rs.roots) <= tol


def test_multiple_root_cluster():
    p = Polynomial.from_roots([1, 1, 1, 2])
    rs = find_roots(p)
    clusters = sorted(rs.clusters(), key=lambda t: float(t[0].real))
    assert [m for _, m in clusters] == [3, 1]
    centroid = clusters[0][0]
    with mpmath.workprec(128):
        assert abs(p.eval_mp(centroid)) < 1e-30
        assert abs(p.derivative().eval_mp(centroid)) < 1e-20


def test_matches_companion_matrix_cross_check():
    p = Polynomial([F(3, 7), -2, 5, F(1, 3), -1, 1])
    rs = find_roots(p)
    ref = np.roots([float(c) for c in reversed(p.coeffs)])
    for z in rs.roots:
        assert np.min(np.abs(ref - complex(z))) < 1e-10


def test_deterministic_for_seed():
    p = Polynomial([5, -3, 0, 2, 1, 1, 7])
    a = find_roots(p, seed=11)
    b = find_roots(p, seed=11)
    assert a.roots == b.roots


def test_non_convergence_carries_iterates():
    p = Polynomial([1, 2, 3, 4, 5, 6, 7, 8])
    with pytest.raises(RootFindingError) as info:
        find_roots(p, max_iter=1)
    assert len(info.value.roots) == 7 and len(info.value.residuals) == 7


def test_higher_precision():
    rs = find_roots(Polynomial([-2, 0, 1]), precision_bits=256)
    with mpmath.workprec(256):
        best = max(rs.roots, key=lambda z: float(z.real))
        assert abs(best - mpmath.sqrt(2)) < mpmath.mpf(10) ** -70


def test_numeric_coefficients():
    with mpmath.workprec(128):
        coeffs = [mpmath.mpc(0, 2), mpmath.mpc(-3, 1), 1]
    rs = find_roots_numeric(coeffs)
    with mpmath.workprec(128):
        for z in rs.roots:
            assert abs(coeffs[0] + coeffs[1] * z + z * z) < 1e-30


def _rootset(zs):
    with mpmath.workprec(128):
        roots = [mpmath.mpc(z) for z in zs]
    return RootSet(roots=roots, residuals=[mpmath.mpf(0)] * len(roots), precision_bits=128,
                   errors=[mpmath.mpf(0)] * len(roots))


def test_smallest_modulus_examples():
    picked = smallest_modulus_roots(_rootset([2, complex(-1, 1), complex(-1, -1)]))
    assert [complex(z) for z in picked] == [complex(-1, 1), complex(-1, -1)]
    assert [complex(z) for z in smallest_modulus_roots(_rootset([0, 3]), 1e-12)] == [3]
    with pytest.raises(NoRootError):
        smallest_modulus_roots(_rootset([0, 0]), 1e-12)
