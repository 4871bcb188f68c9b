from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from secular.ese import build_ese, ese_discriminant
from secular.eplocate import (
    GAP_THRESHOLD,
    InsufficientCoefficientsError,
    NoExceptionalPointError,
    OracleConvergenceError,
    eigen_series,
    ep_table,
    estimate_radius,
    locate_ep,
    oracle_eigenvalues,
    radius_estimates,
)
from secular.models import ModelSpec, build_mathieu
from secular.roots import find_roots
from secular.rspt import minimal_dim

REFERENCE = mpmath.mpf("3.769957494")


@pytest.fixture(scope="module")
def k13():
    return locate_ep("mathieu-2pi-even", (1, 2), 13)


def test_k13_estimate(k13):
    assert abs(k13.lambda_p.real - mpmath.mpf("1.931392443")) < 5e-9
    assert abs(k13.lambda_p.imag - mpmath.mpf("3.237638378")) < 5e-9
    assert abs(k13.modulus - mpmath.mpf("3.769957431")) < 5e-9
    assert k13.lambda_p.imag > 0
    assert k13.coalesced and k13.coalescence_gap < GAP_THRESHOLD
    assert k13.K == 13 and k13.N == 2 and k13.states == (1, 2)


def test_conjugate_partner_is_a_root(k13):
    assert len(k13.candidates) == 2
    with mpmath.workprec(128):
        assert any(abs(z - mpmath.conj(k13.lambda_p)) < 1e-30 for z in k13.candidates)


def test_k0_has_no_exceptional_point():
    with pytest.raises(NoExceptionalPointError):
        locate_ep("mathieu-2pi-even", (1, 2), 0)
    rows = ep_table("mathieu-2pi-even", (1, 2), [0])
    assert len(rows) == 1 and not rows[0].ok and "constant" in rows[0].error


def test_table_rows_ordered_and_close_to_reference():
    rows = ep_table("mathieu-2pi-even", (1, 2), range(10, 14))
    assert [r.K for r in rows] == [10, 11, 12, 13]
    for r in rows:
        assert abs(r.estimate.modulus - REFERENCE) < 2.2e-6
    dev = [abs(r.estimate.modulus - REFERENCE) for r in rows]
    assert dev[-1] < dev[0]


def test_table_rejects_bad_orders():
    with pytest.raises(ValueError):
        ep_table("mathieu-2pi-even", (1, 2), [])
    with pytest.raises(ValueError):
        ep_table("mathieu-2pi-even", (1, 2), [12, 10])


def test_three_state_model_space_coalescence():
    est = locate_ep("mathieu-2pi-even", (1, 2, 3), 8)
    ws = est.w_roots
    gaps = sorted(abs(a - b) for i, a in enumerate(ws) for b in ws[i + 1:])
    assert gaps[0] < 1e-10
    assert gaps[1] > 100 * gaps[0]


def test_pi_odd_pipeline_runs():
    est = locate_ep(ModelSpec(kind="mathieu-pi-odd"), (1, 2), 10)
    assert est.coalesced and est.modulus > 0


def test_oracle_at_zero():
    assert oracle_eigenvalues("mathieu-2pi-even", 0.0, 30, 3) == [1.0, 9.0, 25.0]


def test_oracle_matches_series_at_small_lambda():
    vals = oracle_eigenvalues("mathieu-2pi-even", 0.1, 30, 2)
    for n, s in enumerate(eigen_series("mathieu-2pi-even", [1, 2], 13)):
        assert abs(float(s.series(F(1, 10))) - vals[n]) < 1e-8


def test_oracle_asymmetric_equals_symmetric_variant():
    asym = oracle_eigenvalues("mathieu-pi-even", 0.5, 30, 4)
    op = build_mathieu("mathieu-pi-even", 30)
    a = op.dense(0.5)
    a[0, 1] = a[1, 0] = 0.5 * np.sqrt(2.0)
    sym = np.linalg.eigvalsh(a)[:4]
    assert np.max(np.abs(np.array(asym) - sym)) < 1e-10


def test_oracle_convergence_failure():
    with pytest.raises(OracleConvergenceError):
        oracle_eigenvalues("mathieu-2pi-even", 40.0, 4, 2)


def test_radius_geometric():
    coeffs = [F(1, 2**j) for j in range(14)]
    assert abs(estimate_radius(coeffs) - 2) < 1e-6
    assert radius_estimates(coeffs).method == "domb-sykes"


def test_radius_alternating_single_singularity():
    # log(1 + x/3) has its singularity at -3
    coeffs = [F(0)] + [F((-1) ** (j + 1), j * 3**j) for j in range(1, 16)]
    assert abs(estimate_radius(coeffs) - 3) < 1e-2


def test_radius_mathieu():
    s = eigen_series("mathieu-2pi-even", [1], 13)[0]
    est = radius_estimates(s)
    assert est.method == "mercer-roberts"
    assert abs(est.radius - 3.7699575) < 0.1 * 3.7699575


def test_radius_cross_oracle(k13):
    s = eigen_series("mathieu-2pi-even", [1], 13)[0]
    est = radius_estimates(s)
    assert abs(est.radius - float(k13.modulus)) <= est.uncertainty


def test_radius_errors():
    with pytest.raises(InsufficientCoefficientsError):
        estimate_radius([F(1)] + [F(0)] * 10)
    with pytest.raises(InsufficientCoefficientsError):
        estimate_radius([F(1), F(1), F(1)])


def test_truncate_after_mode_is_offered():
    est = locate_ep("mathieu-2pi-even", (1, 2), 13, mode="truncate-after")
    assert abs(est.modulus - REFERENCE) < 1e-6


def test_discriminant_roots_closed_under_conjugation():
    e = build_ese(eigen_series("mathieu-2pi-even", [1, 2], 13))
    rs = find_roots(ese_discriminant(e))
    with mpmath.workprec(128):
        for z in rs.roots:
            assert min(abs(mpmath.conj(z) - w) for w in rs.roots) < 1e-19 * max(1, abs(z))


def test_minimal_dim_used_for_mathieu():
    from secular.eplocate import operator_for

    op = operator_for("mathieu-2pi-even", (1, 2), 13)
    assert op.dim == minimal_dim(2, 13)
