from fractions import Fraction as F

import numpy as np
import pytest

from secular.models import (
    BandedOperator,
    DegeneracyError,
    ModelError,
    ModelKind,
    ModelSpec,
    build_generic,
    build_mathieu,
)


def test_2pi_even_small():
    op = build_mathieu("mathieu-2pi-even", 3)
    assert op.diag0 == (1, 9, 25)
    assert op.bands[0] == (1, 0, 0)
    assert op.bands[1] == (1, 1)
    assert op.bands[-1] == (1, 1)
    assert op.bandwidth == 1


def test_2pi_odd_self_coupling():
    op = build_mathieu(ModelKind.MATHIEU_2PI_ODD, 4)
    assert op.diag0 == (1, 9, 25, 49)
    assert op.bands[0] == (-1, 0, 0, 0)


def test_pi_even_asymmetric_first_coupling():
    op = build_mathieu("mathieu-pi-even", 4)
    assert op.diag0 == (0, 4, 16, 36)
    assert op.bands[1] == (2, 1, 1)
    assert op.bands[-1] == (1, 1, 1)
    assert not any(op.bands[0])
    assert not op.is_symmetric()


def test_pi_odd():
    op = build_mathieu("mathieu-pi-odd", 3)
    assert op.diag0 == (4, 16, 36)
    assert op.is_symmetric()


@pytest.mark.parametrize("kind", [k for k in ModelKind if k.is_mathieu])
def test_mathieu_dimension_guard(kind):
    with pytest.raises(ModelError):
        build_mathieu(kind, 1)


def test_generic_models():
    spec = ModelSpec(kind="generic", diag0=["1", "2", "3"], bands={1: ["1", "1"], -1: ["1", "1"]})
    op = build_generic(spec)
    assert op.dim == 3 and op.is_symmetric()
    asym = build_generic(ModelSpec(kind="generic", diag0=["0", "4"], bands={1: ["2"], -1: ["1"]}))
    assert asym.perturbation_entry(0, 1) == 2 and asym.perturbation_entry(1, 0) == 1


def test_generic_degenerate():
    with pytest.raises(DegeneracyError):
        build_generic(ModelSpec(kind="generic", diag0=["1", "1", "3"], bands={}))


def test_generic_bad_band_length():
    with pytest.raises(ModelError):
        build_generic(ModelSpec(kind="generic", diag0=["1", "2", "3"], bands={1: ["1"]}))


def test_generic_malformed_rational():
    with pytest.raises(ValueError):
        build_generic(ModelSpec(kind="generic", diag0=["1", "2/x"], bands={}))


def test_from_mapping():
    spec = ModelSpec.from_mapping({"kind": "generic", "diag0": ["1/2", 3], "bands": {"+1": ["1"], "-1": [2]}})
    op = spec.build()
    assert op.diag0 == (F(1, 2), 3)
    assert op.bands[1] == (1,) and op.bands[-1] == (2,)


def test_unknown_kind():
    with pytest.raises(ModelError):
        ModelSpec(kind="mathieu-4pi")


def test_state_ordering_follows_unperturbed_energy():
    op = BandedOperator(diag0=(5, 1, 3), bands={})
    assert [op.state_position(n) for n in (1, 2, 3)] == [1, 2, 0]


def test_dense_matches_entries():
    op = build_mathieu("mathieu-pi-even", 5)
    a = op.dense(0.5)
    for i in range(5):
        for j in range(5):
            expected = float(op.diag0[i]) * (i == j) + 0.5 * float(op.perturbation_entry(i, j))
            assert a[i, j] == expected


@pytest.mark.parametrize(
    "kind,expected",
    [
        ("mathieu-2pi-even", [1, 9, 25, 49]),
        ("mathieu-2pi-odd", [1, 9, 25, 49]),
        ("mathieu-pi-even", [0, 4, 16, 36]),
        ("mathieu-pi-odd", [4, 16, 36, 64]),
    ],
)
def test_unperturbed_spectra(kind, expected):
    assert list(build_mathieu(kind, 4).diag0) == expected


def test_pi_even_similarity_to_symmetric_form():
    op = build_mathieu("mathieu-pi-even", 12)
    lam = 0.5
    sym = op.dense(lam)
    sym[0, 1] = sym[1, 0] = lam * np.sqrt(2.0)
    assert np.allclose(np.sort(np.linalg.eigvals(op.dense(lam)).real), np.linalg.eigvalsh(sym), atol=1e-10)
