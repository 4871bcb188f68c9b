"""Effective secular equation built from N truncated eigenvalue series.

    F(W, lambda) = {prod_n [W - E_n^[K](lambda)]}^[K]
                 = W**N + sum_{j=1..N} p_j(lambda) W**(N-j)

where ``{...}^[K]`` discards every lambda**j with j > K.  The roots of F in W
resum the series; its W-discriminant vanishes where two roots coalesce.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .exactnum import OrderMismatchError, Polynomial, TruncatedSeries, poly_discriminant
from .roots import DEFAULT_PRECISION_BITS, DEFAULT_SEED, find_roots, find_roots_numeric
from .rspt import EigenSeries


class TruncationMode(str, enum.Enum):
    FULL = "full"
    TRUNCATE_AFTER = "truncate-after"


@dataclass(frozen=True)
class EsePolynomial:
    """Monic W**N + p[0] W**(N-1) + ... + p[N-1]; ``p[j-1]`` is p_j(lambda)."""

    order: int
    p: tuple[Polynomial, ...]
    states: tuple[int, ...] = ()

    @property
    def n_states(self) -> int:
        return len(self.p)

    def w_coefficients(self) -> list[Polynomial]:
        """Coefficients ascending in W: [p_N, ..., p_1, 1]."""
        return list(reversed(self.p)) + [Polynomial([1])]

    def coefficients_at(self, lam) -> list:
        """Numerical W-coefficients (ascending) at a given lambda."""
        return [c.eval_mp(lam) for c in self.w_coefficients()]


def build_ese(series: Sequence[EigenSeries | TruncatedSeries]) -> EsePolynomial:
    """Expand prod_n (W - E_n) with every product truncated at order K."""
    if len(series) < 2:
        raise ValueError("the effective secular equation needs N >= 2 states")
    states = tuple(s.state_index for s in series if isinstance(s, EigenSeries))
    if len(set(states)) != len(states):
        raise ValueError(f"duplicate states in {states}")
    ts = [s.series if isinstance(s, EigenSeries) else s for s in series]
    order = ts[0].order
    for t in ts:
        if t.order != order:
            raise OrderMismatchError(f"series orders differ: {order} vs {t.order}")

    # w[k] multiplies W**k
    one = TruncatedSeries.constant(1, order)
    zero = TruncatedSeries.constant(0, order)
    w = [one]
    for e in ts:
        nxt = [zero] * (len(w) + 1)
        for k, c in enumerate(w):
            nxt[k + 1] = nxt[k + 1] + c
            nxt[k] = nxt[k] - c * e
        w = nxt
    n = len(ts)
    p = tuple(w[n - j].to_polynomial() for j in range(1, n + 1))
    return EsePolynomial(order=order, p=p, states=states)


def ese_discriminant(e: EsePolynomial, mode: TruncationMode | str = TruncationMode.FULL) -> Polynomial:
    """W-discriminant of the ESE as an exact polynomial in lambda.

    ``full`` keeps the whole polynomial (degree <= 2K for N = 2);
    ``truncate-after`` cuts it at lambda**K.
    """
    mode = TruncationMode(mode)
    if e.n_states < 2:
        raise ValueError("discriminant needs N >= 2")
    disc = poly_discriminant(e.w_coefficients())
    if mode is TruncationMode.TRUNCATE_AFTER:
        disc = disc.truncate(e.order)
    return disc


def ese_roots_in_W(
    e: EsePolynomial,
    lam,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    seed: int = DEFAULT_SEED,
) -> list:
    """The N roots W_n(lambda) of the ESE at a given coupling."""
    if isinstance(lam, (int, Fraction)) and not isinstance(lam, bool):
        lam = Fraction(lam)
        return find_roots(Polynomial([c(lam) for c in e.w_coefficients()]), precision_bits, seed=seed).roots
    with mpmath.workprec(precision_bits + 64):
        coeffs = e.coefficients_at(mpmath.mpmathify(lam))
    return find_roots_numeric(coeffs, precision_bits, seed=seed).roots
