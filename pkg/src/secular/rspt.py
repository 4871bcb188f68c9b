"""Exact Rayleigh-Schroedinger eigenvalue series for banded operators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactnum import TruncatedSeries
from .models import BandedOperator, ModelError


class DimensionError(ModelError):
    """Matrix section too small for exact coefficients at the requested order."""


@dataclass(frozen=True)
class EigenSeries:
    state_index: int
    series: TruncatedSeries

    @property
    def order(self) -> int:
        return self.series.order

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self.series.coeffs


def minimal_dim(n: int, order: int, bandwidth: int = 1) -> int:
    """Recommended section size for exact order-``order`` coefficients of state n.

    The j-th wavefunction correction spreads at most j*bandwidth rows from
    the state, so n + order*bandwidth rows plus one of margin always suffice
    (``rs_series`` itself only insists on n + (order-1)*bandwidth).
    """
    if n < 1 or order < 0 or bandwidth < 1:
        raise ValueError("need n >= 1, order >= 0, bandwidth >= 1")
    return n + order * bandwidth + 1


def rs_series(op: BandedOperator, n: int, order: int) -> EigenSeries:
    """Eigenvalue series E_n(lambda) = sum_j E_j lambda**j through ``order``.

    Recursion with intermediate normalisation (c_j[n] = 0 for j >= 1):
    E_j = (H_I c_{j-1})[n] and, for m != n,
    c_j[m] = ((H_I c_{j-1})[m] - sum_{i=1}^{j-1} E_i c_{j-i}[m]) / (e_n - e_m).
    Only right vectors are needed, so asymmetric bands are fine.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    pos = op.state_position(n)
    if op.truncated:
        # E_K only sees c_{K-1}, whose support ends (K-1)*b rows past the state
        need = pos + 1 + max(order - 1, 0) * op.bandwidth
        if op.dim < need:
            raise DimensionError(f"dimension {op.dim} < {need} needed for state {n} at order {order}")

    m = op.dim
    eps = op.diag0
    en = eps[pos]
    inv_gap = [Fraction(0) if k == pos else 1 / (en - eps[k]) for k in range(m)]

    c0 = [Fraction(0)] * m
    c0[pos] = Fraction(1)
    vecs = [c0]
    energies = [en]
    for j in range(1, order + 1):
        h = op.perturbation_matvec(vecs[j - 1])
        energies.append(h[pos])
        if j == order:
            break
        cj = [Fraction(0)] * m
        for k in range(m):
            if k == pos:
                continue
            s = h[k]
            for i in range(1, j):
                c = vecs[j - i][k]
                if c:
                    s -= energies[i] * c
            if s:
                cj[k] = s * inv_gap[k]
        vecs.append(cj)
    return EigenSeries(n, TruncatedSeries(energies))
