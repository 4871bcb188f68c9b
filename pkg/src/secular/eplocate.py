"""Exceptional-point pipeline and the independent checks that go with it.

model -> eigenvalue series -> ESE -> discriminant -> closest-to-origin root.
The floating-point eigensolver oracle and the coefficient-ratio radius
estimate share no code with the exact path they confirm.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .ese import EsePolynomial, TruncationMode, build_ese, ese_discriminant, ese_roots_in_W
from .exactnum import Polynomial
from .models import BandedOperator, ModelError, ModelKind, ModelSpec
from .roots import DEFAULT_PRECISION_BITS, DEFAULT_SEED, RootSet, find_roots, smallest_modulus_roots
from .rspt import EigenSeries, minimal_dim, rs_series

REFERENCE_MODULUS = "3.769957494"
GAP_THRESHOLD = 1e-4


class NoExceptionalPointError(ValueError):
    """The discriminant has no lambda-roots at this order."""


class OracleConvergenceError(RuntimeError):
    pass


class InsufficientCoefficientsError(ValueError):
    pass


@dataclass
class ExceptionalPointEstimate:
    K: int
    N: int
    lambda_p: mpmath.mpc
    modulus: mpmath.mpf
    coalescence_gap: mpmath.mpf
    discriminant_residual: mpmath.mpf
    mode: TruncationMode
    states: tuple[int, ...] = ()
    precision_bits: int = DEFAULT_PRECISION_BITS
    w_roots: list = field(default_factory=list, repr=False)
    candidates: list = field(default_factory=list, repr=False)

    @property
    def coalesced(self) -> bool:
        return self.coalescence_gap <= GAP_THRESHOLD


@dataclass
class TableRow:
    K: int
    estimate: ExceptionalPointEstimate | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.estimate is not None


def as_spec(model: ModelSpec | ModelKind | str) -> ModelSpec:
    if isinstance(model, ModelSpec):
        return model
    return ModelSpec(kind=ModelKind(model))


def operator_for(model: ModelSpec | ModelKind | str, states: Iterable[int], order: int) -> BandedOperator:
    """Build the operator, enlarging Mathieu sections to keep the series exact."""
    spec = as_spec(model)
    if spec.kind is ModelKind.GENERIC:
        return spec.build()
    need = max(minimal_dim(n, order, 1) for n in states)
    dim = max(need, spec.dim or 0)
    return spec.build(dim)


def eigen_series(model, states: Sequence[int], order: int) -> list[EigenSeries]:
    op = operator_for(model, states, order)
    return [rs_series(op, n, order) for n in states]


def _pair_gaps(ws: Sequence) -> list:
    return sorted(abs(a - b) for a, b in combinations(ws, 2))


def locate_ep(
    model: ModelSpec | ModelKind | str,
    states: Sequence[int] = (1, 2),
    order: int = 13,
    mode: TruncationMode | str = TruncationMode.FULL,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    seed: int = DEFAULT_SEED,
) -> ExceptionalPointEstimate:
    """Exceptional point closest to the origin predicted by the order-K ESE."""
    states = tuple(states)
    if len(set(states)) != len(states):
        raise ValueError(f"duplicate states in {states}")
    mode = TruncationMode(mode)
    ese = build_ese(eigen_series(model, states, order))
    disc = ese_discriminant(ese, mode)
    return _estimate_from(ese, disc, mode, precision_bits, seed)


def _estimate_from(
    ese: EsePolynomial, disc: Polynomial, mode: TruncationMode, precision_bits: int, seed: int
) -> ExceptionalPointEstimate:
    if disc.degree < 1:
        raise NoExceptionalPointError(f"discriminant is constant ({disc}) at order {ese.order}")
    rs: RootSet = find_roots(disc, precision_bits, seed=seed)
    picked = smallest_modulus_roots(rs)
    # upper-half-plane representative; the conjugate is its partner in `picked`
    lam = max(picked, key=lambda z: (float(z.imag), -float(z.real)))
    with mpmath.workprec(precision_bits):
        ws = ese_roots_in_W(ese, lam, precision_bits, seed=seed)
        gaps = _pair_gaps(ws)
        residual = abs(disc.eval_mp(lam))
        return ExceptionalPointEstimate(
            K=ese.order,
            N=ese.n_states,
            lambda_p=+lam,
            modulus=abs(lam),
            coalescence_gap=gaps[0],
            discriminant_residual=residual,
            mode=mode,
            states=ese.states,
            precision_bits=precision_bits,
            w_roots=ws,
            candidates=picked,
        )


def ep_table(
    model: ModelSpec | ModelKind | str,
    states: Sequence[int] = (1, 2),
    orders: Iterable[int] = range(10, 14),
    mode: TruncationMode | str = TruncationMode.FULL,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    seed: int = DEFAULT_SEED,
) -> list[TableRow]:
    """One estimate per order; failing orders become rows with an error."""
    orders = list(orders)
    if not orders:
        raise ValueError("no orders requested")
    if orders != sorted(orders):
        raise ValueError("orders must be ascending")
    mode = TruncationMode(mode)
    rows = []
    for k in orders:
        try:
            rows.append(TableRow(k, estimate=locate_ep(model, states, k, mode, precision_bits, seed)))
        except (NoExceptionalPointError, ArithmeticError, RuntimeError, ValueError) as exc:
            rows.append(TableRow(k, error=f"{type(exc).__name__}: {exc}"))
    return rows


# --------------------------------------------------------------------------
# floating point eigenvalue oracle


def _lowest_eigenvalues(op: BandedOperator, lam: float, count: int) -> np.ndarray:
    a = op.dense(lam)
    if op.is_symmetric():
        vals = np.linalg.eigvalsh(a)
    else:
        # LAPACK geev balances the matrix before the QR sweep
        vals = np.linalg.eigvals(a)
    return np.sort(np.asarray(vals).real)[:count]


def oracle_eigenvalues(
    model: ModelSpec | ModelKind | str | BandedOperator,
    lam: float,
    dim: int = 30,
    count: int = 2,
    tol: float = 1e-10,
) -> list[float]:
    """Lowest ``count`` eigenvalues of the dim x dim section of H0 + lam*H_I.

    Mathieu sections are recomputed at dim + 10 and must agree to ``tol``;
    generic models are finite and used as given.
    """
    lam = float(lam)
    if isinstance(model, BandedOperator):
        op = model
        spec = None
    else:
        spec = as_spec(model)
        op = spec.build(dim) if spec.kind is not ModelKind.GENERIC else spec.build()
    if count > op.dim:
        raise ModelError(f"asked for {count} eigenvalues of a {op.dim}x{op.dim} matrix")
    vals = _lowest_eigenvalues(op, lam, count)
    if spec is not None and spec.kind is not ModelKind.GENERIC:
        bigger = _lowest_eigenvalues(spec.build(op.dim + 10), lam, count)
        dev = float(np.max(np.abs(bigger - vals)))
        if dev > tol:
            raise OracleConvergenceError(f"section {op.dim} not converged: {dev:.3e} > {tol:g}")
    return [float(v) for v in vals]


# --------------------------------------------------------------------------
# radius of convergence from the coefficients


@dataclass
class RadiusEstimate:
    radius: float
    uncertainty: float
    method: str
    root_test: float
    fits: list[float] = field(default_factory=list)


def _extrapolate(ns: Sequence[int], values: Sequence[float], windows: Sequence[int]) -> list[float]:
    x = 1.0 / np.asarray(ns, dtype=float)
    y = np.asarray(values, dtype=float)
    out = []
    for m in windows:
        if m > len(x):
            continue
        slope, intercept = np.polyfit(x[-m:], y[-m:], 1)
        if intercept != 0:
            out.append(1.0 / abs(intercept))
    return out


def _regular_signs(tail: Sequence[Fraction]) -> bool:
    if any(c == 0 for c in tail):
        return False
    flips = [(a > 0) != (b > 0) for a, b in zip(tail, tail[1:])]
    return all(flips) or not any(flips)


def radius_estimates(series: EigenSeries | Sequence[Fraction], windows: Sequence[int] = (4, 5, 6, 7, 8)) -> RadiusEstimate:
    """Ratio-method estimates of the radius of convergence.

    Coefficients of one sign, or of strictly alternating sign, point to a
    single real singularity: Domb-Sykes, c_j / c_{j-1} against 1/j.
    Otherwise a complex-conjugate pair dominates and the Mercer-Roberts
    variant fits B_n against 1/n, with
    B_n**2 = (c_{n+1} c_{n-1} - c_n**2) / (c_n c_{n-2} - c_{n-1}**2).
    The reported radius is the median over fit windows; the uncertainty is
    half the spread of the window fits.
    """
    c = list(series.coeffs if isinstance(series, EigenSeries) else series)
    order = len(c) - 1
    nonzero = [j for j in range(1, order + 1) if c[j] != 0]
    if order < 6 or len(nonzero) < 4 or c[-1] == 0:
        raise InsufficientCoefficientsError("need order >= 6 with a nonzero coefficient tail")

    root_fits = _extrapolate(nonzero, [float(abs(c[j])) ** (1.0 / j) for j in nonzero], windows)
    root_test = statistics.median(root_fits) if root_fits else float("nan")

    tail = c[order // 2 :]
    fits: list[float] = []
    if _regular_signs(tail):
        method = "domb-sykes"
        ns = [j for j in range(1, order + 1) if c[j - 1] != 0]
        fits = _extrapolate(ns, [float(c[j] / c[j - 1]) for j in ns], windows)
    if not fits:
        method = "mercer-roberts"
        ns, vals = [], []
        for n in range(3, order):
            den = c[n] * c[n - 2] - c[n - 1] ** 2
            if den != 0:
                ns.append(n)
                vals.append(abs(float((c[n + 1] * c[n - 1] - c[n] ** 2) / den)) ** 0.5)
        fits = _extrapolate(ns, vals, windows)
    if not fits:
        raise InsufficientCoefficientsError("no usable coefficient ratios")
    return RadiusEstimate(
        radius=float(statistics.median(fits)),
        uncertainty=float(max(fits) - min(fits)) / 2,
        method=method,
        root_test=float(root_test),
        fits=[float(f) for f in fits],
    )


def estimate_radius(series: EigenSeries | Sequence[Fraction]) -> float:
    return radius_estimates(series).radius
