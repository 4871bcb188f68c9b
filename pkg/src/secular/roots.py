"""Simultaneous complex root finding (Aberth-Ehrlich) in multiprecision.

For rational polynomials every evaluation of p and p' is exact: the iterate
z = (X + iY) / 2**e is a dyadic Gaussian rational, the polynomial is scaled
to integer coefficients and Horner runs on Python integers, so the only error
is the final rounding to the working precision.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

import mpmath
from mpmath import libmp

from .exactnum import Polynomial

DEFAULT_PRECISION_BITS = 128
DEFAULT_MAX_ITER = 200
DEFAULT_SEED = 1989


class RootFindingError(RuntimeError):
    """Iteration did not converge; carries the best iterates found."""

    def __init__(self, message: str, roots, residuals):
        super().__init__(message)
        self.roots = list(roots)
        self.residuals = list(residuals)


class NoRootError(ValueError):
    pass


@dataclass
class RootSet:
    roots: list
    residuals: list
    precision_bits: int
    # |p(z)| / |p'(z)|, the size of the next Newton step
    errors: list = field(default_factory=list)
    iterations: int = 0

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def digits(self) -> float:
        return self.precision_bits * math.log10(2)

    def clusters(self, threshold=None) -> list[tuple[mpmath.mpc, int]]:
        """Group roots closer than ``threshold`` (relative to max(1, |z|)).

        The default 2**(-precision_bits/4) separates simple roots while
        merging the ~2**(-bits/m) spread Aberth produces for an m-fold root
        with m <= 4.  Returns (centroid, multiplicity) pairs.
        """
        with mpmath.workprec(self.precision_bits):
            if threshold is None:
                threshold = mpmath.ldexp(1, -self.precision_bits // 4)
            parent = list(range(len(self.roots)))

            def find(i):
                while parent[i] != i:
                    parent[i] = parent[parent[i]]
                    i = parent[i]
                return i

            for i, zi in enumerate(self.roots):
                for j in range(i + 1, len(self.roots)):
                    zj = self.roots[j]
                    if abs(zi - zj) <= threshold * max(1, abs(zi), abs(zj)):
                        parent[find(i)] = find(j)
            groups: dict[int, list] = {}
            for i, z in enumerate(self.roots):
                groups.setdefault(find(i), []).append(z)
            out = []
            for members in groups.values():
                out.append((mpmath.fsum(members) / len(members), len(members)))
            return out


# --------------------------------------------------------------------------
# evaluators


def _dyadic(x: mpmath.mpf) -> tuple[int, int]:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    return (-int(man) if sign else int(man)), int(exp)


def _round_ratio(num: int, den: int, prec: int) -> mpmath.mpf:
    return mpmath.mp.make_mpf(libmp.from_rational(num, den, prec, libmp.round_nearest))


class _ExactEvaluator:
    """p(z) and p'(z) for integer-scaled rational coefficients, exactly."""

    def __init__(self, p: Polynomial):
        lcm = 1
        for c in p.coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        self.scale = lcm
        self.ints = [int(c * lcm) for c in p.coeffs]
        self.degree = len(self.ints) - 1

    def __call__(self, z: mpmath.mpc, prec: int):
        z = mpmath.mpc(z)
        xm, xe = _dyadic(z.real)
        ym, ye = _dyadic(z.imag)
        e = min(xe if xm else 0, ye if ym else 0, 0)
        x = xm << (xe - e) if xm else 0
        y = ym << (ye - e) if ym else 0
        shift = -e
        d = self.degree
        a = self.ints
        # Horner on (x + iy) with coefficient a_k weighted by 2**(shift*(d-k))
        pr, pi = a[d], 0
        dr, di = 0, 0
        for k in range(d - 1, -1, -1):
            # derivative first, it uses the previous p value
            dr, di = dr * x - di * y + pr, dr * y + di * x + pi
            pr, pi = pr * x - pi * y + (a[k] << (shift * (d - k))), pr * y + pi * x
        den_p = self.scale << (shift * d)
        den_d = self.scale << (shift * (d - 1)) if d >= 1 else self.scale
        pv = mpmath.mpc(_round_ratio(pr, den_p, prec), _round_ratio(pi, den_p, prec))
        dv = mpmath.mpc(_round_ratio(dr, den_d, prec), _round_ratio(di, den_d, prec))
        return pv, dv


class _FloatEvaluator:
    """p(z), p'(z) for multiprecision complex coefficients, with guard bits."""

    def __init__(self, coeffs: Sequence, guard: int = 64):
        self.coeffs = list(coeffs)
        self.degree = len(self.coeffs) - 1
        self.guard = guard

    def __call__(self, z, prec: int):
        with mpmath.workprec(prec + self.guard):
            pv = mpmath.mpc(0)
            dv = mpmath.mpc(0)
            for c in reversed(self.coeffs):
                dv = dv * z + pv
                pv = pv * z + c
        with mpmath.workprec(prec):
            return +pv, +dv


def _abs_horner_bound(abs_coeffs: Sequence, r) -> mpmath.mpf:
    acc = mpmath.mpf(0)
    for c in reversed(abs_coeffs):
        acc = acc * r + c
    return acc


def fujiwara_bound(abs_coeffs: Sequence) -> mpmath.mpf:
    """Fujiwara's upper bound on the moduli of the roots (coefficients ascending)."""
    n = len(abs_coeffs) - 1
    an = abs_coeffs[-1]
    terms = [(abs_coeffs[n - k] / an) ** (mpmath.mpf(1) / k) for k in range(1, n)]
    terms.append((abs_coeffs[0] / (2 * an)) ** (mpmath.mpf(1) / n))
    return 2 * max(terms)


# --------------------------------------------------------------------------
# Aberth-Ehrlich iteration


def _aberth(
    evaluate: Callable,
    abs_coeffs: Sequence,
    prec: int,
    max_iter: int,
    seed: int,
) -> RootSet:
    n = len(abs_coeffs) - 1
    rng = random.Random(seed)
    with mpmath.workprec(prec):
        eps = mpmath.ldexp(1, -prec)
        radius = fujiwara_bound(abs_coeffs)
        if radius == 0:
            return _finish(evaluate, [mpmath.mpc(0)] * n, prec, 0)
        phase = rng.uniform(0, 2 * math.pi)
        z = []
        for k in range(n):
            ang = phase + 2 * math.pi * k / n + rng.uniform(-0.25, 0.25) / n
            rad = radius * (1 + 0.05 * rng.uniform(-1, 1))
            z.append(mpmath.mpc(rad * mpmath.cos(ang), rad * mpmath.sin(ang)))

        done = [False] * n
        step_tol = 16 * eps
        it = 0
        while not all(done):
            if it >= max_iter:
                rs = _finish(evaluate, z, prec, it)
                raise RootFindingError(
                    f"Aberth iteration did not converge in {max_iter} steps", rs.roots, rs.residuals
                )
            it += 1
            for i in range(n):
                if done[i]:
                    continue
                zi = z[i]
                pv, dv = evaluate(zi, prec)
                if pv == 0:
                    done[i] = True
                    continue
                # backward-error stop: |p(z)| at rounding level of the evaluation
                if abs(pv) <= 4 * eps * _abs_horner_bound(abs_coeffs, abs(zi)):
                    done[i] = True
                    continue
                s = mpmath.mpc(0)
                for j in range(n):
                    if j != i:
                        diff = zi - z[j]
                        if diff != 0:
                            s += 1 / diff
                if dv == 0:
                    corr = mpmath.mpc(eps * max(1, abs(zi)), 0)
                else:
                    ratio = pv / dv
                    denom = 1 - ratio * s
                    corr = ratio / denom if denom != 0 else ratio
                z[i] = zi - corr
                if abs(corr) <= step_tol * max(abs(z[i]), eps):
                    done[i] = True
        return _finish(evaluate, z, prec, it)


def _finish(evaluate: Callable, z: list, prec: int, iterations: int) -> RootSet:
    roots, residuals, errors = [], [], []
    with mpmath.workprec(prec):
        for zi in z:
            pv, dv = evaluate(zi, prec)
            # Newton polish, kept only while it lowers the residual
            for _ in range(4):
                if pv == 0 or dv == 0:
                    break
                cand = zi - pv / dv
                pc, dc = evaluate(cand, prec)
                if abs(pc) >= abs(pv):
                    break
                zi, pv, dv = cand, pc, dc
            roots.append(+zi)
            residuals.append(abs(pv))
            errors.append(abs(pv / dv) if dv != 0 else mpmath.inf)
    return RootSet(roots=roots, residuals=residuals, precision_bits=prec, errors=errors, iterations=iterations)


def find_roots(
    p: Polynomial,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = DEFAULT_SEED,
) -> RootSet:
    """All complex roots of a rational polynomial."""
    if p.degree < 1:
        raise ValueError("root finding needs degree >= 1")
    with mpmath.workprec(precision_bits):
        abs_coeffs = [abs(mpmath.mpf(c.numerator) / c.denominator) for c in p.coeffs]
    return _aberth(_ExactEvaluator(p), abs_coeffs, precision_bits, max_iter, seed)


def find_roots_numeric(
    coeffs: Sequence,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = DEFAULT_SEED,
) -> RootSet:
    """All roots of sum coeffs[k] z**k with multiprecision complex coefficients."""
    with mpmath.workprec(precision_bits + 64):
        cs = [mpmath.mpmathify(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if len(cs) < 2:
        raise ValueError("root finding needs degree >= 1")
    with mpmath.workprec(precision_bits):
        abs_coeffs = [abs(c) for c in cs]
    return _aberth(_FloatEvaluator(cs), abs_coeffs, precision_bits, max_iter, seed)


def smallest_modulus_roots(rs: RootSet, exclude_zero_tol: float = 1e-12) -> list:
    """Roots of least modulus above ``exclude_zero_tol``, conjugate partners together.

    Two moduli tie when they differ by less than 1e3 times the larger of the
    roots' forward-error estimates (|p|/|p'|) and 2**-bits * |z|.  The result
    is ordered by increasing modulus, upper-half-plane member of a pair first.
    """
    with mpmath.workprec(rs.precision_bits):
        cands = [
            (abs(z), z, rs.errors[i] if rs.errors else mpmath.mpf(0))
            for i, z in enumerate(rs.roots)
            if abs(z) > exclude_zero_tol
        ]
        if not cands:
            raise NoRootError(f"no root with modulus above {exclude_zero_tol}")
        floor = mpmath.ldexp(1, -rs.precision_bits)
        mod_min, _, err_min = min(cands, key=lambda t: t[0])
        picked = []
        for mod, z, err in cands:
            tol = 1000 * max(err, err_min, floor * mod)
            if mod - mod_min <= tol:
                picked.append((mod, z))
        picked.sort(key=lambda t: (float(t[1].real), -float(t[1].imag)))
        return [z for _, z in picked]
