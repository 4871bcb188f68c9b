"""Exact rational scalars, truncated power series and polynomials over Q.

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator).  Every other module builds on the three value types here:

* ``TruncatedSeries`` -- a power series in lambda carried to a fixed order K;
  products discard every lambda**j with j > K.
* ``Polynomial`` -- a dense univariate polynomial with rational coefficients.
  The zero polynomial has an empty coefficient tuple.
* polynomials in W whose coefficients are ``Polynomial`` objects in lambda,
  passed around as plain sequences (index = power of W) and consumed by
  :func:`poly_resultant`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

import mpmath
from mpmath import libmp

Rational = Fraction
RationalLike = Union[Fraction, int, str]


class OrderMismatchError(ValueError):
    """Binary series operation on operands truncated at different orders."""


class ZeroPolynomialError(ValueError):
    pass


def parse_rational(value: RationalLike) -> Fraction:
    """Parse ``"p/q"``, an integer or a finite decimal string exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational string {value!r}") from exc
    raise ValueError(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    return str(q)


def to_mpf(q: Fraction) -> mpmath.mpf:
    """Round an exact rational to the current mpmath precision (one rounding)."""
    prec = mpmath.mp.prec
    return mpmath.mp.make_mpf(libmp.from_rational(q.numerator, q.denominator, prec, libmp.round_nearest))


def _to_mp_number(x):
    if isinstance(x, Fraction):
        return to_mpf(x)
    if isinstance(x, str):
        return mpmath.mpmathify(to_mpf(parse_rational(x)))
    return mpmath.mpmathify(x)


def mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    """Exact rational value of a binary floating point number."""
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


# --------------------------------------------------------------------------
# truncated power series


class TruncatedSeries:
    """Power series sum_j coeffs[j] * lambda**j known through order ``order``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike], order: int | None = None):
        cs = tuple(parse_rational(c) for c in coeffs)
        if order is None:
            if not cs:
                raise ValueError("series needs at least the constant coefficient")
        elif order < 0:
            raise ValueError("order must be non-negative")
        elif len(cs) != order + 1:
            raise ValueError(f"order {order} requires {order + 1} coefficients, got {len(cs)}")
        self._coeffs = cs

    @classmethod
    def constant(cls, c: RationalLike, order: int) -> "TruncatedSeries":
        return cls([parse_rational(c)] + [Fraction(0)] * order)

    @classmethod
    def from_polynomial(cls, p: "Polynomial", order: int) -> "TruncatedSeries":
        cs = list(p.coeffs[: order + 1])
        cs += [Fraction(0)] * (order + 1 - len(cs))
        return cls(cs)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, j: int) -> Fraction:
        return self._coeffs[j]

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(("TruncatedSeries", self._coeffs))

    def __repr__(self) -> str:
        return f"TruncatedSeries([{', '.join(map(str, self._coeffs))}])"

    def _check(self, other: "TruncatedSeries") -> None:
        if not isinstance(other, TruncatedSeries):
            raise TypeError(f"expected TruncatedSeries, got {type(other).__name__}")
        if other.order != self.order:
            raise OrderMismatchError(f"series orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(a + b for a, b in zip(self._coeffs, other._coeffs))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(-a for a in self._coeffs)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return TruncatedSeries(a * other for a in self._coeffs)
        self._check(other)
        a, b = self._coeffs, other._coeffs
        return TruncatedSeries(
            sum((a[i] * b[j - i] for i in range(j + 1)), Fraction(0)) for j in range(len(a))
        )

    __rmul__ = __mul__

    def to_polynomial(self) -> "Polynomial":
        return Polynomial(self._coeffs)

    def __call__(self, lam, prec: int = 128):
        return series_eval(self, lam, prec)


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def series_neg(a: TruncatedSeries) -> TruncatedSeries:
    return -a


def series_mul_truncated(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product of ``a`` and ``b`` with every term above order K dropped."""
    return a * b


def series_eval(a: TruncatedSeries, lam, prec: int = 128):
    """Horner evaluation of the partial sum at ``lam`` with ``prec`` bits."""
    with mpmath.workprec(prec):
        z = _to_mp_number(lam)
        acc = mpmath.mpf(0)
        for c in reversed(a.coeffs):
            acc = acc * z + to_mpf(c)
        return +acc


# --------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Dense polynomial over Q; ``coeffs[k]`` multiplies x**k, zero is ``()``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [parse_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs = tuple(cs)

    @classmethod
    def constant(cls, c: RationalLike) -> "Polynomial":
        return cls([c])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable[RationalLike]) -> "Polynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-parse_rational(r), 1])
        return p

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_constant(self) -> bool:
        return len(self._coeffs) <= 1

    @property
    def leading(self) -> Fraction:
        return self._coeffs[-1] if self._coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self._coeffs[k] if 0 <= k < len(self._coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(("Polynomial", self._coeffs))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __repr__(self) -> str:
        return f"Polynomial([{', '.join(map(str, self._coeffs))}])"

    def __str__(self) -> str:
        return self.format()

    def format(self, var: str = "x") -> str:
        if not self._coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self._coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            elif c.denominator != 1:
                terms.append(f"({c})*{mono}")
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial([other])
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        o = self._coerce(other)
        a, b = self._coeffs, o._coeffs
        if len(a) < len(b):
            a, b = b, a
        return Polynomial([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self._coeffs])

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        o = self._coerce(other)
        a, b = self._coeffs, o._coeffs
        if not a or not b:
            return Polynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result, base = Polynomial([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other) -> tuple["Polynomial", "Polynomial"]:
        d = self._coerce(other)
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._coeffs)
        dd = d.degree
        lead = d.leading
        quo = [Fraction(0)] * max(len(rem) - dd, 0)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            q = c / lead
            quo[k - dd] = q
            for i, dc in enumerate(d._coeffs):
                rem[k - dd + i] -= q * dc
        return Polynomial(quo), Polynomial(rem[:dd] if dd > 0 else [])

    def exact_div(self, other) -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError(f"{other!r} does not divide {self!r}")
        return q

    def derivative(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self._coeffs)][1:])

    def truncate(self, order: int) -> "Polynomial":
        """Drop every term of degree above ``order``."""
        return Polynomial(self._coeffs[: order + 1])

    def __call__(self, x):
        """Exact evaluation for rationals, mpmath evaluation otherwise."""
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            acc = Fraction(0)
            for c in reversed(self._coeffs):
                acc = acc * x + c
            return acc
        return self.eval_mp(x)

    def eval_mp(self, x):
        z = _to_mp_number(x)
        acc = mpmath.mpf(0)
        for c in reversed(self._coeffs):
            acc = acc * z + to_mpf(c)
        return acc

    def max_abs_coeff(self) -> Fraction:
        return max((abs(c) for c in self._coeffs), default=Fraction(0))


def _as_poly(c) -> Polynomial:
    if isinstance(c, Polynomial):
        return c
    if isinstance(c, (int, Fraction, str)) and not isinstance(c, bool):
        return Polynomial([c])
    raise TypeError(f"unsupported coefficient {c!r}")


def _trim_w(f: Sequence) -> list[Polynomial]:
    cs = [_as_poly(c) for c in f]
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def sylvester_matrix(f: Sequence, g: Sequence) -> list[list[Polynomial]]:
    """Sylvester matrix of f, g in W (coefficients ascending in W)."""
    f, g = _trim_w(f), _trim_w(g)
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    zero = Polynomial()
    rows = []
    fd, gd = f[::-1], g[::-1]
    for i in range(n):
        rows.append([zero] * i + fd + [zero] * (size - i - m - 1))
    for i in range(m):
        rows.append([zero] * i + gd + [zero] * (size - i - n - 1))
    return rows


def bareiss_determinant(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Fraction-free determinant over Q[lambda]; every division is exact."""
    a = [list(map(_as_poly, row)) for row in matrix]
    size = len(a)
    if size == 0:
        return Polynomial([1])
    sign = 1
    prev = Polynomial([1])
    for k in range(size - 1):
        if a[k][k].is_zero():
            pivot = next((i for i in range(k + 1, size) if not a[i][k].is_zero()), None)
            if pivot is None:
                return Polynomial()
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, size):
            aik = a[i][k]
            for j in range(k + 1, size):
                a[i][j] = (akk * a[i][j] - aik * a[k][j]).exact_div(prev)
            a[i][k] = Polynomial()
        prev = akk
    det = a[-1][-1]
    return det if sign > 0 else -det


def poly_resultant(f: Sequence, g: Sequence) -> Polynomial:
    """Resultant with respect to W of two polynomials with Q[lambda] coefficients.

    ``f`` and ``g`` list their coefficients in ascending powers of W; each
    coefficient may be a :class:`Polynomial` or a plain rational.
    """
    ft, gt = _trim_w(f), _trim_w(g)
    if not ft or not gt:
        raise ZeroPolynomialError("resultant of a zero polynomial")
    return bareiss_determinant(sylvester_matrix(ft, gt))


def poly_discriminant(f: Sequence) -> Polynomial:
    """Discriminant in W: (-1)**(n(n-1)/2) * Res(f, f') / lead(f)."""
    ft = _trim_w(f)
    if not ft:
        raise ZeroPolynomialError("discriminant of a zero polynomial")
    n = len(ft) - 1
    if n < 1:
        raise ValueError("discriminant needs degree >= 1 in W")
    df = [k * c for k, c in enumerate(ft)][1:]
    res = poly_resultant(ft, df)
    disc = res.exact_div(ft[-1])
    return -disc if (n * (n - 1) // 2) % 2 else disc
