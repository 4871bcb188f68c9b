"""Exact banded matrix models H = H0 + lambda * H_I.

H0 is diagonal (the unperturbed energies) and H_I is banded.  Mathieu
operators -d2/dx2 + 2 lambda cos(2x) are represented in the trigonometric
basis of each symmetry class, where they are tridiagonal:

=================  ==================  =====================================
subspace           basis               diag0
=================  ==================  =====================================
mathieu-2pi-even   cos((2k-1)x)        1, 9, 25, ...   (H_I[0][0] = +1)
mathieu-2pi-odd    sin((2k-1)x)        1, 9, 25, ...   (H_I[0][0] = -1)
mathieu-pi-even    1, cos(2kx)         0, 4, 16, ...
mathieu-pi-odd     sin(2kx)            4, 16, 36, ...
=================  ==================  =====================================

The sqrt(2) coupling between the constant and cos(2x) is replaced by the
diagonally similar rational pair (2, 1), which leaves every eigenvalue
unchanged.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .exactnum import RationalLike, parse_rational


class ModelError(ValueError):
    """Ill-formed model input (degenerate spectrum, bad dimension, bad bands)."""


class DegeneracyError(ModelError):
    pass


class ModelKind(str, enum.Enum):
    MATHIEU_PI_EVEN = "mathieu-pi-even"
    MATHIEU_PI_ODD = "mathieu-pi-odd"
    MATHIEU_2PI_EVEN = "mathieu-2pi-even"
    MATHIEU_2PI_ODD = "mathieu-2pi-odd"
    GENERIC = "generic"

    @property
    def is_mathieu(self) -> bool:
        return self is not ModelKind.GENERIC


MATHIEU_KINDS = tuple(k for k in ModelKind if k.is_mathieu)


@dataclass(frozen=True)
class BandedOperator:
    """Finite matrix pair (H0 diagonal, H_I banded) over the rationals.

    ``bands[d][k]`` is H_I[k][k + d] for d >= 0 and H_I[k - d][k] for d < 0,
    so every band of offset d holds ``dim - |d|`` entries.  ``truncated``
    marks a finite section of an infinite operator (Mathieu), for which the
    perturbation engine checks that the section is large enough.
    """

    diag0: tuple[Fraction, ...]
    bands: Mapping[int, tuple[Fraction, ...]]
    truncated: bool = False
    name: str = "generic"
    _order: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        diag0 = tuple(parse_rational(x) for x in self.diag0)
        bands = {int(d): tuple(parse_rational(x) for x in v) for d, v in self.bands.items()}
        object.__setattr__(self, "diag0", diag0)
        object.__setattr__(self, "bands", dict(sorted(bands.items())))
        m = len(diag0)
        if m < 1:
            raise ModelError("operator needs at least one state")
        for d, v in bands.items():
            if abs(d) >= m and v:
                raise ModelError(f"band offset {d} does not fit a {m}x{m} matrix")
            if abs(d) < m and len(v) != m - abs(d):
                raise ModelError(f"band {d} has {len(v)} entries, expected {m - abs(d)}")
        if len(set(diag0)) != m:
            raise DegeneracyError("unperturbed energies must be pairwise distinct")
        object.__setattr__(self, "_order", tuple(sorted(range(m), key=diag0.__getitem__)))

    @property
    def dim(self) -> int:
        return len(self.diag0)

    @property
    def bandwidth(self) -> int:
        offs = [abs(d) for d, v in self.bands.items() if d != 0 and any(v)]
        return max(offs, default=1)

    def state_position(self, n: int) -> int:
        """0-based row of the n-th state (1-based, ascending unperturbed energy)."""
        if not 1 <= n <= self.dim:
            raise ModelError(f"state {n} outside 1..{self.dim}")
        return self._order[n - 1]

    def perturbation_matvec(self, v: Sequence[Fraction]) -> list[Fraction]:
        """Exact product H_I @ v."""
        m = self.dim
        out = [Fraction(0)] * m
        for d, band in self.bands.items():
            if d >= 0:
                for k, h in enumerate(band):
                    if h and v[k + d]:
                        out[k] += h * v[k + d]
            else:
                for k, h in enumerate(band):
                    if h and v[k]:
                        out[k - d] += h * v[k]
        return out

    def perturbation_entry(self, i: int, j: int) -> Fraction:
        band = self.bands.get(j - i)
        if not band:
            return Fraction(0)
        return band[min(i, j)]

    def dense(self, lam: float = 0.0) -> np.ndarray:
        """Floating point H0 + lam * H_I."""
        m = self.dim
        a = np.zeros((m, m), dtype=complex if isinstance(lam, complex) else float)
        a[np.diag_indices(m)] = [float(x) for x in self.diag0]
        for d, band in self.bands.items():
            vals = np.array([float(x) for x in band])
            if d >= 0:
                a[np.arange(m - d), np.arange(d, m)] += lam * vals
            else:
                a[np.arange(-d, m), np.arange(m + d)] += lam * vals
        return a

    def is_symmetric(self) -> bool:
        return all(self.bands.get(-d, ()) == v for d, v in self.bands.items())


@dataclass
class ModelSpec:
    """Model description as read from the CLI or a model file.

    For Mathieu kinds ``dim`` may be ``None``: the dimension is then chosen
    by the caller (see :func:`secular.rspt.minimal_dim`).
    """

    kind: ModelKind
    dim: int | None = None
    diag0: Sequence[RationalLike] = ()
    bands: Mapping[int, Sequence[RationalLike]] = field(default_factory=dict)

    def __post_init__(self):
        try:
            self.kind = ModelKind(self.kind)
        except ValueError as exc:
            raise ModelError(f"unknown model kind {self.kind!r}") from exc
        if self.kind is ModelKind.GENERIC:
            if self.dim is None:
                self.dim = len(self.diag0)
            elif self.dim != len(self.diag0):
                raise ModelError(f"dim={self.dim} but diag0 has {len(self.diag0)} entries")
        elif self.dim is not None and self.dim < 2:
            raise ModelError("Mathieu models need dim >= 2")

    @classmethod
    def from_mapping(cls, data: Mapping) -> "ModelSpec":
        """Build from a parsed model file: kind, dim, diag0, bands."""
        if "kind" not in data:
            raise ModelError("model file lacks 'kind'")
        bands = {}
        for key, vals in (data.get("bands") or {}).items():
            try:
                off = int(str(key).strip())
            except ValueError as exc:
                raise ModelError(f"bad band offset {key!r}") from exc
            bands[off] = [str(v) if not isinstance(v, str) else v for v in vals]
        diag0 = [str(v) if not isinstance(v, str) else v for v in data.get("diag0") or ()]
        dim = data.get("dim")
        return cls(kind=data["kind"], dim=None if dim is None else int(dim), diag0=diag0, bands=bands)

    def build(self, dim: int | None = None) -> BandedOperator:
        if self.kind is ModelKind.GENERIC:
            return build_generic(self)
        m = dim if dim is not None else self.dim
        if m is None:
            raise ModelError("Mathieu model needs a dimension")
        return build_mathieu(self.kind, m)


def build_mathieu(subspace: ModelKind | str, dim: int) -> BandedOperator:
    """Tridiagonal representation of the Mathieu operator in one symmetry class."""
    kind = ModelKind(subspace)
    if not kind.is_mathieu:
        raise ModelError(f"{kind.value} is not a Mathieu subspace")
    if dim < 2:
        raise ModelError("Mathieu models need dim >= 2")
    m = dim
    ones = tuple(Fraction(1) for _ in range(m - 1))
    upper, lower = ones, ones
    hdiag = [Fraction(0)] * m
    if kind is ModelKind.MATHIEU_2PI_EVEN:
        diag0 = [Fraction((2 * k - 1) ** 2) for k in range(1, m + 1)]
        hdiag[0] = Fraction(1)
    elif kind is ModelKind.MATHIEU_2PI_ODD:
        diag0 = [Fraction((2 * k - 1) ** 2) for k in range(1, m + 1)]
        hdiag[0] = Fraction(-1)
    elif kind is ModelKind.MATHIEU_PI_EVEN:
        diag0 = [Fraction((2 * k) ** 2) for k in range(m)]
        upper = (Fraction(2),) + ones[1:]
    else:
        diag0 = [Fraction((2 * k) ** 2) for k in range(1, m + 1)]
    return BandedOperator(
        diag0=tuple(diag0),
        bands={-1: lower, 0: tuple(hdiag), 1: upper},
        truncated=True,
        name=kind.value,
    )


def build_generic(spec: ModelSpec) -> BandedOperator:
    """Generic banded model from exact rational strings."""
    if spec.kind is not ModelKind.GENERIC:
        raise ModelError("build_generic needs kind 'generic'")
    diag0 = [parse_rational(x) for x in spec.diag0]
    if len(diag0) < 1:
        raise ModelError("generic model needs diag0")
    bands = {int(d): [parse_rational(x) for x in v] for d, v in spec.bands.items()}
    return BandedOperator(diag0=tuple(diag0), bands=bands, truncated=False, name="generic")
