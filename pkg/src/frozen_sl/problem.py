"""Problem descriptions: potential, boundary data, validated spec, spectra.

``ProblemSpec`` is the single validated input object every solver path
consumes.  All validation happens here so that the frozen argument, the
potential coverage and the boundary rows are checked exactly once.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .timescale import FiniteScale, TimeScale, TwoIntervalScale

# ---------------------------------------------------------------------------
# potentials


@dataclass(frozen=True)
class ConstantPotential:
    value: float

    def __call__(self, t):
        return self.value

    @property
    def is_constant(self) -> bool:
        return True


@dataclass(frozen=True)
class PolynomialPotential:
    """q(t) as a polynomial in t, coefficients ascending."""

    coeffs: tuple

    def __call__(self, t):
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * t + c
        return acc

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) == 1


@dataclass(frozen=True)
class TablePotential:
    """q given pointwise; lookups are exact, no interpolation.

    Suitable for finite scales only.
    """

    table: tuple  # of (t, value) pairs

    def __call__(self, t):
        for key, val in self.table:
            if key == t:
                return val
        raise KeyError(f"potential table has no entry at t={t!r}")

    def covers(self, points) -> bool:
        keys = [k for k, _ in self.table]
        return all(any(p == k for k in keys) for p in points)

    @property
    def is_constant(self) -> bool:
        vals = [v for _, v in self.table]
        return all(v == vals[0] for v in vals)


@dataclass(frozen=True)
class SampledPotential:
    """q sampled on a grid, evaluated by linear interpolation."""

    grid: tuple
    values: tuple

    def __post_init__(self):
        if len(self.grid) != len(self.values) or len(self.grid) < 2:
            raise ValidationError("sampled potential needs matching grid/values, length >= 2",
                                  field="potential")
        for a, b in zip(self.grid, self.grid[1:]):
            if not b > a:
                raise ValidationError("sampled potential grid must increase", field="potential")

    def __call__(self, t):
        g, v = self.grid, self.values
        if t <= g[0]:
            return v[0]
        if t >= g[-1]:
            return v[-1]
        i = bisect.bisect_right(g, t) - 1
        w = (t - g[i]) / (g[i + 1] - g[i])
        return v[i] * (1 - w) + v[i + 1] * w

    @property
    def is_constant(self) -> bool:
        return all(v == self.values[0] for v in self.values)


Potential = ConstantPotential | PolynomialPotential | TablePotential | SampledPotential


# ---------------------------------------------------------------------------
# boundary data


@dataclass(frozen=True)
class BoundaryCoefficients:
    """The eight coefficients of the two boundary functionals.

    U(y) = a11 y(alpha) + a12 yD(alpha) + a21 y(beta) + a22 yD(beta)
    V(y) = b11 y(alpha) + b12 yD(alpha) + b21 y(beta) + b22 yD(beta)
    """

    a11: float
    a12: float
    a21: float
    a22: float
    b11: float
    b12: float
    b21: float
    b22: float

    def __post_init__(self):
        if all(c == 0 for c in self.row_a) and all(c == 0 for c in self.row_b):
            raise ValidationError("both boundary rows are identically zero", field="boundary")

    @property
    def row_a(self) -> tuple:
        return (self.a11, self.a12, self.a21, self.a22)

    @property
    def row_b(self) -> tuple:
        return (self.b11, self.b12, self.b21, self.b22)

    def rows_dependent(self) -> bool:
        """True when the rows are linearly dependent (degenerate pencil)."""
        a, b = self.row_a, self.row_b
        for i in range(4):
            for j in range(i + 1, 4):
                if a[i] * b[j] - a[j] * b[i] != 0:
                    return False
        return True

    def matrix_a(self, mu_alpha):
        """The 2x2 combination whose determinant pins the eigenvalue count."""
        return (
            (self.a11 * mu_alpha - self.a12, self.b11 * mu_alpha - self.b12),
            (self.a22, self.b22),
        )

    def det_a(self, mu_alpha):
        (p, q), (r, s) = self.matrix_a(mu_alpha)
        return p * s - q * r


@dataclass(frozen=True)
class SeparatedBC:
    """Separated boundary data: yD(alpha) + h y(alpha) = 0 at the left end
    and the matching right-end condition used by the matrix reduction."""

    h: float
    H: float


# ---------------------------------------------------------------------------
# problem spec


@dataclass(frozen=True)
class ProblemSpec:
    ts: TimeScale
    a: float
    q: Potential
    bc: BoundaryCoefficients
    separated: SeparatedBC | None = None

    def __post_init__(self):
        ts = self.ts
        if isinstance(ts, FiniteScale):
            if self.a not in ts or self.a == ts.points[-1]:
                raise ValidationError(
                    f"frozen argument a={self.a!r} must lie in the scale with at "
                    "least one point above it",
                    field="frozen_argument",
                )
            r, m = ts.split_at(self.a)
            if m < 1 or r + m < 2:
                raise ValidationError(
                    f"need m >= 1 and r+m >= 2 around the frozen argument, got r={r}, m={m}",
                    field="frozen_argument",
                )
            if isinstance(self.q, TablePotential) and not self.q.covers(ts.domains().kappa2):
                raise ValidationError(
                    "potential table must cover every point where the equation is imposed",
                    field="potential",
                )
        elif isinstance(ts, TwoIntervalScale):
            if self.delta_gap_case():
                raise ValidationError(
                    "frozen argument in the right interval is not supported; "
                    "only a strictly inside the left interval is handled",
                    field="frozen_argument",
                )
            if not (ts.alpha < self.a < ts.delta1):
                raise ValidationError(
                    f"frozen argument a={self.a!r} must lie strictly inside "
                    f"({ts.alpha}, {ts.delta1})",
                    field="frozen_argument",
                )
            if isinstance(self.q, TablePotential):
                raise ValidationError(
                    "table potentials are pointwise; a two-interval scale needs "
                    "const, poly, or sampled",
                    field="potential",
                )
            if isinstance(self.q, SampledPotential):
                if self.q.grid[0] > ts.alpha or self.q.grid[-1] < ts.beta_sup:
                    raise ValidationError(
                        "sampled potential grid must cover both intervals",
                        field="potential",
                    )
        else:
            raise ValidationError(f"unsupported time scale type {type(ts).__name__}", field="timescale")

    def delta_gap_case(self) -> bool:
        ts = self.ts
        return isinstance(ts, TwoIntervalScale) and ts.delta2 < self.a < ts.beta_sup

    @property
    def is_finite(self) -> bool:
        return isinstance(self.ts, FiniteScale)

    def q_values_kappa2(self) -> list:
        """Potential evaluated at every point where the equation holds (finite)."""
        return [self.q(t) for t in self.ts.domains().kappa2]


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class Eigenvalue:
    value: complex
    multiplicity: int
    residual: float
    note: str = ""


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple  # of Eigenvalue, sorted by (re, im)

    @classmethod
    def from_pairs(cls, pairs, residuals=None, notes=None) -> "Spectrum":
        records = []
        for i, (value, mult) in enumerate(pairs):
            records.append(
                Eigenvalue(
                    value=complex(value),
                    multiplicity=int(mult),
                    residual=float(residuals[i]) if residuals is not None else 0.0,
                    note=notes[i] if notes is not None else "",
                )
            )
        records.sort(key=lambda e: (e.value.real, e.value.imag))
        return cls(eigenvalues=tuple(records))

    @property
    def count(self) -> int:
        return sum(e.multiplicity for e in self.eigenvalues)

    def expanded(self) -> list[complex]:
        out = []
        for e in self.eigenvalues:
            out.extend([e.value] * e.multiplicity)
        return sorted(out, key=lambda z: (z.real, z.imag))

    def values(self) -> list[complex]:
        return [e.value for e in self.eigenvalues]


def match_distance(s1: Spectrum | list, s2: Spectrum | list) -> float:
    """Largest gap of a greedy closest-pair matching between two multisets.

    Pairs are matched globally nearest first, which is reliable whenever the
    separation between distinct values dominates the matching tolerance.
    Returns inf when the total multiplicities differ.
    """
    a = s1.expanded() if isinstance(s1, Spectrum) else [complex(z) for z in s1]
    b = s2.expanded() if isinstance(s2, Spectrum) else [complex(z) for z in s2]
    if len(a) != len(b):
        return float("inf")
    if not a:
        return 0.0
    free_a = list(range(len(a)))
    free_b = list(range(len(b)))
    worst = 0.0
    while free_a:
        best = None
        for i in free_a:
            for j in free_b:
                d = abs(a[i] - b[j])
                if best is None or d < best[0]:
                    best = (d, i, j)
        d, i, j = best
        worst = max(worst, d)
        free_a.remove(i)
        free_b.remove(j)
    return worst


# ---------------------------------------------------------------------------
# exact-arithmetic helpers


def as_fraction(x) -> Fraction:
    """Exact rational image of a number; floats convert exactly (binary)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot represent {type(x).__name__} exactly")


def rationalizable(*values) -> bool:
    try:
        for v in values:
            as_fraction(v)
    except TypeError:
        return False
    return True
