"""Dense univariate polynomials and a simultaneous root finder.

Coefficients are stored ascending.  Two coefficient regimes coexist:

* exact mode: all coefficients are ``int`` or ``fractions.Fraction``;
  canonicalization and degree tests are exact,
* float mode: anything else (float/complex); a coefficient is treated as
  zero when its magnitude is at most ``FLOAT_FLOOR`` times the largest
  coefficient magnitude, which keeps degree extraction robust against
  floating-point assembly noise.

Roots are found with the Aberth-Ehrlich simultaneous iteration started on
a Cauchy-bound circle, then clustered into multiplicities.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConvergenceError

FLOAT_FLOOR = 1e-12
ZERO_DEGREE = -1  # degree sentinel of the identically zero polynomial
MAX_SWEEPS = 200

_EXACT_TYPES = (int, Fraction)


def _is_exact(coeffs) -> bool:
    return all(isinstance(c, _EXACT_TYPES) for c in coeffs)


def _trim(coeffs: list) -> list:
    if not coeffs:
        return [0]
    if _is_exact(coeffs):
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        return coeffs
    top = max(abs(c) for c in coeffs)
    if top == 0.0:
        return [0.0]
    floor = FLOAT_FLOOR * top
    while len(coeffs) > 1 and abs(coeffs[-1]) <= floor:
        coeffs.pop()
    if len(coeffs) == 1 and abs(coeffs[0]) <= floor:
        return [0.0]
    return coeffs


class Polynomial:
    """Immutable dense polynomial in one indeterminate."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=(0,)):
        self.coeffs = tuple(_trim(list(coeffs)))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, exact: bool = False) -> "Polynomial":
        return cls([0 if exact else 0.0])

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def identity(cls, exact: bool = False) -> "Polynomial":
        """The polynomial p(x) = x."""
        if exact:
            return cls([0, 1])
        return cls([0.0, 1.0])

    @classmethod
    def from_roots(cls, roots) -> "Polynomial":
        p = cls([1.0])
        for r in roots:
            p = p * cls([-r, 1.0])
        return p

    # -- basic queries ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def degree(self) -> int:
        """True degree; ``ZERO_DEGREE`` for the zero polynomial."""
        return ZERO_DEGREE if self.is_zero else len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1]

    @property
    def exact(self) -> bool:
        return _is_exact(self.coeffs)

    def degree_and_leading(self):
        return self.degree, self.leading

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = [0] * n
        for i, c in enumerate(a):
            out[i] = out[i] + c
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, ci in enumerate(a):
            if ci == 0:
                continue
            for j, cj in enumerate(b):
                out[i + j] = out[i + j] + ci * cj
        return Polynomial(out)

    __rmul__ = __mul__

    def scale(self, s) -> "Polynomial":
        return Polynomial([c * s for c in self.coeffs])

    def __truediv__(self, s):
        if isinstance(s, Polynomial):
            raise TypeError("polynomial division is not supported")
        if isinstance(s, _EXACT_TYPES) and self.exact:
            return self.scale(Fraction(1, 1) / s)
        return self.scale(1.0 / s)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def compose_linear(self, a, b) -> "Polynomial":
        """Substitute x -> a*x + b."""
        inner = Polynomial([b, a])
        out = Polynomial.constant(self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            out = out * inner + c
        return out

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) == 1:
            return Polynomial.zero(self.exact)
        return Polynomial([k * c for k, c in enumerate(self.coeffs) if k >= 1])

    def __call__(self, x):
        if isinstance(x, Polynomial):
            out = Polynomial.constant(self.coeffs[-1])
            for c in reversed(self.coeffs[:-1]):
                out = out * x + c
            return out
        coeffs = self.coeffs
        if self.exact and isinstance(x, (float, complex)):
            coeffs = tuple(float(c) for c in coeffs)
        acc = coeffs[-1]
        for c in reversed(coeffs[:-1]):
            acc = acc * x + c
        return acc

    def to_float(self) -> "Polynomial":
        """Coefficients converted to complex floats (exact mode helper)."""
        return Polynomial([complex(float(c.real), float(c.imag)) if isinstance(c, complex)
                           else float(c) for c in self.coeffs])

    def monic(self) -> "Polynomial":
        if self.is_zero:
            raise ValueError("zero polynomial has no monic form")
        return self / self.leading

    def conjugate(self) -> "Polynomial":
        return Polynomial([c.conjugate() if isinstance(c, complex) else c for c in self.coeffs])

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"


# -- functional aliases for the arithmetic surface ------------------------------


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def scale(p: Polynomial, s) -> Polynomial:
    return p.scale(s)


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def compose_linear(p: Polynomial, a, b) -> Polynomial:
    return p.compose_linear(a, b)


def degree_and_leading(p: Polynomial):
    return p.degree_and_leading()


# -- root finding ----------------------------------------------------------------


@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicities plus per-root residuals |p(root)|."""

    roots: tuple  # of (value: complex, multiplicity: int)
    residuals: tuple  # of float, aligned with roots

    def expanded(self) -> list[complex]:
        out = []
        for value, mult in self.roots:
            out.extend([value] * mult)
        return sorted(out, key=lambda z: (z.real, z.imag))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.roots)


def _aberth_sweeps(coeffs, tol):
    """Simultaneous iteration on the monic polynomial given ascending coeffs."""
    deg = len(coeffs) - 1
    deriv = [k * c for k, c in enumerate(coeffs) if k >= 1]

    def val(cs, z):
        acc = cs[-1]
        for c in reversed(cs[:-1]):
            acc = acc * z + c
        return acc

    radius = 1.0 + max(abs(c) for c in coeffs[:-1]) if deg > 0 else 1.0
    # irrational angle offset avoids locking onto coefficient symmetries
    zs = [radius * cmath.exp(2j * math.pi * (k / deg + 0.137)) for k in range(deg)]
    step_tol = max(tol * 1e-2, 1e-14)
    for sweep in range(MAX_SWEEPS):
        moved = 0.0
        for i in range(deg):
            z = zs[i]
            pv = val(coeffs, z)
            if pv == 0:
                continue
            dv = val(deriv, z)
            ratio_sum = 0.0 + 0.0j
            for j in range(deg):
                if j != i:
                    dz = z - zs[j]
                    if dz == 0:
                        dz = 1e-20 + 1e-20j
                    ratio_sum += 1.0 / dz
            newton = pv / dv if dv != 0 else pv
            denom = 1.0 - newton * ratio_sum
            if denom == 0:
                denom = 1e-20
            corr = newton / denom
            zs[i] = z - corr
            moved = max(moved, abs(corr) / (1.0 + abs(zs[i])))
        if moved <= step_tol:
            return zs, sweep + 1
    return zs, None


def cluster_values(values, tol: float):
    """Group nearby complex values into (center, count) clusters.

    The merge radius grows with the cluster size as tol**(1/k): a k-fold
    root computed from inexact coefficients splinters into a cluster of
    diameter on the order of eps**(1/k).
    """
    remaining = sorted(values, key=lambda z: (z.real, z.imag))
    clusters = []
    for z in remaining:
        placed = False
        for cl in clusters:
            k = len(cl) + 1
            radius = max(tol, tol ** (1.0 / k)) * (1.0 + abs(cl[0]))
            center = sum(cl) / len(cl)
            if abs(z - center) <= radius:
                cl.append(z)
                placed = True
                break
        if not placed:
            clusters.append([z])
    return [(sum(cl) / len(cl), len(cl)) for cl in clusters]


def find_roots(p: Polynomial, tol: float = 1e-10) -> RootSet:
    """All complex roots of ``p`` with multiplicities.

    Raises ``ValueError`` for constant input and ``ConvergenceError``
    (carrying the partial root estimates) when the iteration cap is hit.
    """
    pf = p.to_float() if p.exact else p
    if pf.degree < 1:
        raise ValueError("root finding needs degree >= 1")
    monic = [complex(c) for c in pf.monic().coeffs]
    zs, sweeps = _aberth_sweeps(monic, tol)
    clusters = cluster_values(zs, tol)
    if sweeps is None:
        partial = RootSet(
            roots=tuple(clusters),
            residuals=tuple(abs(pf(z)) for z, _ in clusters),
        )
        raise ConvergenceError(
            f"root iteration did not converge within {MAX_SWEEPS} sweeps",
            partial=partial,
        )
    clusters.sort(key=lambda rm: (rm[0].real, rm[0].imag))
    residuals = tuple(abs(pf(z)) for z, _ in clusters)
    return RootSet(roots=tuple(clusters), residuals=residuals)
