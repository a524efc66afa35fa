"""Bounded time scales: finite point sets and two-interval unions.

A time scale is a nonempty closed subset of the reals.  Only the two shapes
the solver needs are implemented: a finite strictly increasing point set and
a union of two closed intervals separated by a gap.  Both expose the jump
operators sigma/rho, the graininess mu, and the truncated domains on which
the dynamic equation is imposed.

Membership tests are exact (no tolerances): scale points are constructed
inputs, not measurements, and the jump operators must not drift.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, ValidationError


class GridPoint(NamedTuple):
    index: int
    value: float


class Domains(NamedTuple):
    """Truncated domains plus the boundary points of the boundary forms."""

    kappa: tuple
    kappa2: tuple
    alpha: float
    beta: float


@dataclass(frozen=True)
class FiniteScale:
    """A finite time scale given by strictly increasing points, n >= 3."""

    points: tuple

    def __init__(self, points):
        pts = tuple(sorted(points))
        if len(pts) < 3:
            raise ValidationError("a finite scale needs at least 3 points", field="points")
        for p, q in zip(pts, pts[1:]):
            if not q > p:
                raise ValidationError(
                    f"duplicate point {p!r}; scales must not repeat points",
                    field="points",
                )
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def alpha(self):
        return self.points[0]

    @property
    def beta(self):
        """rho(sup T): the second largest point."""
        return self.points[-2]

    def __contains__(self, t) -> bool:
        return any(t == p for p in self.points)

    def index_of(self, t) -> int:
        for i, p in enumerate(self.points):
            if t == p:
                return i
        raise DomainError(f"{t!r} is not a point of the scale")

    def grid(self) -> tuple[GridPoint, ...]:
        return tuple(GridPoint(i, p) for i, p in enumerate(self.points))

    def sigma(self, t):
        i = self.index_of(t)
        return self.points[min(i + 1, self.n - 1)]

    def rho(self, t):
        i = self.index_of(t)
        return self.points[max(i - 1, 0)]

    def mu(self, t):
        return self.sigma(t) - t

    def mu_at(self, i: int):
        """Graininess by index, valid for 0 <= i <= n-2."""
        return self.points[i + 1] - self.points[i]

    def domains(self) -> Domains:
        return Domains(
            kappa=self.points[:-1],
            kappa2=self.points[:-2],
            alpha=self.points[0],
            beta=self.points[-2],
        )

    def split_at(self, a) -> tuple[int, int]:
        """Return (r, m): the number of points below and above a."""
        i = self.index_of(a)
        return i, self.n - 1 - i

    def is_uniform(self) -> bool:
        mus = [self.mu_at(i) for i in range(self.n - 1)]
        return all(m == mus[0] for m in mus)


@dataclass(frozen=True)
class TwoIntervalScale:
    """The union [alpha, delta1] u [delta2, beta_sup] with a gap between.

    The supremum is left-dense, so rho(sup T) = sup T and the boundary
    point of the boundary forms is beta_sup itself.
    """

    alpha: float
    delta1: float
    delta2: float
    beta_sup: float

    def __post_init__(self):
        if not (self.alpha < self.delta1 < self.delta2 < self.beta_sup):
            raise ValidationError(
                "need alpha < delta1 < delta2 < beta_sup, got "
                f"({self.alpha}, {self.delta1}, {self.delta2}, {self.beta_sup})",
                field="timescale",
            )

    @property
    def gap(self) -> float:
        return self.delta2 - self.delta1

    @property
    def beta(self) -> float:
        return self.beta_sup

    def __contains__(self, t) -> bool:
        return (self.alpha <= t <= self.delta1) or (self.delta2 <= t <= self.beta_sup)

    def _check(self, t):
        if t not in self:
            raise DomainError(f"{t!r} is not in [{self.alpha}, {self.delta1}] u [{self.delta2}, {self.beta_sup}]")

    def sigma(self, t):
        self._check(t)
        return self.delta2 if t == self.delta1 else t

    def rho(self, t):
        self._check(t)
        return self.delta1 if t == self.delta2 else t

    def mu(self, t):
        return self.sigma(t) - t

    def domains(self) -> Domains:
        # sup T is left-dense, so neither truncation removes anything
        full = (self.alpha, self.delta1, self.delta2, self.beta_sup)
        return Domains(kappa=full, kappa2=full, alpha=self.alpha, beta=self.beta_sup)


TimeScale = FiniteScale | TwoIntervalScale
