"""Two-interval scales: shooting, characteristic function, eigenvalue scans.

On [alpha, delta1] u [delta2, beta] the basis solutions obey the ordinary
equation y'' = -lam*y + q(t)*y(a) on each dense piece, joined across the gap
by continuity of the delta-derivative and by the dynamic equation at the
right-scattered point delta1.  Everything is expressed through the entire
functions cos(sqrt(z)x) and sin(sqrt(z)x)/sqrt(z), which are even in
sqrt(z), so no branch of the square root is ever selected and the computed
characteristic function is entire in lambda.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContourError, ValidationError
from .problem import ProblemSpec, SampledPotential, Spectrum
from .timescale import TwoIntervalScale

_SERIES_CUT = 0.25
_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)


def _cos_sqrt(w: complex) -> complex:
    """cos(sqrt(w)), entire in w."""
    if abs(w) < _SERIES_CUT:
        total, term, k = 1.0 + 0j, 1.0 + 0j, 0
        while True:
            k += 1
            term *= -w / ((2 * k - 1) * (2 * k))
            total += term
            if abs(term) < 1e-18:
                return total
    return cmath.cos(cmath.sqrt(w))


def _sinc_sqrt(w: complex) -> complex:
    """sin(sqrt(w))/sqrt(w), entire in w."""
    if abs(w) < _SERIES_CUT:
        total, term, k = 1.0 + 0j, 1.0 + 0j, 0
        while True:
            k += 1
            term *= -w / ((2 * k) * (2 * k + 1))
            total += term
            if abs(term) < 1e-18:
                return total
    rw = cmath.sqrt(w)
    return cmath.sin(rw) / rw


def _omc_sqrt(w: complex) -> complex:
    """(1 - cos(sqrt(w)))/w, entire in w."""
    if abs(w) < _SERIES_CUT:
        total, term, k = 0.5 + 0j, 0.5 + 0j, 0
        while True:
            k += 1
            term *= -w / ((2 * k + 1) * (2 * k + 2))
            total += term
            if abs(term) < 1e-18:
                return total
    return (1.0 - cmath.cos(cmath.sqrt(w))) / w


@dataclass(frozen=True)
class ShootState:
    """Solution value and derivative at a point, tagged with the frozen value.

    frozen is y(a): 0 on the S branch, 1 on the C branch.
    """

    y: complex
    dy: complex
    frozen: float


def _homogeneous(lam, x):
    """(c0, s0) propagator entries over a signed displacement x."""
    w = lam * x * x
    return _cos_sqrt(w), x * _sinc_sqrt(w)


def _particular(lam, t_from, t_to, q):
    """Variation-of-parameters integrals (Is, Ic) for unit frozen value."""
    h = t_to - t_from
    if getattr(q, "is_constant", False):
        qc = q(t_from)
        w = lam * h * h
        return qc * h * h * _omc_sqrt(w), qc * h * _sinc_sqrt(w)
    # oscillation-resolving composite Gauss-Legendre panels
    span = abs(h)
    rate = abs(lam) ** 0.5
    panels = max(4, int(math.ceil(rate * span / 1.5)))
    breaks = list(np.linspace(t_from, t_to, panels + 1))
    if isinstance(q, SampledPotential):
        lo, hi = min(t_from, t_to), max(t_from, t_to)
        knots = [g for g in q.grid if lo < g < hi]
        breaks = sorted(set(breaks) | set(knots), reverse=(h < 0))
    i_s = 0.0 + 0j
    i_c = 0.0 + 0j
    for a_, b_ in zip(breaks, breaks[1:]):
        half = (b_ - a_) / 2.0
        mid = (b_ + a_) / 2.0
        for x, wgt in zip(_GL_X, _GL_W):
            xi = half * x + mid
            u = t_to - xi
            c0u, s0u = _homogeneous(lam, u)
            qv = q(xi)
            i_s += wgt * half * s0u * qv
            i_c += wgt * half * c0u * qv
    return i_s, i_c


def _segment_of(ts: TwoIntervalScale, t) -> int:
    if ts.alpha <= t <= ts.delta1:
        return 0
    if ts.delta2 <= t <= ts.beta_sup:
        return 1
    raise ValidationError(f"{t!r} is not in the scale", field="timescale")


def integrate_dense(state: ShootState, t_from, t_to, lam, q,
                    method: str = "closed", steps: int | None = None,
                    ts: TwoIntervalScale | None = None) -> ShootState:
    """Propagate (y, y') across one dense interval, either direction.

    method "closed" uses the exact homogeneous propagator plus a
    variation-of-parameters particular term (exact for constant q,
    composite Gauss-Legendre otherwise).  method "rk4" integrates the
    first-order system directly and serves as the cross-check path.
    """
    if ts is not None and _segment_of(ts, t_from) != _segment_of(ts, t_to):
        raise ValidationError(
            f"[{t_from}, {t_to}] crosses the gap; integrate_dense handles one "
            "dense interval at a time",
            field="timescale",
        )
    if t_to == t_from:
        return state
    lam = complex(lam)
    if method == "closed":
        c0h, s0h = _homogeneous(lam, t_to - t_from)
        y = state.y * c0h + state.dy * s0h
        dy = -lam * state.y * s0h + state.dy * c0h
        if state.frozen:
            i_s, i_c = _particular(lam, t_from, t_to, q)
            y += state.frozen * i_s
            dy += state.frozen * i_c
        return ShootState(y, dy, state.frozen)
    if method != "rk4":
        raise ValueError(f"unknown method {method!r}")
    h = t_to - t_from
    if steps is None:
        steps = max(200, int(40 * (abs(lam) ** 0.5) * abs(h)) + 1)
    dt = h / steps
    y, v = complex(state.y), complex(state.dy)
    c = state.frozen
    t = t_from

    def f(tt, yy, vv):
        return vv, -lam * yy + q(tt) * c

    for _ in range(steps):
        k1y, k1v = f(t, y, v)
        k2y, k2v = f(t + dt / 2, y + dt / 2 * k1y, v + dt / 2 * k1v)
        k3y, k3v = f(t + dt / 2, y + dt / 2 * k2y, v + dt / 2 * k2v)
        k4y, k4v = f(t + dt, y + dt * k3y, v + dt * k3v)
        y += dt / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        v += dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        t += dt
    return ShootState(y, v, c)


def cross_gap(state: ShootState, lam, q_delta1, gap) -> ShootState:
    """Jump from the left edge of the gap to the right edge.

    Value: continuity of the delta-derivative at the left-dense,
    right-scattered point gives y(d2) = y(d1) + gap*y'(d1).  Derivative:
    the dynamic equation at delta1 gives
    y'(d2+) = y'(d1) + gap*(q(d1)*frozen - lam*y(d2)).
    """
    lam = complex(lam)
    y2 = state.y + gap * state.dy
    dy2 = state.dy + gap * (q_delta1 * state.frozen - lam * y2)
    return ShootState(y2, dy2, state.frozen)


@dataclass(frozen=True)
class ShootResult:
    """Both basis branches evaluated at the four distinguished points."""

    s_alpha: ShootState
    c_alpha: ShootState
    s_delta1: ShootState
    c_delta1: ShootState
    s_delta2: ShootState
    c_delta2: ShootState
    s_beta: ShootState
    c_beta: ShootState


def _require_two_interval(spec: ProblemSpec) -> TwoIntervalScale:
    if not isinstance(spec.ts, TwoIntervalScale):
        raise ValidationError("continuum solver needs a two-interval scale", field="timescale")
    return spec.ts


def shoot(spec: ProblemSpec, lam, method: str = "closed") -> ShootResult:
    """Propagate S and C from the frozen argument to all endpoints."""
    ts = _require_two_interval(spec)
    lam = complex(lam)
    out = {}
    for name, state in (("s", ShootState(0.0, 1.0, 0.0)), ("c", ShootState(1.0, 0.0, 1.0))):
        at_alpha = integrate_dense(state, spec.a, ts.alpha, lam, spec.q, method, ts=ts)
        at_d1 = integrate_dense(state, spec.a, ts.delta1, lam, spec.q, method, ts=ts)
        at_d2 = cross_gap(at_d1, lam, spec.q(ts.delta1), ts.gap)
        at_beta = integrate_dense(at_d2, ts.delta2, ts.beta_sup, lam, spec.q, method, ts=ts)
        out[f"{name}_alpha"] = at_alpha
        out[f"{name}_delta1"] = at_d1
        out[f"{name}_delta2"] = at_d2
        out[f"{name}_beta"] = at_beta
    return ShootResult(**out)


def states_at(spec: ProblemSpec, lam, t, method: str = "closed"):
    """(S state, C state) at an arbitrary scale point."""
    ts = _require_two_interval(spec)
    lam = complex(lam)
    states = []
    for state in (ShootState(0.0, 1.0, 0.0), ShootState(1.0, 0.0, 1.0)):
        if _segment_of(ts, t) == 0:
            states.append(integrate_dense(state, spec.a, t, lam, spec.q, method, ts=ts))
        else:
            at_d1 = integrate_dense(state, spec.a, ts.delta1, lam, spec.q, method, ts=ts)
            at_d2 = cross_gap(at_d1, lam, spec.q(ts.delta1), ts.gap)
            states.append(integrate_dense(at_d2, ts.delta2, t, lam, spec.q, method, ts=ts))
    return states[0], states[1]


def wronskian_at(spec: ProblemSpec, lam, t, method: str = "closed") -> complex:
    """S'(t)C(t) - S(t)C'(t); equals 1 at the frozen argument and stays 1
    wherever the potential vanishes."""
    s, c = states_at(spec, lam, t, method)
    return s.dy * c.y - s.y * c.dy


def char_fn(spec: ProblemSpec, lam, method: str = "closed") -> complex:
    """Characteristic function on the two-interval scale.

    Boundary functionals use the ordinary derivative at both endpoints
    (graininess vanishes there).
    """
    res = shoot(spec, lam, method)
    bc = spec.bc

    def functional(row, y_a: ShootState, y_b: ShootState):
        c1, c2, c3, c4 = row
        return c1 * y_a.y + c2 * y_a.dy + c3 * y_b.y + c4 * y_b.dy

    uc = functional(bc.row_a, res.c_alpha, res.c_beta)
    us = functional(bc.row_a, res.s_alpha, res.s_beta)
    vc = functional(bc.row_b, res.c_alpha, res.c_beta)
    vs = functional(bc.row_b, res.s_alpha, res.s_beta)
    return uc * vs - vc * us


# ---------------------------------------------------------------------------
# real-axis eigenvalue scan


def _sample_grid(ts: TwoIntervalScale, lam_min: float, lam_max: float, density: int):
    """Ascending lambda samples, uniform in sqrt|lambda| on each side of 0."""
    total_len = (ts.delta1 - ts.alpha) + (ts.beta_sup - ts.delta2)
    step = math.pi / (total_len * density)
    grid = []
    if lam_min < 0:
        u = math.sqrt(-lam_min)
        u_stop = math.sqrt(-min(lam_max, 0.0))
        while u > u_stop:
            grid.append(-u * u)
            u -= step
    if lam_min <= 0 <= lam_max:
        grid.append(0.0)
    if lam_max > 0:
        s = math.sqrt(max(lam_min, 0.0))
        if s > 0:
            grid.append(s * s)
        s += step
        while s * s < lam_max:
            grid.append(s * s)
            s += step
        grid.append(lam_max)
    out = [grid[0]] if grid else []
    for x in grid[1:]:
        if x > out[-1]:
            out.append(x)
    return out


def _bisect_root(f, lo, hi, flo, iters: int = 80):
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (flo < 0) == (fm < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_real_eigs(spec: ProblemSpec, lam_max: float, tol: float = 1e-10,
                   lam_min: float | None = None, density: int = 12) -> Spectrum:
    """All real zeros of the characteristic function in [lam_min, lam_max].

    Sign-change bracketing on a grid uniform in sqrt(lambda) (matching the
    local oscillation wavelength), refined by bisection.  A non-bracketed
    dip in |Delta| is flagged as a possible double root and resolved by a
    small contour count around it.
    """
    ts = _require_two_interval(spec)
    if lam_min is None:
        q_samples = [abs(spec.q(t)) for t in np.linspace(ts.alpha, ts.delta1, 20)]
        q_samples += [abs(spec.q(t)) for t in np.linspace(ts.delta2, ts.beta_sup, 20)]
        lam_min = -(10.0 + 2.0 * max(q_samples))
    if lam_max < lam_min:
        raise ValidationError("lam_max must be >= lam_min", field="solver")

    def f(x):
        return char_fn(spec, complex(x)).real

    grid = _sample_grid(ts, lam_min, lam_max, density)
    vals = [f(x) for x in grid]
    pairs = []
    notes = []
    residuals = []
    bracketed = set()
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            pairs.append((grid[i], 1))
            residuals.append(0.0)
            notes.append("")
            bracketed.add(i)
            continue
        if vals[i] * vals[i + 1] < 0:
            root = _bisect_root(f, grid[i], grid[i + 1], vals[i])
            pairs.append((root, 1))
            residuals.append(abs(f(root)))
            notes.append("")
            bracketed.add(i)
            bracketed.add(i + 1)
    # tangency dips: local |Delta| minima without a sign change can hide an
    # even-order zero or a close pair straddled by one grid cell
    for i in range(1, len(grid) - 1):
        if i in bracketed or (i - 1) in bracketed or (i + 1) in bracketed:
            continue
        trio = vals[i - 1], vals[i], vals[i + 1]
        if trio[0] * trio[1] < 0 or trio[1] * trio[2] < 0:
            continue
        local = max(abs(trio[0]), abs(trio[2]))
        if abs(trio[1]) < min(abs(trio[0]), abs(trio[2])) and abs(trio[1]) <= 0.2 * local:
            lo, hi = grid[i - 1], grid[i + 1]
            k = _boxed_count_with_retries(spec, lo, hi)
            if k <= 0:
                continue
            fine, fine_res = _rescan_window(f, lo, hi)
            if len(fine) == k:
                for root, res in zip(fine, fine_res):
                    pairs.append((root, 1))
                    residuals.append(res)
                    notes.append("")
            else:
                for _ in range(60):
                    m1 = lo + (hi - lo) * 0.382
                    m2 = lo + (hi - lo) * 0.618
                    if abs(f(m1)) < abs(f(m2)):
                        hi = m2
                    else:
                        lo = m1
                root = 0.5 * (lo + hi)
                pairs.append((root, k))
                residuals.append(abs(f(root)))
                notes.append("possible double root (grid tangency)")
    return Spectrum.from_pairs(pairs, residuals=residuals, notes=notes)


def _boxed_count_with_retries(spec: ProblemSpec, lo: float, hi: float) -> int:
    """Contour count over [lo, hi], retried with reshaped boxes on rejection."""
    width = hi - lo
    center = 0.5 * (lo + hi)
    for stretch, height in ((1.0, width), (1.15, 1.7 * width), (0.85, 0.6 * width)):
        half = 0.5 * width * stretch
        try:
            return count_eigs_in_box(
                spec, center - half, center + half, -height, height, quad_points=192
            )
        except ContourError:
            continue
    return 0


def _rescan_window(f, lo: float, hi: float, samples: int = 400):
    """Fine bracketing pass over one suspicious grid window."""
    xs = np.linspace(lo, hi, samples + 1)
    ys = [f(x) for x in xs]
    roots, residuals = [], []
    for i in range(samples):
        if ys[i] == 0.0:
            roots.append(float(xs[i]))
            residuals.append(0.0)
        elif ys[i] * ys[i + 1] < 0:
            root = _bisect_root(f, float(xs[i]), float(xs[i + 1]), ys[i])
            roots.append(root)
            residuals.append(abs(f(root)))
    return roots, residuals


# ---------------------------------------------------------------------------
# argument-principle counting


def count_eigs_in_box(spec: ProblemSpec, re_lo: float, re_hi: float,
                      im_lo: float, im_hi: float, quad_points: int = 128) -> int:
    """Number of characteristic-function zeros (with multiplicity) inside a
    rectangle, by winding-number quadrature of Delta'/Delta.

    Delta' is taken by central differences along each edge; the contour
    integral uses the trapezoid rule per edge.  Rejects (ContourError) when
    a boundary sample sits too close to a zero or when the rounded count
    has a defect above 0.25.
    """
    if not (re_hi > re_lo and im_hi > im_lo):
        raise ValidationError("degenerate counting box", field="box")
    corners = [
        complex(re_lo, im_lo),
        complex(re_hi, im_lo),
        complex(re_hi, im_hi),
        complex(re_lo, im_hi),
        complex(re_lo, im_lo),
    ]
    total = 0.0 + 0.0j
    all_mags = []
    prev_val = None
    for z0, z1 in zip(corners, corners[1:]):
        direction = (z1 - z0) / abs(z1 - z0)
        zs = [z0 + (z1 - z0) * k / quad_points for k in range(quad_points + 1)]
        fd_step = 1e-5 * (1.0 + abs(z0) + abs(z1)) / 2.0
        ratios = []
        for z in zs:
            val = char_fn(spec, z)
            all_mags.append(abs(val))
            if prev_val is not None and abs(val) > 0 and abs(prev_val) > 0:
                dphi = cmath.phase(val / prev_val)
                if abs(dphi) > 2.5:
                    raise ContourError(
                        "phase jump between adjacent boundary samples; "
                        "increase quad_points or move the box"
                    )
            prev_val = val
            if val == 0:
                raise ContourError("boundary sample hit a zero exactly")
            dplus = char_fn(spec, z + fd_step * direction)
            dminus = char_fn(spec, z - fd_step * direction)
            ratios.append((dplus - dminus) / (2 * fd_step * direction) / val)
        seg = z1 - z0
        dz = seg / quad_points
        for k in range(quad_points):
            total += 0.5 * (ratios[k] + ratios[k + 1]) * dz
    floor = 1e-9 * np.median(all_mags)
    if min(all_mags) < floor:
        raise ContourError(
            "a zero lies within guard distance of the box boundary; "
            "shrink or shift the box"
        )
    count = total / (2j * math.pi)
    rounded = int(round(count.real))
    defect = abs(count - rounded)
    if defect > 0.25:
        raise ContourError(f"winding quadrature defect {defect:.3f} exceeds 0.25")
    return rounded


# ---------------------------------------------------------------------------
# asymptotics


@dataclass(frozen=True)
class EigAsymptote:
    n: int
    predicted_sqrt: float
    computed_sqrt: float
    residual: float

    @property
    def n_times_residual(self) -> float:
        return self.n * self.residual


@dataclass(frozen=True)
class AsymptoticReport:
    rows: tuple  # of EigAsymptote
    hypothesis_ok: bool
    banner: str
    truncated: bool


def asymptotic_table(spec: ProblemSpec, spectrum: Spectrum, n_max: int) -> AsymptoticReport:
    """Match computed sqrt-eigenvalues to the predicted arithmetic grid.

    The prediction (n-1)*pi/(2*(beta - delta2)) requires a nonzero
    derivative-derivative boundary combination and equal outer interval
    lengths; when either fails the table is emitted with a banner and no
    pass/fail meaning.  Indices are assigned by nearest grid point (closest
    computed value wins), never by absolute position in the spectrum.
    """
    ts = _require_two_interval(spec)
    bc = spec.bc
    combo = bc.a22 * bc.b12 - bc.a12 * bc.b22
    len_right = ts.beta_sup - ts.delta2
    len_left = ts.delta1 - ts.alpha
    banner = ""
    if combo == 0:
        banner = "derivative-boundary combination vanishes; asymptotic grid not applicable"
    elif abs(len_right - len_left) > 1e-9 * (ts.beta_sup - ts.alpha):
        banner = "outer intervals have different lengths; asymptotic grid not applicable"
    hypothesis_ok = banner == ""
    step = math.pi / (2.0 * len_right)
    best: dict[int, tuple[float, float]] = {}
    for e in spectrum.eigenvalues:
        z = e.value
        if abs(z.imag) > 1e-8 or z.real < -1e-12:
            continue
        s = math.sqrt(max(z.real, 0.0))
        k = int(round(s / step))
        n = k + 1
        if n < 1:
            continue
        resid = s - k * step
        if n not in best or abs(resid) < abs(best[n][1]):
            best[n] = (s, resid)
    rows = tuple(
        EigAsymptote(n=n, predicted_sqrt=(n - 1) * step, computed_sqrt=s, residual=r)
        for n, (s, r) in sorted(best.items())
        if n <= n_max
    )
    truncated = (max(best) if best else 0) < n_max
    return AsymptoticReport(rows=rows, hypothesis_ok=hypothesis_ok,
                            banner=banner, truncated=truncated)
