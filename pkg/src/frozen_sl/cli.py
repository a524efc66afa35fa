"""Config-driven command line front end.

Commands: eigs, count, matrix, charfn, asymptotics, verify.  The problem is
described by a single JSON document (see README for the schema); numeric
fields accept strings like "1/2" which are kept as exact rationals.
Reports are emitted once, at the end, as JSON, CSV, or text.

Exit status: 0 on success (a degenerate problem is a legal outcome),
1 on solver failure or failed verification, 2 on config errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import continuum, finite, matrixform
from .errors import (
    ContourError,
    ConvergenceError,
    DegenerateProblemError,
    FrozenSLError,
    ValidationError,
)
from .poly import Polynomial
from .problem import (
    BoundaryCoefficients,
    ConstantPotential,
    PolynomialPotential,
    ProblemSpec,
    SampledPotential,
    SeparatedBC,
    Spectrum,
    TablePotential,
    match_distance,
    rationalizable,
)
from .timescale import FiniteScale, TwoIntervalScale

COMMANDS = ("eigs", "count", "matrix", "charfn", "asymptotics", "verify")


@dataclass
class RunConfig:
    spec: ProblemSpec
    command: str = "eigs"
    tol: float = 1e-10
    lambda_min: float | None = None
    lambda_max: float = 100.0
    n_max: int = 40
    output: str = "json"
    rational: bool = False
    workers: int = 1


def _num(x, path: str):
    if isinstance(x, bool) or x is None:
        raise ValidationError(f"{path}: expected a number, got {x!r}", field=path)
    if isinstance(x, (int, float)):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"{path}: cannot parse {x!r} as a rational", field=path) from exc
    raise ValidationError(f"{path}: expected a number, got {type(x).__name__}", field=path)


def _num_list(xs, path: str):
    if not isinstance(xs, (list, tuple)):
        raise ValidationError(f"{path}: expected a list", field=path)
    return [_num(x, f"{path}[{i}]") for i, x in enumerate(xs)]


def _parse_timescale(doc, path="timescale"):
    if not isinstance(doc, dict) or "type" not in doc:
        raise ValidationError(f"{path}: expected an object with a 'type' key", field=path)
    kind = doc["type"]
    if kind == "finite":
        return FiniteScale(_num_list(doc.get("points"), f"{path}.points"))
    if kind == "two_interval":
        vals = {}
        for key in ("alpha", "delta1", "delta2", "beta"):
            if key not in doc:
                raise ValidationError(f"{path}.{key}: missing", field=f"{path}.{key}")
            vals[key] = _num(doc[key], f"{path}.{key}")
        return TwoIntervalScale(vals["alpha"], vals["delta1"], vals["delta2"], vals["beta"])
    raise ValidationError(f"{path}.type: unknown kind {kind!r}", field=f"{path}.type")


def _parse_potential(doc, path="potential"):
    if not isinstance(doc, dict) or "type" not in doc:
        raise ValidationError(f"{path}: expected an object with a 'type' key", field=path)
    kind = doc["type"]
    if kind == "const":
        return ConstantPotential(_num(doc.get("value", 0), f"{path}.value"))
    if kind == "poly":
        return PolynomialPotential(tuple(_num_list(doc.get("coeffs"), f"{path}.coeffs")))
    if kind == "table":
        pts = _num_list(doc.get("points"), f"{path}.points")
        vals = _num_list(doc.get("values"), f"{path}.values")
        if len(pts) != len(vals):
            raise ValidationError(f"{path}: points/values lengths differ", field=path)
        return TablePotential(tuple(zip(pts, vals)))
    if kind == "sampled":
        grid = _num_list(doc.get("grid"), f"{path}.grid")
        vals = _num_list(doc.get("values"), f"{path}.values")
        return SampledPotential(tuple(grid), tuple(vals))
    raise ValidationError(f"{path}.type: unknown kind {kind!r}", field=f"{path}.type")


def _parse_boundary(doc, path="boundary"):
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: expected an object", field=path)
    if "separated" in doc:
        sep = doc["separated"]
        h = _num(sep.get("h", 0), f"{path}.separated.h")
        H = _num(sep.get("H", 0), f"{path}.separated.H")
        bc = SeparatedBC(h=h, H=H)
        return matrixform.bc_to_general(bc), bc
    if "general" in doc:
        gen = doc["general"]
        row_a = _num_list(gen.get("a"), f"{path}.general.a")
        row_b = _num_list(gen.get("b"), f"{path}.general.b")
        if len(row_a) != 4 or len(row_b) != 4:
            raise ValidationError(f"{path}.general: each row needs 4 coefficients", field=path)
        return BoundaryCoefficients(*row_a, *row_b), None
    raise ValidationError(f"{path}: need 'separated' or 'general'", field=path)


def parse_config(text: str) -> RunConfig:
    """Validated RunConfig from a JSON document.

    Raises ValidationError with the offending field path on any schema or
    invariant violation.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config is not valid JSON: {exc}", field="<document>") from exc
    if not isinstance(doc, dict):
        raise ValidationError("config must be a JSON object", field="<document>")
    for key in ("timescale", "frozen_argument", "potential", "boundary"):
        if key not in doc:
            raise ValidationError(f"{key}: missing", field=key)
    ts = _parse_timescale(doc["timescale"])
    a = _num(doc["frozen_argument"], "frozen_argument")
    q = _parse_potential(doc["potential"])
    bc, separated = _parse_boundary(doc["boundary"])
    spec = ProblemSpec(ts=ts, a=a, q=q, bc=bc, separated=separated)
    solver = doc.get("solver", {})
    if not isinstance(solver, dict):
        raise ValidationError("solver: expected an object", field="solver")
    command = doc.get("command", "eigs")
    if command not in COMMANDS:
        raise ValidationError(f"command: unknown command {command!r}", field="command")
    cfg = RunConfig(
        spec=spec,
        command=command,
        tol=float(solver.get("tol", 1e-10)),
        lambda_min=(float(solver["lambda_min"]) if "lambda_min" in solver else None),
        lambda_max=float(solver.get("lambda_max", 100.0)),
        n_max=int(solver.get("n_max", 40)),
        output=str(solver.get("output", "json")),
        rational=bool(solver.get("rational", False)),
    )
    if cfg.output not in ("json", "csv", "text"):
        raise ValidationError(f"solver.output: unknown format {cfg.output!r}", field="solver.output")
    _check_command_requirements(cfg)
    return cfg


def _check_command_requirements(cfg: RunConfig) -> None:
    spec = cfg.spec
    if cfg.command in ("count", "matrix") and not spec.is_finite:
        raise ValidationError(f"{cfg.command} requires a finite time scale", field="timescale")
    if cfg.command == "asymptotics" and spec.is_finite:
        raise ValidationError("asymptotics requires a two-interval scale", field="timescale")
    if cfg.command == "matrix":
        if spec.separated is None:
            raise ValidationError("matrix requires separated boundary data", field="boundary")
        ts = spec.ts
        if not ts.is_uniform() or ts.mu_at(0) != 1:
            raise ValidationError(
                "matrix requires a uniform scale with unit spacing", field="timescale"
            )


# ---------------------------------------------------------------------------
# serialization helpers


def _num_out(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x


def serialize_config(cfg: RunConfig) -> str:
    """JSON document that parses back to an equivalent RunConfig.

    Exact rationals are emitted as "p/q" strings so they survive the trip.
    """
    spec = cfg.spec
    ts = spec.ts
    if isinstance(ts, FiniteScale):
        ts_doc = {"type": "finite", "points": [_num_out(p) for p in ts.points]}
    else:
        ts_doc = {
            "type": "two_interval",
            "alpha": _num_out(ts.alpha),
            "delta1": _num_out(ts.delta1),
            "delta2": _num_out(ts.delta2),
            "beta": _num_out(ts.beta_sup),
        }
    q = spec.q
    if isinstance(q, ConstantPotential):
        q_doc = {"type": "const", "value": _num_out(q.value)}
    elif isinstance(q, PolynomialPotential):
        q_doc = {"type": "poly", "coeffs": [_num_out(c) for c in q.coeffs]}
    elif isinstance(q, TablePotential):
        q_doc = {
            "type": "table",
            "points": [_num_out(k) for k, _ in q.table],
            "values": [_num_out(v) for _, v in q.table],
        }
    else:
        q_doc = {
            "type": "sampled",
            "grid": [_num_out(g) for g in q.grid],
            "values": [_num_out(v) for v in q.values],
        }
    if spec.separated is not None:
        bc_doc = {"separated": {"h": _num_out(spec.separated.h), "H": _num_out(spec.separated.H)}}
    else:
        bc_doc = {
            "general": {
                "a": [_num_out(c) for c in spec.bc.row_a],
                "b": [_num_out(c) for c in spec.bc.row_b],
            }
        }
    doc = {
        "command": cfg.command,
        "timescale": ts_doc,
        "frozen_argument": _num_out(spec.a),
        "potential": q_doc,
        "boundary": bc_doc,
        "solver": {
            "tol": cfg.tol,
            "lambda_max": cfg.lambda_max,
            "n_max": cfg.n_max,
            "output": cfg.output,
            "rational": cfg.rational,
            **({"lambda_min": cfg.lambda_min} if cfg.lambda_min is not None else {}),
        },
    }
    return json.dumps(doc, indent=2)


def _frac_str(x) -> str:
    f = Fraction(x) if not isinstance(x, Fraction) else x
    return f"{f.numerator}/{f.denominator}"


def _spectrum_doc(spectrum: Spectrum) -> dict:
    eigs = [
        {
            "re": e.value.real,
            "im": e.value.imag,
            "multiplicity": e.multiplicity,
            "residual": e.residual,
            **({"note": e.note} if e.note else {}),
        }
        for e in spectrum.eigenvalues
    ]
    return {"eigenvalues": eigs, "count": spectrum.count, "degenerate": False}


def _degenerate_doc() -> dict:
    return {"eigenvalues": None, "count": None, "degenerate": True}


def _render(doc: dict, output: str, command: str) -> str:
    if output == "json":
        return json.dumps(doc, indent=2)
    if output == "csv":
        return _render_csv(doc, command)
    return _render_text(doc, command)


def _render_csv(doc: dict, command: str) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if command in ("eigs", "matrix"):
        writer.writerow(["re", "im", "multiplicity", "residual"])
        for e in doc.get("eigenvalues") or []:
            writer.writerow([repr(e["re"]), repr(e["im"]), e["multiplicity"], repr(e["residual"])])
    elif command == "charfn":
        writer.writerow(["lambda_re", "lambda_im", "delta_re", "delta_im"])
        for s in doc["samples"]:
            writer.writerow([repr(s["lambda_re"]), repr(s["lambda_im"]),
                             repr(s["delta_re"]), repr(s["delta_im"])])
    elif command == "asymptotics":
        writer.writerow(["n", "predicted_sqrt", "computed_sqrt", "residual", "n_times_residual"])
        for r in doc["rows"]:
            writer.writerow([r["n"], repr(r["predicted_sqrt"]), repr(r["computed_sqrt"]),
                             repr(r["residual"]), repr(r["n_times_residual"])])
    elif command == "verify":
        writer.writerow(["check", "passed", "detail"])
        for c in doc["checks"]:
            writer.writerow([c["name"], c["passed"], c["detail"]])
    else:
        writer.writerow(["key", "value"])
        for k, v in doc.items():
            writer.writerow([k, v])
    return buf.getvalue()


def _render_text(doc: dict, command: str) -> str:
    lines = []
    if command in ("eigs", "matrix"):
        if doc.get("degenerate"):
            lines.append("degenerate: the characteristic function vanishes identically;")
            lines.append("every lambda is an eigenvalue (not an empty spectrum)")
        else:
            if "Q" in doc:
                lines.append("Q =")
                for row in doc["Q"]:
                    lines.append("  [" + ", ".join(f"{x:g}" for x in row) + "]")
            lines.append(f"count (with multiplicity): {doc['count']}")
            for e in doc["eigenvalues"]:
                note = f"  ({e['note']})" if e.get("note") else ""
                lines.append(
                    f"  lambda = {e['re']:+.12g}{e['im']:+.12g}i"
                    f"  mult={e['multiplicity']}  residual={e['residual']:.3e}{note}"
                )
    elif command == "count":
        for k in ("n", "detA", "detA_exact", "predicted", "exact"):
            if k in doc:
                lines.append(f"{k}: {doc[k]}")
    elif command == "charfn":
        lines.append(f"{len(doc['samples'])} characteristic-function samples")
        for s in doc["samples"]:
            lines.append(
                f"  lambda=({s['lambda_re']:+.6g},{s['lambda_im']:+.6g})"
                f" -> ({s['delta_re']:+.12g},{s['delta_im']:+.12g})"
            )
    elif command == "asymptotics":
        if doc["banner"]:
            lines.append(f"NOTE: {doc['banner']}")
        lines.append("n  predicted_sqrt  computed_sqrt  residual  n*residual")
        for r in doc["rows"]:
            lines.append(
                f"{r['n']:3d}  {r['predicted_sqrt']:.10f}  {r['computed_sqrt']:.10f}"
                f"  {r['residual']:+.3e}  {r['n_times_residual']:+.4f}"
            )
        if doc["truncated"]:
            lines.append("(table truncated: fewer computed eigenvalues than requested)")
    elif command == "verify":
        for c in doc["checks"]:
            mark = "PASS" if c["passed"] else "FAIL"
            lines.append(f"[{mark}] {c['name']}: {c['detail']}")
        lines.append(f"all_passed: {doc['all_passed']}")
    else:
        lines.append(json.dumps(doc, indent=2))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# command implementations


def _cmd_eigs(cfg: RunConfig) -> dict:
    spec = cfg.spec
    if spec.is_finite:
        try:
            spectrum = finite.eigs_finite(spec, tol=cfg.tol)
        except DegenerateProblemError:
            return _degenerate_doc()
        return _spectrum_doc(spectrum)
    spectrum = continuum.find_real_eigs(
        spec, lam_max=cfg.lambda_max, tol=cfg.tol, lam_min=cfg.lambda_min
    )
    return _spectrum_doc(spectrum)


def _cmd_count(cfg: RunConfig) -> dict:
    spec = cfg.spec
    predicted, exact = finite.predicted_count(spec)
    doc = {
        "n": spec.ts.n,
        "detA": finite.det_A(spec),
        "predicted": predicted,
        "exact": exact,
    }
    if cfg.rational:
        frac = finite.det_A_exact(spec)
        if frac is not None:
            doc["detA_exact"] = _frac_str(frac)
    return doc


def _cmd_matrix(cfg: RunConfig) -> dict:
    spec = cfg.spec
    ts = spec.ts
    n = ts.n
    sep = spec.separated
    a_col = ts.index_of(spec.a)
    qvals = [spec.q(t) for t in ts.points[: n - 2]]
    Q = matrixform.build_Q(n, sep, qvals, a_col)
    spectrum = matrixform.eigs_dense(Q, tol=cfg.tol)
    doc = {"Q": [[float(x) for x in row] for row in Q.entries]}
    if cfg.rational and Q.exact:
        doc["Q_exact"] = [[_frac_str(x) for x in row] for row in Q.entries]
    doc.update(_spectrum_doc(spectrum))
    return doc


def _cmd_charfn(cfg: RunConfig) -> dict:
    spec = cfg.spec
    lo = cfg.lambda_min if cfg.lambda_min is not None else 0.0
    hi = cfg.lambda_max
    npts = max(0, cfg.n_max)
    lams = list(np.linspace(lo, hi, npts)) if npts else []
    fn = finite.char_value if spec.is_finite else continuum.char_fn
    samples = []
    for lam in lams:
        val = fn(spec, complex(lam))
        samples.append(
            {
                "lambda_re": float(lam),
                "lambda_im": 0.0,
                "delta_re": float(val.real),
                "delta_im": float(val.imag),
            }
        )
    return {"samples": samples}


def _cmd_asymptotics(cfg: RunConfig) -> dict:
    spec = cfg.spec
    spectrum = continuum.find_real_eigs(
        spec, lam_max=cfg.lambda_max, tol=cfg.tol, lam_min=cfg.lambda_min
    )
    report = continuum.asymptotic_table(spec, spectrum, cfg.n_max)
    return {
        "hypothesis_ok": report.hypothesis_ok,
        "banner": report.banner,
        "truncated": report.truncated,
        "rows": [
            {
                "n": r.n,
                "predicted_sqrt": r.predicted_sqrt,
                "computed_sqrt": r.computed_sqrt,
                "residual": r.residual,
                "n_times_residual": r.n_times_residual,
            }
            for r in report.rows
        ],
    }


# ---------------------------------------------------------------------------
# instance-level verification


def _verify_finite(cfg: RunConfig) -> list[dict]:
    spec = cfg.spec
    checks = []

    def add(name, passed, detail):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    rational = rationalizable(
        *spec.ts.points, *spec.bc.row_a, *spec.bc.row_b, *spec.q_values_kappa2()
    )
    delta = finite.char_poly(spec, rational=rational)
    predicted, exact = finite.predicted_count(spec)
    if delta.is_zero:
        add("count_law", not exact, "degenerate pencil; count law asserts fewer eigenvalues")
    elif exact:
        add("count_law", delta.degree == predicted,
            f"deg = {delta.degree}, predicted exact count = {predicted}")
    else:
        add("count_law", delta.degree < predicted,
            f"deg = {delta.degree} < {predicted} as predicted for a singular combination")

    # one-step Wronskian update laws, both directions
    basis = finite.build_basis(spec, rational=rational)
    phi = finite.wronskian_table(spec, rational=rational)
    n = basis.n
    ok_fwd = all(
        (phi[j + 1] - (phi[j] - basis.mu[j] * _q_at(spec, j) * basis.S[j + 1])).is_zero
        if rational
        else _poly_small(phi[j + 1] - (phi[j] - basis.mu[j] * _q_at(spec, j) * basis.S[j + 1]))
        for j in range(n - 2)
    )
    ok_bwd = all(
        (phi[j - 1] - (phi[j] + basis.mu[j - 1] * _q_at(spec, j - 1) * basis.S[j])).is_zero
        if rational
        else _poly_small(phi[j - 1] - (phi[j] + basis.mu[j - 1] * _q_at(spec, j - 1) * basis.S[j]))
        for j in range(1, n - 1)
    )
    add("wronskian_updates", ok_fwd and ok_bwd,
        "one-step update laws hold at every interior point, both directions")

    # eigenpairs satisfy the equation and both boundary conditions
    try:
        spectrum = finite.eigs_finite(spec, tol=cfg.tol)
        worst = 0.0
        for e in spectrum.eigenvalues:
            res = _eigenpair_residual(spec, e.value)
            worst = max(worst, res)
        add("eigenpair_residuals", worst <= 1e-6, f"worst normalized residual {worst:.2e}")
        vals = spectrum.expanded()
        dist = match_distance(vals, [v.conjugate() for v in vals])
        add("conjugate_closure", dist <= 1e-6, f"max distance to conjugated multiset {dist:.2e}")
    except DegenerateProblemError:
        add("eigenpair_residuals", True, "degenerate pencil; skipped")

    r, m = spec.ts.split_at(spec.a)
    if r >= 3 and m >= 2:
        bad = []
        for target in finite.LeadingTarget:
            pred = finite.predict_leading(spec, target)
            got = finite.target_polynomial(basis, target)
            if got.degree != pred.degree:
                bad.append(target.value)
            elif abs(complex(got.leading) - complex(pred.coefficient)) > 1e-10 * (
                1 + abs(complex(pred.coefficient))
            ):
                bad.append(target.value)
        add("leading_terms", not bad, f"mismatches: {bad}" if bad else "all 10 targets match")

    # the uniform-scale step relation, cross-checked against a direct solve
    if spec.ts.is_uniform():
        mu0 = spec.ts.mu_at(0)
        lam0 = 1.0
        got = finite.step_forward(0.0, 1.0, 0, mu0, mu0, 0.0, 0.0, lam=lam0)
        want = 2.0 - lam0 * mu0 * mu0  # direct second-difference elimination
        variant = 2.0 - 2.0 * lam0 * mu0 * mu0  # a doubled-lambda variant fails here
        add("uniform_step_coefficient", abs(got - want) < 1e-12,
            f"step gives {got}; direct elimination gives {want}; "
            f"doubled-lambda variant would give {variant}")

    if (
        spec.separated is not None
        and spec.ts.is_uniform()
        and spec.ts.mu_at(0) == 1
        and spec.separated.h != 1
        and 1 <= spec.ts.index_of(spec.a) <= spec.ts.n - 2
    ):
        qvals = [spec.q(t) for t in spec.ts.points[: spec.ts.n - 2]]
        Q = matrixform.build_Q(spec.ts.n, spec.separated, qvals, spec.ts.index_of(spec.a))
        sm = matrixform.eigs_dense(Q, tol=cfg.tol)
        sp = finite.eigs_finite(spec, tol=cfg.tol)
        dist = match_distance(sm, sp)
        add("matrix_oracle", dist <= 1e-6, f"multiset distance {dist:.2e}")
        s_qr = matrixform.eigs_dense(Q, tol=cfg.tol, method="qr")
        dist2 = match_distance(sm, s_qr)
        add("eigensolver_duality", dist2 <= 1e-6,
            f"charpoly vs QR multiset distance {dist2:.2e}")
    return checks


def _q_at(spec: ProblemSpec, j: int):
    rational = rationalizable(*spec.ts.points, *spec.q_values_kappa2())
    val = spec.q(spec.ts.points[j])
    if rational:
        return Fraction(val) if not isinstance(val, Fraction) else val
    return float(val)


def _poly_small(p: Polynomial, tol: float = 1e-9) -> bool:
    return all(abs(complex(c)) <= tol for c in p.to_float().coeffs)


def _eigenpair_residual(spec: ProblemSpec, lam: complex) -> float:
    """Worst equation/boundary residual of the reconstructed eigenfunction."""
    d1, d2 = finite.eigenfunction_weights(spec, lam)
    basis = finite.build_basis(spec, rational=False)
    y = [d1 * complex(basis.C[j](lam)) + d2 * complex(basis.S[j](lam)) for j in range(basis.n)]
    mu = [float(m) for m in basis.mu]
    scale = (1 + abs(lam)) * max(1.0, max(abs(v) for v in y))
    worst = 0.0
    ia = basis.ia
    for j in range(basis.n - 2):
        ydd = ((y[j + 2] - y[j + 1]) / mu[j + 1] - (y[j + 1] - y[j]) / mu[j]) / mu[j]
        q_j = float(spec.q(spec.ts.points[j]))
        res = -ydd + q_j * y[ia] - lam * y[j + 1]
        worst = max(worst, abs(res) / scale)
    for row in (spec.bc.row_a, spec.bc.row_b):
        c1, c2, c3, c4 = [float(c) for c in row]
        val = (
            c1 * y[0]
            + c2 * (y[1] - y[0]) / mu[0]
            + c3 * y[basis.n - 2]
            + c4 * (y[basis.n - 1] - y[basis.n - 2]) / mu[basis.n - 2]
        )
        worst = max(worst, abs(val) / scale)
    return worst


def _verify_continuum(cfg: RunConfig) -> list[dict]:
    spec = cfg.spec
    ts = spec.ts
    checks = []

    def add(name, passed, detail):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    rng = np.random.default_rng(20240811)
    lams = [complex(x) for x in rng.uniform(-20, 80, 4)]
    worst = 0.0
    for lam in lams:
        a = continuum.char_fn(spec, lam, method="closed")
        b = continuum.char_fn(spec, lam, method="rk4")
        worst = max(worst, abs(a - b) / (1 + abs(a)))
    add("closed_vs_rk4", worst <= 1e-6, f"worst relative gap {worst:.2e}")

    lam = 7.3
    w_a = continuum.wronskian_at(spec, lam, spec.a)
    add("wronskian_at_a", abs(w_a - 1) <= 1e-9, f"value at the frozen argument: {w_a}")
    s_d1, c_d1 = continuum.states_at(spec, lam, ts.delta1)
    s_d2 = continuum.cross_gap(s_d1, lam, spec.q(ts.delta1), ts.gap)
    c_d2 = continuum.cross_gap(c_d1, lam, spec.q(ts.delta1), ts.gap)
    psi_d1 = c_d1.dy * s_d1.y - c_d1.y * s_d1.dy
    psi_d2 = c_d2.dy * s_d2.y - c_d2.y * s_d2.dy
    jump = psi_d2 - (psi_d1 + ts.gap * spec.q(ts.delta1) * s_d2.y)
    add("wronskian_gap_jump", abs(jump) <= 1e-8, f"jump identity defect {abs(jump):.2e}")

    val = continuum.char_fn(spec, complex(3.0, 2.0))
    cval = continuum.char_fn(spec, complex(3.0, -2.0))
    add("conjugate_symmetry", abs(val.conjugate() - cval) <= 1e-9 * (1 + abs(val)),
        "characteristic values at conjugate points are conjugate")

    circle = [0.3 * np.exp(2j * np.pi * k / 64) for k in range(65)]
    samples = [continuum.char_fn(spec, z) for z in circle]
    loop = sum(
        0.5 * (samples[k] + samples[k + 1]) * (circle[k + 1] - circle[k]) for k in range(64)
    )
    scale = max(abs(s) for s in samples)
    add("entire_loop_integral", abs(loop) <= 1e-8 * max(scale, 1.0),
        f"closed-loop integral magnitude {abs(loop):.2e}")
    return checks


def _cmd_verify(cfg: RunConfig) -> dict:
    checks = _verify_finite(cfg) if cfg.spec.is_finite else _verify_continuum(cfg)
    return {"checks": checks, "all_passed": all(c["passed"] for c in checks)}


# ---------------------------------------------------------------------------
# entry point


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute a validated config; returns (exit_status, rendered report)."""
    handler = {
        "eigs": _cmd_eigs,
        "count": _cmd_count,
        "matrix": _cmd_matrix,
        "charfn": _cmd_charfn,
        "asymptotics": _cmd_asymptotics,
        "verify": _cmd_verify,
    }[cfg.command]
    try:
        doc = handler(cfg)
    except (ConvergenceError, ContourError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        return 1, json.dumps(err, indent=2)
    status = 0
    if cfg.command == "verify" and not doc["all_passed"]:
        status = 1
    return status, _render(doc, cfg.output, cfg.command)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="frozen-sl",
        description="Spectra of Sturm-Liouville problems with a frozen argument "
        "on bounded time scales",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the JSON problem document")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--lambda-min", type=float, default=None)
        p.add_argument("--lambda-max", type=float, default=None)
        p.add_argument("--n-max", type=int, default=None)
        p.add_argument("--output", choices=("json", "csv", "text"), default=None)
        p.add_argument("--rational", action="store_true", default=None)
    args = parser.parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
    except OSError as exc:
        print(json.dumps({"error": {"type": "IOError", "message": str(exc)}}), file=sys.stderr)
        return 2
    except ValidationError as exc:
        doc = {"error": {"type": "ValidationError", "field": exc.field, "message": str(exc)}}
        print(json.dumps(doc, indent=2), file=sys.stderr)
        return 2
    cfg.command = args.command
    if args.tol is not None:
        cfg.tol = args.tol
    if args.lambda_min is not None:
        cfg.lambda_min = args.lambda_min
    if args.lambda_max is not None:
        cfg.lambda_max = args.lambda_max
    if args.n_max is not None:
        cfg.n_max = args.n_max
    if args.output is not None:
        cfg.output = args.output
    if args.rational is not None:
        cfg.rational = args.rational
    workers = os.environ.get("FROZEN_SL_THREADS")
    if workers is not None:
        try:
            cfg.workers = max(1, int(workers))
        except ValueError:
            print(json.dumps({"error": {"type": "ValidationError",
                                        "message": "FROZEN_SL_THREADS must be an integer"}}),
                  file=sys.stderr)
            return 2
    try:
        _check_command_requirements(cfg)
        status, report = run(cfg)
    except ValidationError as exc:
        doc = {"error": {"type": "ValidationError", "field": exc.field, "message": str(exc)}}
        print(json.dumps(doc, indent=2), file=sys.stderr)
        return 2
    except FrozenSLError as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}),
              file=sys.stderr)
        return 1
    sys.stdout.write(report if report.endswith("\n") else report + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
