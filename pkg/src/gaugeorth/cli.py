"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 invalid input (gauge file, vectors,
preconditions), 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from . import approximation as ap
from . import geometry as geo
from . import orthogonality as ort
from .calculus import directional_derivative, subdifferential
from .gauges import Ellipsoid, GaugeValidationError, PolytopeH, PolytopeV, load_gauge
from .lp import NumericalError

VECTOR_FLAGS = {"-v", "--vector", "-x", "-y", "-u", "-b", "--basis"}
_NUMLIST = re.compile(r"^-?[0-9.]+(e[-+]?\d+)?(,\s*-?[0-9.]+(e[-+]?\d+)?)*$", re.IGNORECASE)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def fmt(v) -> str:
    """12 significant digits, no negative zero."""
    v = float(v)
    if v == 0.0:
        v = 0.0
    return format(v, ".12g")


def fmt_vec(v) -> str:
    return "(" + ", ".join(fmt(c) for c in np.asarray(v, dtype=float)) + ")"


def _num(v):
    v = float(v)
    return 0.0 if v == 0.0 else float(fmt(v))


def parse_vector(text: str) -> np.ndarray:
    try:
        vals = [float(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise ValueError(f"cannot parse vector {text!r}; expected comma-separated numbers") from None
    if not vals:
        raise ValueError("empty vector")
    v = np.array(vals)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"vector {text!r} has non-finite entries")
    return v


@dataclass
class Output:
    text: str
    record: dict = field(default_factory=dict)
    header: list | None = None
    rows: list | None = None


def _flat_record(record: dict) -> dict:
    out = {}
    for k, v in record.items():
        if isinstance(v, (list, tuple, np.ndarray)):
            for i, c in enumerate(np.asarray(v, dtype=float).ravel()):
                out[f"{k}{i}"] = fmt(c)
        elif isinstance(v, bool):
            out[k] = "true" if v else "false"
        elif isinstance(v, (int, float, np.floating)):
            out[k] = fmt(v)
        else:
            out[k] = str(v)
    return out


def _json_value(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_json_value(c) for c in (v.tolist() if isinstance(v, np.ndarray) else v)]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return _num(v)
    return v


def render(out: Output, kind: str) -> str:
    if kind == "text":
        return out.text.rstrip("\n") + "\n"
    if kind == "json":
        data = {k: _json_value(v) for k, v in out.record.items()}
        if out.header is not None:
            data["rows"] = [dict(zip(out.header, map(_json_value, r))) for r in out.rows]
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if out.header is not None:
        w.writerow(out.header)
        for r in out.rows:
            w.writerow([fmt(c) for c in r])
    else:
        flat = _flat_record(out.record)
        w.writerow(list(flat))
        w.writerow(list(flat.values()))
    return buf.getvalue()


# --- command handlers --------------------------------------------------------


def _vec(args, name, g):
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"missing vector -{name}")
    if v.size != g.dim:
        raise ValueError(f"vector -{name} has dimension {v.size}, gauge has dimension {g.dim}")
    return v


def cmd_info(g, a):
    kind = {PolytopeH: "polytope_h", PolytopeV: "polytope_v", Ellipsoid: "ellipsoid"}[type(g)]
    rec = {"type": kind, "dim": g.dim, "scale": g.scale, "symmetric": g.is_symmetric(seed=a.seed),
           "smooth": isinstance(g, Ellipsoid), "rotund": isinstance(g, Ellipsoid)}
    if isinstance(g, PolytopeH):
        rec["facets"] = len(g.normals)
    if isinstance(g, PolytopeV):
        rec["vertices"] = len(g.vertices)
    text = "\n".join(f"{k}: {_flat_record({k: v})[k]}" for k, v in rec.items())
    return Output(text, rec)


def cmd_eval(g, a):
    v = _vec(a, "v", g)
    val = g.eval(v)
    return Output(fmt(val), {"value": val})


def cmd_polar(g, a):
    v = _vec(a, "v", g)
    val = g.polar_eval(v)
    return Output(fmt(val), {"value": val})


def cmd_dd(g, a):
    x, y = _vec(a, "x", g), _vec(a, "y", g)
    val = directional_derivative(g, x, y, a.eps, method=a.method or "exact")
    return Output(fmt(val), {"value": val})


def cmd_subdiff_support(g, a):
    x, u = _vec(a, "x", g), _vec(a, "y", g)
    o = subdifferential(g, x, a.eps)
    s, p = o.support(u), o.extreme_point(u)
    return Output(f"support: {fmt(s)}\nextreme_point: {fmt_vec(p)}", {"support": s, "extreme_point": p})


def cmd_birkhoff(g, a):
    x, y = _vec(a, "x", g), _vec(a, "y", g)
    lam, m = ort.line_minimum(g, x, y)
    ok = ort.birkhoff_test(g, x, y, a.eps, a.tol)
    rec = {"orthogonal": ok, "min_value": m, "argmin_lambda": lam}
    lines = [str(ok).lower(), f"min_lambda gamma(x + lambda y) = {fmt(m)} at lambda = {fmt(lam)}"]
    if a.eps < g.eval(x):
        dual = ort.birkhoff_dual_test(g, x, y, a.eps, a.tol)
        if dual.certificate is not None:
            rec["certificate"] = dual.certificate
            lines.append(f"certificate: {fmt_vec(dual.certificate)}")
    return Output("\n".join(lines), rec)


def _interval_out(iv, extra=None):
    rec = {"lo": iv.lo, "hi": iv.hi}
    if iv.certificates is not None:
        rec["certificate_lo"], rec["certificate_hi"] = iv.certificates
    if extra:
        rec.update(extra)
    return Output(f"[{fmt(iv.lo)}, {fmt(iv.hi)}]", rec)


def cmd_right_interval(g, a):
    x, y = _vec(a, "x", g), _vec(a, "y", g)
    return _interval_out(ort.right_alpha_interval(g, x, y, a.eps, method=a.method or "auto"))


def cmd_left_interval(g, a):
    x, y = _vec(a, "x", g), _vec(a, "y", g)
    return _interval_out(ort.left_alpha_interval(g, x, y, a.eps, method=a.method or "derivative"))


def cmd_isosceles(g, a):
    x, y = _vec(a, "x", g), _vec(a, "y", g)
    ok = ort.isosceles_test(g, y, x, a.tol)
    diff = g.eval(y + x) - g.eval(y - x)
    return Output(str(ok).lower(), {"orthogonal": ok, "difference": diff})


def cmd_isosceles_interval(g, a):
    x, y = _vec(a, "x", g), _vec(a, "y", g)
    return _interval_out(ort.isosceles_alpha_interval(g, x, y))


def _subspace(g, a):
    if not a.b:
        raise UsageError("bestapprox/coapprox need at least one basis vector -b")
    for b in a.b:
        if b.size != g.dim:
            raise ValueError(f"basis vector has dimension {b.size}, gauge has dimension {g.dim}")
    return ap.Subspace(np.vstack(a.b))


def cmd_bestapprox(g, a):
    U, y = _subspace(g, a), _vec(a, "y", g)
    r = ap.best_approximation(g, U, y, a.eps)
    rec = {"point": r.point, "value": r.value, "certificate": r.certificate}
    lines = [f"point: {fmt_vec(r.point)}", f"value: {fmt(r.value)}", f"certificate: {fmt_vec(r.certificate)}"]
    if a.x is not None:
        x = _vec(a, "x", g)
        mem = ap.best_approx_membership(g, U, y, a.eps, x, a.tol)
        rec["member"] = mem
        lines.append(f"member: {str(mem).lower()}")
    return Output("\n".join(lines), rec)


def cmd_coapprox(g, a):
    U, y, x = _subspace(g, a), _vec(a, "y", g), _vec(a, "x", g)
    n = a.samples or 41
    sampled = ap.coapprox_membership_sampled(g, U, y, a.eps, x, samples=n, tol=a.tol)
    sufficient = ap.coapprox_sufficient_test(g, U, y, x, a.eps, samples=max(n, 8), tol=a.tol)
    rec = {"sampled_member": sampled, "sufficient_condition": sufficient}
    text = f"sampled_member: {str(sampled).lower()}\nsufficient_condition: {str(sufficient).lower()}"
    return Output(text, rec)


def _directions(g, n, seed):
    if g.dim == 2:
        return geo.circle_directions(n)
    d = np.random.default_rng(seed).normal(size=(n, g.dim))
    return d / np.linalg.norm(d, axis=1)[:, None]


def cmd_bisector(g, a):
    x = _vec(a, "x", g)
    n = a.samples or 16
    entries = geo.bisector_sample(g, x, _directions(g, n, a.seed))
    d = g.dim
    header = [f"d{i}" for i in range(d)] + ["alpha_lo", "alpha_hi"] + [f"p{i}" for i in range(d)]
    rows = []
    lines = []
    for e in entries:
        mid = e.interval.midpoint * x + e.direction
        rows.append(list(e.direction) + [e.interval.lo, e.interval.hi] + list(mid))
        lines.append(f"{fmt_vec(e.direction)} [{fmt(e.interval.lo)}, {fmt(e.interval.hi)}] {fmt_vec(mid)}")
    return Output("\n".join(lines), {"count": len(rows)}, header, rows)


def cmd_section(g, a):
    x, y = _vec(a, "x", g), _vec(a, "y", g)
    sec = geo.section2d(g, x, y, n=a.samples or 720)
    vecs = sec.vectors()
    header = ["s", "t"] + [f"v{i}" for i in range(g.dim)]
    rows = [list(p) + list(v) for p, v in zip(sec.points, vecs)]
    lines = [f"{fmt(p[0])} {fmt(p[1])}" for p in sec.points]
    return Output("\n".join(lines), {"points": len(rows), "sampled": sec.sampled}, header, rows)


def cmd_m_ratio(g, a):
    x, y = _vec(a, "x", g), _vec(a, "y", g)
    M = geo.m_value(g, x, y)
    bound = 2.0 * g.eval(x) / g.eval(y)
    ok = geo.unique_bisector_guarantee(g, x, y, a.tol)
    rec = {"M": M, "bound": bound, "unique_guaranteed": ok}
    return Output(f"M: {fmt(M)}\nbound: {fmt(bound)}\nunique_guaranteed: {str(ok).lower()}", rec)


def cmd_check_smooth(g, a):
    r = geo.smoothness_check(g)
    rec = {"smooth": r.smooth}
    lines = [f"smooth: {str(r.smooth).lower()}"]
    if r.witness is not None:
        x, s1, s2 = r.witness
        rec.update(x=x, subgradient1=s1, subgradient2=s2)
        lines += [f"x: {fmt_vec(x)}", f"subgradient1: {fmt_vec(s1)}", f"subgradient2: {fmt_vec(s2)}"]
    return Output("\n".join(lines), rec)


def cmd_check_rotund(g, a):
    r = geo.rotundity_check(g)
    rec = {"rotund": r.rotund}
    lines = [f"rotund: {str(r.rotund).lower()}"]
    if r.witness is not None:
        y, z = r.witness
        rec.update(y=y, z=z)
        lines += [f"y: {fmt_vec(y)}", f"z: {fmt_vec(z)}"]
    return Output("\n".join(lines), rec)


def cmd_reversal_2d(g, a):
    r = geo.boundary_reversal_check_2d(g, n=a.samples or 720)
    rec = {"points": r.n_points, "max_slack_forward": r.max_slack_forward,
           "max_slack_reversed": r.max_slack_reversed, "max_slack": r.max_slack}
    text = "\n".join(f"{k}: {_flat_record({k: v})[k]}" for k, v in rec.items())
    return Output(text, rec)


COMMANDS = {
    "info": (cmd_info, "describe the gauge"),
    "eval": (cmd_eval, "gauge value at -v"),
    "polar": (cmd_polar, "polar gauge value at -v"),
    "dd": (cmd_dd, "eps-directional derivative at -x in direction -y"),
    "subdiff-support": (cmd_subdiff_support, "support value and extreme point of the eps-subdifferential at -x in direction -y"),
    "birkhoff": (cmd_birkhoff, "is -x eps-Birkhoff orthogonal to -y"),
    "right-interval": (cmd_right_interval, "alphas with x orthogonal to alpha x + y"),
    "left-interval": (cmd_left_interval, "alphas with alpha x + y orthogonal to x"),
    "isosceles": (cmd_isosceles, "is -y isosceles orthogonal to -x"),
    "isosceles-interval": (cmd_isosceles_interval, "alphas with alpha x + y isosceles orthogonal to x"),
    "bestapprox": (cmd_bestapprox, "best approximation of -y in span(-b ...)"),
    "coapprox": (cmd_coapprox, "co-approximation checks for -x in span(-b ...)"),
    "bisector": (cmd_bisector, "sample the bisector of -x and x"),
    "section": (cmd_section, "unit sphere in the half-flat of -x and -y"),
    "m-ratio": (cmd_m_ratio, "longest x-parallel sphere segment vs 2 gamma(x)/gamma(y)"),
    "check-smooth": (cmd_check_smooth, "smoothness with witness"),
    "check-rotund": (cmd_check_rotund, "rotundity with witness"),
    "reversal-2d": (cmd_reversal_2d, "planar Birkhoff reversal along the unit circle"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gaugeorth", description="Orthogonality computations in gauge spaces.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--gauge", "-g", required=True, metavar="FILE", help="gauge description (JSON)")
        p.add_argument("-v", "--vector", dest="v", type=parse_vector, metavar="V")
        p.add_argument("-x", type=parse_vector, metavar="X")
        p.add_argument("-y", type=parse_vector, metavar="Y")
        p.add_argument("-b", "--basis", dest="b", type=parse_vector, action="append", metavar="B",
                       help="subspace basis vector (repeatable)")
        p.add_argument("--eps", type=float, default=0.0)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--method", default=None)
        p.add_argument("--format", choices=("text", "csv", "json"), default="text")
        p.add_argument("--out", metavar="FILE")
    return parser


def _join_negative_vectors(argv):
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in VECTOR_FLAGS and i + 1 < len(argv) and _NUMLIST.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}" if tok.startswith("--") else tok + argv[i + 1])
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_vectors(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.eps < 0 or not np.isfinite(args.eps):
            raise ValueError("--eps must be a non-negative number")
        if args.samples is not None and args.samples <= 0:
            raise ValueError("--samples must be positive")
        g = load_gauge(args.gauge)
        out = COMMANDS[args.command][0](g, args)
        text = render(out, args.format)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"gaugeorth: error: {exc}", file=sys.stderr)
        return 1
    except GaugeValidationError as exc:
        print(f"gaugeorth: invalid gauge: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"gaugeorth: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError, OSError) as exc:
        print(f"gaugeorth: invalid input: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
