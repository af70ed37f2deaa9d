"""Command-line front end: ``psiosc <command> [options]``.

Exit codes: 0 all checks passed, 2 a check failed, 3 informational (vacuous
band or parameters below the asymptotic regime), 4 input error, 5 resource cap.
Numbers are read exactly: ``"p/q"``, ``"0.01"`` and ``"1e-3"`` all work.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from ._backend import default_threads
from .errors import InputError, PreconditionError, ResourceError
from .exactnum import as_rat, rat_decimal
from .lab import ExperimentConfig, density_sweep, run_sign_experiment
from .psi import MatrixTheta, psi_cf_1d, psi_naive, psi_sweep, sign_sequence
from .regions2d import (
    METHODS, CenterLattice, Square, jarnik_check, lemma1_count_check, lemma2_sum,
    lemma3_lemma4_band, measure_mbar_2d,
)
from .regions_md import (
    RectC, StripD, centered_box, classify_pairs, d_region_points, lemma11_bound_ok,
    lemma13_bound_pow, lemma5_lemma14_check, lemma6_sum, measure_mbar_md, pick_bound_check,
    totient_series_check,
)
from .report import rat_str, rerender, write_experiment

OK, FAILED, INFO, BAD_INPUT, RESOURCE = 0, 2, 3, 4, 5
LEMMAS = ("1", "2", "3", "4", "5", "6", "7", "11", "12", "13", "14", "jarnik", "pick", "totient")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def show(x) -> str:
    """``p/q (~d.ddde+N)``; integers print bare."""
    x = Fraction(x)
    return rat_str(x) if x.denominator == 1 else f"{rat_str(x)} (~{rat_decimal(x)})"


def mixed(x: Fraction) -> str:
    """``n+r/q`` for a positive rational."""
    n = x.numerator // x.denominator
    r = x - n
    return rat_str(x) if r == 0 or n == 0 else f"{n}+{rat_str(r)}"


def _rat(s: str) -> Fraction:
    return as_rat(s)


def _rats(s: str) -> list[Fraction]:
    return [as_rat(v) for v in s.split(",") if v.strip()]


def _ints(s: str) -> list[int]:
    try:
        return [int(v) for v in s.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {s!r}") from exc


def _points(s: str) -> list[tuple[Fraction, Fraction]]:
    pts = []
    for chunk in s.split(";"):
        xy = _rats(chunk)
        if len(xy) != 2:
            raise InputError(f"polygon vertex {chunk!r} needs two coordinates")
        pts.append((xy[0], xy[1]))
    return pts


def _matrix(args, suffix="") -> MatrixTheta:
    regime = args.regime
    alpha, beta = getattr(args, "alpha" + suffix), getattr(args, "beta" + suffix)
    alphas, matrix = getattr(args, "alphas" + suffix), getattr(args, "matrix" + suffix, None)
    if matrix:
        return MatrixTheta(tuple(tuple(_rats(row)) for row in matrix.split(";")))
    if regime == "mx1" or (regime is None and alphas):
        if not alphas:
            raise InputError(f"alphas{suffix}: required for the simultaneous regime")
        return MatrixTheta.column(_rats(alphas))
    if alpha is None:
        raise InputError(f"alpha{suffix}: required")
    if regime == "1x2" or (regime is None and beta is not None):
        if beta is None:
            raise InputError(f"beta{suffix}: required for the 1x2 regime")
        return MatrixTheta.form(alpha, beta)
    return MatrixTheta.scalar(alpha)


def _record_line(rec) -> str:
    x = ", ".join(str(v) for v in rec.witness_x)
    p = ", ".join(str(v) for v in rec.witness_p)
    return f"{show(rec.value)}  witness x=({x}) p=({p})"


# ------------------------------------------------------------------ commands


def cmd_psi(args) -> int:
    theta = _matrix(args)
    if args.T is not None:
        for rec in psi_sweep(theta, args.T, backend=args.backend):
            print(f"t={rec.t}: {_record_line(rec)}")
        return OK
    t = args.t
    if theta.regime == "1x1":
        rec = psi_cf_1d(theta.entries[0][0], t)
    elif theta.regime == "general":
        rec = psi_naive(theta, t)
    else:
        rec = psi_sweep(theta, t, backend=args.backend)[-1]
    print(_record_line(rec))
    return OK


def cmd_signs(args) -> int:
    seq = sign_sequence(_matrix(args), _matrix(args, "2"), args.T, backend=args.backend)
    if args.show:
        for t, d in seq.values:
            print(f"t={t}: {show(d)}")
    print(f"sign changes: {seq.changes}")
    print("positions: " + " ".join(str(t) for t in seq.change_positions))
    return OK


def _square(args) -> Square:
    return Square.centered(args.lam) if args.lam is not None else Square.unit()


def cmd_measure2d(args) -> int:
    est = measure_mbar_2d(args.k, args.eps, _square(args), args.strategy, args.budget,
                          args.seed, args.threads, backend=args.backend)
    print(f"method: {est.method}")
    print(f"estimate: {show(est.value)}")
    print(f"ci: {show(est.ci_halfwidth)}")
    return OK


def cmd_measure_md(args) -> int:
    box = centered_box(args.lam, args.m) if args.lam is not None else None
    est = measure_mbar_md(args.k, args.eps, args.m, box, args.samples, args.seed, args.threads,
                          backend=args.backend)
    print(f"hits: {est.hits} of {est.samples}")
    print(f"estimate: {show(est.value)}")
    print(f"ci: {show(est.ci_halfwidth)}")
    return OK


def _verdict(ok: bool, info: bool = False) -> int:
    if not ok:
        print("FAILED")
        return FAILED
    print("OK (informational)" if info else "OK")
    return INFO if info else OK


def cmd_lemma(args) -> int:
    lid = args.id
    if lid == "1":
        x, y = _ints(args.x), _ints(args.y)
        corner = _rats(args.corner) if args.corner else [Fraction(0), Fraction(0)]
        res = lemma1_count_check(CenterLattice(tuple(x), tuple(y)),
                                 Square(tuple(corner), args.lam or Fraction(1)))
        print(f"count: {res.count}")
        print(f"bound: [{show(res.bound_lo)}, {show(res.bound_hi)}]")
        return _verdict(res.ok)
    if lid == "2":
        total, ok = lemma2_sum(args.k)
        print(f"sum: {rat_str(total)} = {mixed(total)} (~{rat_decimal(total)})")
        return _verdict(ok)
    if lid in ("3", "4"):
        lam = args.lam if args.lam is not None else Fraction(1, 2)
        S = Square.centered(lam)
        est = measure_mbar_2d(args.k, args.eps, S, args.strategy or "fiber-mc",
                              args.budget or 2000, args.seed, args.threads, backend=args.backend)
        rep = lemma3_lemma4_band(args.k, args.eps, lam, S, est)
        print(f"estimate: {show(rep.estimate)} +- {show(rep.ci)} ({est.method}, {est.samples})")
        if lid == "3":
            print(f"upper band: {show(rep.upper)}  margin {show(rep.margins['upper'])}")
            print(f"lower band: {show(rep.lower)}  margin {show(rep.margins['lower'])}")
            if not rep.upper_ok:
                return _verdict(False)
            return _verdict(True, info=not rep.lower_ok)
        print(f"complement: {show(rep.complement)}  margin {show(rep.margins['complement'])}")
        return _verdict(rep.complement_ok)
    if lid in ("5", "14"):
        lam = args.lam if args.lam is not None else Fraction(1)
        box = centered_box(lam, args.m) if lam != 1 else None
        est = measure_mbar_md(args.k, args.eps, args.m, box, args.samples or 10**6, args.seed,
                              args.threads, backend=args.backend)
        rep = lemma5_lemma14_check(args.k, args.eps, args.m, lam, est)
        print(f"estimate: {show(rep.estimate)} +- {show(rep.ci)}")
        if lid == "5":
            print(f"upper band: {show(rep.upper)}  margin {show(rep.margins['upper'])}")
            return _verdict(rep.estimate - rep.ci <= rep.upper)
        print(f"lower band: {show(rep.lower)}  margin {show(rep.margins['lower'])}")
        if rep.vacuous:
            return _verdict(True, info=True)
        return _verdict(rep.estimate + rep.ci >= rep.lower)
    if lid == "6":
        total, ok = lemma6_sum(args.k, args.m)
        print(f"sum: {show(total)}")
        return _verdict(ok)
    if lid in ("7", "pick"):
        res = pick_bound_check(_points(args.polygon))
        print(f"N: {res.N}  area: {show(res.area)}")
        if not res.applicable:
            print("integer points are collinear; bound not applicable")
            return _verdict(True, info=True)
        print(f"interior: {res.interior}  boundary: {res.boundary}")
        return _verdict(res.ok)
    if lid == "jarnik":
        res = jarnik_check(_points(args.polygon))
        print(f"N: {res.N}  area: {show(res.P)}")
        print(f"perimeter: [{show(res.L_lo)}, {show(res.L_hi)}]")
        return _verdict(res.ok)
    if lid == "11":
        lam = args.lam if args.lam is not None else Fraction(1)
        strip = StripD(args.q1, args.q2, args.k, args.m, args.eps)
        corner = _rats(args.corner) if args.corner else [Fraction(0), Fraction(0)]
        rect = RectC.full(args.q1, args.q2, lam, args.delta, corner[0], corner[1])
        count = len(d_region_points(strip, rect))
        print(f"points: {count}  lines: {strip.line_count}  d: {strip.d}")
        return _verdict(lemma11_bound_ok(count, strip, lam))
    if lid in ("12", "13"):
        lam = args.lam if args.lam is not None else Fraction(1)
        mode = "sampled" if args.n else "full"
        cls = classify_pairs(args.k, args.m, args.eps, lam, args.delta, mode, args.n or 0,
                             args.seed)
        print(f"pairs: {cls.pairs_checked}  J0: {cls.n_j0}  J1: {cls.n_j1}  V: {cls.n_v}")
        for name, v in cls.violations.items():
            print(f"violations {name}: {v}")
        if lid == "13":
            bound = lemma13_bound_pow(args.k, args.m, args.eps, lam)
            print(f"bound**(2m): {show(bound)}")
        if cls.total_violations:
            return _verdict(False)
        return _verdict(True, info=not cls.meaningful)
    if lid == "totient":
        rep = totient_series_check(args.m, args.P)
        print(f"partial: {show(rep.partial)}")
        print(f"target: [{show(rep.target_lo)}, {show(rep.target_hi)}]  tail: {show(rep.tail)}")
        return _verdict(rep.ok)
    raise InputError(f"id: unknown lemma {lid!r}")


def _experiment_config(args) -> ExperimentConfig:
    fields = {}
    for name in ("regime", "m", "eps", "lam", "delta", "T", "pair_count", "denom_bits", "seed",
                 "samples", "budget"):
        v = getattr(args, name)
        if v is not None:
            fields[name] = v
    if args.k_ladder:
        fields["k_ladder"] = tuple(_ints(args.k_ladder))
    return ExperimentConfig(**fields)


def cmd_experiment(args) -> int:
    cfg = _experiment_config(args)
    result = run_sign_experiment(cfg, args.threads, args.backend)
    density = None
    if args.density_k:
        density = density_sweep(cfg, args.density_k, threads=args.threads, backend=args.backend)
    jpath, cpath = write_experiment(result, args.out, density)
    s = result.summary
    for key in ("pairs", "degenerate", "without_change", "min_changes", "median_changes_early",
                "median_changes", "max_changes", "pairs_with_psi_hit", "pairs_with_phi_hit",
                "implication_violations"):
        v = s[key]
        print(f"{key}: {show(v) if isinstance(v, Fraction) else v}")
    if density is not None:
        print(f"density P(Psi): {show(density.p_psi)} +- {show(density.ci)}"
              f"  band {show(density.band)}")
    print(f"wrote {jpath} and {cpath}")
    if s["partial"]:
        return RESOURCE
    ok = s["without_change"] == 0 and s["implication_violations"] == 0
    if density is not None:
        ok = ok and density.ok
    return OK if ok else FAILED


def cmd_report(args) -> int:
    path = rerender(args.input, args.output)
    print(f"wrote {path}")
    return OK


# -------------------------------------------------------------------- parser


def _common(p):
    p.add_argument("--config", help="JSON file with default values for these options")
    p.add_argument("--threads", type=int, default=None, help="parallelism hint")
    p.add_argument("--backend", choices=("numba", "numpy"), default=None)
    p.add_argument("--seed", type=int, default=0)


def _theta_args(p, suffix=""):
    p.add_argument(f"--alpha{suffix}", type=_rat)
    p.add_argument(f"--beta{suffix}", type=_rat)
    p.add_argument(f"--alphas{suffix}", help="comma-separated numbers (simultaneous regime)")
    p.add_argument(f"--matrix{suffix}", help="rows separated by ';', entries by ','")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="psiosc", description="Irrationality measure function toolkit.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("psi", help="evaluate psi at t or sweep t = 1..T")
    _common(p)
    p.add_argument("--regime", choices=("1x1", "1x2", "mx1", "general"))
    _theta_args(p)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--T", type=int)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("signs", help="sign changes of psi_theta - psi_theta2")
    _common(p)
    p.add_argument("--regime", choices=("1x1", "1x2", "mx1", "general"))
    _theta_args(p)
    _theta_args(p, "2")
    p.add_argument("--T", type=int, default=100)
    p.add_argument("--show", action="store_true", help="print every difference")
    p.set_defaults(func=cmd_signs)

    p = sub.add_parser("measure2d", help="measure of the well-approximable set, one form")
    _common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=_rat, required=True)
    p.add_argument("--lam", type=_rat, help="side of the centered square (default: unit square)")
    p.add_argument("--strategy", choices=METHODS, default="point-mc")
    p.add_argument("--budget", type=int, default=10**6)
    p.set_defaults(func=cmd_measure2d)

    p = sub.add_parser("measure-md", help="measure of the well-approximable set, simultaneous")
    _common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=_rat, required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--lam", type=_rat, help="side of the centered box (default: unit cube)")
    p.add_argument("--samples", type=int, default=10**6)
    p.set_defaults(func=cmd_measure_md)

    p = sub.add_parser("lemma", help="run one lemma check")
    _common(p)
    p.add_argument("id", choices=LEMMAS)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--eps", type=_rat, default=Fraction(1, 100))
    p.add_argument("--lam", type=_rat)
    p.add_argument("--delta", type=_rat, default=Fraction(1, 10))
    p.add_argument("--strategy", choices=METHODS)
    p.add_argument("--budget", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--x", default="2,3", help="first integer pair")
    p.add_argument("--y", default="3,2", help="second integer pair")
    p.add_argument("--corner", help="lower-left corner 'a,b'")
    p.add_argument("--polygon", default="0,0;1,0;1,1;0,1", help="vertices 'x,y;x,y;...'")
    p.add_argument("--q1", type=int, default=3)
    p.add_argument("--q2", type=int, default=4)
    p.add_argument("--n", type=int, help="sample this many pairs instead of all")
    p.add_argument("--P", type=int, default=10**4)
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("experiment", help="sign-change experiment with ladder hits")
    _common(p)
    p.add_argument("--regime", choices=("1x2", "mx1"))
    p.add_argument("--m", type=int)
    p.add_argument("--eps", type=_rat)
    p.add_argument("--lam", type=_rat)
    p.add_argument("--delta", type=_rat)
    p.add_argument("--k-ladder", dest="k_ladder", help="comma-separated increasing k values")
    p.add_argument("--T", type=int)
    p.add_argument("--pair-count", dest="pair_count", type=int)
    p.add_argument("--denom-bits", dest="denom_bits", type=int)
    p.add_argument("--samples", type=int, help="pairs drawn for the density sweep")
    p.add_argument("--budget", type=int)
    p.add_argument("--density-k", dest="density_k", type=int)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("report", help="re-render a JSON report as CSV")
    _common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_report)
    return parser


def _config_defaults(sub: argparse.ArgumentParser, path: str) -> dict:
    """Option defaults from a JSON file; JSON numbers are read through their decimal text."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"config: cannot read {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise InputError("config: top level must be an object")
    known = {a.dest: a for a in sub._actions}
    out = {}
    for key, value in raw.items():
        dest = key.replace("-", "_")
        if dest not in known or dest in ("config", "help"):
            raise InputError(f"config: unknown field {key!r}")
        action = known[dest]
        if isinstance(value, list) and dest in ("k_ladder",):
            value = ",".join(str(v) for v in value)
        if action.type is not None and not isinstance(value, bool):
            value = action.type(str(value))
        out[dest] = value
    return out


def _subparser(parser, name):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices.get(name)
    return None


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError(parser.format_usage() + "psiosc: error: a command is required")
        if args.config:
            sub = _subparser(parser, args.command)
            sub.set_defaults(**_config_defaults(sub, args.config))
            args = parser.parse_args(argv)
        if args.threads is None:
            args.threads = default_threads()
        if args.threads < 1:
            raise InputError("threads: must be at least 1")
        return args.func(args)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return BAD_INPUT
    except PreconditionError as exc:
        print(f"precondition not met: {exc}", file=sys.stderr)
        return INFO
    except (InputError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except ResourceError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return RESOURCE


if __name__ == "__main__":
    sys.exit(main())
