"""Command-line entry point: ``sp4endo <subcommand> [options]``.

Every artifact embeds the resolved run configuration.  Exit status is 0 when
all checks pass, 1 when a check fails and 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .quadrature import RULES, QuadratureConfig

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    inputs: list = field(default_factory=list)
    output: str | None = None
    mode: str = "auto"
    quadrature: dict | None = None
    seed: int | None = None
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        # where an artifact is written must not change its bytes
        del d["output"]
        d["version"] = __version__
        return d


class UsageError(Exception):
    pass


# -- I/O helpers ---------------------------------------------------------------

def _emit(text: str, out: str | None):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n"


def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _csv(config: RunConfig, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config.to_dict(), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def _read_matrix(args) -> list[list]:
    if args.matrix:
        data = json.loads(args.matrix)
    elif args.input:
        data = json.loads(Path(args.input).read_text())
    else:
        raise UsageError("give --matrix or --input")
    if isinstance(data, dict):
        data = data.get("matrix")
    if not (isinstance(data, list) and len(data) == 4 and all(isinstance(r, list) and len(r) == 4 for r in data)):
        raise UsageError("matrix must be a 4x4 JSON array")
    return data


def _as_exact(rows, mode: str):
    """Exact matrix when every entry is an integer or a rational string (or mode forces it)."""
    from .exact_linalg import ExactMatrix

    def is_exact(x):
        return isinstance(x, int) or (isinstance(x, str) and "." not in x)

    if mode == "float" or (mode == "auto" and not all(is_exact(x) for r in rows for x in r)):
        return None
    try:
        return ExactMatrix.from_rows([[Fraction(str(x)) for x in r] for r in rows])
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"cannot read exact matrix: {e}") from e


def _as_float(rows) -> np.ndarray:
    try:
        return np.array([[float(Fraction(str(x))) if isinstance(x, str) else float(x) for x in r] for r in rows])
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"cannot read matrix: {e}") from e


def _quad(args) -> QuadratureConfig:
    try:
        return QuadratureConfig(rule=args.rule, abs_tol=args.tol, rel_tol=args.rel_tol,
                                max_depth=args.max_depth)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _pair(text: str, kind=float) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise UsageError(f"expected two comma-separated values, got {text!r}")
    try:
        return tuple(kind(p) for p in parts)
    except ValueError as e:
        raise UsageError(str(e)) from e


# -- subcommands ---------------------------------------------------------------

def cmd_verify_structure(args) -> int:
    from . import structure as st

    report = st.verify_bracket_table()
    passed_j, total_j = st.check_jacobi() if not args.skip_jacobi else (0, 0)
    report["jacobi"] = {"passed": passed_j, "total": total_j}
    ok = report["all_passed"] and (args.skip_jacobi or passed_j == total_j)
    report["all_passed"] = ok
    cfg = RunConfig("verify-structure", output=args.out, options={"skip_jacobi": args.skip_jacobi})
    _emit(_json({"config": cfg.to_dict(), "result": report}), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_decompose(args) -> int:
    from . import decompositions as dec

    if args.random:
        g = dec.random_symplectic(np.random.default_rng(args.seed), args.length)
        source = {"random": True, "seed": args.seed, "length": args.length}
    else:
        g = _as_float(_read_matrix(args))
        source = {"random": False}
    try:
        if args.kind == "iwasawa":
            f = dec.iwasawa(g)
            res = {"u": f.u, "a": f.a, "k": f.k, "x": list(f.x), "t": list(f.t),
                   "reconstruction_error": f.reconstruction_error(g)}
        elif args.kind == "polar":
            f = dec.polar(g)
            res = {"k1": f.k1, "p": f.p, "reconstruction_error": float(np.max(np.abs(f.product() - g)))}
        else:
            f = dec.kak(g)
            res = {"k1": f.k1, "a": f.a, "k2": f.k2, "t": list(f.t),
                   "reconstruction_error": float(np.max(np.abs(f.product() - g)))}
    except dec.NotSymplecticError as e:
        raise UsageError(str(e)) from e
    res["input"] = g
    cfg = RunConfig("decompose", inputs=[args.input] if args.input else [], output=args.out,
                    mode="float", seed=args.seed if args.random else None,
                    options={"kind": args.kind, **source})
    _emit(_json({"config": cfg.to_dict(), "result": res}), args.out)
    return EXIT_OK if res["reconstruction_error"] <= 1e-10 * max(1.0, float(np.max(np.abs(g)))) ** 2 else EXIT_FAIL


def cmd_endoscopy(args) -> int:
    from . import endoscopy as endo
    from .exact_linalg import is_symplectic

    rows = _read_matrix(args)
    exact = _as_exact(rows, args.mode)
    g = exact if exact is not None else _as_float(rows)
    if exact is not None and not is_symplectic(exact):
        raise UsageError("matrix is not symplectic")
    ct = endo.classify(g)
    res = ct.to_dict()
    res["centralizer_dim"] = len(endo.centralizer_algebra(exact)) if exact is not None else None
    try:
        e = endo.endoscopic_group_of(g)
        res["endoscopic_kind"] = e.kind
        res["endoscopic_form"] = e.form
        res["commutes_with_gamma"] = e.commutes_with_gamma
    except endo.SingularElementError:
        res["endoscopic_kind"] = None
    cfg = RunConfig("endoscopy", inputs=[args.input] if args.input else [], output=args.out,
                    mode="rational" if exact is not None else "float")
    _emit(_json({"config": cfg.to_dict(), "result": res}), args.out)
    return EXIT_OK


def cmd_orbital(args) -> int:
    from . import orbital as orb

    q = _quad(args)
    try:
        f = orb.TestFunction.parse(args.profile)
    except ValueError as e:
        raise UsageError(str(e)) from e
    rows = []
    ok = True
    if args.type == "hyp":
        if args.a1 is None or args.a2 is None:
            raise UsageError("--type hyp needs --a1 and --a2")
        try:
            r = orb.orbital_hyperbolic(args.a1, args.a2, f, q)
        except ValueError as e:
            raise UsageError(str(e)) from e
        delta = orb.transfer_factor("hyperbolic", args.a1, args.a2).value.real
        header = ["type", "a1", "a2", "value", "err_est", "delta", "fH", "converged"]
        rows.append(["hyp", args.a1, args.a2, r.value, r.error, delta, delta * r.value, r.converged])
        ok = r.converged
    else:
        if not args.lam:
            raise UsageError("--type ell needs at least one --lambda")
        header = ["type", "lambda", "value", "err_est", "converged"]
        for lam in args.lam:
            try:
                r = orb.orbital_elliptic_1d(lam, f, q, measure=args.measure)
            except ValueError as e:
                raise UsageError(str(e)) from e
            rows.append(["ell", lam, r.value, r.error, r.converged])
            ok &= r.converged
    cfg = RunConfig("orbital", output=args.out, quadrature=q.to_dict(),
                    options={"type": args.type, "a1": args.a1, "a2": args.a2, "lambda": args.lam,
                             "profile": f.to_dict(), "measure": args.measure})
    _emit(_csv(cfg, header, rows), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_expansion(args) -> int:
    from . import orbital as orb

    try:
        f = orb.TestFunction.parse(args.profile)
        lams = orb.default_lambda_grid(args.points, args.lo, args.hi)
        se = orb.singular_expansion(f, lams)
        eo = orb.even_odd_parts(f, lams)
    except ValueError as e:
        raise UsageError(str(e)) from e
    header = ["lambda", "F", "A", "B", "G", "H"]
    rows = [[l, F, A, B, G, H] for l, F, A, B, G, H in zip(se.lams, se.F, se.A, se.B, eo.G, eo.H)]
    cfg = RunConfig("expansion", output=args.out, quadrature=orb.EXPANSION_CONFIG.to_dict(),
                    options={"profile": f.to_dict(), "points": args.points, "lo": args.lo, "hi": args.hi,
                             "U": se.U, "A0": se.A0, "log_fit": se.log_fit.to_dict(),
                             "G_coeffs": eo.G_coeffs, "H_coeffs": list(eo.H_coeffs)})
    _emit(_csv(cfg, header, rows), args.out)
    return EXIT_OK if se.converged else EXIT_FAIL


def cmd_characters(args) -> int:
    from . import characters as ch

    thetas = np.linspace(args.theta_lo, args.theta_hi, args.grid)
    rows = []
    try:
        if args.kind == "sl2":
            header = ["theta", "plus_re", "plus_im", "minus_re", "minus_im", "stable"]
            for t in thetas:
                p, m = ch.sl2_ds_character(args.n, float(t), 1), ch.sl2_ds_character(args.n, float(t), -1)
                rows.append([float(t), p.real, p.imag, m.real, m.imag, ch.sl2_stable_sum(args.n, float(t)).real])
        else:
            mu = _pair(args.mu, int)
            t2 = args.theta2
            header = ["theta1", "theta2", "value_re", "value_im"]
            for t in thetas:
                g = ch.TorusElement(float(t), t2)
                if args.kind == "numerator":
                    v = ch.weyl_numerator(mu, g)
                else:
                    v = ch.stable_character_sum(ch.CharacterPacket.generated(ch.HCParameter(mu)), g)
                rows.append([float(t), t2, v.real, v.imag])
    except ValueError as e:
        raise UsageError(str(e)) from e
    cfg = RunConfig("characters", output=args.out,
                    options={"kind": args.kind, "mu": args.mu, "n": args.n, "theta2": args.theta2,
                             "grid": [args.theta_lo, args.theta_hi, args.grid]})
    _emit(_csv(cfg, header, rows), args.out)
    return EXIT_OK


def cmd_packet(args) -> int:
    from . import packet as pk

    if args.demo:
        p = pk.demo_packet()
    elif args.input:
        try:
            p = pk.packet_from_json(json.loads(Path(args.input).read_text()))
        except (KeyError, ValueError, TypeError) as e:
            raise UsageError(f"cannot read packet: {e}") from e
    else:
        raise UsageError("give --demo or --input")
    try:
        rep = pk.demo_report(p)
    except pk.PacketError as e:
        raise UsageError(str(e)) from e
    cfg = RunConfig("packet", inputs=[args.input] if args.input else [], output=args.out,
                    mode="rational", options={"demo": args.demo})
    _emit(_json({"config": cfg.to_dict(), "result": rep}), args.out)
    ok = rep["round_trip_exact"] and rep["orthogonality_defects"] == 0
    if rep["epsilon"] is not None:
        ok &= rep["epsilon"]["passed"]
    return EXIT_OK if ok else EXIT_FAIL


def cmd_selftest(args) -> int:
    from . import acceptance as acc

    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = acc.run_acceptance(args.seed, only)
    cfg = RunConfig("selftest", output=args.out, seed=args.seed,
                    quadrature=QuadratureConfig().to_dict(), options={"only": only})
    lines = "".join(r.line() + "\n" for r in results)
    sys.stdout.write(lines)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "acceptance.json").write_text(
            acc.serialise({"config": cfg.to_dict(), "results": [r.to_dict() for r in results]}) + "\n")
        (out / "acceptance.txt").write_text(lines)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# -- parser --------------------------------------------------------------------

def _add_quad(p):
    p.add_argument("--rule", choices=RULES, default="tanh-sinh")
    p.add_argument("--tol", type=float, default=1e-8, help="absolute tolerance per panel")
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--max-depth", type=int, default=18)


def _add_matrix(p):
    p.add_argument("--matrix", help="4x4 JSON array; entries may be 'p/q' strings")
    p.add_argument("--input", help="JSON file holding the matrix")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sp4endo", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-structure", help="exact bracket, root and Jacobi checks")
    p.add_argument("--skip-jacobi", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_verify_structure)

    p = sub.add_parser("decompose", help="Iwasawa, polar or KAK decomposition")
    _add_matrix(p)
    p.add_argument("--kind", choices=("iwasawa", "polar", "kak"), default="iwasawa")
    p.add_argument("--random", action="store_true", help="decompose a seeded random element")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--length", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("endoscopy", help="conjugacy type, centralizer and endoscopic group")
    _add_matrix(p)
    p.add_argument("--mode", choices=("auto", "rational", "float"), default="auto")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_endoscopy)

    p = sub.add_parser("orbital", help="hyperbolic or elliptic orbital integral")
    p.add_argument("--type", choices=("hyp", "ell"), required=True)
    p.add_argument("--a1", type=float)
    p.add_argument("--a2", type=float)
    p.add_argument("--lambda", dest="lam", type=float, action="append")
    p.add_argument("--profile", default="5,4", help="R,m[,coef] of the bump (1 - s/R^2)^m")
    p.add_argument("--measure", choices=("dt", "dt/t"), default="dt")
    _add_quad(p)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_orbital)

    p = sub.add_parser("expansion", help="F, A, B, G, H tables near lambda = 0")
    p.add_argument("--profile", default="5,4")
    p.add_argument("--points", type=int, default=13)
    p.add_argument("--lo", type=float, default=1e-4)
    p.add_argument("--hi", type=float, default=1e-1)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_expansion)

    p = sub.add_parser("characters", help="Weyl numerators, SL(2) characters, stable sums")
    p.add_argument("--kind", choices=("numerator", "sl2", "stable"), default="numerator")
    p.add_argument("--mu", default="3,-1")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--theta2", type=float, default=0.7)
    p.add_argument("--theta-lo", type=float, default=0.1)
    p.add_argument("--theta-hi", type=float, default=3.0)
    p.add_argument("--grid", type=int, default=30)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_characters)

    p = sub.add_parser("packet", help="transfer, inversion and sign checks on a packet")
    p.add_argument("--demo", action="store_true")
    p.add_argument("--input")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_packet)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--out", help="directory for acceptance.json / acceptance.txt")
    p.set_defaults(fn=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"sp4endo {args.command}: error: {e}\n")
        return EXIT_USAGE


run = main

if __name__ == "__main__":
    sys.exit(main())
