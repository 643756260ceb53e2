"""Command-line front end.

Exit codes: 0 ok, 2 parse error, 3 precondition violated, 4 no usable lambda,
5 theorem conditions fail, 6 verification failed, 7 integration error.
Every option can also be set through an environment variable named
``MIDCONV_`` plus the option name in upper case with dashes as underscores
(``--tol-rank`` -> ``MIDCONV_TOL_RANK``); command-line values win.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import __version__, tuplefile
from .convolution import (
    check_conditions,
    middle_convolve_add,
    middle_convolve_mult,
    predict_jordan_mc,
    predicted_dim,
    predicted_dim_add,
)
from .cxmat import MONODROMY, RESIDUE, MatrixTuple, ToleranceConfig, jordan_structure
from .errors import (
    IntegrationError,
    MidconvError,
    NoConvergence,
    NoLambda,
    TheoremConditionsFail,
    VerificationFail,
)
from .fuchsian import FuchsianSystem
from .monodromy import IntegrationConfig, compute_monodromy, verify_rh_solution
from .rhsolve import BALANCED, INFINITY_FIRST, general_scheme_solve

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_NO_LAMBDA = 4
EXIT_THEOREM = 5
EXIT_VERIFICATION = 6
EXIT_INTEGRATION = 7

ENV_PREFIX = "MIDCONV_"


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """``"re,im"``, ``"re"`` or a Python complex literal such as ``"1+2j"``."""
    s = text.strip()
    try:
        if "," in s:
            re_, im = s.split(",")
            return complex(float(re_), float(im))
        return complex(s.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _fmt(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("tolerances")
    g.add_argument("--tol-rank", type=float, default=_env("tol-rank", 1e-10))
    g.add_argument("--tol-eig", type=float, default=_env("tol-eig", 1e-8))
    g.add_argument("--tol-conj", type=float, default=_env("tol-conj", 1e-8))
    g.add_argument("--tol-rel", type=float, default=_env("tol-rel", 1e-11),
                   help="relative tolerance of the ODE integrator")
    g.add_argument("--tol-abs", type=float, default=_env("tol-abs", 1e-13),
                   help="absolute tolerance of the ODE integrator")
    p.add_argument("--output", "-o", default=_env("output"),
                   help="write the resulting tuple here instead of stdout")
    p.add_argument("--verbose", "-v", action="count", default=0)


def _add_points(p):
    env = _env("points")
    p.add_argument("--points", nargs="+", type=parse_complex,
                   default=[parse_complex(x) for x in env.split()] if env else None,
                   help="finite singular points, e.g. --points 0 1 3 or --points 0,1 2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="midconv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mc-mult", help="multiplicative middle convolution of a monodromy tuple")
    p.add_argument("input")
    p.add_argument("--lambda", dest="lam", type=parse_complex, default=_env("lambda"),
                   required=_env("lambda") is None)
    _add_common(p)

    p = sub.add_parser("mc-add", help="additive middle convolution of a residue tuple")
    p.add_argument("input")
    p.add_argument("--nu", type=parse_complex, default=_env("nu"), required=_env("nu") is None)
    _add_common(p)

    p = sub.add_parser("dim", help="predicted dimension of the middle convolution")
    p.add_argument("input")
    p.add_argument("--lambda", dest="lam", type=parse_complex, default=_env("lambda"))
    p.add_argument("--nu", type=parse_complex, default=_env("nu"))
    _add_common(p)

    p = sub.add_parser("conditions", help="check conditions (*) and (**)")
    p.add_argument("input")
    _add_common(p)

    p = sub.add_parser("predict-jordan", help="predicted and computed Jordan structures after MC")
    p.add_argument("input")
    p.add_argument("--lambda", dest="lam", type=parse_complex, default=_env("lambda"),
                   required=_env("lambda") is None)
    _add_common(p)

    p = sub.add_parser("solve", help="construct a Fuchsian system with the given monodromy")
    p.add_argument("input")
    _add_points(p)
    p.add_argument("--extra-lambda", nargs="*", type=parse_complex, default=[],
                   help="additional lambda candidates")
    p.add_argument("--seed", type=int, default=_env("seed", 0))
    p.add_argument("--restarts", type=int, default=_env("restarts", 8))
    p.add_argument("--verify-tol", type=float, default=_env("verify-tol", 1e-6))
    p.add_argument("--exponents", choices=(INFINITY_FIRST, BALANCED),
                   default=_env("exponents", BALANCED))
    _add_common(p)

    p = sub.add_parser("monodromy", help="numerical monodromy of a Fuchsian system")
    p.add_argument("input")
    _add_points(p)
    _add_common(p)

    p = sub.add_parser("verify", help="check a system against a target monodromy tuple")
    p.add_argument("system")
    p.add_argument("target")
    _add_points(p)
    _add_common(p)
    return parser


def _configs(args):
    tol = ToleranceConfig(rank_rel_tol=args.tol_rank, eig_cluster_tol=args.tol_eig,
                          conj_tol=args.tol_conj)
    icfg = IntegrationConfig(rel_tol=args.tol_rel, abs_tol=args.tol_abs)
    return tol, icfg


def _read(path: str, role: str | None = None) -> tuplefile.TupleFile:
    tf = tuplefile.read(path)
    if role is not None and tf.role != role:
        raise UsageError(f"{path}: expected a {role} tuple, got {tf.role}")
    return tf


def _system(args, path) -> FuchsianSystem:
    tf = _read(path, RESIDUE)
    points = args.points if args.points is not None else tf.points
    if points is None:
        raise UsageError(f"{path}: no singular points given (use --points)")
    return FuchsianSystem(points, tf.tuple)


def _emit(args, t: MatrixTuple, points=None) -> None:
    text = tuplefile.dumps(t, points)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(lines) -> None:
    for line in lines:
        print(line, file=sys.stderr)


def cmd_mc(args, kind: str) -> int:
    tol, _ = _configs(args)
    if kind == "mult":
        tf = _read(args.input, MONODROMY)
        g = tf.tuple
        lines = [f"lambda: {_fmt(args.lam)}"]
        if args.lam not in (0, 1):
            lines.append(f"predicted dim: {predicted_dim(g, args.lam, tol)}")
        cond = check_conditions(g, tol)
        lines.append(f"conditions (*): {cond.star_ok}, (**): {cond.star_star_ok}")
        out = middle_convolve_mult(g, args.lam, tol)
    else:
        tf = _read(args.input, RESIDUE)
        lines = [f"nu: {_fmt(args.nu)}"]
        if args.nu != 0:
            lines.append(f"predicted dim: {predicted_dim_add(tf.tuple, args.nu, tol)}")
        out = middle_convolve_add(tf.tuple, args.nu, tol)
    lines.append(f"quotient dim: {out.p}")
    if out.is_empty:
        lines.append("note: empty quotient (m=0)")
    _report(lines)
    _emit(args, out, tf.points)
    return EXIT_OK


def cmd_dim(args) -> int:
    tol, _ = _configs(args)
    tf = _read(args.input)
    if tf.role == MONODROMY:
        if args.lam is None:
            raise UsageError("--lambda is required for a monodromy tuple")
        print(predicted_dim(tf.tuple, args.lam, tol))
    else:
        if args.nu is None:
            raise UsageError("--nu is required for a residue tuple")
        print(predicted_dim_add(tf.tuple, args.nu, tol))
    return EXIT_OK


def cmd_conditions(args) -> int:
    tol, _ = _configs(args)
    rep = check_conditions(_read(args.input, MONODROMY).tuple, tol)
    print(f"(*): {'ok' if rep.star_ok else 'fails'}")
    for i, tau in rep.star_witnesses:
        print(f"  witness: i={i}, tau={_fmt(tau)}")
    print(f"(**): {'ok' if rep.star_star_ok else 'fails'}")
    for i, tau in rep.star_star_witnesses:
        print(f"  witness: i={i}, tau={_fmt(tau)}")
    return EXIT_OK if rep.ok else EXIT_PRECONDITION


def cmd_predict_jordan(args) -> int:
    tol, _ = _configs(args)
    g = _read(args.input, MONODROMY).tuple
    out = middle_convolve_mult(g, args.lam, tol)
    m = out.p
    ok = True
    rows = [(str(i + 1), g[i], out[i] if m else None, "finite") for i in range(g.n)]
    rows.append(("inf", g.product(), out.product() if m else None, "infinity"))
    for label, src, got, pos in rows:
        pred = predict_jordan_mc(jordan_structure(src, tol), args.lam, pos, m)
        comp = jordan_structure(got, tol) if got is not None else None
        match = comp is None and pred.size == 0 or comp is not None and pred.matches(comp)
        ok &= bool(match)
        print(f"{label}: predicted {pred}; computed {comp if comp is not None else '[]'}"
              f"{'' if match else '  MISMATCH'}")
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_solve(args) -> int:
    tol, icfg = _configs(args)
    tf = _read(args.input, MONODROMY)
    points = args.points if args.points is not None else tf.points
    if points is None:
        raise UsageError("no singular points given (use --points or a points field)")
    system, trace = general_scheme_solve(
        tf.tuple, points, tol, icfg, extras=args.extra_lambda, seed=args.seed,
        restarts=args.restarts, verify_tol=args.verify_tol, strategy=args.exponents)
    _report(trace.lines())
    _emit(args, system.residues, system.points)
    return EXIT_OK


def cmd_monodromy(args) -> int:
    _, icfg = _configs(args)
    system = _system(args, args.input)
    res = compute_monodromy(system, icfg)
    lines = [f"base point: {_fmt(res.base)}",
             f"relation defect: {res.relation_defect:.3e}"]
    lines += [f"loop {i + 1} determinant error: {e:.3e}" for i, e in enumerate(res.loop_errors)]
    if not res.relation_ok:
        lines.append("warning: relation defect exceeds the integration tolerance budget")
    _report(lines)
    _emit(args, res.tuple)
    return EXIT_OK


def cmd_verify(args) -> int:
    tol, icfg = _configs(args)
    system = _system(args, args.system)
    target = _read(args.target, MONODROMY).tuple
    if target.n != system.n or target.p != system.p:
        raise UsageError(f"shape mismatch: system n={system.n}, p={system.p}; "
                         f"target n={target.n}, p={target.p}")
    rep = verify_rh_solution(system, target, icfg, tol)
    print(f"success: {rep.success}")
    print(f"residual: {rep.residual:.3e}")
    print(f"relation defect: {rep.relation_defect:.3e}")
    if rep.conjugator is not None:
        print("conjugator:")
        with np.printoptions(precision=6, suppress=True):
            print(rep.conjugator)
    for note in rep.notes:
        print(f"note: {note}")
    return EXIT_OK if rep.success else EXIT_VERIFICATION


COMMANDS = {
    "mc-mult": lambda a: cmd_mc(a, "mult"),
    "mc-add": lambda a: cmd_mc(a, "add"),
    "dim": cmd_dim,
    "conditions": cmd_conditions,
    "predict-jordan": cmd_predict_jordan,
    "solve": cmd_solve,
    "monodromy": cmd_monodromy,
    "verify": cmd_verify,
}


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (tuplefile.TupleFileError, OSError)):
        return EXIT_PARSE
    if isinstance(exc, NoLambda):
        return EXIT_NO_LAMBDA
    if isinstance(exc, TheoremConditionsFail):
        return EXIT_THEOREM
    if isinstance(exc, (VerificationFail, NoConvergence)):
        return EXIT_VERIFICATION
    if isinstance(exc, IntegrationError):
        return EXIT_INTEGRATION
    return EXIT_PRECONDITION


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (MidconvError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
