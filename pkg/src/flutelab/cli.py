"""Command-line front end: ``flutelab <subcommand> [flags]``.

Exit status: 0 on success, 2 for invalid input, 3 for numerical failure.
Errors are reported on stderr as a one-line JSON object.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import curves, dynamics, metrics, surface, trig
from .errors import (DomainError, MismatchError, NotHyperbolicError, PrecisionError,
                     ResolutionError, SchemaError, SearchFailure, ValidationError)
from .hpscalar import HPScalar

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
TRIG_TOL = 2.0 ** -120

INPUT_ERRORS = (SchemaError, ValidationError, MismatchError, DomainError, FileNotFoundError,
                IsADirectoryError, PermissionError, IndexError, ValueError)
NUMERIC_ERRORS = (PrecisionError, NotHyperbolicError, ResolutionError, SearchFailure,
                  ArithmeticError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would print usage and exit
        raise UsageError(message)


def _add_common(p: argparse.ArgumentParser, *, spec_count: str = "one") -> None:
    if spec_count == "two":
        p.add_argument("--spec", action="append", required=True, metavar="PATH",
                       help="spec file; give exactly two")
    else:
        p.add_argument("--spec", required=True, metavar="PATH")
    p.add_argument("--out", metavar="PATH", help="write here instead of stdout")
    p.add_argument("--precision-bits", type=int, metavar="N", help="override the spec precision")
    p.add_argument("--digits", type=int, metavar="N", help="truncate printed decimals")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flutelab", description="Computational lab for hyperbolic flute surfaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="build the holonomy and check its relations")
    _add_common(p)

    p = sub.add_parser("diagnose", help="growth diagnostic and seam widths")
    _add_common(p)

    p = sub.add_parser("lengths", help="CSV of Cuff/Delta geodesic lengths")
    _add_common(p)
    p.add_argument("--max-top", type=int, default=None, metavar="N")

    p = sub.add_parser("dist", help="truncated length-spectrum distance of two specs")
    _add_common(p, spec_count="two")
    p.add_argument("--max-top", type=int, default=None, metavar="N")

    p = sub.add_parser("probe", help="completeness probe")
    _add_common(p)
    p.add_argument("--budget-length", default="1000", metavar="STR")
    p.add_argument("--budget-crossings", type=int, default=None, metavar="N")
    p.add_argument("--trials", type=int, default=None, metavar="N",
                   help="number of ray seeds (default: one seam-foot orthoray per stage)")
    p.add_argument("--threads", type=int, default=1, metavar="N")

    p = sub.add_parser("choose-twists", help="greedy twist selection; writes a spec")
    _add_common(p)
    p.add_argument("--horizon", type=int, default=3, metavar="N")
    p.add_argument("--grid", type=int, default=128, metavar="N")

    p = sub.add_parser("converge", help="d_ls(X_k, X_0) for twists t_n + l_n / k")
    _add_common(p)
    p.add_argument("--max-top", type=int, default=None, metavar="N")
    p.add_argument("--k-max", type=int, default=32, metavar="N")

    p = sub.add_parser("closure", help="finite-twist approximants of a random target")
    _add_common(p)
    p.add_argument("--max-top", type=int, default=None, metavar="N")
    p.add_argument("--k-max", type=int, default=metrics.K_MAX, metavar="N")
    p.add_argument("--envelope", default="1", metavar="STR", help="C in |t''_n| <= C l_n")
    p.add_argument("--seed", type=int, default=0, metavar="N")

    p = sub.add_parser("strictness", help="approximants of the full-twist surface")
    _add_common(p)
    p.add_argument("--max-top", type=int, default=None, metavar="N")
    p.add_argument("--k-max", type=int, default=metrics.K_MAX, metavar="N")

    p = sub.add_parser("verify-trig", help="random identity suite for the trigonometry")
    p.add_argument("--trials", type=int, default=1000, metavar="N")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("--precision-bits", type=int, default=256, metavar="N")
    p.add_argument("--out", metavar="PATH")
    return parser


def _load(path: str, prec: int | None) -> surface.FluteSpec:
    spec = surface.load_spec(path)
    if prec is not None:
        spec = surface.FluteSpec(tuple(c.with_precision(prec) for c in spec.cuffs),
                                 tuple(t.with_precision(prec) for t in spec.twists),
                                 prec, spec.label, spec.base_point)
    return spec


def _max_top(spec: surface.FluteSpec, requested: int | None) -> int:
    return requested if requested is not None else min(metrics.MAX_TOP, spec.depth - 1)


def _dec(x: HPScalar, digits: int | None) -> str:
    return x.to_decimal(digits)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _json(doc) -> str:
    return json.dumps(doc, indent=2)


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_build(a) -> str:
    spec = _load(a.spec, a.precision_bits)
    h = surface.build_holonomy(spec)
    cuffs = []
    for n in range(1, spec.depth + 1):
        ell = curves.geodesic_length(h, curves.Cuff(n))
        cuffs.append({"n": n, "l": _dec(spec.l(n), a.digits), "trace_length": _dec(ell, a.digits),
                      "rel_error": ell.relative_error(spec.l(n))})
    return _json({"spec": spec.to_json(), "work_bits": h.work_bits,
                  "relation_residuals": h.relation_residuals(),
                  "determinant_residuals": h.determinant_residuals(), "cuffs": cuffs})


def cmd_diagnose(a) -> str:
    spec = _load(a.spec, a.precision_bits)
    rep = surface.rapid_growth_diagnostic(spec)
    seams = [{"n": n, "b": _dec(surface.seam_width(spec, n).b, a.digits)} for n in range(1, spec.depth)]
    return _json({"label": spec.label, "depth": spec.depth, "verdict": rep.verdict,
                  "ratios": [_dec(r, a.digits) for r in rep.ratios], "seams": seams})


def cmd_lengths(a) -> str:
    spec = _load(a.spec, a.precision_bits)
    h = surface.build_holonomy(spec)
    rows = [(c, curves.geodesic_length(h, c))
            for c in curves.enumerate_curves(spec, _max_top(spec, a.max_top))]
    return curves.write_lengths_csv(rows, digits=a.digits)


def cmd_dist(a) -> str:
    if len(a.spec) != 2:
        raise ValidationError("dist needs exactly two --spec arguments")
    sa, sb = (_load(p, a.precision_bits) for p in a.spec)
    rep = metrics.dls_truncated(sa, sb, _max_top(sa, a.max_top))
    return _json(rep.to_json())


def cmd_probe(a) -> str:
    spec = _load(a.spec, a.precision_bits)
    budget = (float(HPScalar.from_decimal(a.budget_length)), a.budget_crossings or spec.depth)
    cert = dynamics.completeness_probe(spec, a.trials, budget, threads=a.threads)
    return _json(cert.to_json(a.digits or 20))


def cmd_choose_twists(a) -> str:
    spec = _load(a.spec, a.precision_bits)
    chosen = dynamics.choose_complete_twists(spec, a.horizon, a.grid,
                                             label=(spec.label or "flute") + "-complete")
    return chosen.dumps()


def cmd_converge(a) -> str:
    spec = _load(a.spec, a.precision_bits)
    perts = metrics.scaled_perturbations(spec, a.k_max)
    return metrics.convergence_experiment(spec, perts, _max_top(spec, a.max_top)).to_json()


def cmd_closure(a) -> str:
    spec = _load(a.spec, a.precision_bits)
    res = metrics.closure_experiment(spec, a.envelope, a.k_max, _max_top(spec, a.max_top), a.seed)
    return res.to_json()


def cmd_strictness(a) -> str:
    spec = _load(a.spec, a.precision_bits)
    return metrics.strictness_experiment(spec, a.k_max, _max_top(spec, a.max_top)).to_json()


def cmd_verify_trig(a) -> str:
    rep = trig.identity_suite(a.trials, a.seed, a.precision_bits)
    doc = rep.to_json(TRIG_TOL)
    if not rep.passed(TRIG_TOL):
        raise PrecisionError(json.dumps(doc))
    return _json(doc)


COMMANDS = {
    "build": cmd_build, "diagnose": cmd_diagnose, "lengths": cmd_lengths, "dist": cmd_dist,
    "probe": cmd_probe, "choose-twists": cmd_choose_twists, "converge": cmd_converge,
    "closure": cmd_closure, "strictness": cmd_strictness, "verify-trig": cmd_verify_trig,
}


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the subcommand and return the exit status."""
    try:
        args = build_parser().parse_args(list(sys.argv[1:] if argv is None else argv))
    except UsageError as exc:
        return _fail(EXIT_INPUT, "UsageError", str(exc))
    try:
        text = COMMANDS[args.command](args)
        _emit(text, getattr(args, "out", None))
    except NUMERIC_ERRORS as exc:
        return _fail(EXIT_NUMERIC, type(exc).__name__, str(exc))
    except INPUT_ERRORS as exc:
        return _fail(EXIT_INPUT, type(exc).__name__, str(exc))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
