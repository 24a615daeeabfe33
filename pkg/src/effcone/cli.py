"""Command-line interface.

Exit codes: 0 success or exact match, 1 verification discrepancy (the report is
still printed), 2 usage or IO error.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from . import fano, pipeline, report
from .catalog import NoRecipe, UnknownVariety, recipe_varieties
from .exactcone import Cone, extreme_rays, facets
from .normaliz import NormalizFormatError, NormalizInput, emit_normaliz, format_normaliz, read_normaliz

OK, DISCREPANCY, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="effcone", description="Exact effective cones of blowups.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="recompute catalogued cones and compare with the tables")
    which = v.add_mutually_exclusive_group(required=True)
    which.add_argument("--variety", metavar="ID")
    which.add_argument("--all", action="store_true")
    v.add_argument("--allow-known", action="store_true", help="accept documented discrepancies")
    v.add_argument("--json", action="store_true")
    v.add_argument("--timing", action="store_true", help="include wall-clock times")
    v.add_argument("--jobs", type=int, default=1)

    d = sub.add_parser("dualize", help="dualize a Normaliz inequalities or cone block")
    d.add_argument("--in", dest="infile", required=True, metavar="FILE")
    d.add_argument("--format", choices=("normaliz", "json"), default="normaliz", help="output format")

    f = sub.add_parser("fano", help="weak Fano, log Fano and Mori dream space checks")
    mode = f.add_mutually_exclusive_group(required=True)
    mode.add_argument("--weak", action="store_true", help="weak Fano check for X_{1,2,s}")
    mode.add_argument("--log-fano", metavar="ID", help="log Fano certificate for X135 or X136")
    mode.add_argument("--mds", nargs=2, type=int, metavar=("N", "S"), help="MDS status of X_{1,n,s}")
    f.add_argument("--s", type=int)
    f.add_argument("--eps", help="rational, e.g. 1/10")
    f.add_argument("--json", action="store_true")

    e = sub.add_parser("emit-normaliz", help="write Normaliz input files for a recipe stage")
    e.add_argument("--variety", required=True, metavar="ID")
    e.add_argument("--stage", choices=("ineqs", "gens"), required=True)
    e.add_argument("-o", "--out", dest="out_dir", required=True, metavar="DIR")
    return p


def _verify(args: argparse.Namespace) -> int:
    if args.all:
        reports = pipeline.full_regression(args.jobs)
    else:
        reports = [pipeline.verify(args.variety)]
    if args.json:
        sys.stdout.write(report.dumps(report.verification_payload(reports, args.timing)))
    else:
        for r in reports:
            print(report.format_text(r))
            if args.timing:
                print(f"    {r.timing:.2f} s")
    accepted = [r.match_status == "exact" or (args.allow_known and pipeline.matches_known(r)) for r in reports]
    return OK if all(accepted) else DISCREPANCY


def _dual_block(data: NormalizInput) -> NormalizInput:
    if data.kind == "inequalities":
        cone: Cone = extreme_rays(data.rows, data.amb_space)
        rows = list(cone.rays)
        for v in cone.lineality:
            rows += [v, tuple(-x for x in v)]
        return NormalizInput(data.amb_space, "cone", tuple(sorted(set(rows))))
    cone = facets(data.rows, data.amb_space)
    rows = list(cone.facets)
    for v in cone.equations:
        rows += [v, tuple(-x for x in v)]
    return NormalizInput(data.amb_space, "inequalities", tuple(sorted(set(rows))))


def _dualize(args: argparse.Namespace) -> int:
    out = _dual_block(read_normaliz(args.infile))
    if args.format == "json":
        sys.stdout.write(report.dumps({"amb_space": out.amb_space, "kind": out.kind, "rows": [list(r) for r in out.rows]}))
    else:
        sys.stdout.write(format_normaliz(out))
    return OK


def _fano(args: argparse.Namespace) -> int:
    if args.weak:
        if args.s is None:
            raise UsageError("--weak needs --s N")
        v = fano.weak_fano_check(args.s)
        payload = {"variety": f"X_{{1,2,{args.s}}}", "volume": v.volume, "big": v.big,
                   "nef_certified": v.nef_certified, "weak_fano": v.weak_fano}
        text = f"(-K)^3 = {v.volume}; {'weak Fano' if v.weak_fano else 'not weak Fano'}"
        code = OK
    elif args.log_fano:
        if args.eps is None:
            raise UsageError("--log-fano needs --eps P/Q")
        try:
            eps = Fraction(args.eps)
        except ValueError:
            raise UsageError(f"not a rational number: {args.eps!r}") from None
        c = fano.log_fano_certificate(args.log_fano, eps)
        disc = {k: str(a) for k, a in sorted(c.klt.discrepancies.items())}
        payload = {"variety": args.log_fano.upper(), "eps": str(eps), "class_identity": c.class_identity,
                   "klt": c.klt.klt, "discrepancies": disc, "ample": c.ample.ok,
                   "printed_mismatches": list(c.ample.printed_mismatches), "valid": c.ok}
        values = sorted(set(disc.values()), key=Fraction, reverse=True)
        text = (f"-K - Delta = {eps}(2H1+2H2-sum E): {c.class_identity}; discrepancies {', '.join(values)}; "
                f"{'log Fano' if c.ok else 'certificate failed'}")
        code = OK if c.ok else DISCREPANCY
    else:
        n, s = args.mds
        status = fano.mds_status(n, s)
        payload = {"n": n, "s": s, "status": status}
        text = f"X_{{1,{n},{s}}}: {status}"
        code = OK
    sys.stdout.write(report.dumps(payload) if args.json else text + "\n")
    return code


def _emit(args: argparse.Namespace) -> int:
    path = emit_normaliz(args.variety, args.stage, args.out_dir)
    print(path)
    return OK


HANDLERS = {"verify": _verify, "dualize": _dualize, "fano": _fano, "emit-normaliz": _emit}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        return HANDLERS[args.command](args)
    except (UsageError, UnknownVariety, NoRecipe, NormalizFormatError, fano.CertificateError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        if isinstance(exc, NoRecipe):
            msg = f"{msg}; recipes exist for {', '.join(recipe_varieties())}"
        print(f"effcone: error: {msg}", file=sys.stderr)
        return USAGE
    except OSError as exc:
        print(f"effcone: error: {exc}", file=sys.stderr)
        return USAGE

