"""Command-line front end.

Exit codes: 0 ok, 2 usage or unreadable input, 3 enumeration cap hit,
4 validation failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import arc_census, fuchsian, poincare_series
from .euler_link import (
    TEMPLATES,
    DiagramFormatError,
    fixture,
    format_diagram,
    NotNullHomologous,
    link_report,
    read_diagram,
    validate_diagram,
)
from .hyp_plane import HPoint

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_INVALID = 0, 2, 3, 4
T_MAX_LIMIT = 16.0
CAP_LIMIT = 10**7


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def fmt(x: float) -> str:
    return f"{x:.12g}"


def fmt_q(q: Fraction) -> str:
    return str(q)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def parse_rep(G: fuchsian.SurfaceGroup, text: str) -> arc_census.Representative:
    kind, _, body = text.partition(":")
    if kind == "point":
        try:
            x, y = (float(t) for t in body.split(","))
            return arc_census.Representative.at(HPoint(x, y))
        except ValueError as exc:
            raise CliError(f"bad point {text!r}: {exc}", EXIT_USAGE) from None
    if kind == "geodesic":
        if not body or any(ch not in G.letters() for ch in body):
            raise CliError(f"bad geodesic word {body!r}", EXIT_USAGE)
        try:
            return arc_census.Representative.geodesic(G, body)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_INVALID) from None
    raise CliError(f"representative must be point:<x>,<y> or geodesic:<word>, got {text!r}", EXIT_USAGE)


def _load_group(path: str) -> fuchsian.SurfaceGroup:
    try:
        G = fuchsian.read_group(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_USAGE) from None
    except fuchsian.GroupFormatError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INVALID) from None
    problems = G.validate()
    if problems:
        raise CliError(f"{path}: " + "; ".join(problems), EXIT_INVALID)
    return G


# ---------------------------------------------------------------- commands

def cmd_surface(args) -> int:
    if args.genus < 2:
        raise CliError("genus must be ≥ 2", EXIT_USAGE)
    _emit(fuchsian.format_group(fuchsian.standard_group(args.genus)), args.output)
    return EXIT_OK


def cmd_diagram(args) -> int:
    if args.genus < 2:
        raise CliError("genus must be ≥ 2", EXIT_USAGE)
    _emit(format_diagram(fixture(args.template, args.genus)), args.output)
    return EXIT_OK


def cmd_census(args) -> int:
    if not 0 <= args.tmax <= T_MAX_LIMIT:
        raise CliError(f"--tmax must lie in [0, {T_MAX_LIMIT:g}]", EXIT_USAGE)
    if not 0 < args.cap <= CAP_LIMIT:
        raise CliError(f"--cap must lie in (0, {CAP_LIMIT}]", EXIT_USAGE)
    G = _load_group(args.group)
    c1, c2 = parse_rep(G, args.rep1), parse_rep(G, args.rep2)
    try:
        S = arc_census.census(G, c1, c2, args.tmax, workers=args.threads, cap=args.cap)
    except fuchsian.RadiusTooLarge as exc:
        raise CliError(str(exc), EXIT_CAP) from None
    except arc_census.NotPrimitive as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    _emit(arc_census.spectrum_to_csv(S), args.output)
    return EXIT_OK


def _series_lengths(args) -> np.ndarray:
    if args.synthetic is not None:
        A, n = args.synthetic
        return poincare_series.synthetic_zeta_lengths(float(A), int(n))
    if args.spectrum is None:
        raise CliError("give a spectrum CSV or --synthetic A N", EXIT_USAGE)
    try:
        return np.asarray(arc_census.read_spectrum_csv(args.spectrum), dtype=float)
    except OSError as exc:
        raise CliError(f"cannot read {args.spectrum}: {exc.strerror}", EXIT_USAGE) from None
    except (ValueError, KeyError) as exc:
        raise CliError(f"{args.spectrum}: {exc}", EXIT_INVALID) from None


def cmd_series(args) -> int:
    L = _series_lengths(args)
    if not len(L):
        raise CliError("spectrum is empty", EXIT_INVALID)
    t_max = args.tmax if args.tmax is not None else float(L[-1])
    window = tuple(args.window) if args.window else (t_max / 2.0, t_max)
    try:
        fit = poincare_series.fit_growth(L, window)
        est = poincare_series.continue_at_zero(L, fit.A, fit.h, t_max=t_max)
    except poincare_series.InsufficientData as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    except (poincare_series.UnstableExtrapolation, ValueError) as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    if args.diagnostics:
        rows = poincare_series.diagnostics_table(L, fit.A, fit.h, t_max=t_max)
        text = "s,partial,completed,F\n" + "".join(",".join(fmt(v) for v in r) + "\n" for r in rows)
        Path(args.diagnostics).write_text(text)
    record = {"h": fit.h, "A": fit.A, "value": est.value, "uncertainty": est.uncertainty}
    if args.json:
        print(json.dumps({k: float(fmt(v)) for k, v in record.items()}
                         | {"method": est.method, "t_max_used": float(fmt(est.t_max_used))}))
    else:
        for k, v in record.items():
            print(f"{k}: {fmt(v)}")
        print(f"method: {est.method}")
    return EXIT_OK


def cmd_link(args) -> int:
    try:
        D = read_diagram(args.diagram)
    except OSError as exc:
        raise CliError(f"cannot read {args.diagram}: {exc.strerror}", EXIT_USAGE) from None
    except DiagramFormatError as exc:
        raise CliError(f"{args.diagram}: {exc}", EXIT_INVALID) from None
    problems = validate_diagram(D)
    if problems:
        raise CliError("invalid diagram:\n" + "\n".join(f"  {p}" for p in problems), EXIT_INVALID)
    try:
        rep = link_report(D)
    except NotNullHomologous as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    record = {
        "chi": str(rep.chi),
        "L": fmt_q(rep.linking),
        "N_infty": fmt_q(rep.value_at_zero),
        "chi_times_N": fmt_q(rep.chi * rep.value_at_zero),
        "integral": "yes" if rep.integral else "no",
    }
    status = EXIT_OK
    if args.verify_against:
        try:
            series = json.loads(Path(args.verify_against).read_text())
            value, unc = float(series["value"]), float(series["uncertainty"])
        except OSError as exc:
            raise CliError(f"cannot read {args.verify_against}: {exc.strerror}", EXIT_USAGE) from None
        except (ValueError, KeyError, TypeError) as exc:
            raise CliError(f"{args.verify_against}: not a series record ({exc})", EXIT_USAGE) from None
        gap = abs(value - float(rep.value_at_zero))
        ok = math.isfinite(gap) and gap <= unc
        record["verify"] = "PASS" if ok else "FAIL"
        record["verify_gap"] = fmt(gap)
        status = EXIT_OK if ok else EXIT_INVALID
    if args.json:
        print(json.dumps(record))
    else:
        for k, v in record.items():
            print(f"{k} = {v}")
    return status


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orthogeo", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker threads (output does not depend on it)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("surface", parents=[common], help="surface group files")
    ssub = s.add_subparsers(dest="action", required=True)
    g = ssub.add_parser("gen", parents=[common], help="write the regular 4g-gon group")
    g.add_argument("--genus", type=int, required=True)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_surface)

    d = sub.add_parser("diagram", parents=[common], help="write a template curve diagram")
    dsub = d.add_subparsers(dest="action", required=True)
    dg = dsub.add_parser("gen", parents=[common], help="template diagram as .cdg")
    dg.add_argument("--template", choices=TEMPLATES, required=True)
    dg.add_argument("--genus", type=int, default=2)
    dg.add_argument("-o", "--output")
    dg.set_defaults(func=cmd_diagram)

    c = sub.add_parser("census", parents=[common], help="orthogeodesic length spectrum as CSV")
    c.add_argument("group", help=".grp file")
    c.add_argument("rep1", help="point:<x>,<y> or geodesic:<word>")
    c.add_argument("rep2")
    c.add_argument("--tmax", type=float, required=True)
    c.add_argument("--cap", type=int, default=fuchsian.DEFAULT_CAP, help="maximum ball size")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_census)

    r = sub.add_parser("series", parents=[common], help="growth fit and value of the continued series at 0")
    r.add_argument("spectrum", nargs="?", help="spectrum CSV from `census`")
    r.add_argument("--synthetic", nargs=2, type=float, metavar=("A", "N"),
                   help="use lengths log(k/A), k = 1..N")
    r.add_argument("--tmax", type=float, help="truncation length (default: largest length)")
    r.add_argument("--window", nargs=2, type=float, metavar=("T1", "T2"))
    r.add_argument("--at", type=float, default=0.0, help="evaluation point (only 0 is supported)")
    r.add_argument("--json", action="store_true")
    r.add_argument("--diagnostics", help="write s, partial, completed, F as CSV")
    r.set_defaults(func=cmd_series)

    k = sub.add_parser("link", parents=[common], help="exact linking number and value at 0 from a .cdg diagram")
    k.add_argument("diagram")
    k.add_argument("--json", action="store_true")
    k.add_argument("--verify-against", help="series JSON record to compare with")
    k.set_defaults(func=cmd_link)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    if getattr(args, "at", 0.0) != 0.0:
        parser.error("only --at 0 is supported")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
