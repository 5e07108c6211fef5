"""Batch command-line front end.

Four subcommands wrap the library pipelines with deterministic output:

    cz         index of a rotation path, analytic and/or numeric
    spectrum   Reeb orbits of an ellipsoid up to a degree bound
    partition  Tamura / Beatty-pair / naive-family partition scans
    sh         degree-dimension comparison: orbit counting vs closed formula

Exit codes: 0 success (agreement / partition / equal), 1 mathematical
violation found, 2 numeric engine inconclusive, 3 oracle disagreement,
64 usage error, 65 hypothesis violation.  JSON output has sorted keys and
no timestamps, so identical flags give byte-identical bytes; exact values
are rendered as expression strings, never as decimals.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .czindex import RotationPath, cz_index, cz_rotation_analytic
from .ellipsoid import Ellipsoid, cross_check_index, spectrum
from .errors import CrossingError, ExprSyntaxError, HypothesisViolation, RadicandError
from .homology import compare
from .partitions import rayleigh_conjugate, rayleigh_pair, uspensky_scan, verify_partition
from .quadfield import FieldContext, render

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INCONCLUSIVE = 2
EXIT_DISAGREEMENT = 3
EXIT_USAGE = 64
EXIT_HYPOTHESIS = 65


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fraction_json(fr):
    if fr is None:
        return None
    fr = Fraction(fr)
    if fr.denominator == 1:
        return int(fr)
    return f"{fr.numerator}/{fr.denominator}"


def _emit_json(payload):
    print(json.dumps(payload, sort_keys=True, indent=2))


def _emit_csv(rows):
    for row in rows:
        print(",".join(str(x) for x in row))


def _parse_weights(text, context):
    parts = [p.strip() for p in text.split(";")]
    parts = [p for p in parts if p]
    if not parts:
        raise _UsageError("no weight expressions given")
    return [context.parse(p) for p in parts]


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def build_parser():
    parser = _Parser(prog="reebspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_cz = sub.add_parser("cz", help="Conley-Zehnder index of a rotation path")
    p_cz.add_argument("--freqs", required=True,
                      help="comma-separated positive frequencies")
    p_cz.add_argument("--duration", required=True, type=float)
    mode = p_cz.add_mutually_exclusive_group()
    mode.add_argument("--analytic", action="store_true")
    mode.add_argument("--numeric", action="store_true")
    mode.add_argument("--both", action="store_true")
    p_cz.add_argument("--samples", type=_positive_int, default=4096,
                      help="grid size for the numeric engine")
    p_cz.add_argument("--format", choices=("json", "text"), default="json")

    p_sp = sub.add_parser("spectrum", help="Reeb orbits of an ellipsoid")
    p_sp.add_argument("--d", required=True, type=int, help="radicand of Q(sqrt(d))")
    p_sp.add_argument("--weights", required=True,
                      help="semicolon-separated weight expressions")
    p_sp.add_argument("--max-degree", required=True, type=_nonneg_int)
    p_sp.add_argument("--cross-check", action="store_true",
                      help="verify each index against the numeric engine")
    p_sp.add_argument("--samples", type=_positive_int, default=None,
                      help="override the cross-check grid size")
    p_sp.add_argument("--format", choices=("json", "csv", "text"), default="json")

    p_pt = sub.add_parser("partition", help="partition scans in exact arithmetic")
    p_pt.add_argument("--d", required=True, type=int)
    p_pt.add_argument("--weights", required=True)
    p_pt.add_argument("--limit", required=True, type=_positive_int)
    p_pt.add_argument("--mode", choices=("tamura", "beatty-pair", "uspensky"),
                      default="tamura")
    p_pt.add_argument("--format", choices=("json", "text"), default="json")

    p_sh = sub.add_parser("sh", help="degree-dimension comparison")
    p_sh.add_argument("--d", required=True, type=int)
    p_sh.add_argument("--weights", required=True)
    p_sh.add_argument("--max-degree", required=True, type=_nonneg_int)
    p_sh.add_argument("--format", choices=("json", "csv", "text"), default="json")

    return parser


def cmd_cz(args):
    try:
        freqs = [float(tok) for tok in args.freqs.split(",") if tok.strip()]
    except ValueError as err:
        raise _UsageError(f"bad --freqs: {err}")
    if not freqs or any(f <= 0 for f in freqs):
        raise _UsageError("--freqs must be a comma list of positive numbers")
    if not args.duration > 0:
        raise _UsageError(f"--duration must be positive, got {args.duration}")

    want_analytic = args.analytic or args.both or not (args.analytic or args.numeric)
    want_numeric = args.numeric or args.both or not (args.analytic or args.numeric)

    payload = {"command": "cz", "freqs": freqs, "duration": args.duration}
    status = EXIT_OK
    if want_analytic:
        payload["analytic"] = cz_rotation_analytic(freqs, args.duration)
    if want_numeric:
        path = RotationPath(freqs, args.duration, sample_count=args.samples)
        try:
            numeric = cz_index(path)
        except CrossingError as err:
            payload["numeric"] = None
            payload["error"] = str(err)
            status = EXIT_INCONCLUSIVE
        else:
            payload["numeric"] = _fraction_json(numeric)
            if want_analytic:
                agree = Fraction(numeric) == payload["analytic"]
                payload["agree"] = agree
                if not agree:
                    status = EXIT_DISAGREEMENT

    if args.format == "json":
        _emit_json(payload)
    else:
        for key in ("analytic", "numeric", "agree", "error"):
            if key in payload:
                print(f"{key}: {payload[key]}")
    return status


def _orbit_rows(e, orbits, do_cross_check, sample_count):
    rows = []
    status = EXIT_OK
    saw_inconclusive = False
    for o in orbits:
        row = {
            "j": o.j,
            "n": o.n,
            "cz": o.cz,
            "period_coeff": f"{o.n}*pi*({render(o.weight)})",
        }
        if do_cross_check:
            check = cross_check_index(e, o.j, o.n, sample_count=sample_count)
            if check.inconclusive:
                row["numeric_cz"] = None
                row["agree"] = None
                row["note"] = check.note
                saw_inconclusive = True
            else:
                row["numeric_cz"] = _fraction_json(check.numeric)
                row["agree"] = check.agree
                if not check.agree:
                    status = EXIT_DISAGREEMENT
        rows.append(row)
    if status == EXIT_OK and saw_inconclusive:
        status = EXIT_INCONCLUSIVE
    return rows, status


def cmd_spectrum(args):
    context = FieldContext(args.d)
    weights = _parse_weights(args.weights, context)
    e = Ellipsoid(weights)
    orbits = spectrum(e, args.max_degree)
    rows, status = _orbit_rows(e, orbits, args.cross_check, args.samples)

    if args.format == "json":
        _emit_json({
            "command": "spectrum",
            "d": args.d,
            "weights": [render(w) for w in weights],
            "max_degree": args.max_degree,
            "orbits": rows,
        })
    elif args.format == "csv":
        header = ["j", "n", "cz", "period_coeff"]
        if args.cross_check:
            header += ["numeric_cz", "agree"]
        out = [header]
        for row in rows:
            line = [row["j"], row["n"], row["cz"], row["period_coeff"]]
            if args.cross_check:
                line += [row["numeric_cz"], row["agree"]]
            out.append(line)
        _emit_csv(out)
    else:
        for row in rows:
            extra = ""
            if args.cross_check:
                extra = f"  numeric={row['numeric_cz']} agree={row['agree']}"
            print(f"gamma_{row['j']}^{row['n']}: cz={row['cz']} "
                  f"period={row['period_coeff']}{extra}")
    return status


def _report_payload(report):
    payload = {
        "limit": report.limit,
        "verdict": report.verdict,
        "counts": {str(j): c for j, c in sorted(report.counts.items())},
        "collision": None,
        "gap": None,
    }
    if report.verdict == "collision":
        payload["collision"] = {
            "value": report.value,
            "first": {"j": report.first[0], "n": report.first[1]},
            "second": {"j": report.second[0], "n": report.second[1]},
        }
    elif report.verdict == "gap":
        payload["gap"] = report.value
    return payload


def cmd_partition(args):
    context = FieldContext(args.d)
    weights = _parse_weights(args.weights, context)
    extra = {}
    if args.mode == "tamura":
        report = verify_partition(weights, args.limit)
    elif args.mode == "beatty-pair":
        if len(weights) != 1:
            raise _UsageError("--mode beatty-pair takes exactly one weight (alpha)")
        report = rayleigh_pair(weights[0], args.limit)
        extra["beta"] = render(rayleigh_conjugate(weights[0]))
    else:
        if len(weights) < 3:
            raise _UsageError("--mode uspensky needs at least three weights")
        report = uspensky_scan(weights, args.limit)

    payload = {
        "command": "partition",
        "mode": args.mode,
        "d": args.d,
        "weights": [render(w) for w in weights],
        **_report_payload(report),
        **extra,
    }
    if args.mode == "uspensky" and report.verdict == "partition":
        payload["verdict"] = "no-witness"

    if args.format == "json":
        _emit_json(payload)
    else:
        print(f"verdict: {payload['verdict']}")
        if payload["collision"] is not None:
            c = payload["collision"]
            print(f"collision at {c['value']}: "
                  f"set {c['first']['j']} (n={c['first']['n']}) vs "
                  f"set {c['second']['j']} (n={c['second']['n']})")
        if payload["gap"] is not None:
            print(f"gap at {payload['gap']}")
        if "beta" in payload:
            print(f"beta: {payload['beta']}")
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_sh(args):
    context = FieldContext(args.d)
    weights = _parse_weights(args.weights, context)
    e = Ellipsoid(weights)
    result = compare(e, args.max_degree)

    if args.format == "json":
        diff = None
        if result.first_difference is not None:
            k, mf, mo = result.first_difference
            diff = {"degree": k, "formula": mf, "orbits": mo}
        _emit_json({
            "command": "sh",
            "d": args.d,
            "weights": [render(w) for w in weights],
            "max_degree": args.max_degree,
            "verdict": "equal" if result.equal else "first-difference",
            "first_difference": diff,
            "formula_degrees": [list(p) for p in result.formula.support()],
            "orbit_degrees": [list(p) for p in result.orbits.support()],
        })
    elif args.format == "csv":
        out = [["degree", "formula", "orbits"]]
        for k in range(args.max_degree + 1):
            out.append([k, result.formula.multiplicity(k),
                        result.orbits.multiplicity(k)])
        _emit_csv(out)
    else:
        print(f"verdict: {'equal' if result.equal else 'first-difference'}")
        if result.first_difference is not None:
            k, mf, mo = result.first_difference
            print(f"first difference at degree {k}: formula={mf} orbits={mo}")
    return EXIT_OK if result.equal else EXIT_VIOLATION


_HANDLERS = {
    "cz": cmd_cz,
    "spectrum": cmd_spectrum,
    "partition": cmd_partition,
    "sh": cmd_sh,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except HypothesisViolation as err:
        print(f"hypothesis violation: {err}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except CrossingError as err:
        print(f"numeric engine: {err}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (ExprSyntaxError, RadicandError) as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as err:
        print(f"invalid input: {err}", file=sys.stderr)
        return EXIT_USAGE


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
