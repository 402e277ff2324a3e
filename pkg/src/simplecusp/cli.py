"""Command-line front end: ``simplecusp <subcommand> [flags]``.

Exit codes: 0 for PASS (or a plain listing), 1 when a check reports
violations, 2 for usage errors and refused preconditions.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Sequence

from .cyclo import RootOfUnity
from .epsilon import eps_simple_cuspidal
from .errors import PreconditionError
from .hereditary import DEFAULT_BUDGET, verify_gauss_identity
from .localfield import make_field
from .pairs import enumerate_pairs
from .verify import converse_check, field_separation_check, stability_sweep

SCHEMA = 1


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simplecusp",
        description="Exact epsilon factors for simple cuspidal GL(n) representations over F_q((t)).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *extra: str) -> None:
        p.add_argument("--p", type=int, required=True, help="residue characteristic")
        p.add_argument("--f", type=int, default=1, help="residue degree, q = p^f")
        p.add_argument("--n", type=int, required=True, help="degree n of GL(n)")
        if "level" in extra:
            p.add_argument("--level", type=int, default=1, help="level 2k+1 of theta")
        if "M" in extra:
            p.add_argument("--M", type=int, default=1,
                           help="theta(uniformizer) ranges over the M-th roots of unity")
        if "e" in extra:
            p.add_argument("--e", type=int, default=1, help="ramification index of the hereditary order")
        if "chi-level" in extra:
            p.add_argument("--chi-level", type=int, default=1, help="level of the twisting character")
        if "samples" in extra:
            p.add_argument("--samples", type=int, default=None,
                           help="number of sampled pairs (omit for an exhaustive run)")
            p.add_argument("--seed", type=int, default=0)
        if "budget" in extra:
            p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                           help="largest enumeration allowed")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        p.add_argument("--out", default="-", help="output path ('-' for standard output)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    common(sub.add_parser("enumerate", help="list admissible pairs"), "level", "M")
    common(sub.add_parser("epsilon", help="epsilon factor of every enumerated pair"), "level", "M")
    conv = sub.add_parser("verify-converse", help="fingerprint equality iff isomorphism")
    common(conv, "M")
    conv.add_argument("--corrupt", metavar="PAIR:ENTRY", default=None,
                      help="negative control: corrupt one fingerprint entry")
    common(sub.add_parser("verify-stability", help="epsilon of highly ramified twists"),
           "level", "M", "chi-level", "budget")
    common(sub.add_parser("verify-gauss", help="matrix Gauss sum identity by brute force"),
           "e", "chi-level", "M", "budget")
    common(sub.add_parser("verify-field-separation", help="cross-field pairs differ on a tame twist"),
           "level", "M", "samples")
    show = sub.add_parser("show", help="pretty-print a serialized object or report")
    show.add_argument("path", help="JSON file ('-' for standard input)")
    return parser


# -- output ---------------------------------------------------------------------


def _flatten(value) -> str:
    """CSV cell for nested serialized values; cyclotomic numbers as order:[coeffs]."""
    if isinstance(value, dict):
        if set(value) == {"order", "coeffs"}:
            coeffs = ",".join(f"{a}/{b}" if b != 1 else str(a) for a, b in value["coeffs"])
            return f"{value['order']}:[{coeffs}]"
        if set(value) == {"order", "exp"}:
            return f"{value['order']}:exp={value['exp']}"
        if set(value) == {"q", "base", "half"}:
            return f"{_flatten(value['base'])}+{_flatten(value['half'])}*sqrt({value['q']})"
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    if isinstance(value, list):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


def _csv_rows(report: dict) -> list[list[str]]:
    rows: list[list[str]] = []
    table = report.get("pairs")
    if table is None:
        table = report.get("violations")
    for key, value in report.items():
        if key in ("pairs", "violations", "characters", "product_sums"):
            continue
        if isinstance(value, dict) and key != "runtime":
            for sub_key, sub_value in value.items():
                rows.append([f"{key}.{sub_key}", _flatten(sub_value)])
        else:
            rows.append([key, _flatten(value)])
    if table:
        header = list(table[0].keys())
        rows.append([])
        rows.append(header)
        for entry in table:
            rows.append([_flatten(entry.get(h)) for h in header])
    return rows


def _emit(report: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(_csv_rows(report))
        text = buf.getvalue()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- subcommands ----------------------------------------------------------------


def _field(args):
    if args.f < 1:
        raise PreconditionError("f must be positive")
    return make_field(args.p, args.f)


def _pair_parameters(args, params) -> dict:
    return {"p": params.p, "f": params.f, "q": params.q, "n": args.n, "level": args.level, "M": args.M}


def cmd_enumerate(args) -> tuple[dict, int]:
    params = _field(args)
    pairs = enumerate_pairs(params, args.n, args.level, args.M)
    rows = [{"index": i, **P.to_dict()} for i, P in enumerate(pairs)]
    return {"schema": SCHEMA, "check": "enumerate", "parameters": _pair_parameters(args, params),
            "count": len(pairs), "pairs": rows}, 0


def cmd_epsilon(args) -> tuple[dict, int]:
    params = _field(args)
    pairs = enumerate_pairs(params, args.n, args.level, args.M)
    rows = [{"index": i, "pair": P.to_dict(), "epsilon": eps_simple_cuspidal(P).to_dict()}
            for i, P in enumerate(pairs)]
    return {"schema": SCHEMA, "check": "epsilon", "parameters": _pair_parameters(args, params),
            "count": len(pairs), "pairs": rows}, 0


def _parse_corrupt(text: str | None) -> tuple[int, int] | None:
    if text is None:
        return None
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise UsageError(f"--corrupt expects PAIR:ENTRY, got {text!r}") from None


def cmd_converse(args) -> tuple[dict, int]:
    params = _field(args)
    report = converse_check(params, args.n, args.M, threads=args.threads,
                            corrupt=_parse_corrupt(args.corrupt))
    return report.to_dict(), report.exit_code


def cmd_stability(args) -> tuple[dict, int]:
    params = _field(args)
    report = stability_sweep(params, args.n, chi_level=args.chi_level, level=args.level,
                             M=args.M, budget=args.budget)
    report.threads = args.threads
    return report.to_dict(), report.exit_code


def cmd_gauss(args) -> tuple[dict, int]:
    params = _field(args)
    report = verify_gauss_identity(params, args.n, args.e, args.chi_level, budget=args.budget,
                                   workers=args.threads, M=args.M)
    return report, 0 if report["verdict"] == "PASS" else 1


def cmd_separation(args) -> tuple[dict, int]:
    params = _field(args)
    if args.level < 1 or args.level % 2 == 0:
        raise PreconditionError(f"level must be odd and positive, got {args.level}")
    if args.samples is not None and args.samples < 1:
        raise UsageError("--samples must be positive")
    report = field_separation_check(params, args.n, (args.level - 1) // 2, args.samples,
                                    args.seed, M=args.M, threads=args.threads)
    return report.to_dict(), report.exit_code


# -- show -----------------------------------------------------------------------


def _root_str(d: dict) -> str:
    r = RootOfUnity.from_dict(d)
    order, exp = r.normalized()
    return "1" if exp == 0 else f"zeta_{order}^{exp}"


def _alpha_str(d: dict | None) -> str:
    if d is None:
        return "0"
    terms = [f"{c}*u^{d['val'] + i}" for i, c in enumerate(d["coeffs"]) if c]
    return " + ".join(terms) + f" + O(u^{d['abs_prec']})"


def _describe(obj, indent: str = "") -> list[str]:
    if isinstance(obj, dict) and "theta" in obj and "n" in obj:
        th = obj["theta"]
        return [f"{indent}pair on E(n={obj['n']}, r={obj['r']}): level {th['level']}, "
                f"theta(u) = {_root_str(th['pi'])}, theta(eta) = zeta_(q-1)^{th['teich']}, "
                f"alpha = {_alpha_str(th['alpha'])}"]
    if isinstance(obj, dict) and set(obj) >= {"exponent", "constant"} and isinstance(obj["constant"], dict):
        return [f"{indent}epsilon(s) = ({_flatten(obj['constant'])}) * q^({obj['exponent']}(1/2 - s))"]
    if isinstance(obj, dict) and set(obj) == {"order", "exp"}:
        return [f"{indent}{_root_str(obj)}"]
    if isinstance(obj, dict) and set(obj) == {"order", "coeffs"}:
        return [f"{indent}{_flatten(obj)}"]
    if isinstance(obj, dict):
        lines = []
        for key, value in obj.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{indent}{key}:")
                lines.extend(_describe(value, indent + "  "))
            else:
                lines.append(f"{indent}{key}: {value}")
        return lines
    if isinstance(obj, list):
        lines = []
        for i, value in enumerate(obj):
            lines.append(f"{indent}[{i}]")
            lines.extend(_describe(value, indent + "  "))
        return lines
    return [f"{indent}{obj}"]


def cmd_show(args) -> int:
    try:
        if args.path == "-":
            data = json.load(sys.stdin)
        else:
            with open(args.path, encoding="utf-8") as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {args.path}: {exc}") from None
    sys.stdout.write("\n".join(_describe(data)) + "\n")
    return 0


COMMANDS = {
    "enumerate": cmd_enumerate,
    "epsilon": cmd_epsilon,
    "verify-converse": cmd_converse,
    "verify-stability": cmd_stability,
    "verify-gauss": cmd_gauss,
    "verify-field-separation": cmd_separation,
}


def run_command(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "show":
            return cmd_show(args)
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        report, code = COMMANDS[args.command](args)
        _emit(report, args)
        return code
    except (UsageError, PreconditionError) as exc:
        print(f"simplecusp: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
