"""``qlorder``: command-line front end.

Exit codes: 0 success, 1 a check failed, 2 bad input (config or word),
3 unsupported operation, 4 insufficient truncation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import jsonschema

from . import __version__, hnn
from . import toeplitz as tp
from .controlled import StarOrder
from .core import is_infinite
from .groups import (
    HypothesisError,
    LETTERS,
    UnsupportedError,
    make_bs,
    make_free_hnn,
    make_int_lattice_hnn,
    make_lattice_hnn,
)
from .suite import CHECK_NAMES, Bounds, run_suite
from .syntax import ParseError, format_general, format_nf, format_tokens, parse_word

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_INSUFFICIENT = 0, 1, 2, 3, 4
CONFIG_ENV = "QLORDER_CONFIG"
CONFIG_VERSION = 1

_POS = {"type": "integer", "minimum": 1}
_BOUNDS = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "validate_bound": _POS,
        "enum_bound": _POS,
        "truncation": {"type": "integer", "minimum": 0},
    },
}
_MODULI = {"type": "array", "items": _POS, "minItems": 1}
_BASIS = {"type": "array", "minItems": 1, "items": {"type": "array", "items": {"type": "integer"}, "minItems": 1}}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["version", "presentation"],
    "properties": {
        "version": {"const": CONFIG_VERSION},
        "bounds": _BOUNDS,
        "presentation": {
            "oneOf": [
                {
                    "type": "object", "additionalProperties": False,
                    "required": ["kind", "c", "d"],
                    "properties": {"kind": {"const": "baumslag_solitar"}, "c": _POS, "d": _POS},
                },
                {
                    "type": "object", "additionalProperties": False,
                    "required": ["kind", "n", "A_moduli", "B_moduli"],
                    "properties": {"kind": {"const": "int_lattice"}, "n": _POS,
                                   "A_moduli": _MODULI, "B_moduli": _MODULI},
                },
                {
                    "type": "object", "additionalProperties": False,
                    "required": ["kind", "n", "A_basis", "B_basis"],
                    "properties": {"kind": {"const": "int_lattice"}, "n": _POS,
                                   "A_basis": _BASIS, "B_basis": _BASIS},
                },
                {
                    "type": "object", "additionalProperties": False,
                    "required": ["kind", "rank", "s", "u"],
                    "properties": {"kind": {"const": "free"}, "rank": _POS, "s": _POS, "u": _POS,
                                   "target": {"type": "string", "pattern": "^[a-z]$"}},
                },
            ]
        },
    },
}


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


# ------------------------------------------------------------------ config


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc.strerror}", EXIT_INPUT) from None
    except json.JSONDecodeError as exc:
        raise CliError(f"config {path} is not valid JSON: {exc}", EXIT_INPUT) from None
    validate_config(doc)
    return doc


def validate_config(doc) -> None:
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise CliError(f"invalid config at {where}: {exc.message}", EXIT_INPUT) from None
    entry = doc["presentation"]
    if entry["kind"] == "int_lattice":
        n = entry["n"]
        for key in ("A_moduli", "B_moduli"):
            if key in entry and len(entry[key]) != n:
                raise CliError(f"invalid config: {key} must have length n = {n}", EXIT_INPUT)
        for key in ("A_basis", "B_basis"):
            if key in entry and (len(entry[key]) != n or any(len(r) != n for r in entry[key])):
                raise CliError(f"invalid config: {key} must be an {n}x{n} matrix", EXIT_INPUT)
    if entry["kind"] == "free":
        target = entry.get("target", "b")
        if target not in LETTERS[: entry["rank"]]:
            raise CliError(f"invalid config: target {target!r} is not a letter of F_{entry['rank']}", EXIT_INPUT)


def bounds_of(doc) -> Bounds:
    return Bounds(**doc.get("bounds", {}))


def build_presentation(doc, validate: bool):
    entry = doc["presentation"]
    vb = bounds_of(doc).validate_bound
    kind = entry["kind"]
    try:
        if kind == "baumslag_solitar":
            return make_bs(entry["c"], entry["d"], validate, vb)
        if kind == "int_lattice" and "A_moduli" in entry:
            return make_int_lattice_hnn(tuple(entry["A_moduli"]), tuple(entry["B_moduli"]), validate, vb)
        if kind == "int_lattice":
            return make_lattice_hnn(tuple(map(tuple, entry["A_basis"])), tuple(map(tuple, entry["B_basis"])),
                                    validate, vb)
        target = LETTERS.index(entry.get("target", "b")) + 1
        return make_free_hnn(entry["rank"], entry["s"], entry["u"], target, validate, vb)
    except HypothesisError as exc:
        raise CliError(f"{exc}; run `qlorder verify` for the witness", EXIT_FAIL) from None
    except ValueError as exc:
        raise CliError(f"invalid presentation: {exc}", EXIT_INPUT) from None


PRESET_CONFIGS = {
    "BS(2,3)": {"kind": "baumslag_solitar", "c": 2, "d": 3},
    "BS(3,2)": {"kind": "baumslag_solitar", "c": 3, "d": 2},
    "BS(1,1)": {"kind": "baumslag_solitar", "c": 1, "d": 1},
    "Z2(2,3,3,2)": {"kind": "int_lattice", "n": 2, "A_moduli": [2, 3], "B_moduli": [3, 2]},
    "F2(2,3,b)": {"kind": "free", "rank": 2, "s": 2, "u": 3, "target": "b"},
    "F2(1,1,b)": {"kind": "free", "rank": 2, "s": 1, "u": 1, "target": "b"},
    "F2(2,3,a)": {"kind": "free", "rank": 2, "s": 2, "u": 3, "target": "a"},
    "Z2-negative": {"kind": "int_lattice", "n": 2, "A_basis": [[1, 2], [2, 1]], "B_basis": [[1, 2], [2, 1]]},
}


def resolve_config(args) -> tuple[dict, str]:
    """The config document and the flag that reproduces it on the command line."""
    if args.preset:
        if args.preset not in PRESET_CONFIGS:
            raise CliError(f"unknown preset {args.preset!r}; see `qlorder presets`", EXIT_INPUT)
        return {"version": CONFIG_VERSION, "presentation": PRESET_CONFIGS[args.preset]}, f"--preset '{args.preset}'"
    path = args.config or os.environ.get(CONFIG_ENV)
    if not path:
        raise CliError(f"no presentation: pass --config FILE, --preset NAME or set {CONFIG_ENV}", EXIT_INPUT)
    return load_config(path), f"--config '{path}'"


# ------------------------------------------------------------------ output


def emit(args, command, pres_summary, result, started, lines, bounds=None):
    """Print ``lines`` and write the JSON report when ``--json`` was given."""
    for line in lines:
        print(line)
    if args.json:
        doc = {
            "canonical": {
                "command": command,
                "presentation": pres_summary,
                "bounds": bounds,
                "result": result,
            },
            "meta": {"elapsed_seconds": round(time.perf_counter() - started, 3), "version": __version__},
        }
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(doc) + "\n")


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


def _word(pres, text):
    try:
        tokens = parse_word(pres, text)
    except ParseError as exc:
        raise CliError(f"cannot parse {text!r}: {exc}", EXIT_INPUT) from None
    return tokens


def _positive(pres, text):
    tokens = _word(pres, text)
    try:
        return hnn.nf(pres, tokens)
    except ValueError as exc:
        raise CliError(f"{text!r} is not a positive word: {exc}", EXIT_INPUT) from None


# ---------------------------------------------------------------- commands


def cmd_normalize(args):
    started = time.perf_counter()
    doc, _ = resolve_config(args)
    pres = build_presentation(doc, validate=True)
    tokens = _word(pres, args.word)
    base = pres.base
    positive = all(hnn.is_stable(t) and t.exponent == 1 or not hnn.is_stable(t) and base.is_positive(t)
                   for t in tokens)
    if positive:
        x = hnn.nf(pres, tokens)
        out, form = format_nf(pres, x), "positive"
    else:
        out, form = format_general(pres, hnn.group_nf(pres, tokens)), "general"
    emit(args, "normalize", pres.summary(), {"input": args.word, "form": form, "normal_form": out},
         started, [out])
    return EXIT_OK


def cmd_order(args):
    started = time.perf_counter()
    doc, _ = resolve_config(args)
    pres = build_presentation(doc, validate=True)
    try:
        if args.query == "stems":
            stems = hnn.sigma_elements(pres, args.height, args.bound)
            text = [format_tokens(pres, s) for s in stems]
            result = {"height": args.height, "bound": args.bound, "stems": text}
            lines = [", ".join(text)]
        else:
            x, y = _positive(pres, args.x), _positive(pres, args.y)
            result = {"x": format_tokens(pres, x), "y": format_tokens(pres, y)}
            if args.query == "le":
                value = hnn.leq_star(pres, x, y)
                result["le"] = value
                lines = ["true" if value else "false"]
            elif args.query == "join":
                j = hnn.join_star(pres, x, y)
                result["join"] = "infinity" if is_infinite(j) else format_nf(pres, j)
                lines = [result["join"]]
            else:
                mu, nu = hnn.min_pair(pres, x, y)
                result["mu"], result["nu"] = format_nf(pres, mu), format_nf(pres, nu)
                lines = [f"({result['mu']}, {result['nu']})"]
    except UnsupportedError as exc:
        raise CliError(f"unsupported: {exc}", EXIT_UNSUPPORTED) from None
    emit(args, f"order {args.query}", pres.summary(), result, started, lines)
    return EXIT_OK


def _report_lines(reports, reproduce):
    lines = []
    for r in reports:
        tag = r.status.upper()
        line = f"{tag:12} {r.name} (checked {r.checked})"
        if r.status not in ("pass", "skipped"):
            line += f"\n             witness: {json.dumps(r.witness, ensure_ascii=False, sort_keys=True)}"
            line += f"\n             reproduce: {reproduce(r)}"
        lines.append(line)
    return lines


def _aggregate(reports):
    statuses = {r.status for r in reports}
    if statuses <= {"pass"}:
        return "pass", EXIT_OK
    if "fail" in statuses or "skipped" in statuses:
        return "fail", EXIT_FAIL
    if "unsupported" in statuses:
        return "unsupported", EXIT_UNSUPPORTED
    return "insufficient", EXIT_INSUFFICIENT


def cmd_verify(args):
    started = time.perf_counter()
    doc, source = resolve_config(args)
    pres = build_presentation(doc, validate=False)
    bounds = bounds_of(doc)
    only = args.only or None
    reports = run_suite(pres, bounds, only)
    verdict, code = _aggregate(reports)

    def reproduce(r):
        return f"qlorder verify {source} --only {r.name}"

    result = {"verdict": verdict, "checks": [dict(r.to_dict(), **({"reproduce": reproduce(r)}
                                                                   if r.status not in ("pass", "skipped") else {}))
                                             for r in reports]}
    lines = _report_lines(reports, reproduce) + [f"verdict: {verdict.upper()}"]
    emit(args, "verify", pres.summary(), result, started, lines, bounds.to_dict())
    return code


def cmd_toeplitz(args):
    started = time.perf_counter()
    doc, source = resolve_config(args)
    pres = build_presentation(doc, validate=True)
    bounds = bounds_of(doc)
    trunc = bounds.truncation if args.truncation is None else args.truncation
    try:
        basis = tp.build_basis(pres, trunc)
        cache = tp.OperatorCache(pres, basis)
        if args.check == "export":
            return _export(args, pres, basis, cache, started)
        ps = StarOrder(pres).positives(args.operator_length)
        if args.check == "isometry":
            reports = [tp.check_isometry(pres, basis, ps, cache)]
        elif args.check == "covariance":
            reports = [tp.check_covariance_all(pres, basis, ps, cache)]
        elif args.check == "matrix-units":
            heights = range(args.max_height + 1) if args.height is None else [args.height]
            reports = [tp.check_matrix_units(pres, basis, k, args.bound, cache) for k in heights]
        else:
            heights = range(args.max_height + 1) if args.height is None else [args.height]
            reports = [tp.check_hk_invariance(pres, basis, k,
                                              tp.hk_sample_operators(pres, basis, k, args.bound, 1, cache))
                       for k in heights]
    except UnsupportedError as exc:
        raise CliError(f"unsupported: {exc}", EXIT_UNSUPPORTED) from None
    verdict, code = _aggregate(reports)

    def reproduce(r):
        extra = f" --height {r.bounds['k']}" if "k" in r.bounds else ""
        return f"qlorder toeplitz {args.check} {source} --truncation {trunc}{extra}"

    result = {"verdict": verdict, "basis_size": len(basis),
              "checks": [r.to_dict() for r in reports]}
    lines = _report_lines(reports, reproduce) + [f"verdict: {verdict.upper()}"]
    emit(args, f"toeplitz {args.check}", pres.summary(), result, started, lines, {"truncation": trunc})
    return code


def _export(args, pres, basis, cache, started):
    if not args.word:
        raise CliError("export needs --word", EXIT_INPUT)
    p = _positive(pres, args.word)
    op = cache.adj(p) if args.adjoint else cache.op(p)
    text = tp.export_triplets(basis, op)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(op.entries)} entries ({op.dim}x{op.dim}) to {args.out}")
    else:
        sys.stdout.write(text)
    if args.basis_out:
        with open(args.basis_out, "w", encoding="utf-8") as fh:
            fh.write(tp.basis_listing(pres, basis))
    return EXIT_OK


def cmd_presets(args):
    for name, entry in PRESET_CONFIGS.items():
        print(f"{name:14} {json.dumps(entry)}")
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"JSON presentation config (default: ${CONFIG_ENV})")
    common.add_argument("--preset", help="use a shipped presentation instead of a config file")
    common.add_argument("--json", metavar="OUT", help="also write a machine-readable report to OUT")

    parser = argparse.ArgumentParser(prog="qlorder", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qlorder {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", parents=[common], help="print the normal form of a word")
    p.add_argument("word")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("order", help="order queries on P*")
    osub = p.add_subparsers(dest="query", required=True)
    for name, helptext in (("le", "is x <= y"), ("join", "least upper bound"), ("minpair", "minimal pair of x y^-1")):
        q = osub.add_parser(name, parents=[common], help=helptext)
        q.add_argument("x")
        q.add_argument("y")
        q.set_defaults(func=cmd_order)
    q = osub.add_parser("stems", parents=[common], help="list stems of a given height")
    q.add_argument("--height", type=int, required=True)
    q.add_argument("--bound", type=int, default=3, help="maximal syllable size")
    q.set_defaults(func=cmd_order)

    p = sub.add_parser("verify", parents=[common], help="run the bounded verification suite")
    p.add_argument("--only", action="append", choices=CHECK_NAMES, help="run only this check (repeatable)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("toeplitz", parents=[common], help="finite Toeplitz operator checks")
    p.add_argument("check", choices=["isometry", "covariance", "matrix-units", "hk", "export"])
    p.add_argument("--truncation", type=int, help="basis token length (overrides the config)")
    p.add_argument("--operator-length", type=int, default=3, help="token length of operator arguments")
    p.add_argument("--height", type=int, help="stem height (default: all up to --max-height)")
    p.add_argument("--max-height", type=int, default=2)
    p.add_argument("--bound", type=int, default=2, help="stem syllable size")
    p.add_argument("--word", help="operator argument for export")
    p.add_argument("--adjoint", action="store_true", help="export T_p* instead of T_p")
    p.add_argument("--out", help="export file (default: stdout)")
    p.add_argument("--basis-out", help="also write the basis listing here")
    p.set_defaults(func=cmd_toeplitz)

    p = sub.add_parser("presets", help="list shipped presentations")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("config", "preset", "json"):
        if not hasattr(args, name):
            setattr(args, name, None)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
