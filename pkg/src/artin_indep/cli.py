"""Command-line entry point.

    artin-indep catalog
    artin-indep verify theorem7 --context cyclotomic:5 --m 2 --n 200
    artin-indep verify formalism --context cyclotomic:4 --powers 1,1 --n 500
    artin-indep export --context s3_x3_minus_2 --out s3.json
    artin-indep import s3.json

Exit codes: 0 certified or identical, 2 undetermined at the given bounds,
1 rejected input, 64 malformed usage, 74 unwritable output path.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
import tempfile

from . import config
from .dseries import DomainError, euler_expand, evaluate, series_from_json, series_to_json
from .galois import (builtin_context, catalog_line, context_from_json, context_to_json,
                     virtual_sum)
from .independence import (INDEPENDENT, decay_probe, residual_probe, verify_algebraic_independence,
                           verify_formalism, verify_theorem7)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNDETERMINED = 2
EXIT_USAGE = 64
EXIT_CANTCREAT = 74

CATALOG = ["cyclotomic:3", "cyclotomic:4", "cyclotomic:5", "cyclotomic:7", "cyclotomic:8",
           "cyclotomic:12", "quadratic:-4", "quadratic:-3", "quadratic:5", "quadratic:-7",
           "s3_x3_minus_2"]


class UsageError(Exception):
    pass


class OutputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument helpers

def load_context(arg: str):
    if arg.endswith(".json") or os.path.sep in arg:
        with open(arg, encoding="utf-8") as fh:
            return context_from_json(json.load(fh))
    return builtin_context(arg)


def select_characters(ctx, arg: str | None):
    """'all', or comma-separated labels / 1-based indices of irreducibles."""
    if arg is None or arg == "all":
        return ctx.irreducibles()
    labels = [ch.label for ch in ctx.characters]
    out = []
    for tok in arg.split(","):
        tok = tok.strip()
        if tok in labels:
            out.append(ctx.irreducible(labels.index(tok)))
        elif tok.isdigit() and 1 <= int(tok) <= ctx.h:
            out.append(ctx.irreducible(int(tok) - 1))
        else:
            raise ValueError(f"unknown character {tok!r}; known: {', '.join(labels)}")
    return out


def parse_powers(arg: str | None, h: int) -> list[tuple]:
    """Vectors separated by ';', entries by ','.  Default: every vector with sum <= 3."""
    if not arg:
        return [a for a in itertools.product(range(4), repeat=h) if 1 <= sum(a) <= 3]
    return [tuple(int(x) for x in part.split(",")) for part in arg.split(";") if part.strip()]


def parse_grid(arg: str) -> list[float]:
    """Either 'start:stop:count' (inclusive, evenly spaced) or a comma list."""
    if ":" in arg:
        a, b, n = arg.split(":")
        a, b, n = float(a), float(b), int(n)
        if n < 2:
            raise UsageError("grid count must be at least 2")
        return [a + (b - a) * i / (n - 1) for i in range(n)]
    return [float(x) for x in arg.split(",") if x.strip()]


def parse_q(arg: str, r: int, m: int) -> list:
    """Polynomials separated by ';' in (j, k) order, coefficients by ','."""
    polys = [[x.strip() for x in part.split(",")] for part in arg.split(";")]
    if len(polys) != r * (m + 1):
        raise ValueError(f"--q needs {r * (m + 1)} polynomials, got {len(polys)}")
    return [polys[j * (m + 1):(j + 1) * (m + 1)] for j in range(r)]


def sample_function(arg: str, args):
    """'series' (the selected L-function), 'poly:c0,c1,..' or 'exp:b' for e^{b sigma}."""
    if arg == "series":
        ctx = load_context(args.context)
        chars = select_characters(ctx, args.chars)
        if len(chars) != 1:
            raise ValueError("decay on a series needs exactly one character")
        s = euler_expand(ctx, chars[0], args.n, "float")
        return (lambda x: evaluate(s, x).value.real), s.epsilon
    kind, _, rest = arg.partition(":")
    if kind == "poly":
        cs = [float(c) for c in rest.split(",")]
        return (lambda x: sum(c * x**i for i, c in enumerate(cs))), 0.0
    if kind == "exp":
        b = float(rest)
        return (lambda x: math.exp(b * x)), 0.0
    raise UsageError(f"unknown --function {arg!r}")


def write_atomic(path: str, text: str):
    """Write via a temp file in the target directory and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".artin-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(doc: dict, out: str | None):
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        try:
            write_atomic(out, text)
        except OSError as exc:
            raise OutputError(f"cannot write {out}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(text)


def _config_echo(args) -> dict:
    keys = ("context", "chars", "m", "n", "mode", "rows", "tol", "powers", "degree",
            "sigma_grid", "a_grid", "q", "function")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


# ---------------------------------------------------------------------------
# commands

def cmd_verify(args) -> int:
    kind = args.kind
    if kind in ("theorem7", "algebraic", "residual", "formalism") and not args.context:
        raise UsageError(f"verify {kind} needs --context")
    if kind == "theorem7":
        ctx = load_context(args.context)
        rep = verify_theorem7(ctx, select_characters(ctx, args.chars), args.m, args.n,
                              args.mode, args.rows, tolerance=args.tol)
        code = EXIT_OK if rep.verdict == INDEPENDENT else EXIT_UNDETERMINED
    elif kind == "algebraic":
        ctx = load_context(args.context)
        rep = verify_algebraic_independence(ctx, args.degree, args.m, args.n, args.mode, args.rows)
        code = EXIT_OK if rep.verdict == INDEPENDENT else EXIT_UNDETERMINED
    elif kind == "formalism":
        ctx = load_context(args.context)
        rep = verify_formalism(ctx, parse_powers(args.powers, ctx.h), args.n)
        code = EXIT_OK if rep.verdict == "identical" else EXIT_UNDETERMINED
    elif kind == "residual":
        ctx = load_context(args.context)
        chars = select_characters(ctx, args.chars)
        if not args.q:
            raise UsageError("verify residual needs --q")
        grid = parse_grid(args.sigma_grid or "2")
        rep = residual_probe(ctx, chars, args.m, parse_q(args.q, len(chars), args.m), grid,
                             args.n if args.n_given else config.RESIDUAL_SERIES_BOUND)
        code = EXIT_UNDETERMINED if rep.verdict == "undetermined" else EXIT_OK
    else:
        fn, eps = sample_function(args.function, args)
        grid = parse_grid(args.sigma_grid or "2:50:25")
        a_grid = parse_grid(args.a_grid) if args.a_grid else config.DEFAULT_A_GRID
        rep = decay_probe(fn, grid, a_grid, eps)
        code = EXIT_UNDETERMINED if rep.classification == "inconclusive" else EXIT_OK
    doc = rep.to_json()
    doc["config"] = _config_echo(args)
    emit(doc, args.out)
    return code


def cmd_catalog(args) -> int:
    for name in CATALOG:
        print(catalog_line(builtin_context(name)))
    print("accepted names: cyclotomic:q (3 <= q <= 60), quadratic:d (fundamental, |d| <= 100), "
          "s3_x3_minus_2")
    return EXIT_OK


def cmd_export(args) -> int:
    if not args.context:
        raise UsageError("export needs --context")
    ctx = load_context(args.context)
    if args.chars:
        chars = select_characters(ctx, args.chars)
        mult = [sum(ch.multiplicities[i] for ch in chars) for i in range(ctx.h)]
        chi = virtual_sum(ctx, mult)
        doc = series_to_json(euler_expand(ctx, chi, args.n, args.mode))
        doc["kind"] = "series"
    else:
        doc = context_to_json(ctx)
        doc["kind"] = "context"
    emit(doc, args.out)
    return EXIT_OK


def cmd_import(args) -> int:
    with open(args.path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if "coefficients" in doc:
        s = series_from_json(doc)
        print(f"series {s.label}: bound {s.bound}, mode {s.mode}, derivative order "
              f"{s.derivative_order}, epsilon {s.epsilon!r}, C {s.C!r}")
        if args.out:
            emit(dict(series_to_json(s), kind="series"), args.out)
    elif "characters" in doc:
        ctx = context_from_json(doc)
        print(catalog_line(ctx))
        if args.out:
            emit(dict(context_to_json(ctx), kind="context"), args.out)
    else:
        raise ValueError("document is neither a series nor a context")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="artin-indep",
                description="Desk-scale verification of independence statements for Artin "
                            "L-functions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--context", help="builtin name (see catalog) or a context JSON path")
        sp.add_argument("--chars", help="'all' or comma-separated labels / 1-based indices")
        sp.add_argument("--n", type=int, default=200, help="truncation bound N")
        sp.add_argument("--mode", choices=["exact", "float"], default="exact")
        sp.add_argument("--out", help="output path (default: stdout)")

    v = sub.add_parser("verify", help="run a verifier and emit a JSON report")
    v.add_argument("kind", choices=["theorem7", "formalism", "algebraic", "residual", "decay"])
    common(v)
    v.add_argument("--m", type=int, default=0, help="highest derivative order")
    v.add_argument("--rows", default="prime-powers", help="all | prime-powers | list:1,2,...")
    v.add_argument("--tol", type=float, default=config.FLOAT_RANK_TOLERANCE)
    v.add_argument("--powers", help="multiplicity vectors, e.g. '1,1;2,0'")
    v.add_argument("--degree", type=int, default=1, help="degree bound D (algebraic)")
    v.add_argument("--sigma-grid", help="'start:stop:count' or comma list")
    v.add_argument("--a-grid", help="comma list of rates a (decay)")
    v.add_argument("--q", help="residual coefficients: polynomials ';'-separated in (j,k) order")
    v.add_argument("--function", default="series",
                   help="decay sample: series | poly:c0,c1,... | exp:b")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("catalog", help="list builtin contexts")
    c.set_defaults(func=cmd_catalog)

    e = sub.add_parser("export", help="export a context, or a series when --chars is given")
    common(e)
    e.set_defaults(func=cmd_export)

    i = sub.add_parser("import", help="read and validate an exported document")
    i.add_argument("path")
    i.add_argument("--out", help="re-export the parsed document")
    i.set_defaults(func=cmd_import)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    args.n_given = "--n" in argv or any(a.startswith("--n=") for a in argv)
    if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
        parser.error("--n must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"artin-indep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OutputError as exc:
        print(f"artin-indep: {exc}", file=sys.stderr)
        return EXIT_CANTCREAT
    except (ValueError, KeyError, DomainError, json.JSONDecodeError, OSError) as exc:
        print(f"artin-indep: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
