"""Command-line entry point.

Exit codes: 0 success / property holds, 1 property failure, 2 usage or parse
error, 3 configuration error.  With ``--json`` every command prints one JSON
document (sorted keys, two-space indent) and nothing else.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Any

from .algebra import ConfigError, LaurentMonomials, bracket, format_scalar, load_table
from .bialgebra import certify_bialgebra, cojacobi_residual, cybe_c, mybe_residual
from .cohomology import (
    Window,
    WitnessSearch,
    annihilator_witness,
    certificate_json,
    cocycle_sweep,
    inner_solve,
    skewness_witness,
    tensor_window_keys,
)
from .linsolve import InconsistentSystem
from .parser import ParseError, parse, parse_element, parse_tensor2, parse_tensor3, render, render_basis
from .sampling import random_element, trial_rng
from .serialize import table_from_json, to_json
from .suites import SUITES, SuiteConfig, default_backends, dumps, run_suite
from .tensors import act

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONFIG = 0, 1, 2, 3

DEFAULT_WINDOW = Window.grid(Fraction(1, 2), 2, 2)
WITNESS_WINDOW = Window.grid(Fraction(1, 2), 3, 3)


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("VIRBI_SEED")
    if raw is None:
        return 0
    try:
        seed = int(raw)
    except ValueError:
        raise ConfigError(f"VIRBI_SEED must be an unsigned integer, got {raw!r}") from None
    if seed < 0:
        raise ConfigError("VIRBI_SEED must be an unsigned integer")
    return seed


def _unsigned(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an unsigned integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("expected an unsigned integer")
    return value


def _gammas(text: str) -> tuple:
    parts = [p for p in text.replace(",", " ").split() if p]
    if not parts:
        raise argparse.ArgumentTypeError("empty Gamma list")
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rational in Gamma list {text!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("configuration")
    backend = g.add_mutually_exclusive_group()
    backend.add_argument("--k", type=_unsigned, default=None,
                         help="Laurent backend with k variables (default 1)")
    backend.add_argument("--table", default=None, help="coefficient algebra structure table (JSON)")
    g.add_argument("--gamma", type=_gammas, default=None,
                   help='window degrees, e.g. "-1,-1/2,0,1/2,1"')
    g.add_argument("--exp-bound", type=_unsigned, default=None, help="window exponent bound")
    g.add_argument("--seed", type=_unsigned, default=None, help="RNG seed (default $VIRBI_SEED or 0)")
    g.add_argument("--json", action="store_true", help="emit a JSON report")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="virbi", description="Exact checks for loop/map Witt algebras and their bialgebra structures."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    p = add("bracket", "bracket of two elements")
    p.add_argument("x")
    p.add_argument("y")
    p = add("act", "diagonal action of an element on a 2- or 3-tensor")
    p.add_argument("a")
    p.add_argument("w")
    p = add("cybe", "c(r) of a 2-tensor r; fails when nonzero")
    p.add_argument("r")
    p = add("mybe", "x . c(r); fails when nonzero")
    p.add_argument("r")
    p.add_argument("x")
    p = add("cojacobi", "co-Jacobi residual of Delta_r at x; fails when nonzero")
    p.add_argument("r")
    p.add_argument("x")
    p = add("certify", "check the triangular conditions for r on a random sample")
    p.add_argument("r")
    p.add_argument("--samples", type=_unsigned, default=100)
    p = add("cocycle-check", "cocycle residuals of a derivation table over all domain pairs")
    p.add_argument("table_json")
    p = add("inner-solve", "find v with x . v = D(x), or an inconsistency certificate")
    p.add_argument("table_json")
    p = add("witness", "skewness or annihilator witness search")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--skew", metavar="R", help="2-tensor r")
    which.add_argument("--annihilator", metavar="C", help="3-tensor c")
    p = add("suite", "run a property suite (or 'all')")
    p.add_argument("name", choices=list(SUITES) + ["all"])
    p.add_argument("--trials", type=_unsigned, default=None)
    p.add_argument("--threads", type=_unsigned, default=1)
    return parser


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def _algebra(args):
    if args.table:
        return load_table(args.table)
    return LaurentMonomials(1 if args.k is None else args.k)


def _window(args, default: Window) -> Window:
    gammas = args.gamma if args.gamma is not None else default.gammas
    exp_bound = args.exp_bound if args.exp_bound is not None else default.exp_bound
    return Window(gammas, exp_bound)


def _window_given(args) -> bool:
    return args.gamma is not None or args.exp_bound is not None


def _seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc.msg}", exc.doc, exc.pos) from None


def _load_derivation(args, algebra):
    data = _read_json(args.table_json)
    try:
        return table_from_json(data, algebra)
    except (ParseError, ConfigError):
        raise
    except (ValueError, TypeError, KeyError, AttributeError) as exc:
        raise ParseError(f"{args.table_json}: {exc}") from None


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _combo_json(x) -> dict:
    return {"expr": render(x), "zero": x.is_zero(), **to_json(x)}


def _plain(value):
    if isinstance(value, Fraction):
        return format_scalar(value)
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value


def _witness_json(res: WitnessSearch) -> dict:
    return {
        "status": res.status,
        "witness": None if res.witness is None else render(res.witness),
        "tried": res.tried,
        "detail": _plain(res.detail),
    }


# ---------------------------------------------------------------------------
# commands; each returns (exit code, json payload, text lines)
# ---------------------------------------------------------------------------


def cmd_bracket(args, algebra):
    x, y = parse_element(args.x, algebra), parse_element(args.y, algebra)
    z = bracket(x, y)
    return EXIT_OK, {"result": _combo_json(z)}, [render(z)]


def cmd_act(args, algebra):
    a = parse_element(args.a, algebra)
    w = parse(args.w, algebra)
    if w.arity not in (2, 3):
        raise ParseError("the acted-on expression must be a 2- or 3-tensor", args.w, 0)
    out = act(a, w)
    return EXIT_OK, {"result": _combo_json(out)}, [render(out)]


def cmd_cybe(args, algebra):
    c = cybe_c(parse_tensor2(args.r, algebra))
    zero = c.is_zero()
    lines = [f"c(r) = 0: {'true' if zero else 'false'}"]
    if not zero:
        lines.append(f"c(r) = {render(c)}")
    return (EXIT_OK if zero else EXIT_FAIL), {"zero": zero, "c": _combo_json(c)}, lines


def _residual(fn, label, args, algebra):
    res = fn(parse_tensor2(args.r, algebra), parse_element(args.x, algebra))
    zero = res.is_zero()
    return (EXIT_OK if zero else EXIT_FAIL), {"zero": zero, "residual": _combo_json(res)}, [
        f"{label} = {render(res)}"
    ]


def cmd_mybe(args, algebra):
    return _residual(mybe_residual, "x . c(r)", args, algebra)


def cmd_cojacobi(args, algebra):
    return _residual(cojacobi_residual, "co-Jacobi residual", args, algebra)


def cmd_certify(args, algebra):
    r = parse_tensor2(args.r, algebra)
    seed = _seed(args)
    window = _window(args, DEFAULT_WINDOW)
    sample = [random_element(trial_rng(seed, "certify", algebra.name, i), algebra, window)
              for i in range(args.samples)]
    report = certify_bialgebra(r, sample, seed)
    ok = report.verdict.startswith("triangular")
    payload = {"report": report.to_json(), "window": window.to_json()}
    return (EXIT_OK if ok else EXIT_FAIL), payload, [report.verdict]


def cmd_cocycle_check(args, algebra):
    D = _load_derivation(args, algebra)
    rep = cocycle_sweep(D)
    first = None if rep.first_failure is None else [render_basis(x) for x in rep.first_failure]
    payload = {
        "pairs": rep.pairs,
        "defined": rep.defined,
        "coverage": f"{rep.defined}/{rep.pairs}",
        "failing": rep.failing,
        "max_terms": rep.max_terms,
        "first_failure": first,
        "passed": rep.passed,
    }
    lines = [f"pairs checked: {rep.defined} of {rep.pairs}; failing: {rep.failing}"]
    if first:
        lines.append(f"first failing pair: {first[0]}, {first[1]}")
    return (EXIT_OK if rep.passed else EXIT_FAIL), payload, lines


def cmd_inner_solve(args, algebra):
    D = _load_derivation(args, algebra)
    keys = None
    if _window_given(args):
        window = _window(args, DEFAULT_WINDOW)
        keys = tensor_window_keys(window, window, algebra)
    try:
        v = inner_solve(D, keys)
    except InconsistentSystem as exc:
        cert = certificate_json(exc)
        cert["verified"] = exc.certificate.verify()
        lines = [f"not inner on this window: certificate combines {len(cert['equations'])} "
                 f"equations into 0 = {cert['combined_rhs']}"]
        return EXIT_FAIL, {"inner": False, "certificate": cert}, lines
    return EXIT_OK, {"inner": True, "v": _combo_json(v)}, [f"v = {render(v)}"]


def cmd_witness(args, algebra):
    window = _window(args, WITNESS_WINDOW)
    if args.skew is not None:
        res = skewness_witness(parse_tensor2(args.skew, algebra), window)
        kind = "skew"
    else:
        res = annihilator_witness(parse_tensor3(args.annihilator, algebra), window)
        kind = "annihilator"
    payload = {"kind": kind, "window": window.to_json(), **_witness_json(res)}
    if res.status == "found":
        line = f"witness: {render(res.witness)}"
    elif res.status == "trivial":
        line = "no witness needed: input is " + ("skew" if kind == "skew" else "zero")
    else:
        line = f"no witness in window after {res.tried} candidates"
    return (EXIT_FAIL if res.status == "exhausted" else EXIT_OK), payload, [line]


def cmd_suite(args, algebra):
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    backends = default_backends() if (args.k is None and not args.table) else [algebra]
    window = _window(args, DEFAULT_WINDOW) if _window_given(args) else None
    config = SuiteConfig(backends=backends, seed=_seed(args), trials=args.trials,
                         window=window, threads=args.threads)
    names = list(SUITES) if args.name == "all" else [args.name]
    reports = [run_suite(n, config) for n in names]
    passed = all(r["passed"] for r in reports)
    payload = reports[0] if len(reports) == 1 else {"suites": reports, "passed": passed}
    lines = []
    for r in reports:
        lines.append(f"[{'PASS' if r['passed'] else 'FAIL'}] {r['suite']} (criterion {r['criterion']}): "
                     f"{r['description']}")
        for entry in r["results"]:
            if entry.get("skipped"):
                lines.append(f"    {entry['backend']}: skipped ({entry['reason']})")
            else:
                lines.append(f"    {entry['backend']}: {'pass' if entry['passed'] else 'FAIL'}")
                lines.extend(f"      {msg}" for msg in entry["failures"])
    return (EXIT_OK if passed else EXIT_FAIL), payload, lines


COMMANDS = {
    "bracket": cmd_bracket,
    "act": cmd_act,
    "cybe": cmd_cybe,
    "mybe": cmd_mybe,
    "cojacobi": cmd_cojacobi,
    "certify": cmd_certify,
    "cocycle-check": cmd_cocycle_check,
    "inner-solve": cmd_inner_solve,
    "witness": cmd_witness,
    "suite": cmd_suite,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    as_json = args.json
    try:
        algebra = _algebra(args)
        code, payload, lines = COMMANDS[args.command](args, algebra)
    except (ParseError, UsageError) as exc:
        return _error(as_json, "usage", str(exc), EXIT_USAGE)
    except ConfigError as exc:
        return _error(as_json, "config", str(exc), EXIT_CONFIG)
    except ZeroDivisionError as exc:
        return _error(as_json, "usage", str(exc), EXIT_USAGE)
    except ValueError as exc:
        # remaining ValueErrors come from invalid configuration (windows, tables, degrees)
        return _error(as_json, "config", str(exc), EXIT_CONFIG)
    if as_json:
        payload = {"command": args.command, "exit_code": code, **payload}
        sys.stdout.write(dumps(payload) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    return code


def _error(as_json: bool, kind: str, message: str, code: int) -> int:
    if as_json:
        sys.stdout.write(dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    else:
        sys.stderr.write(f"virbi: {kind} error: {message}\n")
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
