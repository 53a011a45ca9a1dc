"""Command-line front end.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 the input
could not be used (parse error, hypothesis violation, bad arguments).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DiffOpForgeError, HypothesisError, MathCheckError, NotIsolated
from .parser import ParseError, parse_poly, render_poly
from .poly import X, Polynomial
from .ring import RingContext, build_context, validate_isolated_singularity

EXIT_OK, EXIT_MATH, EXIT_INPUT = 0, 1, 2
COMMANDS = ("validate", "generators", "resolution", "betti", "verify", "export")
SUITE_CHOICES = ("A", "B", "C", "D", "EF", "mf", "complexes", "chainmaps", "all")


class InputError(DiffOpForgeError):
    """Bad command-line input; maps to exit 2."""


class RunConfig:
    def __init__(
        self,
        command: str,
        f_source: str,
        order: Optional[int] = None,
        target: Optional[str] = None,
        suite: Sequence[str] = ("all",),
        format: str = "text",
        betti_upto: Optional[int] = None,
        verbose: bool = False,
        perturb: Optional[Tuple[str, int, int]] = None,
    ):
        self.command = command
        self.f_source = f_source
        self.order = order
        self.target = target
        self.suite = list(suite)
        self.format = format
        self.betti_upto = betti_upto
        self.verbose = verbose
        self.perturb = perturb

    def __repr__(self) -> str:
        return f"RunConfig({self.command}, f={self.f_source!r})"


def threads_hint() -> int:
    """Worker count from DIFFOP_FORGE_THREADS; results never depend on it."""
    raw = os.environ.get("DIFFOP_FORGE_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# shared steps

def _parse(cfg: RunConfig) -> Polynomial:
    return parse_poly(cfg.f_source)


def _context(cfg: RunConfig) -> Tuple[RingContext, object]:
    ctx = build_context(_parse(cfg))
    return ctx, validate_isolated_singularity(ctx)


def _glossary(ctx: RingContext, cfg: RunConfig):
    from .glossary import build_glossary

    if cfg.perturb is None:
        return build_glossary(ctx)
    name, i, j = cfg.perturb
    try:
        return build_glossary(ctx, perturb=(name, i, j, X))
    except (KeyError, IndexError) as exc:
        raise InputError(f"--perturb: {exc.args[0]}") from None


def _header(cfg: RunConfig, ctx: Optional[RingContext] = None) -> dict:
    out = {"command": cfg.command, "f": cfg.f_source}
    if ctx is not None:
        out["d"] = ctx.d
    return out


# commands: each returns (exit code, json payload, text)

def cmd_validate(cfg: RunConfig):
    ctx, gb = _context(cfg)
    payload = _header(cfg, ctx)
    payload.update({"valid": True, "groebner_basis": gb.to_json()})
    text = [f"valid: f = {render_poly(ctx.f)}", f"degree d = {ctx.d}", "Jacobian Groebner basis (grlex):"]
    text += [f"  {g}" for g in gb.to_json()["generators"]]
    return EXIT_OK, payload, "\n".join(text)


def cmd_generators(cfg: RunConfig):
    from .weyl import build_generators, render_op, verify_generator

    ctx, _ = _context(cfg)
    order = cfg.order or 3
    gens = build_generators(ctx, order, verify=False)
    rows = []
    for name, op in gens.upto(order):
        status = verify_generator(op, ctx)
        rows.append({"name": name, "order": op.order, "bracket": status["bracket"], "residual": status["residual"],
                     "verified": status["bracket"] and status["residual"], "operator": op.to_json(), "text": render_op(op)})
    ok = all(r["verified"] for r in rows)
    payload = _header(cfg, ctx)
    payload.update({
        "order": order, "count": len(rows), "generators": rows, "passed": ok,
        "division_audit": {"calls": ctx.audit.calls, "verified": ctx.audit.verified},
    })
    text = [f"{len(rows)} generators of order <= {order} for f = {render_poly(ctx.f)}"]
    for r in rows:
        mark = "ok  " if r["verified"] else "FAIL"
        text.append(f"{mark} {r['name']:>8}  (order {r['order']})")
        if cfg.verbose:
            text.append(f"       {r['text']}")
    text.append(f"division self-checks: {ctx.audit.verified}/{ctx.audit.calls}")
    return (EXIT_OK if ok else EXIT_MATH), payload, "\n".join(text)


def cmd_resolution(cfg: RunConfig):
    from .resolution import build_target

    ctx, _ = _context(cfg)
    target = cfg.target or "D2"
    upto = cfg.betti_upto or 3
    res = build_target(ctx, target, _glossary(ctx, cfg))
    payload = _header(cfg, ctx)
    payload.update({"target": target, "resolution": res.to_json(upto), "passed": True})
    return EXIT_OK, payload, res.to_text(upto)


def cmd_betti(cfg: RunConfig):
    from .resolution import betti_table, build_target, closed_form_betti, coincidences

    ctx, _ = _context(cfg)
    target = cfg.target or "D2"
    n = cfg.betti_upto or 3
    res = build_target(ctx, target, _glossary(ctx, cfg))
    computed = betti_table(res, n)
    printed = closed_form_betti(target, ctx.d, 2 * n)
    ok = computed == printed
    payload = _header(cfg, ctx)
    payload.update({
        "target": target, "upto": n, "max_index": 2 * n,
        "computed": computed.to_json(), "closed_form": printed.to_json(), "matches": ok, "passed": ok,
        "coincidences": coincidences(target, ctx.d, 2 * n),
    })
    text = [f"{target} Betti numbers, d = {ctx.d}, homological index 0..{2 * n}", "computed:", computed.to_text(), "closed form:", printed.to_text()]
    notes = coincidences(target, ctx.d, 2 * n)
    if notes:
        text.append("coincident degrees merged: " + "; ".join(notes))
    if not ok:
        corrected = closed_form_betti(target, ctx.d, 2 * n, corrected=True)
        payload["corrected_form"] = corrected.to_json()
        payload["matches_corrected"] = computed == corrected
        text.append("MISMATCH between computed table and closed form")
        if computed == corrected:
            text.append("the computed table matches the closed form with the odd/even multiplicities swapped")
    else:
        text.append("match")
    return (EXIT_OK if ok else EXIT_MATH), payload, "\n".join(text)


def cmd_verify(cfg: RunConfig):
    from .identities import counted, run_suites

    ctx = build_context(_parse(cfg))
    warnings: List[str] = []
    try:
        validate_isolated_singularity(ctx)
    except NotIsolated as exc:
        warnings.append(f"hypothesis: {exc}")
    suites = _expand_suites(cfg.suite)
    g = None
    if any(s not in ("A", "B") for s in suites):
        try:
            g = _glossary(ctx, cfg)
        except MathCheckError as exc:
            payload = _header(cfg, ctx)
            payload.update({"suites": [], "passed": False, "warnings": warnings, "build_error": str(exc)})
            return EXIT_MATH, payload, f"glossary construction failed: {exc}"

    workers = threads_hint()
    if workers > 1 and len(suites) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda s: run_suites(ctx, [s], g), suites))
        results = {k: v for part in parts for k, v in part.items()}
    else:
        results = run_suites(ctx, suites, g)

    ok = all(c.passed for checks in results.values() for c in counted(checks))
    payload = _header(cfg, ctx)
    payload["suites"] = []
    text = []
    for name in suites:
        checks = results[name]
        main = counted(checks)
        good = sum(c.passed for c in main)
        payload["suites"].append({
            "name": name, "passed": good == len(main), "total": len(main), "passing": good,
            "checks": [c.to_json(cfg.verbose) for c in checks],
        })
        text.append(f"[{name}] {good}/{len(main)} pass")
        for c in checks:
            if c.informational and not cfg.verbose:
                continue
            if c.passed and not cfg.verbose:
                continue
            tag = "info " if c.informational else ""
            mark = "PASS" if c.passed else "FAIL"
            text.append(f"  {mark} {tag}{c.id} [{c.arena}] {c.state}" + (f"  ({c.note})" if c.note else ""))
    payload["passed"] = ok
    payload["warnings"] = warnings
    text += [f"warning: {w}" for w in warnings]
    text.append("all checks pass" if ok else "some checks FAILED")
    return (EXIT_OK if ok else EXIT_MATH), payload, "\n".join(text)


def _expand_suites(requested: Sequence[str]) -> List[str]:
    from .identities import SUITES

    if "all" in requested:
        return list(SUITES)
    return [s for s in SUITES if s in requested]


def cmd_export(cfg: RunConfig):
    from .resolution import build_target
    from .weyl import build_generators, render_op

    ctx, gb = _context(cfg)
    g = _glossary(ctx, cfg)
    order = cfg.order or 3
    target = cfg.target or "D3"
    gens = build_generators(ctx, order)
    res = build_target(ctx, target, g)
    payload = _header(cfg, ctx)
    payload.update({
        "groebner_basis": gb.to_json(),
        "glossary": {name: g[name].to_json() for name in g.names()},
        "errata": [{"matrix": e["matrix"], "row": e["row"], "col": e["col"],
                    "printed": render_poly(e["printed"]), "corrected": render_poly(e["corrected"])} for e in g.errata],
        "generators": [{"name": n, "order": op.order, "operator": op.to_json(), "text": render_op(op)} for n, op in gens.upto(order)],
        "resolution": res.to_json(cfg.betti_upto or 3),
        "passed": True,
    })
    text = [f"f = {render_poly(ctx.f)}, d = {ctx.d}"]
    for name in g.names():
        text.append(g[name].to_text(f"{name} ({g[name].rows}x{g[name].cols})"))
    return EXIT_OK, payload, "\n\n".join(text)


HANDLERS = {
    "validate": cmd_validate,
    "generators": cmd_generators,
    "resolution": cmd_resolution,
    "betti": cmd_betti,
    "verify": cmd_verify,
    "export": cmd_export,
}


# argument handling

def _suite_list(text: str) -> List[str]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in items if s not in SUITE_CHOICES]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"unknown suite(s) {bad}; choose from {', '.join(SUITE_CHOICES)}")
    return items


def _perturb_spec(text: str) -> Tuple[str, int, int]:
    try:
        name, ij = text.split(":")
        i, j = (int(t) for t in ij.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected NAME:i,j") from None
    return name, i, j


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--f", dest="f", help="the form f, e.g. 'x^3+y^3+z^3'")
    src.add_argument("--file", help="read f from a file")
    common.add_argument("--order", type=int, choices=(1, 2, 3))
    common.add_argument("--target", choices=("D1", "D2", "D3", "S2", "S3"))
    common.add_argument("--suite", type=_suite_list, default=["all"], help="comma-separated: " + ",".join(SUITE_CHOICES))
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--upto", type=int, help="Betti tables: indices 0..2n; resolution/export: frames shown")
    common.add_argument("--verbose", action="store_true")
    common.add_argument("--perturb", type=_perturb_spec, help="mutation testing: add x to entry (i,j) of a glossary matrix, NAME:i,j")

    parser = argparse.ArgumentParser(prog="diffop-forge", description="Differential operators on plane curve singularities.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HANDLERS[name].__doc__)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.file:
        try:
            with open(ns.file, encoding="utf-8") as fh:
                source = fh.read().strip()
        except OSError as exc:
            raise InputError(f"cannot read {ns.file}: {exc.strerror}") from None
    elif ns.f:
        source = ns.f
    else:
        raise InputError("one of --f or --file is required")
    if ns.upto is not None and ns.upto < 1:
        raise InputError("--upto must be a positive integer")
    return RunConfig(ns.command, source, ns.order, ns.target, ns.suite, ns.format, ns.upto, ns.verbose, ns.perturb)


def run(cfg: RunConfig) -> Tuple[int, dict, str]:
    try:
        return HANDLERS[cfg.command](cfg)
    except (ParseError, HypothesisError, InputError) as exc:
        payload = {"command": cfg.command, "f": cfg.f_source, "passed": False,
                   "error": {"kind": "input", "type": type(exc).__name__, "message": str(exc)}}
        if cfg.command == "validate":
            payload["valid"] = False
        return EXIT_INPUT, payload, f"error: {type(exc).__name__}: {exc}"
    except MathCheckError as exc:
        payload = {"command": cfg.command, "f": cfg.f_source, "passed": False,
                   "error": {"kind": "math", "type": type(exc).__name__, "message": str(exc)}}
        return EXIT_MATH, payload, f"check failed: {type(exc).__name__}: {exc}"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code, payload, text = run(cfg)
    if cfg.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
