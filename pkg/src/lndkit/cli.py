"""Command-line front end: ``lnd run`` and ``lnd counterexample``.

Every command produces one record::

    {"command", "inputs", "status", "result", "certificate"?, "bounds_used", "wall_time_ms"?}

``status`` is ``ok``, ``inconclusive`` or ``error``.  With ``--json`` each
record is printed as one JSON object per line.  Timing is left out of JSON
unless ``--timing`` is given so that the output is byte-for-byte
reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from .derivations import (DEFAULT_STEP_BOUND, Derivation, Inconclusive, bracket, certify_lnd, is_triangular,
                          theorem2_check)
from .errors import LndError, ParseError
from .groebner import DEFAULT_DEGREE_GUARD
from .lnd_sets import (DEFAULT_DEPTH_BOUND, DEFAULT_DESCENT_STEPS, DEFAULT_WIDTH_BOUND, DerivationSet, Overflow,
                       certify_lnd_set, derived_series, kernel_up_to_degree, lie_closure, select_kernel_cutset)
from .script import SessionScript, parse_script
from .triangularize import counterexample_facts, triangularize

DEFAULT_MAX_DEGREE = 4
DEFAULT_DIM_BOUND = 64


@dataclass
class RunOptions:
    max_degree: int | None = None
    normalize_coords: bool = False
    seed: int = 0


class _Context:
    def __init__(self, script: SessionScript, options: RunOptions):
        self.script = script
        self.options = options
        self.names = list(script.variables)
        self.tags = [f"t{i + 1}" for i in range(script.nvars)]

    def fmt(self, value) -> str:
        return value.to_string(self.names)

    def tagfmt(self, value) -> str:
        return value.to_string(self.tags)

    def degree(self, cmd, flag="--max-degree") -> int:
        explicit = cmd.option(flag)
        if explicit is not None:
            return explicit
        if self.options.max_degree is not None:
            return self.options.max_degree
        return DEFAULT_MAX_DEGREE

    def members(self, cmd) -> list[Derivation]:
        return [self.script.value(name) for name in cmd.operands]


def _inconclusive(ctx, result: Inconclusive) -> dict:
    return {"verdict": "inconclusive", "reason": result.reason,
            "frontier": [ctx.fmt(p) for p in result.frontier]}


def _check_lnd(ctx, cmd):
    bound = cmd.option("--step-bound", DEFAULT_STEP_BOUND)
    D, = ctx.members(cmd)
    cert = certify_lnd(D, bound)
    bounds = {"step_bound": bound}
    if isinstance(cert, Inconclusive):
        return "inconclusive", _inconclusive(ctx, cert), None, bounds
    certificate = {"chains": {name: [ctx.fmt(p) for p in chain] for name, chain in zip(ctx.names, cert.chains)},
                   "max_length": cert.max_length}
    return "ok", {"verdict": "locally_nilpotent"}, certificate, bounds


def _check_lnd_set(ctx, cmd):
    depth = cmd.option("--depth-bound", DEFAULT_DEPTH_BOUND)
    width = cmd.option("--width-bound", DEFAULT_WIDTH_BOUND)
    S = DerivationSet(ctx.members(cmd), ctx.script.nvars)
    cert = certify_lnd_set(S, depth, width)
    bounds = {"depth_bound": depth, "width_bound": width}
    if isinstance(cert, Inconclusive):
        return "inconclusive", _inconclusive(ctx, cert), None, bounds
    certificate = {"levels": {name: [[ctx.fmt(p) for p in level] for level in tree]
                              for name, tree in zip(ctx.names, cert.trees)},
                   "depth": cert.depth}
    return "ok", {"verdict": "locally_nilpotent_set"}, certificate, bounds


def _bracket(ctx, cmd):
    D, E = ctx.members(cmd)
    return "ok", {"bracket": ctx.fmt(bracket(D, E))}, None, {}


def _kernel(ctx, cmd):
    degree = ctx.degree(cmd)
    basis = kernel_up_to_degree(DerivationSet(ctx.members(cmd), ctx.script.nvars), degree)
    return "ok", {"dimension": len(basis), "basis": [ctx.fmt(p) for p in basis]}, None, {"max_degree": degree}


def _cutset(ctx, cmd):
    degree = ctx.degree(cmd)
    members = ctx.members(cmd)
    chosen = select_kernel_cutset(DerivationSet(members, ctx.script.nvars), degree)
    names = []
    for D in chosen:
        names.append(cmd.operands[members.index(D)])
    return "ok", {"selected": names, "size": len(names)}, None, {"max_degree": degree}


def _triangular(ctx, cmd):
    D, = ctx.members(cmd)
    return "ok", {"triangular": is_triangular(D)}, None, {}


def _triangularize(ctx, cmd):
    steps = cmd.option("--descent-steps", DEFAULT_DESCENT_STEPS)
    guard = cmd.option("--groebner-degree", DEFAULT_DEGREE_GUARD)
    members = ctx.members(cmd)
    tp = triangularize(members, descent_steps=steps, groebner_degree=guard, seed=ctx.options.seed,
                       nvars=ctx.script.nvars)
    if ctx.options.normalize_coords:
        tp = tp.normalized()
    operand_of = {}
    for name, D in zip(cmd.operands, members):
        operand_of.setdefault(D, name)
    result = {
        "coordinates": [ctx.fmt(a) for a in tp.coordinates],
        "expressions": {operand_of[D]: [ctx.tagfmt(q) for q in qs] for D, qs in zip(tp.members, tp.expressions)},
        "triangular_form": {operand_of[D]: T.to_string(ctx.tags)
                            for D, T in zip(tp.members, tp.triangular_members())},
        "witnesses": {x: ctx.tagfmt(w) for x, w in zip(ctx.names, tp.witnesses)},
        "normalized": ctx.options.normalize_coords,
    }
    certificate = {"descent_traces": [[ctx.fmt(p) for p in trace] for trace in tp.descent_traces],
                   "verified": tp.verify()}
    return "ok", result, certificate, {"descent_steps": steps, "groebner_degree": guard}


def _theorem2(ctx, cmd):
    degree = ctx.degree(cmd)
    steps = cmd.option("--step-bound", DEFAULT_STEP_BOUND)
    D, = ctx.members(cmd)
    v = theorem2_check(D, degree, steps)
    result = {"hypothesis_holds": v.hypothesis_holds, "conclusion_holds": v.conclusion_holds,
              "witness": ctx.fmt(v.witness) if v.witness is not None else None,
              "kernel_basis": [ctx.fmt(p) for p in v.kernel_basis],
              "kernel_transcendence": v.kernel_transcendence, "kernel_captured": v.kernel_captured}
    return "ok", result, None, {"max_degree": degree, "step_bound": steps}


def _derived_series(ctx, cmd):
    deg = ctx.degree(cmd, "--deg-bound")
    dim = cmd.option("--dim-bound", DEFAULT_DIM_BOUND)
    bounds = {"deg_bound": deg, "dim_bound": dim}
    span = lie_closure(ctx.members(cmd), deg, dim)
    if isinstance(span, Overflow):
        return "inconclusive", {"verdict": "overflow", "reason": span.reason}, None, bounds
    series = derived_series(span)
    result = {"dimension": span.dimension, "basis": [ctx.fmt(D) for D in span.basis],
              "dimensions": list(series.dimensions), "solvable": series.solvable,
              "solvability_degree": series.solvability_degree}
    return "ok", result, None, bounds


def _counterexample(ctx, cmd):
    return _counterexample_record(ctx.options.seed)


def _counterexample_record(seed: int = 0):
    report = counterexample_facts(seed)
    facts = [{"fact": f.name, "statement": f.statement, "status": "verified" if f.verified else "failed",
              "artifact": f.artifact} for f in report.facts]
    return "ok", {"derivation": report.derivation, "facts": facts}, None, {"kernel_degree_bound": 2}


HANDLERS = {
    "check-lnd": _check_lnd,
    "check-lnd-set": _check_lnd_set,
    "bracket": _bracket,
    "kernel": _kernel,
    "cutset": _cutset,
    "triangular?": _triangular,
    "triangularize": _triangularize,
    "theorem2": _theorem2,
    "derived-series": _derived_series,
    "counterexample": _counterexample,
}


def _record(command, inputs, runner) -> tuple[dict, int]:
    start = time.perf_counter()
    code = 0
    try:
        status, result, certificate, bounds = runner()
    except LndError as exc:
        status, result, certificate, bounds = "error", {"error": exc.kind, "message": str(exc)}, None, {}
        code = exc.exit_code
    record = {"command": command, "inputs": inputs, "status": status, "result": result}
    if certificate is not None:
        record["certificate"] = certificate
    record["bounds_used"] = bounds
    record["wall_time_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return record, code


def run(script: SessionScript, options: RunOptions | None = None) -> tuple[list[dict], int]:
    """Execute every command in order; returns the records and the exit code.

    The exit code is that of the first failing command, 0 if none failed.
    """
    ctx = _Context(script, options or RunOptions())
    records = []
    exit_code = 0
    for cmd in script.commands:
        inputs = {name: ctx.fmt(script.value(name)) for name in cmd.operands}
        record, code = _record(cmd.name, inputs, lambda cmd=cmd: HANDLERS[cmd.name](ctx, cmd))
        records.append(record)
        if code and not exit_code:
            exit_code = code
    return records, exit_code


def to_json(record: dict, timing: bool = False) -> str:
    if not timing:
        record = {k: v for k, v in record.items() if k != "wall_time_ms"}
    return json.dumps(record, ensure_ascii=False)


def to_text(record: dict) -> str:
    lines = [f"{record['command']} {' '.join(record['inputs'])}".rstrip()
             + f": {record['status']} ({record['wall_time_ms']} ms)"]
    for name, value in record["inputs"].items():
        lines.append(f"  {name} = {value}")
    for key, value in record["result"].items():
        lines.extend(_text_field(key, value, 2))
    if "certificate" in record:
        lines.append("  certificate:")
        for key, value in record["certificate"].items():
            lines.extend(_text_field(key, value, 4))
    if record["bounds_used"]:
        lines.append("  bounds: " + ", ".join(f"{k}={v}" for k, v in record["bounds_used"].items()))
    return "\n".join(lines)


def _text_field(key, value, indent):
    pad = " " * indent
    if isinstance(value, dict):
        out = [f"{pad}{key}:"]
        for k, v in value.items():
            out.extend(_text_field(k, v, indent + 2))
        return out
    if isinstance(value, list) and value and isinstance(value[0], dict):
        out = [f"{pad}{key}:"]
        for item in value:
            out.append(f"{pad}  - " + "; ".join(f"{k}: {_inline(v)}" for k, v in item.items()))
        return out
    return [f"{pad}{key}: {_inline(value)}"]


def _inline(value):
    if isinstance(value, list):
        return "[" + ", ".join(_inline(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_inline(v)}" for k, v in value.items()) + "}"
    if value is None:
        return "none"
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


def _emit(records, as_json: bool, timing: bool, out):
    for record in records:
        out.write((to_json(record, timing) if as_json else to_text(record)) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lnd", description="Locally nilpotent derivations over Q.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    run_p = sub.add_parser("run", help="execute a session script")
    run_p.add_argument("script", help="path to a .lnd script, or - for stdin")
    run_p.add_argument("--json", action="store_true", help="one JSON object per command")
    run_p.add_argument("--max-degree", type=int, default=None,
                       help=f"default degree bound for kernel, cutset, theorem2, derived-series "
                            f"(default {DEFAULT_MAX_DEGREE})")
    run_p.add_argument("--normalize-coords", action="store_true",
                       help="rescale triangularization coordinates to leading coefficient 1")
    run_p.add_argument("--seed", type=int, default=0, help="seed for random evaluation points")
    run_p.add_argument("--timing", action="store_true", help="include wall_time_ms in JSON records")
    ce = sub.add_parser("counterexample", help="verify the facts behind D = x dy + y dz")
    ce.add_argument("--json", action="store_true")
    ce.add_argument("--timing", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "counterexample":
        record, code = _record("counterexample", {}, _counterexample_record)
        _emit([record], args.json, args.timing, sys.stdout)
        return code
    try:
        if args.script == "-":
            text = sys.stdin.buffer.read()
        else:
            with open(args.script, "rb") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"lnd: cannot read script: {exc}", file=sys.stderr)
        return 2
    try:
        script = parse_script(text)
    except ParseError as exc:
        print(f"lnd: {args.script}: {exc}", file=sys.stderr)
        return exc.exit_code
    options = RunOptions(args.max_degree, args.normalize_coords, args.seed)
    records, code = run(script, options)
    _emit(records, args.json, args.timing, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
