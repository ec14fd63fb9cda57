"""``qfid`` command line tool.

    qfid avg --target X --channel preset:depolarizing:p=0.2 --method all
    qfid check --channel channel.json
    qfid convert --channel channel.json --to affine

Exit codes: 0 success, 1 parse error, 2 validation error, 3 channel is not
CPTP (``check`` only).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from itertools import combinations

import numpy as np

from .channels import (MAX_KRAUS, NAMED_GATES, AffineBlochMap, KrausChannel, UnitaryGate,
                       preset, to_affine, to_kraus)
from .errors import QfidError, SpecParseError, UnknownPreset, ValidationError
from .fidelity import avg_fidelity_mc, ESTIMATORS

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_NOT_CPTP = 0, 1, 2, 3

METHOD_NAMES = {
    "six-state": "six_state",
    "three-plus": "three_state_plus",
    "three-minus": "three_state_minus",
    "pauli": "pauli_trace",
    "monte-carlo": "monte_carlo",
    "quadrature": "quadrature",
}


# -- serialisation -----------------------------------------------------------

def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _scalar(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if not math.isfinite(v):
            raise ValueError("cannot serialise non-finite number")
        return fmt(v)
    return json.dumps(v)


def _depth(v) -> int:
    if isinstance(v, (list, tuple)):
        return 1 + max((_depth(x) for x in v), default=0)
    return 0


def dumps(obj, indent: int | None = None, _level: int = 0) -> str:
    """JSON with floats at 17 significant digits.

    With ``indent``, dicts and deep lists are spread over lines while lists
    nested at most two deep (vectors, matrices of scalars) stay on one line.
    """
    if isinstance(obj, dict):
        items = [f"{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        if indent is None:
            return "{" + ", ".join(items) + "}"
        pad = " " * (indent * (_level + 1))
        return "{\n" + ",\n".join(pad + i for i in items) + "\n" + " " * (indent * _level) + "}"
    if isinstance(obj, (list, tuple)):
        parts = [dumps(v, indent, _level + 1) for v in obj]
        if indent is None or _depth(obj) <= 3:
            return "[" + ", ".join(parts) + "]"
        pad = " " * (indent * (_level + 1))
        return "[\n" + ",\n".join(pad + p for p in parts) + "\n" + " " * (indent * _level) + "]"
    return _scalar(obj)


def complex_matrix_to_json(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def channel_to_json(s) -> dict:
    if isinstance(s, AffineBlochMap):
        return {"affine": {"matrix": s.m.tolist(), "translation": s.t.tolist()}}
    return {"kraus": [complex_matrix_to_json(k) for k in to_kraus(s).ops]}


# -- parsing -----------------------------------------------------------------

def _line_of(text: str, key: str) -> int | None:
    needle = json.dumps(key)
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return i
    return None


class _Ctx:
    def __init__(self, source: str, text: str):
        self.source, self.text = source, text

    def fail(self, message: str, field: str) -> SpecParseError:
        key = field.split(".")[-1].split("[")[0]
        return SpecParseError(message, self.source, _line_of(self.text, key), field)


def _load(path: str) -> tuple[dict, _Ctx]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecParseError(f"cannot read file ({exc.strerror})", path) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(exc.msg, path, exc.lineno) from None
    ctx = _Ctx(path, text)
    if not isinstance(data, dict):
        raise ctx.fail("top level must be an object", "<root>")
    return data, ctx


def _one_of(data: dict, keys: tuple, ctx: _Ctx) -> str:
    present = [k for k in keys if k in data]
    if len(present) != 1:
        raise ctx.fail(f"expected exactly one of {', '.join(keys)}; found "
                       f"{', '.join(present) or 'none'}", "<root>")
    extra = set(data) - set(keys)
    if extra:
        raise ctx.fail(f"unexpected key(s) {', '.join(sorted(extra))}", sorted(extra)[0])
    return present[0]


def _real(v, field: str, ctx: _Ctx) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ctx.fail(f"expected a finite number, got {v!r}", field)
    return float(v)


def _real_vector(v, n: int, field: str, ctx: _Ctx) -> np.ndarray:
    if not isinstance(v, list) or len(v) != n:
        raise ctx.fail(f"expected a list of {n} numbers", field)
    return np.array([_real(x, f"{field}[{i}]", ctx) for i, x in enumerate(v)])


def _complex_matrix(v, field: str, ctx: _Ctx) -> np.ndarray:
    if not isinstance(v, list) or len(v) != 2:
        raise ctx.fail("expected a 2x2 matrix of [re, im] pairs", field)
    out = np.zeros((2, 2), dtype=complex)
    for i, row in enumerate(v):
        if not isinstance(row, list) or len(row) != 2:
            raise ctx.fail("expected a 2x2 matrix of [re, im] pairs", f"{field}[{i}]")
        for j, z in enumerate(row):
            re, im = _real_vector(z, 2, f"{field}[{i}][{j}]", ctx)
            out[i, j] = complex(re, im)
    return out


def _preset_params(v, ctx: _Ctx) -> dict:
    if not isinstance(v, dict):
        raise ctx.fail("params must be an object", "preset.params")
    return {k: _real(x, f"preset.params.{k}", ctx) for k, x in v.items()}


def parse_inline_preset(text: str):
    """``preset:name`` or ``preset:name:k=v[,k=v...]``."""
    ctx = _Ctx("<inline>", "")
    parts = text.split(":", 2)
    if len(parts) < 2 or parts[0] != "preset" or not parts[1]:
        raise SpecParseError("inline channel must look like preset:name:k=v,...")
    params = {}
    if len(parts) == 3 and parts[2]:
        for item in parts[2].split(","):
            key, sep, val = item.partition("=")
            if not sep or not key:
                raise SpecParseError(f"bad parameter {item!r}", field="params")
            try:
                params[key.strip()] = float(val)
            except ValueError:
                raise ctx.fail(f"parameter value {val!r} is not a number",
                               f"params.{key.strip()}") from None
    return preset(parts[1], params)


def parse_channel(arg: str):
    if arg.startswith("preset:"):
        return parse_inline_preset(arg)
    data, ctx = _load(arg)
    kind = _one_of(data, ("kraus", "affine", "preset"), ctx)
    body = data[kind]
    if kind == "kraus":
        if not isinstance(body, list) or not 1 <= len(body) <= MAX_KRAUS:
            raise ctx.fail(f"expected a list of 1 to {MAX_KRAUS} matrices", "kraus")
        return KrausChannel(tuple(_complex_matrix(k, f"kraus[{i}]", ctx)
                                  for i, k in enumerate(body)))
    if kind == "affine":
        if not isinstance(body, dict) or set(body) != {"matrix", "translation"}:
            raise ctx.fail("expected keys matrix and translation", "affine")
        rows = body["matrix"]
        if not isinstance(rows, list) or len(rows) != 3:
            raise ctx.fail("expected a 3x3 matrix", "affine.matrix")
        m = np.array([_real_vector(r, 3, f"affine.matrix[{i}]", ctx)
                      for i, r in enumerate(rows)])
        t = _real_vector(body["translation"], 3, "affine.translation", ctx)
        return AffineBlochMap(m, t)
    if not isinstance(body, dict) or "name" not in body:
        raise ctx.fail("expected an object with a name", "preset")
    if not isinstance(body["name"], str):
        raise ctx.fail("preset name must be a string", "preset.name")
    return preset(body["name"], _preset_params(body.get("params", {}), ctx))


def parse_target(arg: str) -> UnitaryGate:
    if arg in NAMED_GATES:
        return UnitaryGate.named(arg)
    if not os.path.exists(arg):
        raise SpecParseError(f"not a file or gate name (gates: {', '.join(NAMED_GATES)})", arg)
    data, ctx = _load(arg)
    kind = _one_of(data, ("matrix", "named", "rotation"), ctx)
    body = data[kind]
    if kind == "matrix":
        return UnitaryGate(_complex_matrix(body, "matrix", ctx))
    if kind == "named":
        gate = body.get("gate") if isinstance(body, dict) else body
        if gate not in NAMED_GATES:
            raise ctx.fail(f"gate must be one of {', '.join(NAMED_GATES)}", "named.gate")
        return UnitaryGate.named(gate)
    if not isinstance(body, dict) or set(body) != {"axis", "angle"}:
        raise ctx.fail("expected keys axis and angle", "rotation")
    axis = _real_vector(body["axis"], 3, "rotation.axis", ctx)
    return UnitaryGate.rotation(axis, _real(body["angle"], "rotation.angle", ctx))


# -- commands ----------------------------------------------------------------

def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in [headers] + rows) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
             for r in [headers] + rows]
    return "\n".join(lines)


def cmd_avg(args, out) -> int:
    target = parse_target(args.target)
    channel = parse_channel(args.channel)
    methods = list(METHOD_NAMES.values()) if args.method == "all" else \
        [METHOD_NAMES[args.method]]
    reports = []
    for m in methods:
        if m == "monte_carlo":
            reports.append(avg_fidelity_mc(target, channel, n=args.samples, seed=args.seed,
                                           workers=args.workers))
        else:
            reports.append(ESTIMATORS[m](target, channel))
    deviation = None
    if len(reports) > 1:
        deviation = max(abs(a.value - b.value) for a, b in combinations(reports, 2))
    if args.output == "jsonl":
        for r in reports:
            out.write(dumps(r.as_dict()) + "\n")
        if deviation is not None:
            out.write(dumps({"max_pairwise_deviation": deviation}) + "\n")
    else:
        rows = [[r.method, fmt(r.value),
                 fmt(r.std_error) if r.std_error is not None else "-",
                 str(r.samples) if r.samples is not None else "-",
                 "; ".join(r.warnings) or "-"] for r in reports]
        out.write(_table(["method", "value", "std_error", "samples", "warnings"], rows) + "\n")
        if deviation is not None:
            out.write(f"max pairwise deviation: {fmt(deviation)}\n")
    return EXIT_OK


def cmd_check(args, out) -> int:
    channel = parse_channel(args.channel)
    d = channel.diagnostics
    if args.output == "jsonl":
        out.write(dumps({"tp_residual": d.tp_residual,
                         "min_choi_eigenvalue": d.min_choi_eigenvalue,
                         "unital_residual": d.unital_residual,
                         "cptp": d.cptp, "unital": d.unital,
                         "warnings": d.warnings()}) + "\n")
    else:
        rows = [["trace-preservation residual", fmt(d.tp_residual)],
                ["min Choi eigenvalue", fmt(d.min_choi_eigenvalue)],
                ["unitality residual", fmt(d.unital_residual)],
                ["CPTP", "yes" if d.cptp else "no"],
                ["unital", "yes" if d.unital else "no"]]
        out.write("\n".join(f"{k + ':':<30}{v}" for k, v in rows) + "\n")
    return EXIT_OK if d.cptp else EXIT_NOT_CPTP


def cmd_convert(args, out) -> int:
    channel = parse_channel(args.channel)
    converted = to_affine(channel) if args.to == "affine" else to_kraus(channel)
    out.write(dumps(channel_to_json(converted), indent=2) + "\n")
    return EXIT_OK


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfid", description="Average fidelity of a single-qubit channel against a "
                                 "target unitary.")
    sub = parser.add_subparsers(dest="command", required=True)
    chan_help = "channel spec file, or inline preset:name:k=v[,k=v]"

    avg = sub.add_parser("avg", help="estimate the average fidelity")
    avg.add_argument("--target", required=True,
                     help=f"target spec file or gate name ({', '.join(NAMED_GATES)})")
    avg.add_argument("--channel", required=True, help=chan_help)
    avg.add_argument("--method", default="six-state", choices=[*METHOD_NAMES, "all"])
    avg.add_argument("--samples", type=_positive_int, default=100_000,
                     help="Monte Carlo sample count (default 100000)")
    avg.add_argument("--seed", type=int, default=0, help="Monte Carlo seed (default 0)")
    avg.add_argument("--workers", type=_positive_int, default=1,
                     help="Monte Carlo worker streams (default 1)")
    avg.add_argument("--output", choices=["text", "jsonl"], default="text")
    avg.set_defaults(func=cmd_avg)

    check = sub.add_parser("check", help="verify complete positivity and unitality")
    check.add_argument("--channel", required=True, help=chan_help)
    check.add_argument("--output", choices=["text", "jsonl"], default="text")
    check.set_defaults(func=cmd_check)

    conv = sub.add_parser("convert", help="convert a channel between representations")
    conv.add_argument("--channel", required=True, help=chan_help)
    conv.add_argument("--to", required=True, choices=["kraus", "affine"])
    conv.set_defaults(func=cmd_convert)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (SpecParseError, UnknownPreset) as exc:
        err.write(f"qfid: parse error: {exc}\n")
        return EXIT_PARSE
    except ValidationError as exc:
        res = f" (residual {exc.residual:.3e})" if exc.residual is not None else ""
        err.write(f"qfid: validation error [{exc.invariant}]{res}: {exc}\n")
        return EXIT_VALIDATION
    except QfidError as exc:
        err.write(f"qfid: error: {exc}\n")
        return EXIT_VALIDATION
