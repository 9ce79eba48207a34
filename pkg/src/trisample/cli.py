"""Command-line interface.

Every command writes one artifact (JSON, CSV or DOT) to ``--output`` or
stdout.  JSON artifacts carry a ``meta`` block with the package version,
the command, its configuration and the seed; CSV artifacts carry the same
as ``#`` comment lines.  Exit codes: 0 success, 1 other failure,
2 invalid input, 3 enumeration cap exceeded.  Failures print a JSON error
record to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .chain_fixed import mcr_step, mtr_step
from .chain_flip import FlipState, initial_flip_state, mef_step
from .dyck import (count_pairs, dyck_to_orientation, enumerate_dyck_pairs, mdk_step,
                   orientation_to_dyck)
from .errors import CapExceeded, TrisampleError, ValidationError
from .oracle import (DEFAULT_CAP, build_transition_matrix, diameter, dyck_space,
                     enumerate_flip_space, enumerate_reachable, gadget_report, mixing_time,
                     tv_curve, write_csv)
from .orientation import construct_initial_orientation, derive_schnyder_coloring
from .triangulation import build_slow_gadget
from .validation import check_dyck_pair, check_orientation, check_triangulation, spawn_rngs

EXIT_OK, EXIT_ERROR, EXIT_VALIDATION, EXIT_CAP = 0, 1, 2, 3


class CliError(ValidationError):
    code = "usage"


def _meta(args):
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    return {"version": __version__, "command": args.command, "config": config, "seed": args.seed}


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def _emit_json(args, payload):
    doc = {"meta": _meta(args)}
    doc.update(payload)
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def _emit_csv(args, header, rows):
    meta = _meta(args)
    lines = [f"# version={meta['version']}", f"# command={meta['command']}",
             f"# seed={meta['seed']}",
             "# config=" + json.dumps(_jsonable(meta["config"]), sort_keys=True)]
    return "\n".join(lines) + "\n" + write_csv(rows, header)


def _read_json(path, field="input"):
    if path is None:
        raise CliError("--input is required for this command", field=field)
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", field=field) from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc.msg}", field=field) from None


def _require(args, name):
    value = getattr(args, name)
    if value is None:
        raise CliError(f"--{name} is required for this command", field=name)
    return value


def _load_state(doc):
    """A triangulation plus optional orientation from a JSON document."""
    tri_doc = doc.get("triangulation", doc)
    tri = check_triangulation(tri_doc)
    o = None
    if "orientation" in doc:
        o = check_orientation(tri, doc["orientation"])
    return tri, o


def _seed_rng(args):
    return spawn_rngs(args.seed, 1)[0]


def cmd_sample_fixed(args):
    tri, o = _load_state(_read_json(args.input))
    chain = args.chain or "tr"
    if chain not in ("tr", "cr"):
        raise CliError("sample-fixed needs --chain tr or cr", field="chain")
    step = mtr_step if chain == "tr" else mcr_step
    state = o if o is not None else construct_initial_orientation(tri)
    rng = _seed_rng(args)
    for _ in range(args.steps):
        state = step(state, rng)
    w = derive_schnyder_coloring(state)
    return _emit_json(args, {"triangulation": tri.to_dict(), "orientation": w.to_dict(),
                             "key": state.bits})


def cmd_sample_flip(args):
    n = _require(args, "n")
    chain = args.chain or "ef"
    if chain not in ("ef", "dk"):
        raise CliError("sample-flip needs --chain ef or dk", field="chain")
    if n < 1:
        raise CliError("--n must be at least 1", field="n")
    rng = _seed_rng(args)
    if chain == "ef":
        s = initial_flip_state(n)
        for _ in range(args.steps):
            s = mef_step(s, rng)
        p = orientation_to_dyck(s)
    else:
        p = orientation_to_dyck(initial_flip_state(n))
        for _ in range(args.steps):
            p = mdk_step(p, rng)
        s = dyck_to_orientation(p)
    payload = s.to_dict()
    payload["dyck"] = p.to_dict()
    payload["key"] = p.key
    return _emit_json(args, payload)


def _space_from_args(args, default_chain):
    chain = args.chain or default_chain
    if chain in ("tr", "cr"):
        tri, _ = _load_state(_read_json(args.input))
        return chain, enumerate_reachable(tri, cap=args.cap)
    n = _require(args, "n")
    if n < 1:
        raise CliError("--n must be at least 1", field="n")
    if chain == "ef":
        return chain, enumerate_flip_space(n, cap=args.cap)
    if count_pairs(n) > args.cap:
        raise CapExceeded(f"{count_pairs(n)} states exceed the cap {args.cap}",
                          partial_count=0, field="cap")
    return chain, dyck_space(n)


def cmd_enumerate(args):
    chain, space = _space_from_args(args, "tr" if args.input else "dk")
    diam = diameter(space, chain)
    n = space.n
    row = {"n_internal": n, "states": len(space), "diameter": diam}
    if space.kind == "fixed":
        row["diameter_bound"] = Fraction((2 * n + 1) ** 2, 2)
        row["size_bound"] = 3 ** (2 * n + 1)
    else:
        row["expected_states"] = count_pairs(n)
    if args.format == "csv":
        return _emit_csv(args, list(row), [[_jsonable(v) for v in row.values()]])
    return _emit_json(args, {"summary": row, "keys": list(space.keys)})


def cmd_tv_curve(args):
    chain, space = _space_from_args(args, "tr" if args.input else "dk")
    P = build_transition_matrix(chain, space)
    tv = tv_curve(P, args.start, args.tmax)
    tau = mixing_time(tv, args.eps)
    if args.format == "json":
        return _emit_json(args, {"states": len(space), "tau": tau, "tv": [float(x) for x in tv]})
    return _emit_csv(args, ["t", "tv"], [[t, repr(float(x))] for t, x in enumerate(tv)])


def cmd_gadget(args):
    t = _require(args, "t")
    tri = build_slow_gadget(t)
    if args.format == "dot":
        return tri.to_dot()
    return _emit_json(args, {"triangulation": tri.to_dict()})


def cmd_dyck(args):
    action = args.action
    if action == "enumerate":
        n = _require(args, "n")
        pairs = enumerate_dyck_pairs(n)
        if args.format == "csv":
            return _emit_csv(args, ["top", "bottom"], [[str(p.top), str(p.bottom)] for p in pairs])
        return _emit_json(args, {"n": n, "count": len(pairs), "expected": count_pairs(n),
                                 "pairs": [p.key for p in pairs]})
    if action == "encode":
        doc = _read_json(args.input)
        tri, o = _load_state(doc)
        if o is None:
            raise CliError("input has no orientation", field="orientation")
        p = orientation_to_dyck(FlipState.from_orientation(o))
        return _emit_json(args, {"dyck": p.to_dict(), "key": p.key})
    if action == "decode":
        doc = _read_json(args.input)
        p = check_dyck_pair(doc.get("dyck", doc))
        s = dyck_to_orientation(p)
        return _emit_json(args, dict(s.to_dict(), key=p.key))
    if action == "roundtrip":
        n = _require(args, "n")
        bad = [p.key for p in enumerate_dyck_pairs(n)
               if orientation_to_dyck(dyck_to_orientation(p)) != p]
        return _emit_json(args, {"n": n, "checked": count_pairs(n), "failures": bad})
    raise CliError(f"unknown dyck action {action!r}", field="action")


def cmd_bottleneck(args):
    t = _require(args, "t")
    rep = gadget_report(t, eps=args.eps, tmax=args.tmax, cap=args.cap)
    rep["conductance_float"] = float(rep["conductance"])
    if args.format == "csv":
        header = ["cut", "conductance", "bound", "tau", "tau_lower_bound", "D", "D_complement"]
        row = ["D", str(rep["conductance"]), repr(rep["conductance_bound"]), rep["tau"],
               repr(rep["tau_lower_bound"]), rep["D"], rep["D_complement"]]
        return _emit_csv(args, header, [row])
    return _emit_json(args, {"report": rep})


def cmd_export_dot(args):
    doc = _read_json(args.input)
    tri, o = _load_state(doc)
    if o is None:
        return tri.to_dot()
    w = derive_schnyder_coloring(o)
    return tri.to_dot(orientation=o, colors=w.colors)


COMMANDS = {
    "sample-fixed": cmd_sample_fixed,
    "sample-flip": cmd_sample_flip,
    "enumerate": cmd_enumerate,
    "tv-curve": cmd_tv_curve,
    "gadget": cmd_gadget,
    "dyck": cmd_dyck,
    "bottleneck": cmd_bottleneck,
    "export-dot": cmd_export_dot,
}


def _start(value):
    return value if value == "worst" else int(value)


def build_parser():
    parser = argparse.ArgumentParser(prog="trisample",
                                     description="Markov chains on 3-orientations of triangulations")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name == "dyck":
            p.add_argument("action", choices=["encode", "decode", "roundtrip", "enumerate"])
        p.add_argument("--input")
        p.add_argument("--output")
        p.add_argument("--chain", choices=["tr", "cr", "ef", "dk"])
        p.add_argument("--n", type=int)
        p.add_argument("--t", type=int)
        p.add_argument("--steps", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--eps", type=float, default=0.25)
        p.add_argument("--tmax", type=int, default=1000)
        p.add_argument("--start", type=_start, default="worst")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP)
        default_format = {"tv-curve": "csv", "export-dot": "dot"}.get(name, "json")
        p.add_argument("--format", choices=["json", "csv", "dot"], default=default_format)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.steps < 0:
            raise CliError("--steps must be non-negative", field="steps")
        if args.seed < 0 or args.seed >= 2 ** 64:
            raise CliError("--seed must fit in 64 unsigned bits", field="seed")
        text = COMMANDS[args.command](args)
    except CapExceeded as exc:
        rec = exc.record()
        rec["partial_count"] = exc.partial_count
        print(json.dumps(rec, sort_keys=True), file=sys.stderr)
        return EXIT_CAP
    except ValidationError as exc:
        print(json.dumps(exc.record(), sort_keys=True), file=sys.stderr)
        return EXIT_VALIDATION
    except TrisampleError as exc:
        print(json.dumps(exc.record(), sort_keys=True), file=sys.stderr)
        return EXIT_ERROR
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
