"""Command-line front end.

Subcommands: ``synth`` (build a circuit, write its netlist and a report),
``eval`` (run a netlist on one matrix), ``verify`` (exhaustive check
against the arithmetic oracle), ``sample`` (dump draws from a hard
distribution with per-draw sum audits), ``advantage`` (Monte-Carlo
advantage of a netlist on a family pair), ``report`` (measured size vs.
theoretical bound over a parameter grid, as CSV).

All randomness flows from ``--seed`` (default 0, echoed in the output);
identical invocations produce byte-identical artifacts.  The exhaustive
bit limit defaults to 24 and may be overridden by ``--enum-limit`` or the
``MONOSYNTH_ENUM_LIMIT`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import ac0, addition, connectivity, distributions, majority
from .circuits import depth as circuit_depth
from .circuits import size as circuit_size
from .kernels import eval_one
from .netlist import read_netlist, to_json

__all__ = ["main"]


def _write_text(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build(args) -> tuple:
    """Construct the requested circuit; returns (circuit, report dict)."""
    kind = args.construction
    if kind == "majority":
        if args.d is None:
            raise SystemExit("synth/verify --construction majority requires --d")
        circuit = majority.synth_majority(args.k, args.N, args.d)
        report = majority.size_report(args.k, args.N, args.d, circuit)
    elif kind == "ac0":
        circuit = ac0.synth_depth3(args.k, args.N, args.locality_limit)
        report = ac0.depth3_report(args.k, args.N, args.locality_limit)
        report["measured_size"] = circuit_size(circuit)
        report["measured_depth"] = circuit_depth(circuit)
    elif kind == "connectivity":
        if args.block_size is None:
            raise SystemExit("synth/verify --construction connectivity requires --block-size")
        circuit = connectivity.synth_connectivity(args.k, args.N, args.block_size)
        report = {
            "k": args.k,
            "N": args.N,
            "block_size": args.block_size,
            "layers": args.N // args.block_size,
            "measured_size": circuit_size(circuit),
            "measured_depth": circuit_depth(circuit),
        }
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(f"unknown construction {kind!r}")
    return circuit, report


def _cmd_synth(args) -> int:
    circuit, report = _build(args)
    text = to_json(circuit)
    _write_text(text, args.out)
    line = json.dumps(report) + "\n"
    (sys.stdout if args.out else sys.stderr).write(line)
    return 0


def _cmd_eval(args) -> int:
    circuit = read_netlist(args.netlist)
    with open(args.input) as fh:
        x = addition.parse_matrix(fh.read())
    if x.shape != (circuit.k, circuit.N):
        raise SystemExit(f"matrix shape {x.shape} does not match netlist dims ({circuit.k},{circuit.N})")
    print(eval_one(circuit, x))
    return 0


def _cmd_verify(args) -> int:
    circuit, _ = _build(args)
    report = addition.exhaustive_check(circuit, limit=args.enum_limit)
    print(report.summary())
    for v, text, want, got in report.counterexamples:
        sys.stderr.write(f"# input {v}: expected {want}, got {got}\n{text}\n\n")
    return 0 if report.equivalent else 1


def _family_sum_expr(family: str, params: distributions.DistParams) -> str:
    ell = params.level
    if family in distributions.STAR_FAMILIES:
        w = params.star_width()
        return f"2^{w}" if family == "YESSTAR" else f"2^{w}-{ell}"
    w = params.width()
    return {
        "YES": f"2^{w}",
        "NO": f"2^{w}-1",
        "YESP": f"2^{w}-1",
        "NOP": f"2^{w}-{ell + 1}",
    }[family]


def _cmd_sample(args) -> int:
    params = distributions.DistParams(level=args.level, n=args.n, N1=args.N1)
    rng = np.random.default_rng(args.seed)
    draws = distributions.sample_batch(args.family, params, rng, args.samples)
    want = distributions.expected_sum(args.family, params)
    expr = _family_sum_expr(args.family, params)
    lines = [
        f"# family={args.family} level={args.level} n={args.n} N1={args.N1} "
        f"samples={args.samples} seed={args.seed}"
    ]
    bad = 0
    for b in range(draws.shape[0]):
        got = addition.matrix_sum(draws[b])
        ok = got == want
        bad += 0 if ok else 1
        lines.append(addition.format_matrix(draws[b]))
        lines.append(f"# SUM={got} expected={expr}={want} {'ok' if ok else 'MISMATCH'}")
        lines.append("")
    text = "\n".join(lines)
    _write_text(text if text.endswith("\n") else text + "\n", args.out)
    if bad:
        sys.stderr.write(f"{bad} draws violated the sum invariant\n")
        return 1
    return 0


def _cmd_advantage(args) -> int:
    circuit = read_netlist(args.netlist)
    params = distributions.DistParams(level=args.level, n=args.n, N1=args.N1)
    est = distributions.advantage_mc(
        circuit, args.yes, args.no, params, args.samples, np.random.default_rng(args.seed)
    )
    obj = est.as_dict()
    obj["seed"] = args.seed
    _write_text(json.dumps(obj) + "\n", args.out)
    return 0


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _cmd_report(args) -> int:
    rows = ["k,N,d,measured_size,bound,measured_depth"]
    for k in _parse_int_list(args.k_values):
        for N in _parse_int_list(args.N_values):
            if k * N > args.max_bits:
                continue
            for d in _parse_int_list(args.d_values):
                rec = majority.size_report(k, N, d)
                rows.append(
                    f"{k},{N},{d},{rec['measured_size']},{rec['bound']},{rec['measured_depth']}"
                )
    _write_text("\n".join(rows) + "\n", args.out)
    return 0


def _add_construction_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--construction", required=True, choices=["majority", "ac0", "connectivity"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, default=None, help="depth budget (majority)")
    p.add_argument("--block-size", type=int, default=None, help="columns per block (connectivity)")
    p.add_argument("--locality-limit", type=int, default=ac0.DEFAULT_LOCALITY_LIMIT,
                   help="max truth-table support (ac0)")


def _add_family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N1", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monosynth", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="build a circuit; write netlist JSON and a report")
    _add_construction_flags(p)
    p.add_argument("--out", default=None, help="netlist path (stdout when omitted)")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("eval", help="evaluate a netlist on one matrix file")
    p.add_argument("--netlist", required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("verify", help="exhaustively compare a construction with the oracle")
    _add_construction_flags(p)
    p.add_argument("--enum-limit", type=int, default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sample", help="dump draws from a hard-distribution family")
    p.add_argument("--family", required=True, choices=list(distributions.FAMILIES))
    _add_family_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("advantage", help="Monte-Carlo advantage of a netlist on a family pair")
    p.add_argument("--netlist", required=True)
    p.add_argument("--yes", required=True, choices=list(distributions.FAMILIES))
    p.add_argument("--no", required=True, choices=list(distributions.FAMILIES))
    _add_family_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_advantage)

    p = sub.add_parser("report", help="measured size vs. bound across a grid (CSV)")
    p.add_argument("--k-values", default="2,3")
    p.add_argument("--N-values", default="2,3,4,8,9")
    p.add_argument("--d-values", default="1,2,3")
    p.add_argument("--max-bits", type=int, default=20)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (addition.EnumerationLimitError, ac0.LocalityError) as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
