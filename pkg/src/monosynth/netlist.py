"""Netlist JSON serialization for circuits.

Schema: a top-level object
``{"k", "N", "monotone", "output", "gates": [...]}`` where each gate is
``{"id", "kind", "threshold" (Thr only), "i", "j" (input/literal only),
"children": [{"id", "mult"}, ...]}``.  Gates are written sorted by id with
a fixed key order, so write -> read -> write is byte-identical.
"""

from __future__ import annotations

import json

from .circuits import Circuit, Gate, POSITIONAL_KINDS, validate

__all__ = ["to_json", "from_json", "write_netlist", "read_netlist"]


def _gate_obj(gate: Gate) -> dict:
    obj: dict = {"id": int(gate.id), "kind": gate.kind}
    if gate.kind == "Thr":
        obj["threshold"] = int(gate.threshold)
    if gate.kind in POSITIONAL_KINDS:
        obj["i"] = int(gate.i)
        obj["j"] = int(gate.j)
    obj["children"] = [{"id": int(c), "mult": int(m)} for c, m in gate.children]
    return obj


def to_json(circuit: Circuit) -> str:
    obj = {
        "k": int(circuit.k),
        "N": int(circuit.N),
        "monotone": bool(circuit.monotone),
        "output": int(circuit.output),
        "gates": [_gate_obj(circuit.gates[g]) for g in sorted(circuit.gates)],
    }
    return json.dumps(obj, indent=2) + "\n"


def from_json(text: str) -> Circuit:
    obj = json.loads(text)
    gates: dict[int, Gate] = {}
    for g in obj["gates"]:
        gid = int(g["id"])
        kind = g["kind"]
        gates[gid] = Gate(
            id=gid,
            kind=kind,
            threshold=int(g["threshold"]) if "threshold" in g else None,
            i=int(g["i"]) if "i" in g else None,
            j=int(g["j"]) if "j" in g else None,
            children=tuple((int(c["id"]), int(c["mult"])) for c in g["children"]),
        )
    circuit = Circuit(
        gates=gates,
        output=int(obj["output"]),
        k=int(obj["k"]),
        N=int(obj["N"]),
        monotone=bool(obj["monotone"]),
    )
    problems = validate(circuit)
    if problems:
        raise ValueError("invalid netlist: " + "; ".join(problems))
    return circuit


def write_netlist(circuit: Circuit, path) -> None:
    with open(path, "w") as fh:
        fh.write(to_json(circuit))


def read_netlist(path) -> Circuit:
    with open(path) as fh:
        return from_json(fh.read())
