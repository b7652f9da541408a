"""Gate-level circuit representation: build, evaluate, restrict, measure.

Circuits are directed acyclic multigraphs of gates with a single output.
Gates are unweighted threshold gates (``Thr``), ``And``/``Or`` gates, input
references, input literals, and constants.  Multiple wires between the same
pair of gates are recorded as an integer multiplicity, so a weighted
threshold function is a ``Thr`` gate whose wire multiplicities are the
weights.  Circuit size is the total wire count; depth counts gate layers
with inputs, literals and constants at depth 0.

Inputs are positions of a k-row, N-column 0/1 matrix, indexed 1-based as
(row, column) with column 1 the most significant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "Gate",
    "Circuit",
    "Restriction",
    "CircuitBuilder",
    "evaluate",
    "size",
    "depth",
    "restrict",
    "validate",
    "topological_order",
]

# Gate kinds.  Leaf kinds carry no children; Thr carries a threshold.
LEAF_KINDS = frozenset({"Const0", "Const1", "Input", "PosLiteral", "NegLiteral"})
POSITIONAL_KINDS = frozenset({"Input", "PosLiteral", "NegLiteral"})
GATE_KINDS = frozenset({"Thr", "And", "Or"})
ALL_KINDS = LEAF_KINDS | GATE_KINDS


@dataclass(frozen=True)
class Gate:
    """One circuit node.

    ``children`` is an ordered tuple of ``(child_id, multiplicity)`` wire
    bundles; multiplicities are positive.  ``threshold`` is set for Thr
    gates only, ``i``/``j`` for Input/PosLiteral/NegLiteral only.
    """

    id: int
    kind: str
    children: tuple[tuple[int, int], ...] = ()
    threshold: int | None = None
    i: int | None = None
    j: int | None = None

    def fan_in(self) -> int:
        """Total wire multiplicity entering this gate."""
        return sum(m for _, m in self.children)


@dataclass(frozen=True)
class Circuit:
    """An immutable gate DAG over a k x N input matrix with one output."""

    gates: Mapping[int, Gate]
    output: int
    k: int
    N: int
    monotone: bool = True

    def gate(self, gid: int) -> Gate:
        return self.gates[gid]


@dataclass(frozen=True)
class Restriction:
    """Partial assignment of matrix positions (row, col) -> 0/1."""

    assignments: Mapping[tuple[int, int], int]

    def __post_init__(self):
        for (i, j), v in self.assignments.items():
            if v not in (0, 1):
                raise ValueError(f"restriction value at ({i},{j}) must be 0/1, got {v}")


class CircuitBuilder:
    """Incremental construction of a Circuit; shares leaf nodes by position."""

    def __init__(self, k: int, N: int, monotone: bool = True):
        self.k = k
        self.N = N
        self.monotone = monotone
        self._gates: dict[int, Gate] = {}
        self._leaf_cache: dict[tuple, int] = {}
        self._next = 0
        self._output: int | None = None

    def _add(self, gate: Gate) -> int:
        self._gates[gate.id] = gate
        return gate.id

    def _fresh(self) -> int:
        gid = self._next
        self._next += 1
        return gid

    def _leaf(self, key: tuple, **kw) -> int:
        if key in self._leaf_cache:
            return self._leaf_cache[key]
        gid = self._add(Gate(id=self._fresh(), **kw))
        self._leaf_cache[key] = gid
        return gid

    def const(self, value: int) -> int:
        kind = "Const1" if value else "Const0"
        return self._leaf((kind,), kind=kind)

    def input(self, i: int, j: int) -> int:
        return self._leaf(("Input", i, j), kind="Input", i=i, j=j)

    def pos_literal(self, i: int, j: int) -> int:
        return self._leaf(("PosLiteral", i, j), kind="PosLiteral", i=i, j=j)

    def neg_literal(self, i: int, j: int) -> int:
        return self._leaf(("NegLiteral", i, j), kind="NegLiteral", i=i, j=j)

    def thr(self, threshold: int, children: Iterable[tuple[int, int]]) -> int:
        ch = tuple((int(c), int(m)) for c, m in children)
        return self._add(Gate(id=self._fresh(), kind="Thr", threshold=int(threshold), children=ch))

    def and_(self, children: Iterable[int | tuple[int, int]]) -> int:
        return self._add(Gate(id=self._fresh(), kind="And", children=_norm_children(children)))

    def or_(self, children: Iterable[int | tuple[int, int]]) -> int:
        return self._add(Gate(id=self._fresh(), kind="Or", children=_norm_children(children)))

    def set_output(self, gid: int) -> None:
        self._output = gid

    def build(self) -> Circuit:
        if self._output is None:
            raise ValueError("output gate not set")
        circuit = Circuit(
            gates=dict(self._gates),
            output=self._output,
            k=self.k,
            N=self.N,
            monotone=self.monotone,
        )
        problems = validate(circuit)
        if problems:
            raise ValueError("built an invalid circuit: " + "; ".join(problems))
        return circuit


def _norm_children(children: Iterable[int | tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out = []
    for c in children:
        if isinstance(c, tuple):
            out.append((int(c[0]), int(c[1])))
        else:
            out.append((int(c), 1))
    return tuple(out)


def topological_order(circuit: Circuit) -> list[int]:
    """Gate ids reachable from the output, children before parents.

    Deterministic: driven by the output gate and each gate's ordered child
    list, never by dict iteration order.  Raises ValueError on a cycle.
    """
    order: list[int] = []
    state: dict[int, int] = {}  # 0 = on stack, 1 = done
    stack: list[tuple[int, int]] = [(circuit.output, 0)]
    while stack:
        gid, idx = stack.pop()
        if state.get(gid) == 1:
            continue
        if idx == 0:
            if state.get(gid) == 0:
                raise ValueError(f"cycle through gate {gid}")
            state[gid] = 0
        gate = circuit.gates.get(gid)
        if gate is None:
            raise KeyError(f"missing gate {gid}")
        children = gate.children
        if idx < len(children):
            stack.append((gid, idx + 1))
            child = children[idx][0]
            if state.get(child) != 1:
                if state.get(child) == 0:
                    raise ValueError(f"cycle through gate {child}")
                stack.append((child, 0))
        else:
            state[gid] = 1
            order.append(gid)
    return order


def _leaf_value(gate: Gate, x: np.ndarray) -> int:
    if gate.kind == "Const0":
        return 0
    if gate.kind == "Const1":
        return 1
    v = int(x[gate.i - 1, gate.j - 1])
    if gate.kind == "NegLiteral":
        return 1 - v
    return v


def evaluate(circuit: Circuit, x) -> int:
    """Evaluate the output gate on one input matrix (reference path).

    Thr counts child values weighted by wire multiplicity; And/Or are
    conjunction/disjunction over children.  For batched evaluation use
    :mod:`monosynth.kernels`.
    """
    x = np.asarray(x, dtype=np.uint8)
    if x.shape != (circuit.k, circuit.N):
        raise ValueError(f"input shape {x.shape} does not match circuit dims ({circuit.k}, {circuit.N})")
    values: dict[int, int] = {}
    for gid in topological_order(circuit):
        gate = circuit.gates[gid]
        if gate.kind in LEAF_KINDS:
            values[gid] = _leaf_value(gate, x)
        elif gate.kind == "Thr":
            acc = sum(m * values[c] for c, m in gate.children)
            values[gid] = 1 if acc >= gate.threshold else 0
        elif gate.kind == "And":
            values[gid] = 1 if all(values[c] for c, _ in gate.children) else 0
        elif gate.kind == "Or":
            values[gid] = 1 if any(values[c] for c, _ in gate.children) else 0
        else:
            raise ValueError(f"unknown gate kind {gate.kind!r}")
    return values[circuit.output]


def size(circuit: Circuit) -> int:
    """Total wire count over all gates; leaf nodes contribute 0."""
    return sum(g.fan_in() for g in circuit.gates.values() if g.kind in GATE_KINDS)


def depth(circuit: Circuit) -> int:
    """Maximum number of gates on any leaf-to-output path."""
    d: dict[int, int] = {}
    for gid in topological_order(circuit):
        gate = circuit.gates[gid]
        if gate.kind in LEAF_KINDS:
            d[gid] = 0
        else:
            d[gid] = 1 + max((d[c] for c, _ in gate.children), default=0)
    return d[circuit.output]


def validate(circuit: Circuit) -> list[str]:
    """Structural checks; returns a list of violations (empty means valid).

    Checks acyclicity, output presence, child references, index bounds,
    threshold ranges, leaf-kind child emptiness, positive multiplicities,
    and the monotone flag (no NegLiteral in a monotone-flagged circuit).
    Gates unreachable from the output are reported as dead.
    """
    problems: list[str] = []
    gates = circuit.gates
    if circuit.output not in gates:
        problems.append(f"output gate {circuit.output} missing")
        return problems

    for gid, gate in sorted(gates.items()):
        if gate.id != gid:
            problems.append(f"gate {gid}: id field mismatch ({gate.id})")
        if gate.kind not in ALL_KINDS:
            problems.append(f"gate {gid}: unknown kind {gate.kind!r}")
            continue
        if gate.kind in LEAF_KINDS and gate.children:
            problems.append(f"gate {gid}: {gate.kind} must have no children")
        if gate.kind in POSITIONAL_KINDS:
            if gate.i is None or gate.j is None:
                problems.append(f"gate {gid}: {gate.kind} missing position")
            elif not (1 <= gate.i <= circuit.k and 1 <= gate.j <= circuit.N):
                problems.append(f"gate {gid}: position ({gate.i},{gate.j}) out of bounds")
        if gate.kind == "NegLiteral" and circuit.monotone:
            problems.append(f"gate {gid}: negation in monotone circuit")
        if gate.kind == "Thr":
            if gate.threshold is None:
                problems.append(f"gate {gid}: Thr missing threshold")
            elif not (0 <= gate.threshold <= gate.fan_in() + 1):
                problems.append(f"gate {gid}: threshold out of range (t={gate.threshold}, fan-in={gate.fan_in()})")
        for c, m in gate.children:
            if c not in gates:
                problems.append(f"gate {gid}: missing child {c}")
            if m < 1:
                problems.append(f"gate {gid}: wire multiplicity {m} < 1")

    # Acyclicity + reachability from the output.
    try:
        reachable = set(topological_order(circuit))
    except ValueError as exc:
        problems.append(str(exc))
        return problems
    except KeyError:
        return problems  # missing child already reported
    for gid in sorted(gates):
        if gid not in reachable:
            problems.append(f"gate {gid}: dead (not on any path to output)")
    return problems


def _subgrid_relabel(circuit: Circuit, rho: Restriction):
    """Row/column relabeling induced by a restriction, when it exists.

    When the unassigned positions form an exact (rows x cols) sub-grid the
    restricted circuit is re-indexed onto that sub-matrix; otherwise the
    original dims are kept and assigned positions simply disappear from the
    circuit.  Returns (new_k, new_N, position map) or None for the keep-dims
    case.
    """
    assigned = set(rho.assignments)
    rows = sorted({i for i in range(1, circuit.k + 1)
                   if any((i, j) not in assigned for j in range(1, circuit.N + 1))})
    cols = sorted({j for j in range(1, circuit.N + 1)
                   if any((i, j) not in assigned for i in range(1, circuit.k + 1))})
    for i in rows:
        for j in cols:
            if (i, j) in assigned:
                return None
    row_rank = {i: r + 1 for r, i in enumerate(rows)}
    col_rank = {j: r + 1 for r, j in enumerate(cols)}
    remap = {(i, j): (row_rank[i], col_rank[j]) for i in rows for j in cols}
    return len(rows), len(cols), remap


def restrict(circuit: Circuit, rho: Restriction) -> Circuit:
    """Hard-wire the assigned positions and propagate constants.

    Assigned inputs become constants; a gate whose surviving wires can no
    longer change its value becomes a constant (a Thr gate with enough
    satisfied wires is Const1, one that cannot reach its threshold is
    Const0, and similarly for And/Or).  Surviving gates keep their ids.
    When whole rows/columns are eliminated the result is re-indexed onto
    the remaining sub-matrix.
    """
    for (i, j) in rho.assignments:
        if not (1 <= i <= circuit.k and 1 <= j <= circuit.N):
            raise ValueError(f"restriction position ({i},{j}) out of bounds for ({circuit.k},{circuit.N})")

    relabel = _subgrid_relabel(circuit, rho)
    if relabel is None:
        new_k, new_N = circuit.k, circuit.N
        remap = {(i, j): (i, j) for i in range(1, circuit.k + 1) for j in range(1, circuit.N + 1)
                 if (i, j) not in rho.assignments}
    else:
        new_k, new_N, remap = relabel

    new_gates: dict[int, Gate] = {}
    # const_of[id]: 0/1 when the rebuilt gate is a known constant
    const_of: dict[int, int] = {}

    def emit(gate: Gate) -> None:
        new_gates[gate.id] = gate

    for gid in topological_order(circuit):
        gate = circuit.gates[gid]
        kind = gate.kind
        if kind in ("Const0", "Const1"):
            const_of[gid] = 0 if kind == "Const0" else 1
            emit(gate)
            continue
        if kind in POSITIONAL_KINDS:
            pos = (gate.i, gate.j)
            if pos in rho.assignments:
                v = rho.assignments[pos]
                if kind == "NegLiteral":
                    v = 1 - v
                const_of[gid] = v
                emit(Gate(id=gid, kind="Const1" if v else "Const0"))
            else:
                ni, nj = remap[pos]
                emit(Gate(id=gid, kind=kind, i=ni, j=nj))
            continue

        live: list[tuple[int, int]] = []
        satisfied = 0
        for c, m in gate.children:
            cv = const_of.get(c)
            if cv is None:
                live.append((c, m))
            elif cv == 1:
                satisfied += m
            # constant-0 wires are dropped
        live_mult = sum(m for _, m in live)

        if kind == "Thr":
            t = gate.threshold - satisfied
            if t <= 0:
                const_of[gid] = 1
                emit(Gate(id=gid, kind="Const1"))
            elif t > live_mult:
                const_of[gid] = 0
                emit(Gate(id=gid, kind="Const0"))
            else:
                emit(Gate(id=gid, kind="Thr", threshold=t, children=tuple(live)))
        elif kind == "And":
            # any constant-0 child forces 0; constant-1 children drop out
            killed = any(const_of.get(c) == 0 for c, _ in gate.children)
            if killed:
                const_of[gid] = 0
                emit(Gate(id=gid, kind="Const0"))
            elif not live:
                const_of[gid] = 1
                emit(Gate(id=gid, kind="Const1"))
            else:
                emit(Gate(id=gid, kind="And", children=tuple(live)))
        elif kind == "Or":
            if satisfied > 0:
                const_of[gid] = 1
                emit(Gate(id=gid, kind="Const1"))
            elif not live:
                const_of[gid] = 0
                emit(Gate(id=gid, kind="Const0"))
            else:
                emit(Gate(id=gid, kind="Or", children=tuple(live)))
        else:
            raise ValueError(f"unknown gate kind {kind!r}")

    out = Circuit(gates=new_gates, output=circuit.output, k=new_k, N=new_N, monotone=circuit.monotone)
    # drop gates no longer reachable from the output
    reachable = set(topological_order(out))
    return Circuit(
        gates={g: out.gates[g] for g in sorted(reachable)},
        output=out.output,
        k=new_k,
        N=new_N,
        monotone=circuit.monotone,
    )
