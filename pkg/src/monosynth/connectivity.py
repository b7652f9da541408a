"""Reachability view of blockwise carries, and the circuit it induces.

Splitting the columns into ell blocks turns addition into a chain of
carries between adjacent blocks.  The chain becomes a layered digraph:
layer ell holds a source s, layer 0 a sink t, and every inner layer gamma
holds one vertex per possible carry value 0..k-1.  Edges between layers
are switched on by the blocks' conditional carry predicates, and s reaches
t exactly when the row sum overflows.

Layer transitions are governed by blocks counted from the least
significant (rightmost) end: the transition out of s uses the most
significant block, the transition into t the least significant one.  An
edge (v[gamma,a] -> v[gamma-1,b]) asserts that the gamma-th block from the
right emits a carry of at least a when fed b; the edge into t at carry
value 0 is vacuously present.  This orientation is validated exhaustively
against the arithmetic oracle.

Replacing each edge predicate by its threshold gate and wiring a
divide-and-conquer reachability network on top (unbounded fan-in OR,
fan-in-two AND) yields a monotone circuit for the addition threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, CircuitBuilder
from .majority import Decomposition, carry_gate

__all__ = [
    "LayeredGraph",
    "uniform_decomposition",
    "carry_predicate",
    "build_graph",
    "reaches",
    "edge_list_text",
    "synth_connectivity",
]


@dataclass(frozen=True)
class LayeredGraph:
    """(ell+1)-layer digraph; layers numbered ell (source) down to 0 (sink).

    ``s_edges[j]`` is the edge s -> v[ell-1, j]; ``t_edges[j]`` the edge
    v[1, j] -> t; ``mid[g][a][b]`` the edge v[g+1, a] -> v[g, b] stored for
    g = ell-2 .. 1 as mid[g-1] ... indexing helpers below avoid the
    arithmetic: use :meth:`edge`.
    """

    k: int
    layers: int  # ell
    s_edges: np.ndarray  # (k,) uint8
    t_edges: np.ndarray  # (k,) uint8
    mid: np.ndarray  # (max(ell-2, 0), k, k) uint8; [idx, a, b] with idx = gamma-2 for edge gamma->gamma-1

    def edge(self, gamma: int, a: int, b: int) -> int:
        """Edge from layer gamma vertex a to layer gamma-1 vertex b (inner layers)."""
        return int(self.mid[gamma - 2, a, b])


def uniform_decomposition(N: int, block: int) -> Decomposition:
    if N % block:
        raise ValueError(f"block size {block} must divide {N}")
    return Decomposition(tuple((b * block + 1, (b + 1) * block) for b in range(N // block)))


def carry_predicate(x: np.ndarray, block: tuple[int, int], out_carry: int, in_carry: int) -> int:
    """Arithmetic evaluation of a block's conditional carry bit."""
    lo, hi = block
    width = hi - lo + 1
    seg = x[:, lo - 1: hi]
    w = (1 << np.arange(width - 1, -1, -1, dtype=np.int64))
    total = int(seg.astype(np.int64).sum(axis=0) @ w)
    return 1 if total + in_carry >= out_carry * (1 << width) else 0


def _check_blocks(decomposition: Decomposition, k: int) -> None:
    for lo, hi in decomposition.intervals:
        if (1 << (hi - lo + 1)) < k:
            raise ValueError(f"block ({lo},{hi}) narrower than log2({k})")


def build_graph(x, decomposition: Decomposition, k: int) -> LayeredGraph:
    """Carry graph of one input under a given column decomposition."""
    x = np.asarray(x, dtype=np.uint8)
    ell = len(decomposition)
    if ell < 2:
        raise ValueError("need at least 2 blocks")
    if x.shape != (k, decomposition.columns):
        raise ValueError(f"input shape {x.shape} does not match ({k},{decomposition.columns})")
    _check_blocks(decomposition, k)
    blocks = decomposition.intervals
    # transition gamma -> gamma-1 is governed by the gamma-th block from the right
    block_for = {gamma: blocks[ell - gamma] for gamma in range(1, ell + 1)}
    s_edges = np.array([carry_predicate(x, block_for[ell], 1, j) for j in range(k)], dtype=np.uint8)
    t_edges = np.array([carry_predicate(x, block_for[1], j, 0) for j in range(k)], dtype=np.uint8)
    mid = np.zeros((max(ell - 2, 0), k, k), dtype=np.uint8)
    for gamma in range(2, ell):
        for a in range(k):
            for b in range(k):
                mid[gamma - 2, a, b] = carry_predicate(x, block_for[gamma], a, b)
    return LayeredGraph(k=k, layers=ell, s_edges=s_edges, t_edges=t_edges, mid=mid)


def reaches(graph: LayeredGraph) -> int:
    """1 iff a directed s -> t path exists (layer-by-layer sweep)."""
    if graph.layers == 2:
        return 1 if (graph.s_edges & graph.t_edges).any() else 0
    frontier = graph.s_edges.astype(bool)
    for gamma in range(graph.layers - 1, 1, -1):
        frontier = (graph.mid[gamma - 2].astype(bool) & frontier[:, None]).any(axis=0)
    return 1 if (frontier & graph.t_edges.astype(bool)).any() else 0


def edge_list_text(graph: LayeredGraph) -> str:
    """Debug dump, one "gamma a -> gamma-1 b" line per present edge.

    The s and t layers have a single vertex, printed as index 0.
    """
    ell = graph.layers
    lines = []
    for j in range(graph.k):
        if graph.s_edges[j]:
            lines.append(f"{ell} 0 -> {ell - 1} {j}")
    for gamma in range(ell - 1, 1, -1):
        for a in range(graph.k):
            for b in range(graph.k):
                if graph.mid[gamma - 2, a, b]:
                    lines.append(f"{gamma} {a} -> {gamma - 1} {b}")
    for j in range(graph.k):
        if graph.t_edges[j]:
            lines.append(f"1 {j} -> 0 0")
    return "\n".join(lines) + "\n"


def synth_connectivity(k: int, N: int, block_size: int) -> Circuit:
    """Monotone circuit for the addition threshold built as reachability
    over the carry graph: threshold gates realize the edge predicates and a
    divide-and-conquer network (unbounded-fan-in OR over midpoint vertices,
    fan-in-two AND) realizes s -> t reachability.
    """
    decomposition = uniform_decomposition(N, block_size)
    ell = len(decomposition)
    if ell < 2:
        raise ValueError("need at least 2 blocks")
    _check_blocks(decomposition, k)
    blocks = decomposition.intervals
    block_for = {gamma: blocks[ell - gamma] for gamma in range(1, ell + 1)}

    builder = CircuitBuilder(k, N, monotone=True)

    # vertex labels: (layer, index); s = (ell, 0), t = (0, 0)
    def vertices(layer: int) -> list[int]:
        if layer in (0, ell):
            return [0]
        return list(range(k))

    edge_gates: dict[tuple[int, int, int], int] = {}

    def edge_gate(gamma: int, a: int, b: int) -> int:
        key = (gamma, a, b)
        if key not in edge_gates:
            block = block_for[gamma]
            if gamma == ell:
                gate = carry_gate(builder, block, k, 1, b)
            elif gamma == 1:
                gate = carry_gate(builder, block, k, a, 0)
            else:
                gate = carry_gate(builder, block, k, a, b)
            edge_gates[key] = gate
        return edge_gates[key]

    memo: dict[tuple[int, int, int, int], int] = {}

    def reach(hi: int, u: int, lo: int, w: int) -> int:
        key = (hi, u, lo, w)
        if key in memo:
            return memo[key]
        if hi - lo == 1:
            gate = edge_gate(hi, u, w)
        else:
            m = (hi + lo) // 2
            options = [
                builder.and_([reach(hi, u, m, v), reach(m, v, lo, w)])
                for v in vertices(m)
            ]
            gate = builder.or_(options)
        memo[key] = gate
        return gate

    builder.set_output(reach(ell, 0, 0, 0))
    return builder.build()
