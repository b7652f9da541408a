"""Batched circuit evaluation kernels.

The hot loop of the whole package is "evaluate one circuit on a large batch
of input matrices" (exhaustive equivalence checks, Monte-Carlo advantage
estimates).  Two interchangeable lanes implement it:

* ``numba`` -- a compiled per-input loop over the flattened gate arrays;
* ``numpy`` -- a per-gate sweep of vectorized array ops over the batch.

The lane is chosen by the ``MONOSYNTH_BACKEND`` environment variable
(``numba`` or ``numpy``); the default is numba when importable, with a
silent fallback to numpy otherwise.  Both lanes are bit-exact equals of the
reference :func:`monosynth.circuits.evaluate`.

``benchmarks/bench_eval.py`` compares the two lanes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, POSITIONAL_KINDS, topological_order

__all__ = ["CompiledCircuit", "compile_circuit", "eval_batch", "eval_one", "active_backend"]

K_CONST0, K_CONST1, K_POS, K_NEG, K_THR, K_AND, K_OR = 0, 1, 2, 3, 4, 5, 6

_KIND_CODE = {
    "Const0": K_CONST0,
    "Const1": K_CONST1,
    "Input": K_POS,
    "PosLiteral": K_POS,
    "NegLiteral": K_NEG,
    "Thr": K_THR,
    "And": K_AND,
    "Or": K_OR,
}

_MAX_WEIGHT = 1 << 62


@dataclass(frozen=True)
class CompiledCircuit:
    """Flattened gate arrays in topological order (children first).

    ``param`` holds the flat input position for leaf references and the
    threshold for Thr gates.  Children are CSR-packed indices into the
    topological order, with int64 wire multiplicities.
    """

    kind: np.ndarray
    param: np.ndarray
    indptr: np.ndarray
    child: np.ndarray
    mult: np.ndarray
    out_index: int
    k: int
    N: int


def compile_circuit(circuit: Circuit) -> CompiledCircuit:
    order = topological_order(circuit)
    index = {gid: pos for pos, gid in enumerate(order)}
    G = len(order)
    kind = np.zeros(G, dtype=np.int8)
    param = np.zeros(G, dtype=np.int64)
    indptr = np.zeros(G + 1, dtype=np.int64)
    child_list: list[int] = []
    mult_list: list[int] = []
    for pos, gid in enumerate(order):
        gate = circuit.gates[gid]
        kind[pos] = _KIND_CODE[gate.kind]
        if gate.kind in POSITIONAL_KINDS:
            param[pos] = (gate.i - 1) * circuit.N + (gate.j - 1)
        elif gate.kind == "Thr":
            if not (-_MAX_WEIGHT < gate.threshold < _MAX_WEIGHT):
                raise OverflowError(f"threshold {gate.threshold} too large for compiled evaluation")
            param[pos] = gate.threshold
        total = 0
        for c, m in gate.children:
            child_list.append(index[c])
            mult_list.append(m)
            total += m
        if total >= _MAX_WEIGHT:
            raise OverflowError(f"gate {gid} fan-in {total} too large for compiled evaluation")
        indptr[pos + 1] = len(child_list)
    return CompiledCircuit(
        kind=kind,
        param=param,
        indptr=indptr,
        child=np.asarray(child_list, dtype=np.int64),
        mult=np.asarray(mult_list, dtype=np.int64),
        out_index=index[circuit.output],
        k=circuit.k,
        N=circuit.N,
    )


def _eval_batch_numpy(cc: CompiledCircuit, inputs: np.ndarray) -> np.ndarray:
    B = inputs.shape[0]
    values = np.empty((len(cc.kind), B), dtype=np.uint8)
    for g in range(len(cc.kind)):
        code = cc.kind[g]
        if code == K_CONST0:
            values[g] = 0
        elif code == K_CONST1:
            values[g] = 1
        elif code == K_POS:
            values[g] = inputs[:, cc.param[g]]
        elif code == K_NEG:
            values[g] = 1 - inputs[:, cc.param[g]]
        else:
            lo, hi = cc.indptr[g], cc.indptr[g + 1]
            if code == K_THR:
                acc = np.zeros(B, dtype=np.int64)
                for w in range(lo, hi):
                    acc += cc.mult[w] * values[cc.child[w]].astype(np.int64)
                values[g] = acc >= cc.param[g]
            elif code == K_AND:
                v = np.ones(B, dtype=np.uint8)
                for w in range(lo, hi):
                    v &= values[cc.child[w]]
                values[g] = v
            else:
                v = np.zeros(B, dtype=np.uint8)
                for w in range(lo, hi):
                    v |= values[cc.child[w]]
                values[g] = v
    return values[cc.out_index].copy()


def _numba_kernel():
    import numba

    @numba.njit(cache=True, parallel=True)
    def kernel(kind, param, indptr, child, mult, inputs, out_index, out):  # pragma: no cover - compiled
        G = kind.shape[0]
        B = inputs.shape[0]
        for b in numba.prange(B):
            values = np.empty(G, dtype=np.uint8)
            for g in range(G):
                code = kind[g]
                if code == 0:
                    values[g] = 0
                elif code == 1:
                    values[g] = 1
                elif code == 2:
                    values[g] = inputs[b, param[g]]
                elif code == 3:
                    values[g] = 1 - inputs[b, param[g]]
                elif code == 4:
                    acc = 0
                    for w in range(indptr[g], indptr[g + 1]):
                        acc += mult[w] * values[child[w]]
                    values[g] = 1 if acc >= param[g] else 0
                elif code == 5:
                    v = np.uint8(1)
                    for w in range(indptr[g], indptr[g + 1]):
                        if values[child[w]] == 0:
                            v = np.uint8(0)
                            break
                    values[g] = v
                else:
                    v = np.uint8(0)
                    for w in range(indptr[g], indptr[g + 1]):
                        if values[child[w]] != 0:
                            v = np.uint8(1)
                            break
                    values[g] = v
            out[b] = values[out_index]
        return out

    return kernel


_BACKEND: str | None = None
_KERNEL = None


def active_backend() -> str:
    """Resolve the evaluation lane once per process."""
    global _BACKEND, _KERNEL
    if _BACKEND is None:
        want = os.environ.get("MONOSYNTH_BACKEND", "").strip().lower()
        if want not in ("", "numba", "numpy"):
            raise ValueError(f"MONOSYNTH_BACKEND must be 'numba' or 'numpy', got {want!r}")
        if want == "numpy":
            _BACKEND = "numpy"
        else:
            try:
                _KERNEL = _numba_kernel()
                _BACKEND = "numba"
            except ImportError:
                if want == "numba":
                    raise
                _BACKEND = "numpy"
    return _BACKEND


def eval_batch(circuit: Circuit | CompiledCircuit, inputs: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Evaluate on a batch of flattened inputs of shape (B, k*N), uint8.

    Rows are matrices flattened row-major (row 1 first, each row most
    significant column first).  Returns a (B,) uint8 array.
    """
    global _KERNEL
    cc = circuit if isinstance(circuit, CompiledCircuit) else compile_circuit(circuit)
    inputs = np.ascontiguousarray(inputs, dtype=np.uint8)
    if inputs.ndim != 2 or inputs.shape[1] != cc.k * cc.N:
        raise ValueError(f"inputs must have shape (B, {cc.k * cc.N})")
    lane = backend or active_backend()
    if lane == "numpy":
        return _eval_batch_numpy(cc, inputs)
    if _KERNEL is None:
        _KERNEL = _numba_kernel()
    out = np.empty(inputs.shape[0], dtype=np.uint8)
    _KERNEL(cc.kind, cc.param, cc.indptr, cc.child, cc.mult, inputs, cc.out_index, out)
    return out


def eval_one(circuit: Circuit | CompiledCircuit, x: np.ndarray) -> int:
    """Evaluate one (k, N) matrix through the batch lane."""
    x = np.asarray(x, dtype=np.uint8)
    return int(eval_batch(circuit, x.reshape(1, -1))[0])
