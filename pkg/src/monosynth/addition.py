"""Arithmetic ground truth and brute-force equivalence checking.

A k x N 0/1 matrix encodes k binary numbers, one per row, column 1 most
significant.  ``matrix_sum`` adds them exactly; ``overflow`` is the bit
"does the sum reach 2^N".  ``exhaustive_check`` compares a circuit against
``overflow`` on every one of the 2^(kN) matrices.

Matrices serialize as row-strings of '0'/'1', one row per line, most
significant column first.  Lines starting with '#' are comments.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit
from .kernels import compile_circuit, eval_batch

__all__ = [
    "matrix_sum",
    "overflow",
    "batch_sums",
    "batch_overflow",
    "exhaustive_check",
    "EquivalenceReport",
    "EnumerationLimitError",
    "enum_limit",
    "DEFAULT_ENUM_LIMIT",
    "index_to_matrix",
    "enumerate_inputs",
    "format_matrix",
    "parse_matrix",
    "parse_matrices",
]

DEFAULT_ENUM_LIMIT = 24
ENUM_LIMIT_ENV = "MONOSYNTH_ENUM_LIMIT"


class EnumerationLimitError(ValueError):
    """Raised when an exhaustive sweep would exceed the configured bit limit."""


def enum_limit(override: int | None = None) -> int:
    """Resolve the exhaustive-enumeration limit: argument, env var, default."""
    if override is not None:
        return int(override)
    env = os.environ.get(ENUM_LIMIT_ENV)
    if env:
        return int(env)
    return DEFAULT_ENUM_LIMIT


def matrix_sum(x) -> int:
    """Exact sum of the k row-encoded numbers (arbitrary precision)."""
    x = np.asarray(x, dtype=np.uint8)
    k, N = x.shape
    total = 0
    col_sums = x.sum(axis=0, dtype=np.int64)
    for j in range(N):
        total += int(col_sums[j]) << (N - 1 - j)
    return total


def overflow(x) -> int:
    """1 iff the row sum is at least 2^N for an N-column matrix."""
    x = np.asarray(x, dtype=np.uint8)
    return 1 if matrix_sum(x) >= (1 << x.shape[1]) else 0


def _column_weights(N: int) -> np.ndarray:
    if N - 1 >= 62:
        raise OverflowError(f"column count {N} too wide for int64 batch sums")
    return (1 << np.arange(N - 1, -1, -1, dtype=np.int64)).astype(np.int64)


def batch_sums(X: np.ndarray) -> np.ndarray:
    """Row sums for a (B, k, N) batch as int64 (requires k*2^N < 2^63)."""
    X = np.asarray(X, dtype=np.uint8)
    B, k, N = X.shape
    w = _column_weights(N)
    if k * ((1 << N) - 1) >= (1 << 62):
        raise OverflowError("batch sums would overflow int64; use matrix_sum per draw")
    cols = X.sum(axis=1, dtype=np.int64)
    return cols @ w


def batch_overflow(X: np.ndarray) -> np.ndarray:
    """Vectorized ``overflow`` over a (B, k, N) batch; returns uint8."""
    X = np.asarray(X, dtype=np.uint8)
    return (batch_sums(X) >= (1 << X.shape[2])).astype(np.uint8)


# --- deterministic enumeration -------------------------------------------
#
# Input index v in [0, 2^(kN)) maps to a matrix by taking bit
# (N-j)*k + (k-i) of v as position (i, j): incrementing v flips position
# (k, N) first, then counts up the last column, then the previous column,
# and so on.  Counterexample reports inherit this order.


def _bit_shifts(k: int, N: int) -> np.ndarray:
    # shift of flat row-major position (i-1)*N + (j-1)
    shifts = np.empty(k * N, dtype=np.int64)
    for i in range(1, k + 1):
        for j in range(1, N + 1):
            shifts[(i - 1) * N + (j - 1)] = (N - j) * k + (k - i)
    return shifts


def index_to_matrix(v: int, k: int, N: int) -> np.ndarray:
    shifts = _bit_shifts(k, N)
    flat = (v >> shifts) & 1
    return flat.reshape(k, N).astype(np.uint8)


def enumerate_inputs(k: int, N: int, start: int, stop: int) -> np.ndarray:
    """Flattened input rows for indices [start, stop); shape (stop-start, k*N)."""
    shifts = _bit_shifts(k, N)
    v = np.arange(start, stop, dtype=np.int64)
    return ((v[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


@dataclass
class EquivalenceReport:
    k: int
    N: int
    total: int
    mismatches: int
    counterexamples: list[tuple[int, str, int, int]] = field(default_factory=list)
    """Up to 10 entries (input index, matrix text, expected, got), ascending."""

    @property
    def equivalent(self) -> bool:
        return self.mismatches == 0

    def summary(self) -> str:
        return f"{self.mismatches} mismatches / {self.total} inputs"


def exhaustive_check(
    circuit: Circuit,
    k: int | None = None,
    N: int | None = None,
    limit: int | None = None,
    chunk: int = 1 << 16,
    backend: str | None = None,
) -> EquivalenceReport:
    """Compare a circuit with ``overflow`` on all 2^(kN) matrices.

    Refuses (EnumerationLimitError) when kN exceeds the enumeration limit,
    which defaults to 24 bits and can be overridden by the ``limit``
    argument or the MONOSYNTH_ENUM_LIMIT environment variable.
    """
    k = circuit.k if k is None else k
    N = circuit.N if N is None else N
    if (k, N) != (circuit.k, circuit.N):
        raise ValueError(f"circuit dims ({circuit.k},{circuit.N}) do not match requested ({k},{N})")
    bits = k * N
    lim = enum_limit(limit)
    if bits > lim:
        raise EnumerationLimitError(
            f"exhaustive check over {bits} bits exceeds the enumeration limit {lim}; "
            f"a limit of at least {bits} is required"
        )
    cc = compile_circuit(circuit)
    weights = np.tile(_column_weights(N), k)  # weight of flat position (i,j) is 2^(N-j)
    threshold = 1 << N
    total = 1 << bits
    mismatches = 0
    examples: list[tuple[int, str, int, int]] = []
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        inputs = enumerate_inputs(k, N, start, stop)
        got = eval_batch(cc, inputs, backend=backend)
        expected = (inputs.astype(np.int64) @ weights >= threshold).astype(np.uint8)
        bad = np.nonzero(got != expected)[0]
        mismatches += int(bad.size)
        for b in bad[: max(0, 10 - len(examples))]:
            v = start + int(b)
            examples.append(
                (v, format_matrix(inputs[b].reshape(k, N)), int(expected[b]), int(got[b]))
            )
    return EquivalenceReport(k=k, N=N, total=total, mismatches=mismatches, counterexamples=examples)


# --- text format -----------------------------------------------------------


def format_matrix(x) -> str:
    x = np.asarray(x, dtype=np.uint8)
    return "\n".join("".join("1" if b else "0" for b in row) for row in x)


def parse_matrix(text: str) -> np.ndarray:
    rows = [line.strip() for line in text.splitlines()
            if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise ValueError("empty matrix text")
    width = len(rows[0])
    mat = []
    for line in rows:
        if len(line) != width or any(c not in "01" for c in line):
            raise ValueError(f"bad matrix row {line!r}")
        mat.append([1 if c == "1" else 0 for c in line])
    return np.asarray(mat, dtype=np.uint8)


def parse_matrices(text: str) -> list[np.ndarray]:
    """Parse blank-line-separated matrix blocks, skipping '#' comments."""
    blocks: list[list[str]] = [[]]
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            if blocks[-1]:
                blocks.append([])
        elif not stripped.startswith("#"):
            blocks[-1].append(stripped)
    return [parse_matrix("\n".join(b)) for b in blocks if b]
