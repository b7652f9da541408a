"""Bounded-depth monotone majority circuits for the addition threshold.

The construction splits the N columns into blocks, computes conditional
carry bits per block with single threshold gates, and merges blocks level
by level: a carry bit of a merged block is a threshold gate over the carry
bits of its sub-blocks.  The resulting circuit has at most ``d`` gate
layers and every gate is an unweighted threshold gate (weights realized as
wire multiplicities).

When one block covers everything (or the column count is below log2 k)
a single direct threshold gate is emitted instead; reports flag that mode
as "direct".
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .circuits import Circuit, CircuitBuilder, Restriction, depth as circuit_depth, restrict, size as circuit_size

__all__ = [
    "Decomposition",
    "SynthParams",
    "refine",
    "carry_gate",
    "combine_gate",
    "direct_circuit",
    "synth_majority",
    "theoretical_size_bound",
    "size_report",
    "nth_root_ceil",
]


@dataclass(frozen=True)
class Decomposition:
    """Ordered partition of columns 1..N into consecutive intervals."""

    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.intervals:
            raise ValueError("decomposition needs at least one interval")
        if self.intervals[0][0] != 1:
            raise ValueError("first interval must start at column 1")
        prev_hi = 0
        for lo, hi in self.intervals:
            if lo != prev_hi + 1 or hi < lo:
                raise ValueError(f"intervals must abut and be nonempty, got {self.intervals}")
            prev_hi = hi

    @property
    def columns(self) -> int:
        return self.intervals[-1][1]

    def __len__(self) -> int:
        return len(self.intervals)


def nth_root_ceil(N: int, d: int) -> int:
    """Smallest integer n with n**d >= N."""
    if N < 1 or d < 1:
        raise ValueError("need N >= 1 and d >= 1")
    n = max(1, round(N ** (1.0 / d)))
    while n**d >= N:
        n -= 1
    while n**d < N:
        n += 1
    return n


def refine(N: int, n: int, s: int, i: int) -> Decomposition:
    """The n^i-way split of columns 1..n^s into blocks of size n^(s-i).

    The padded width n^s must cover N.  Level 0 is the single full
    interval; level s is all singletons.
    """
    if not (0 <= i <= s):
        raise ValueError(f"level {i} must be within [0, {s}]")
    if n**s < N:
        raise ValueError(f"padded width {n}^{s} does not cover {N} columns")
    block = n ** (s - i)
    return Decomposition(tuple((b * block + 1, (b + 1) * block) for b in range(n**i)))


@dataclass(frozen=True)
class SynthParams:
    """Derived construction parameters for a (k, N, d) instance.

    ``n`` is the per-level branching, ``s`` the number of refinement
    levels covering N columns, ``t`` the coarsest level whose blocks hold
    at least log2(k) columns, ``M = n**t`` the base block size.  ``t`` and
    ``M`` are None when the instance degenerates to a single direct gate
    before they apply (N below log2 k).
    """

    k: int
    N: int
    d: int
    n: int
    s: int
    t: int | None
    M: int | None
    mode: str  # "direct" or "layered"

    @classmethod
    def derive(cls, k: int, N: int, d: int) -> "SynthParams":
        if k < 2 or N < 1 or d < 1:
            raise ValueError("need k >= 2, N >= 1, d >= 1")
        n = nth_root_ceil(N, d)
        s = 0
        while n**s < N:
            s += 1
        if (1 << N) < k:  # N < log2(k): a single gate is already cheap
            return cls(k=k, N=N, d=d, n=n, s=s, t=None, M=None, mode="direct")
        t = None
        for cand in range(1, d + 1):
            m = n**cand
            if m >= k.bit_length() or (1 << m) >= k:
                t = cand
                break
        if t is None or t >= s:
            return cls(k=k, N=N, d=d, n=n, s=s, t=t, M=None if t is None else n**t, mode="direct")
        return cls(k=k, N=N, d=d, n=n, s=s, t=t, M=n**t, mode="layered")


def carry_gate(builder: CircuitBuilder, block: tuple[int, int], k: int, out_carry: int, in_carry: int) -> int:
    """Threshold gate asserting the block emits a carry of at least
    ``out_carry`` assuming an incoming carry of ``in_carry``.

    The gate weights position (i, j) by 2^(hi - j) via wire multiplicity
    and uses threshold out_carry * 2^|block| - in_carry, clamped at 0
    (a threshold-0 gate is constant 1).
    """
    lo, hi = block
    if not (1 <= lo <= hi <= builder.N):
        raise ValueError(f"block {block} outside columns 1..{builder.N}")
    if out_carry < 0 or in_carry < 0:
        raise ValueError(f"carry values ({out_carry},{in_carry}) must be non-negative")
    width = hi - lo + 1
    threshold = max(0, out_carry * (1 << width) - in_carry)
    wires = [(builder.input(i, j), 1 << (hi - j)) for i in range(1, k + 1) for j in range(lo, hi + 1)]
    return builder.thr(threshold, wires)


def combine_gate(
    builder: CircuitBuilder,
    u: int,
    v: int,
    k: int,
    n: int,
    child_grid: dict[tuple[int, int, int], int],
) -> int:
    """Carry gate of a merged block from the carry gates of its n sub-blocks.

    ``child_grid[(g, a, b)]`` is the gate id of sub-block g's carry gate for
    out-carry a in [1, k-1] and in-carry b in [0, k-1].  Sub-block g's bits
    are weighted k^(n-g); the threshold is u * k^n - v, clamped at 0.
    """
    if not (0 <= u <= k - 1 and 0 <= v <= k - 1):
        raise ValueError(f"carry values ({u},{v}) must lie in [0, {k - 1}]")
    wires = []
    for g in range(1, n + 1):
        weight = k ** (n - g)
        for a in range(1, k):
            for b in range(k):
                try:
                    wires.append((child_grid[(g, a, b)], weight))
                except KeyError:
                    raise KeyError(f"child grid missing carry gate ({g},{a},{b})") from None
    threshold = max(0, u * k**n - v)
    return builder.thr(threshold, wires)


def direct_circuit(k: int, N: int) -> Circuit:
    """Single threshold gate computing the addition threshold directly:
    weight 2^(N-j) on every position of column j, threshold 2^N."""
    builder = CircuitBuilder(k, N, monotone=True)
    wires = [(builder.input(i, j), 1 << (N - j)) for i in range(1, k + 1) for j in range(1, N + 1)]
    builder.set_output(builder.thr(1 << N, wires))
    return builder.build()


def synth_majority(k: int, N: int, d: int) -> Circuit:
    """Depth-at-most-d monotone majority circuit for the addition threshold
    on k x N matrices."""
    params = SynthParams.derive(k, N, d)
    if params.mode == "direct":
        return direct_circuit(k, N)

    n, s, t = params.n, params.s, params.t
    width = n**s
    builder = CircuitBuilder(k, width, monotone=True)

    # base layer: one threshold gate per (block, out-carry, in-carry)
    base = refine(N, n, s, s - t)
    grid: dict[tuple[int, int, int], int] = {}
    for g, block in enumerate(base.intervals, start=1):
        for a in range(1, k):
            for b in range(k):
                grid[(g, a, b)] = carry_gate(builder, block, k, a, b)

    # merge n sub-blocks at a time, down to the single full-width block
    for level in range(s - t - 1, 0, -1):
        blocks = n**level
        new_grid: dict[tuple[int, int, int], int] = {}
        for g in range(1, blocks + 1):
            sub = {(c, a, b): grid[((g - 1) * n + c, a, b)]
                   for c in range(1, n + 1) for a in range(1, k) for b in range(k)}
            for a in range(1, k):
                for b in range(k):
                    new_grid[(g, a, b)] = combine_gate(builder, a, b, k, n, sub)
        grid = new_grid

    top_sub = {(c, a, b): grid[(c, a, b)] for c in range(1, n + 1) for a in range(1, k) for b in range(k)}
    builder.set_output(combine_gate(builder, 1, 0, k, n, top_sub))
    circuit = builder.build()

    if width > N:
        pad = Restriction({(i, j): 0 for i in range(1, k + 1) for j in range(N + 1, width + 1)})
        circuit = restrict(circuit, pad)
    return circuit


def theoretical_size_bound(k: int, N: int, d: int) -> int:
    """ceil(2^(6 * (N^(1/d) * log2(k) + log2(N)))) as an exact integer."""
    if k < 2 or N < 2 or d < 1:
        raise ValueError("need k, N >= 2 and d >= 1")
    root = nth_root_ceil(N, d)
    if root**d == N:  # integer root: bound is exactly k^(6*root) * N^6
        return k ** (6 * root) * N**6
    prec = 120
    while True:
        with mpmath.workprec(prec):
            e = 6 * (mpmath.mpf(N) ** (mpmath.mpf(1) / d) * mpmath.log(k, 2) + mpmath.log(N, 2))
            value = int(mpmath.ceil(mpmath.power(2, e)))
        with mpmath.workprec(2 * prec):
            e2 = 6 * (mpmath.mpf(N) ** (mpmath.mpf(1) / d) * mpmath.log(k, 2) + mpmath.log(N, 2))
            value2 = int(mpmath.ceil(mpmath.power(2, e2)))
        if value == value2:
            return value
        prec *= 2


def size_report(k: int, N: int, d: int, circuit: Circuit | None = None) -> dict:
    """Measured size/depth next to the theoretical bound, as a plain dict."""
    params = SynthParams.derive(k, N, d)
    if circuit is None:
        circuit = synth_majority(k, N, d)
    return {
        "k": k,
        "N": N,
        "d": d,
        "n": params.n,
        "s": params.s,
        "t": params.t,
        "M": params.M,
        "measured_size": circuit_size(circuit),
        "measured_depth": circuit_depth(circuit),
        "bound": theoretical_size_bound(k, N, d) if N >= 2 else None,
        "mode": params.mode,
    }
