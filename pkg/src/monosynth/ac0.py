"""Depth-3 AND/OR/NOT circuits for the addition threshold via carry-save.

Repeated full-adder ("3-to-2") rounds compress the k row numbers into two
numbers y, z with the same sum, where every bit of y and z depends on only
a few original input positions.  The sum y + z reaches 2^N exactly when
either some bit of weight >= 2^N is set (event A) or a carry is generated
below and propagates into the 2^N place (event B, via generate bits
g = y AND z and propagate bits p = y OR z).  Expanding each local bit as a
DNF (event A) or CNF (event B) over its support and merging the top ORs
yields an OR-AND-OR circuit of depth exactly 3 with negations on input
literals only.

Bits are tracked symbolically as truth tables over their supports; a
configurable locality limit bounds the support size a table may reach.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, CircuitBuilder, Restriction, restrict

__all__ = [
    "SymbolicBit",
    "LocalityError",
    "constant_bit",
    "input_bit",
    "three_to_two",
    "reduce_to_two",
    "synth_depth3",
    "depth3_report",
    "event_circuits",
    "restrict_rows",
    "DEFAULT_LOCALITY_LIMIT",
]

DEFAULT_LOCALITY_LIMIT = 20


class LocalityError(ValueError):
    """A symbolic bit's support outgrew the configured locality limit."""


@dataclass(frozen=True, eq=False)
class SymbolicBit:
    """A 0/1 function of a few matrix positions, stored as a truth table.

    ``support`` is a sorted tuple of (row, col) positions; ``table`` has
    2^len(support) entries indexed with the first support position as the
    most significant index bit.
    """

    support: tuple[tuple[int, int], ...]
    table: np.ndarray  # uint8, length 2^len(support)

    def key(self) -> tuple:
        return (self.support, self.table.tobytes())

    @property
    def is_const(self) -> bool:
        return len(self.support) == 0

    def const_value(self) -> int:
        return int(self.table[0])

    def eval_batch(self, X: np.ndarray) -> np.ndarray:
        """Evaluate on a (B, k, N) batch of matrices."""
        if self.is_const:
            return np.full(X.shape[0], self.const_value(), dtype=np.uint8)
        L = len(self.support)
        idx = np.zeros(X.shape[0], dtype=np.int64)
        for q, (i, j) in enumerate(self.support):
            idx |= X[:, i - 1, j - 1].astype(np.int64) << (L - 1 - q)
        return self.table[idx]


def constant_bit(value: int) -> SymbolicBit:
    return SymbolicBit(support=(), table=np.array([1 if value else 0], dtype=np.uint8))


def input_bit(i: int, j: int) -> SymbolicBit:
    return SymbolicBit(support=((i, j),), table=np.array([0, 1], dtype=np.uint8))


def _project(union: tuple[tuple[int, int], ...], bit: SymbolicBit, idx: np.ndarray) -> np.ndarray:
    """Values of ``bit`` under every union-support assignment ``idx``."""
    if bit.is_const:
        return np.full(idx.shape, bit.const_value(), dtype=np.uint8)
    u = len(union)
    rank = {pos: r for r, pos in enumerate(union)}
    L = len(bit.support)
    sub = np.zeros(idx.shape, dtype=np.int64)
    for q, pos in enumerate(bit.support):
        sub |= ((idx >> (u - 1 - rank[pos])) & 1) << (L - 1 - q)
    return bit.table[sub]


def _combine(bits: list[SymbolicBit], func, limit: int, name: str) -> SymbolicBit:
    union = tuple(sorted(set().union(*(b.support for b in bits))))
    if len(union) > limit:
        raise LocalityError(
            f"bit {name} would depend on {len(union)} input positions, exceeding the locality limit {limit}"
        )
    idx = np.arange(1 << len(union), dtype=np.int64)
    vals = [_project(union, b, idx) for b in bits]
    table = func(*vals).astype(np.uint8)
    if not table.any():
        return constant_bit(0)
    if table.all():
        return constant_bit(1)
    return SymbolicBit(support=union, table=table)


def _xor3(a, b, c):
    return a ^ b ^ c


def _maj3(a, b, c):
    return ((a.astype(np.int64) + b + c) >= 2).astype(np.uint8)


def _and2(a, b):
    return a & b


def _or2(a, b):
    return a | b


# Numbers are lists of SymbolicBit, most significant first.


def _pad_to(num: list[SymbolicBit], width: int) -> list[SymbolicBit]:
    return [constant_bit(0)] * (width - len(num)) + num


def three_to_two(
    X: list[SymbolicBit],
    Y: list[SymbolicBit],
    Z: list[SymbolicBit],
    limit: int = DEFAULT_LOCALITY_LIMIT,
) -> tuple[list[SymbolicBit], list[SymbolicBit]]:
    """Full-adder transform: three equal-width numbers into two of width+1
    with the same sum.  Per position the first output takes the XOR (sum
    bit) and the second the majority (carry bit, shifted up one place)."""
    if not (len(X) == len(Y) == len(Z)):
        raise ValueError("three_to_two requires equal widths")
    w = len(X)
    sums = [_combine([X[m], Y[m], Z[m]], _xor3, limit, f"sum[{w - 1 - m}]") for m in range(w)]
    carries = [_combine([X[m], Y[m], Z[m]], _maj3, limit, f"carry[{w - m}]") for m in range(w)]
    A = [constant_bit(0)] + sums
    B = carries + [constant_bit(0)]
    return A, B


def reduce_to_two(
    k: int,
    N: int,
    limit: int = DEFAULT_LOCALITY_LIMIT,
) -> tuple[list[SymbolicBit], list[SymbolicBit], int]:
    """Compress the k rows of a k x N matrix into two numbers with the same
    sum.  Returns (y, z, rounds).

    Each round pads the pending numbers to a common width and feeds them to
    :func:`three_to_two` three at a time, left to right; one or two
    leftover numbers pass through unchanged.
    """
    if k < 1 or N < 1:
        raise ValueError("need k >= 1 and N >= 1")
    pending: list[list[SymbolicBit]] = [[input_bit(i, j) for j in range(1, N + 1)] for i in range(1, k + 1)]
    if k == 1:
        return pending[0], [constant_bit(0)] * N, 0
    rounds = 0
    while len(pending) > 2:
        width = max(len(num) for num in pending)
        pending = [_pad_to(num, width) for num in pending]
        nxt: list[list[SymbolicBit]] = []
        for g in range(0, len(pending) - 2, 3):
            a, b = three_to_two(pending[g], pending[g + 1], pending[g + 2], limit)
            nxt.append(a)
            nxt.append(b)
        nxt.extend(pending[len(pending) - len(pending) % 3:])
        pending = nxt
        rounds += 1
    width = max(len(num) for num in pending)
    y, z = (_pad_to(num, width) for num in pending)
    return y, z, rounds


def number_values(num: list[SymbolicBit], X: np.ndarray) -> np.ndarray:
    """Integer value of a symbolic number on a (B, k, N) batch."""
    vals = np.zeros(X.shape[0], dtype=np.int64)
    w = len(num)
    for m, bit in enumerate(num):
        vals += bit.eval_batch(X).astype(np.int64) << (w - 1 - m)
    return vals


def _assignments(bit: SymbolicBit, value: int):
    """Support assignments on which the bit takes ``value``."""
    L = len(bit.support)
    out = []
    for idx in range(1 << L):
        if bit.table[idx] == value:
            out.append(tuple((bit.support[q], (idx >> (L - 1 - q)) & 1) for q in range(L)))
    return out


class _Depth3Builder:
    """Assembles the OR-AND-OR circuit from symbolic event bits."""

    def __init__(self, k: int, N: int):
        self.b = CircuitBuilder(k, N, monotone=False)
        self.terms: list[int] = []
        self.forced_true = False
        self._clause_cache: dict[tuple, list[int]] = {}

    def _literal(self, pos: tuple[int, int], val: int) -> int:
        i, j = pos
        return self.b.pos_literal(i, j) if val else self.b.neg_literal(i, j)

    def add_dnf(self, bit: SymbolicBit) -> None:
        """Event-A contribution: one AND term per satisfying assignment."""
        if bit.is_const:
            if bit.const_value():
                self.forced_true = True
            return
        for assignment in _assignments(bit, 1):
            self.terms.append(self.b.and_([self._literal(p, v) for p, v in assignment]))

    def cnf_clauses(self, bit: SymbolicBit) -> list[int] | None:
        """OR-clause gates of the bit's CNF; None when the bit is constant 0.

        Clause gates are shared between terms referencing the same bit.
        """
        if bit.is_const:
            return None if bit.const_value() == 0 else []
        key = bit.key()
        if key not in self._clause_cache:
            clauses = []
            for assignment in _assignments(bit, 0):
                clauses.append(self.b.or_([self._literal(p, 1 - v) for p, v in assignment]))
            self._clause_cache[key] = clauses
        return self._clause_cache[key]

    def add_term(self, factors: list[SymbolicBit]) -> None:
        """Event-B contribution: AND of the factors' CNF clauses."""
        clauses: list[int] = []
        for bit in factors:
            cl = self.cnf_clauses(bit)
            if cl is None:
                return  # a constant-0 factor kills the term
            clauses.extend(cl)
        if not clauses:
            self.forced_true = True
            return
        self.terms.append(self.b.and_(clauses))

    def finish(self) -> Circuit:
        if self.forced_true:
            self.b.set_output(self.b.const(1))
        elif not self.terms:
            self.b.set_output(self.b.const(0))
        else:
            self.b.set_output(self.b.or_(self.terms))
        return self.b.build()


def _events(k: int, N: int, limit: int):
    """High bits (weight >= 2^N) and generate/propagate bits per position."""
    y, z, rounds = reduce_to_two(k, N, limit)
    width = len(y)

    def at(num, place):  # bit of weight 2^place, MSB-first storage
        return num[width - 1 - place]

    high = []
    for place in range(N, width):
        high.append((f"y[{place}]", at(y, place)))
        high.append((f"z[{place}]", at(z, place)))
    gen = {place: _combine([at(y, place), at(z, place)], _and2, limit, f"g[{place}]")
           for place in range(0, N)}
    prop = {place: _combine([at(y, place), at(z, place)], _or2, limit, f"p[{place}]")
            for place in range(1, N)}
    return y, z, rounds, high, gen, prop


def synth_depth3(k: int, N: int, limit: int = DEFAULT_LOCALITY_LIMIT) -> Circuit:
    """Depth-3 OR-AND-OR circuit (negations on literals only) computing the
    addition threshold on k x N matrices.

    A carry reaches the 2^N place iff some generate bit g[j] fires and all
    propagate bits between j and N hold; together with the high bits of
    y/z this covers exactly the inputs whose row sum reaches 2^N.
    """
    _, _, _, high, gen, prop = _events(k, N, limit)
    builder = _Depth3Builder(k, N)
    for _, bit in high:
        builder.add_dnf(bit)
    for j in range(0, N):
        builder.add_term([gen[j]] + [prop[i] for i in range(j + 1, N)])
    return builder.finish()


def event_circuits(k: int, N: int, limit: int = DEFAULT_LOCALITY_LIMIT) -> tuple[Circuit, Circuit]:
    """The two events as standalone circuits (high-bit event, carry event)."""
    _, _, _, high, gen, prop = _events(k, N, limit)
    ba = _Depth3Builder(k, N)
    for _, bit in high:
        ba.add_dnf(bit)
    bb = _Depth3Builder(k, N)
    for j in range(0, N):
        bb.add_term([gen[j]] + [prop[i] for i in range(j + 1, N)])
    return ba.finish(), bb.finish()


def depth3_report(k: int, N: int, limit: int = DEFAULT_LOCALITY_LIMIT) -> dict:
    """Round count and per-bit support sizes for the construction."""
    y, z, rounds, high, gen, prop = _events(k, N, limit)
    supports = {}
    width = len(y)
    for place in range(width):
        supports[f"y[{place}]"] = len(y[width - 1 - place].support)
        supports[f"z[{place}]"] = len(z[width - 1 - place].support)
    for place, bit in gen.items():
        supports[f"g[{place}]"] = len(bit.support)
    for place, bit in prop.items():
        supports[f"p[{place}]"] = len(bit.support)
    return {
        "k": k,
        "N": N,
        "rounds": rounds,
        "width": width,
        "max_support": max(supports.values()),
        "supports": supports,
    }


def restrict_rows(circuit: Circuit, rows: int) -> Circuit:
    """Zero out rows rows+1..k, yielding a circuit on the first ``rows`` rows."""
    if rows > circuit.k:
        raise ValueError(f"cannot keep {rows} rows of a {circuit.k}-row circuit")
    rho = Restriction({(i, j): 0 for i in range(rows + 1, circuit.k + 1) for j in range(1, circuit.N + 1)})
    return restrict(circuit, rho)
