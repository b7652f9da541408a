"""Samplers for the recursive hard-input families and advantage estimates.

Six families of input distributions are defined per level.  At level 1
(two rows, N1 columns):

* ``YES``   -- pick a column R uniformly, set it to (1,1), columns left of
  R to (1,0) or (0,1) with equal probability, columns right of R to (0,0);
  the row sum is exactly 2^N1.
* ``NO``    -- every column independently (1,0) or (0,1); sum 2^N1 - 1.
* ``YESP``  -- identical to NO.
* ``NOP``   -- bitwise negation of a YES draw; sum 2^N1 - 2.

At level ell >= 2 the starred families live on ell x (n * N_{ell-1})
matrices split into n sections: pick T uniform in [n]; sections left of T
draw from NO or YESP of the previous level with equal probability; section
T draws YES (``YESSTAR``) or NOP (``NOSTAR``); sections right of T are all
zeros (``YESSTAR``) or all ones (``NOSTAR``).  The unstarred families wrap
a starred draw in one extra row and column:

* ``YESP``/``NOP``: first column all 0, last row 1 from column 2 on;
* ``YES``/``NO``:   bottom-left position 1, rest of the first column 0,
  last row 0 (``YES``) or the binary representation of ell-1, least
  significant bit in the last column (``NO``).

Column widths satisfy N_1 = N1 and N_ell = n * N_{ell-1} + 1; every draw's
row sum is a fixed function of the family and level (``expected_sum``).

Randomness: every batch consumes a fixed, documented sequence of calls on
one ``numpy.random.Generator`` -- level 1: the R column (YES/NOP only),
then one 0/1 draw per column (1 means (1,0)); starred levels: the T
section, then per section position a mixture bit (1 means NO) plus one NO
batch and one YESP batch, then the T-section batch.  Identical seeds give
identical batches.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circuits import Circuit, Restriction, restrict
from .kernels import compile_circuit, eval_batch

__all__ = [
    "FAMILIES",
    "STAR_FAMILIES",
    "DistParams",
    "family_shape",
    "expected_sum",
    "sample_batch",
    "sample_one",
    "AdvantageEstimate",
    "advantage_mc",
    "advantage_exact_level1",
    "search_max_advantage",
    "perfect_gate_weights",
    "strip_primed_frame",
    "strip_plain_frame",
]

FAMILIES = ("YES", "NO", "YESP", "NOP", "YESSTAR", "NOSTAR")
STAR_FAMILIES = ("YESSTAR", "NOSTAR")


@dataclass(frozen=True)
class DistParams:
    """Level and sizing of a distribution family instance."""

    level: int
    n: int
    N1: int

    def __post_init__(self):
        if self.level < 1 or self.n < 1 or self.N1 < 1:
            raise ValueError("need level, n, N1 >= 1")
        for ell in range(2, self.level + 1):
            width = self.width(ell)
            if (ell - 1) >> (width - 1):
                raise ValueError(f"level {ell} needs more than {width - 1} columns for its marker row")

    def width(self, level: int | None = None) -> int:
        """Columns N_ell of the unstarred families at ``level``."""
        level = self.level if level is None else level
        w = self.N1
        for _ in range(level - 1):
            w = self.n * w + 1
        return w

    def star_width(self, level: int | None = None) -> int:
        """Columns of the starred families at ``level`` (>= 2)."""
        level = self.level if level is None else level
        return self.n * self.width(level - 1)


def family_shape(family: str, params: DistParams) -> tuple[int, int]:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if family in STAR_FAMILIES:
        if params.level < 2:
            raise ValueError("starred families need level >= 2")
        return params.level, params.star_width()
    return params.level + 1, params.width()


def expected_sum(family: str, params: DistParams) -> int:
    """The exact row sum every draw of the family must have."""
    ell = params.level
    if family in STAR_FAMILIES:
        base = 1 << params.star_width()
        return base if family == "YESSTAR" else base - ell
    base = 1 << params.width()
    return {
        "YES": base,
        "NO": base - 1,
        "YESP": base - 1,
        "NOP": base - (ell + 1),
    }[family]


def _level1_yes(count: int, N1: int, rng: np.random.Generator) -> np.ndarray:
    R = rng.integers(1, N1 + 1, size=count)
    bits = rng.integers(0, 2, size=(count, N1), dtype=np.uint8)
    cols = np.arange(1, N1 + 1)
    lt = cols[None, :] < R[:, None]
    eq = cols[None, :] == R[:, None]
    out = np.zeros((count, 2, N1), dtype=np.uint8)
    out[:, 0, :] = np.where(lt, bits, 0) | eq
    out[:, 1, :] = np.where(lt, 1 - bits, 0) | eq
    return out


def _level1_no(count: int, N1: int, rng: np.random.Generator) -> np.ndarray:
    bits = rng.integers(0, 2, size=(count, N1), dtype=np.uint8)
    out = np.empty((count, 2, N1), dtype=np.uint8)
    out[:, 0, :] = bits
    out[:, 1, :] = 1 - bits
    return out


def _star(family: str, params: DistParams, rng: np.random.Generator, count: int) -> np.ndarray:
    ell = params.level
    sub = DistParams(level=ell - 1, n=params.n, N1=params.N1)
    rows, sub_cols = ell - 1 + 1, params.width(ell - 1)
    n = params.n
    T = rng.integers(1, n + 1, size=count)
    sections = np.empty((count, n, rows, sub_cols), dtype=np.uint8)
    mixes = []
    for i in range(n):
        mix = rng.integers(0, 2, size=count, dtype=np.uint8)
        no_i = sample_batch("NO", sub, rng, count)
        yp_i = sample_batch("YESP", sub, rng, count)
        sections[:, i] = np.where(mix[:, None, None] == 1, no_i, yp_i)
        mixes.append(mix)
    special = sample_batch("YES" if family == "YESSTAR" else "NOP", sub, rng, count)
    fill = 0 if family == "YESSTAR" else 1
    pos = np.arange(1, n + 1)
    after = pos[None, :] > T[:, None]
    sections[after] = fill
    sections[np.arange(count), T - 1] = special
    # sections sit side by side: section i covers columns (i-1)*w+1 .. i*w
    return sections.transpose(0, 2, 1, 3).reshape(count, rows, n * sub_cols)


def _frame(z: np.ndarray, family: str, level: int) -> np.ndarray:
    """Wrap starred draws in the extra first column and last row."""
    count, rows, cols = z.shape
    out = np.zeros((count, rows + 1, cols + 1), dtype=np.uint8)
    out[:, :rows, 1:] = z
    if family in ("YESP", "NOP"):
        out[:, rows, 1:] = 1
    elif family == "YES":
        out[:, rows, 0] = 1
    else:  # NO
        out[:, rows, 0] = 1
        marker = level - 1
        for offset in range(cols):  # least significant bit in the last column
            out[:, rows, cols - offset] = (marker >> offset) & 1
    return out


def sample_batch(family: str, params: DistParams, rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw ``count`` matrices of the family; shape (count, rows, cols)."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    ell = params.level
    if family in STAR_FAMILIES:
        if ell < 2:
            raise ValueError("starred families need level >= 2")
        return _star(family, params, rng, count)
    if ell == 1:
        if family == "YES":
            return _level1_yes(count, params.N1, rng)
        if family in ("NO", "YESP"):
            return _level1_no(count, params.N1, rng)
        return 1 - _level1_yes(count, params.N1, rng)  # NOP: negated YES
    star = _star("YESSTAR" if family in ("YES", "YESP") else "NOSTAR", params, rng, count)
    return _frame(star, family, ell)


def sample_one(family: str, params: DistParams, rng: np.random.Generator) -> np.ndarray:
    return sample_batch(family, params, rng, 1)[0]


@dataclass(frozen=True)
class AdvantageEstimate:
    """Pr[circuit=1 on the yes side] + Pr[circuit=0 on the no side]."""

    value: float | Fraction
    mode: str  # "exact" | "monte-carlo"
    samples: int | None = None
    stderr: float = 0.0

    def as_dict(self) -> dict:
        return {
            "value": float(self.value),
            "mode": self.mode,
            "samples": self.samples,
            "stderr": self.stderr,
        }


def advantage_mc(
    circuit: Circuit,
    yes_family: str,
    no_family: str,
    params: DistParams,
    samples: int,
    rng: np.random.Generator | int,
) -> AdvantageEstimate:
    """Monte-Carlo advantage with binomial standard errors in quadrature.

    The yes-side batch is drawn first, then the no-side batch, from the
    same generator.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))
    shape_yes = family_shape(yes_family, params)
    shape_no = family_shape(no_family, params)
    for shape in (shape_yes, shape_no):
        if shape != (circuit.k, circuit.N):
            raise ValueError(f"circuit dims ({circuit.k},{circuit.N}) do not match family shape {shape}")
    cc = compile_circuit(circuit)
    ys = sample_batch(yes_family, params, rng, samples)
    ns = sample_batch(no_family, params, rng, samples)
    p1 = float(eval_batch(cc, ys.reshape(samples, -1)).mean())
    p0 = float(1.0 - eval_batch(cc, ns.reshape(samples, -1)).mean())
    stderr = float(np.sqrt(p1 * (1 - p1) / samples + p0 * (1 - p0) / samples))
    return AdvantageEstimate(value=p1 + p0, mode="monte-carlo", samples=samples, stderr=stderr)


# --- exact level-1 advantage for single threshold gates ---------------------


def advantage_exact_level1(weights, threshold: int, limit: int = 20) -> AdvantageEstimate:
    """Exact advantage of one weighted threshold gate on the level-1 pair.

    ``weights`` is a (2, N1) array of non-negative integers.  Both level-1
    supports are enumerated: the no-side over the 2^N1 column patterns, the
    yes-side over the marker column R and the 2^(R-1) prefix choices.
    """
    w = np.asarray(weights, dtype=np.int64)
    if w.ndim != 2 or w.shape[0] != 2:
        raise ValueError("weights must have shape (2, N1)")
    if (w < 0).any():
        raise ValueError("weights must be non-negative")
    N1 = w.shape[1]
    if N1 > limit:
        raise ValueError(f"N1={N1} exceeds the enumeration limit {limit}")

    top, bottom = w[0], w[1]
    delta = top - bottom
    base = int(bottom.sum())

    # all 2^N1 "one per column" patterns; bit j set means column j is (1,0)
    patt = np.arange(1 << N1, dtype=np.int64)
    choice = (patt[:, None] >> np.arange(N1 - 1, -1, -1)[None, :]) & 1
    no_sums = base + choice @ delta
    pr_no_zero = Fraction(int((no_sums < threshold).sum()), 1 << N1)

    pr_yes_one = Fraction(0)
    for R in range(1, N1 + 1):
        marker = int(top[R - 1] + bottom[R - 1])
        if R == 1:
            prefix = np.zeros(1, dtype=np.int64)
        else:
            pre = (np.arange(1 << (R - 1), dtype=np.int64)[:, None]
                   >> np.arange(R - 2, -1, -1)[None, :]) & 1
            prefix = int(bottom[: R - 1].sum()) + pre @ delta[: R - 1]
        hits = int((prefix + marker >= threshold).sum())
        pr_yes_one += Fraction(hits, (1 << (R - 1)) * N1)

    return AdvantageEstimate(value=pr_yes_one + pr_no_zero, mode="exact")


def _weight_vectors(slots: int, budget: int):
    vec = [0] * slots

    def rec(pos: int, left: int):
        if pos == slots:
            yield tuple(vec)
            return
        for v in range(left + 1):
            vec[pos] = v
            yield from rec(pos + 1, left - v)
        vec[pos] = 0

    yield from rec(0, budget)


def search_max_advantage(N1: int, max_weight: int) -> tuple[Fraction, tuple, int]:
    """Brute-force the best single-gate advantage over all non-negative
    weight vectors of total weight <= max_weight and all thresholds
    0..max_weight+1.  Returns (best value, (weights, threshold), count)."""
    best = Fraction(0)
    best_gate = None
    tried = 0
    for vec in _weight_vectors(2 * N1, max_weight):
        w = np.asarray(vec, dtype=np.int64).reshape(2, N1)
        for t in range(0, max_weight + 2):
            tried += 1
            val = advantage_exact_level1(w, t).value
            if val > best:
                best = val
                best_gate = (w.copy(), t)
    return best, best_gate, tried


def perfect_gate_weights(N1: int) -> tuple[np.ndarray, int]:
    """The direct weighted gate separating the level-1 pair perfectly."""
    w = np.tile(1 << np.arange(N1 - 1, -1, -1, dtype=np.int64), (2, 1))
    return w, 1 << N1


# --- frame-stripping reductions ---------------------------------------------


def strip_primed_frame(circuit: Circuit) -> Circuit:
    """Hard-wire the primed families' frame: first column 0, last row 1
    from column 2 on.  Takes a circuit on (ell+1) x N_ell inputs to one on
    ell x (N_ell - 1) inputs, matching the starred families."""
    k, N = circuit.k, circuit.N
    rho = {(i, 1): 0 for i in range(1, k + 1)}
    rho.update({(k, j): 1 for j in range(2, N + 1)})
    return restrict(circuit, Restriction(rho))


def strip_plain_frame(circuit: Circuit) -> Circuit:
    """Hard-wire the plain families' frame: bottom-left position 1, rest of
    the first column and the last row 0.  Same shape change as
    :func:`strip_primed_frame`."""
    k, N = circuit.k, circuit.N
    rho = {(i, 1): 0 for i in range(1, k)}
    rho[(k, 1)] = 1
    rho.update({(k, j): 0 for j in range(2, N + 1)})
    return restrict(circuit, Restriction(rho))
