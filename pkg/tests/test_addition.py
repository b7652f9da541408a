import itertools

import numpy as np
import pytest

from monosynth.addition import (
    EnumerationLimitError,
    batch_overflow,
    batch_sums,
    enumerate_inputs,
    exhaustive_check,
    format_matrix,
    index_to_matrix,
    matrix_sum,
    overflow,
    parse_matrices,
    parse_matrix,
)
from monosynth.circuits import CircuitBuilder
from monosynth.majority import direct_circuit


def test_matrix_sum_examples():
    assert matrix_sum([[1], [1]]) == 2
    assert matrix_sum([[0, 1], [1, 1]]) == 4  # 1 + 3, rows read as binary
    assert matrix_sum(np.zeros((3, 4), dtype=np.uint8)) == 0


def test_matrix_sum_is_exact_for_wide_matrices():
    x = np.ones((2, 80), dtype=np.uint8)
    assert matrix_sum(x) == 2 * ((1 << 80) - 1)


def test_overflow_examples():
    assert overflow([[0, 1], [1, 1]]) == 1  # sum 4 == 2^2, boundary
    assert overflow([[0, 1], [1, 0]]) == 0  # sum 3
    assert overflow(np.ones((3, 2), dtype=np.uint8)) == 1  # sum 9 >= 4


def test_sum_monotone_and_bounded():
    k, N = 2, 3
    for bits in itertools.product((0, 1), repeat=k * N):
        x = np.array(bits, dtype=np.uint8).reshape(k, N)
        assert 0 <= matrix_sum(x) <= k * ((1 << N) - 1)
        y = x.copy()
        y[0, 0] = 1
        assert matrix_sum(x) <= matrix_sum(y)


def test_overflow_is_monotone_exhaustively():
    k, N = 2, 4  # 8 bits
    vals = {}
    for bits in itertools.product((0, 1), repeat=k * N):
        vals[bits] = overflow(np.array(bits, dtype=np.uint8).reshape(k, N))
    for xa, va in vals.items():
        yb = tuple(min(1, a + 1) for a in xa)
        assert va <= vals[yb]


def test_batch_helpers_match_scalar():
    X = enumerate_inputs(2, 3, 0, 64).reshape(-1, 2, 3)
    sums = batch_sums(X)
    over = batch_overflow(X)
    for b in range(64):
        assert sums[b] == matrix_sum(X[b])
        assert over[b] == overflow(X[b])


def test_enumeration_order_lsb_at_bottom_right():
    # index 1 flips position (k, N); index 2 flips (k-1, N)
    m = index_to_matrix(1, 2, 3)
    assert m[1, 2] == 1 and m.sum() == 1
    m = index_to_matrix(2, 2, 3)
    assert m[0, 2] == 1 and m.sum() == 1


def test_exhaustive_check_direct_gate():
    report = exhaustive_check(direct_circuit(2, 3))
    assert report.equivalent and report.total == 64


def _const_circuit(k, N, v):
    b = CircuitBuilder(k, N)
    b.set_output(b.const(v))
    return b.build()


def test_exhaustive_check_constant_circuits():
    r0 = exhaustive_check(_const_circuit(2, 1, 0))
    assert r0.mismatches == 1  # only the all-ones input sums to >= 2
    (v, text, want, got) = r0.counterexamples[0]
    assert want == 1 and got == 0 and parse_matrix(text).sum() == 2

    r1 = exhaustive_check(_const_circuit(2, 1, 1))
    assert r1.mismatches == 3


def test_exhaustive_check_counterexamples_deterministic_and_capped():
    r = exhaustive_check(_const_circuit(2, 3, 0))
    assert len(r.counterexamples) == 10
    indices = [v for v, *_ in r.counterexamples]
    assert indices == sorted(indices)
    r2 = exhaustive_check(_const_circuit(2, 3, 0))
    assert [v for v, *_ in r2.counterexamples] == indices


def test_enumeration_limit_refusal(monkeypatch):
    c = direct_circuit(2, 3)
    with pytest.raises(EnumerationLimitError, match="at least 6"):
        exhaustive_check(c, limit=5)
    monkeypatch.setenv("MONOSYNTH_ENUM_LIMIT", "5")
    with pytest.raises(EnumerationLimitError):
        exhaustive_check(c)
    monkeypatch.setenv("MONOSYNTH_ENUM_LIMIT", "6")
    assert exhaustive_check(c).equivalent


def test_matrix_text_roundtrip():
    x = index_to_matrix(37, 3, 4)
    assert (parse_matrix(format_matrix(x)) == x).all()
    blob = format_matrix(x) + "\n# audit line\n\n" + format_matrix(1 - x) + "\n"
    mats = parse_matrices(blob)
    assert len(mats) == 2 and (mats[1] == 1 - x).all()
