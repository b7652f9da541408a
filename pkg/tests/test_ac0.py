import numpy as np
import pytest

from monosynth.ac0 import (
    LocalityError,
    constant_bit,
    depth3_report,
    event_circuits,
    input_bit,
    number_values,
    reduce_to_two,
    restrict_rows,
    synth_depth3,
    three_to_two,
)
from monosynth.addition import batch_overflow, batch_sums, enumerate_inputs, exhaustive_check
from monosynth.circuits import depth, evaluate, size
from monosynth.kernels import eval_batch
from monosynth.majority import direct_circuit


def _const_number(value, width):
    return [constant_bit((value >> (width - 1 - m)) & 1) for m in range(width)]


def test_three_to_two_constant_ones():
    one = _const_number(1, 1)
    A, B = three_to_two(one, one, one)
    X = np.zeros((1, 1, 1), dtype=np.uint8)
    assert number_values(A, X)[0] == 1
    assert number_values(B, X)[0] == 2


def test_three_to_two_zeros():
    zero = _const_number(0, 2)
    A, B = three_to_two(zero, zero, zero)
    X = np.zeros((1, 1, 1), dtype=np.uint8)
    assert number_values(A, X)[0] == 0
    assert number_values(B, X)[0] == 0


def test_three_to_two_full_adder_tables():
    # three independent one-bit variables: sum bit is parity, carry majority
    a, b, c = (  # rows 1..3 of a 3 x 1 matrix
        [input_bit(1, 1)],
        [input_bit(2, 1)],
        [input_bit(3, 1)],
    )
    A, B = three_to_two(a, b, c)
    sum_bit, carry_bit = A[1], B[0]
    assert sum_bit.support == ((1, 1), (2, 1), (3, 1))
    assert carry_bit.support == ((1, 1), (2, 1), (3, 1))
    X = enumerate_inputs(3, 1, 0, 8).reshape(-1, 3, 1)
    ones = X.sum(axis=(1, 2))
    assert (sum_bit.eval_batch(X) == ones % 2).all()
    assert (carry_bit.eval_batch(X) == (ones >= 2)).all()


def test_three_to_two_rejects_width_mismatch():
    with pytest.raises(ValueError):
        three_to_two(_const_number(0, 2), _const_number(0, 2), _const_number(0, 3))


def test_reduce_to_two_trivial_cases():
    y, z, rounds = reduce_to_two(2, 3)
    assert rounds == 0
    # rows come back verbatim: y is row 1, z is row 2
    X = enumerate_inputs(2, 3, 0, 64).reshape(-1, 2, 3)
    w = np.array([4, 2, 1], dtype=np.int64)
    assert (number_values(y, X) == X[:, 0, :] @ w).all()
    assert (number_values(z, X) == X[:, 1, :] @ w).all()

    y, z, rounds = reduce_to_two(1, 3)
    assert rounds == 0
    assert (number_values(z, X[:, :1, :]) == 0).all()


@pytest.mark.parametrize("k,N", [(3, 2), (3, 4), (4, 3), (5, 2), (6, 2), (7, 2)])
def test_reduce_to_two_sum_identity_exhaustive(k, N):
    y, z, rounds = reduce_to_two(k, N)
    X = enumerate_inputs(k, N, 0, 1 << (k * N)).reshape(-1, k, N)
    assert (number_values(y, X) + number_values(z, X) == batch_sums(X)).all()
    cap = 3 ** rounds
    assert all(len(b.support) <= cap for b in y + z)


def test_reduce_to_two_support_growth():
    _, _, rounds = reduce_to_two(3, 2)
    assert rounds == 1
    y, z, rounds = reduce_to_two(5, 2)
    assert max(len(b.support) for b in y + z) <= 9


def test_locality_limit_enforced():
    with pytest.raises(LocalityError, match="locality limit"):
        reduce_to_two(9, 4, limit=4)


@pytest.mark.parametrize("k,N", [(2, 3), (2, 4), (3, 3), (3, 4)])
def test_synth_depth3_oracle_exact_and_depth_three(k, N):
    c = synth_depth3(k, N)
    assert c.monotone is False
    report = exhaustive_check(c)
    assert report.equivalent, report.counterexamples[:3]
    assert depth(c) == 3
    for gate in c.gates.values():
        assert gate.kind in ("And", "Or", "PosLiteral", "NegLiteral", "Const0", "Const1")


def test_event_decomposition_matches_carry_chain():
    # overflow holds exactly when a high bit fires or a carry crosses into
    # the 2^N place; checked against direct arithmetic on y and z
    for k, N in [(2, 3), (3, 3), (4, 2)]:
        y, z, _ = reduce_to_two(k, N)
        ca, cb = event_circuits(k, N)
        X = enumerate_inputs(k, N, 0, 1 << (k * N)).reshape(-1, k, N)
        yv, zv = number_values(y, X), number_values(z, X)
        high = ((yv >> N) > 0) | ((zv >> N) > 0)
        carry_in = ((yv % (1 << N)) + (zv % (1 << N))) >= (1 << N)
        got_a = eval_batch(ca, X.reshape(X.shape[0], -1)).astype(bool)
        got_b = eval_batch(cb, X.reshape(X.shape[0], -1)).astype(bool)
        assert (got_a == high).all()
        assert (got_b == carry_in).all()
        assert ((got_a | got_b) == batch_overflow(X).astype(bool)).all()


def test_depth3_report_contents():
    rep = depth3_report(3, 4)
    assert rep["rounds"] == 1
    assert rep["max_support"] <= 9
    # the carry-half number has a constant zero low bit, so g[0] degenerates
    assert rep["supports"]["g[0]"] == 0
    assert rep["supports"]["g[1]"] >= 1


def test_restrict_rows_to_smaller_instance():
    c = synth_depth3(3, 3)
    r = restrict_rows(c, 2)
    assert (r.k, r.N) == (2, 3)
    assert exhaustive_check(r).equivalent

    # keeping every row only simplifies constants away; gate ids survive
    same = restrict_rows(c, 3)
    assert (same.k, same.N) == (3, 3)
    assert exhaustive_check(same).equivalent

    d = restrict_rows(direct_circuit(3, 2), 1)
    assert (d.k, d.N) == (1, 2)
    assert exhaustive_check(d).equivalent

    with pytest.raises(ValueError):
        restrict_rows(c, 5)
