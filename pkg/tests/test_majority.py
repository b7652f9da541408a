import itertools

import numpy as np
import pytest

from monosynth.addition import enumerate_inputs, exhaustive_check
from monosynth.circuits import CircuitBuilder, depth, size
from monosynth.kernels import eval_batch
from monosynth.majority import (
    Decomposition,
    SynthParams,
    carry_gate,
    combine_gate,
    direct_circuit,
    nth_root_ceil,
    refine,
    size_report,
    synth_majority,
    theoretical_size_bound,
)


def test_refine_examples():
    assert refine(4, 2, 2, 1).intervals == ((1, 2), (3, 4))
    assert refine(4, 2, 2, 0).intervals == ((1, 4),)
    assert refine(4, 2, 2, 2).intervals == ((1, 1), (2, 2), (3, 3), (4, 4))
    with pytest.raises(ValueError):
        refine(9, 2, 2, 1)  # 2^2 does not cover 9 columns
    with pytest.raises(ValueError):
        refine(4, 2, 2, 3)


def test_decomposition_invariants():
    with pytest.raises(ValueError):
        Decomposition(((2, 3),))
    with pytest.raises(ValueError):
        Decomposition(((1, 2), (4, 5)))


def test_nth_root_ceil():
    assert nth_root_ceil(4, 2) == 2
    assert nth_root_ceil(8, 2) == 3
    assert nth_root_ceil(9, 3) == 3  # 2^3 = 8 < 9
    assert nth_root_ceil(1, 5) == 1


def test_synth_params_derivation():
    p = SynthParams.derive(2, 4, 2)
    assert (p.n, p.s, p.t, p.M, p.mode) == (2, 2, 1, 2, "layered")
    p = SynthParams.derive(2, 2, 2)
    assert p.mode == "direct"  # t == s
    p = SynthParams.derive(4, 1, 1)
    assert p.mode == "direct"  # N below log2(k)
    # M <= n * log2(k) whenever log2(k) >= 1 (here k a power of two)
    for k, N, d in [(2, 16, 2), (4, 16, 2), (4, 27, 3), (16, 81, 4)]:
        p = SynthParams.derive(k, N, d)
        if p.M is not None:
            assert p.M <= p.n * max(1, k.bit_length() - 1) or p.mode == "direct"


def _carry_value(block_bits, width, in_carry):
    # block_bits: (k, width) array; local weight of column c is 2^(width-1-c)
    w = [1 << (width - 1 - c) for c in range(width)]
    total = sum(int(block_bits[i, c]) * w[c] for i in range(block_bits.shape[0]) for c in range(width))
    return total + in_carry


def test_carry_gate_examples():
    # block = columns {1,2} of a 2 x 2 matrix, rows (0,1) and (0,1): value 2
    b = CircuitBuilder(2, 2)
    g = carry_gate(b, (1, 2), 2, 1, 0)
    b.set_output(g)
    c = b.build()
    x = np.array([[0, 1], [0, 1]], dtype=np.uint8)
    assert eval_batch(c, x.reshape(1, -1))[0] == 0  # 2 + 0 < 4

    # same block and bits with an assumed incoming carry of 2: 2 + 2 >= 4
    b = CircuitBuilder(2, 2)
    b.set_output(carry_gate(b, (1, 2), 2, 1, 2))
    c = b.build()
    assert eval_batch(c, x.reshape(1, -1))[0] == 1
    with pytest.raises(ValueError):
        carry_gate(CircuitBuilder(2, 2), (1, 2), 2, 1, -1)

    # threshold clamps to 0 at out_carry 0: constant 1
    b = CircuitBuilder(2, 2)
    b.set_output(carry_gate(b, (1, 2), 2, 0, 1))
    c = b.build()
    inputs = enumerate_inputs(2, 2, 0, 16)
    assert eval_batch(c, inputs).all()


def test_carry_gate_matches_arithmetic_exhaustively():
    for k, width in [(2, 2), (2, 3), (3, 2)]:
        b = CircuitBuilder(k, width)
        gates = {}
        for a in range(k):
            for bb in range(k):
                gates[(a, bb)] = carry_gate(b, (1, width), k, a, bb)
        b.set_output(b.or_(list(gates.values())))
        circ = b.build()
        inputs = enumerate_inputs(k, width, 0, 1 << (k * width))
        for (a, bb), gid in gates.items():
            sub = type(circ)(gates=circ.gates, output=gid, k=k, N=width, monotone=True)
            got = eval_batch(sub, inputs)
            for row in range(inputs.shape[0]):
                val = _carry_value(inputs[row].reshape(k, width), width, bb)
                assert got[row] == (1 if val >= a * (1 << width) else 0)


def test_carry_monotonicity_in_carry_order():
    # (a,b) before (a',b') when a < a', or a = a' and b >= b':
    # the earlier gate dominates pointwise.  All blocks up to 16 bits.
    for k in (2, 3, 4):
        min_w = max(1, (k - 1).bit_length())  # 2^w >= k
        for width in range(min_w, 17 // k + 1):
            if k * width > 16:
                continue
            b = CircuitBuilder(k, width)
            gates = {(a, bb): carry_gate(b, (1, width), k, a, bb)
                     for a in range(k) for bb in range(k)}
            b.set_output(b.or_(list(gates.values())))
            circ = b.build()
            inputs = enumerate_inputs(k, width, 0, 1 << (k * width))
            vals = {}
            for key, gid in gates.items():
                sub = type(circ)(gates=circ.gates, output=gid, k=k, N=width, monotone=True)
                vals[key] = eval_batch(sub, inputs)
            for (a1, b1), (a2, b2) in itertools.product(gates, repeat=2):
                if a1 < a2 or (a1 == a2 and b1 >= b2):
                    assert (vals[(a1, b1)] >= vals[(a2, b2)]).all(), (k, width, (a1, b1), (a2, b2))


def test_combine_gate_example():
    # two blocks of one column each, k=2: weighted sum of the child carry
    # bits in base k against threshold u * k^n
    k, n = 2, 2
    b = CircuitBuilder(k, 2)
    grid = {}
    for g, block in enumerate([(1, 1), (2, 2)], start=1):
        for a in range(1, k):
            for bb in range(k):
                grid[(g, a, bb)] = carry_gate(b, block, k, a, bb)
    top = combine_gate(b, 1, 0, k, n, grid)
    b.set_output(top)
    circ = b.build()
    gate = circ.gates[top]
    assert gate.threshold == 4
    assert sorted(m for _, m in gate.children) == [1, 1, 2, 2]

    with pytest.raises(KeyError):
        combine_gate(CircuitBuilder(k, 2), 1, 0, k, n, {})


def test_combine_equals_merged_block_carry():
    # merging n sub-blocks through combine_gate computes exactly the carry
    # gate of the union block, for every assignment and every (u, v)
    for k, widths in [(2, (2, 2)), (2, (3, 3)), (2, (2, 3)), (3, (2, 2)), (3, (2, 3)), (3, (3, 3))]:
        n = len(widths)
        N = sum(widths)
        bits = k * N
        blocks = []
        lo = 1
        for w in widths:
            blocks.append((lo, lo + w - 1))
            lo += w
        inputs = enumerate_inputs(k, N, 0, 1 << bits)
        for u in range(k):
            for v in range(k):
                b = CircuitBuilder(k, N)
                grid = {}
                for g, block in enumerate(blocks, start=1):
                    for a in range(1, k):
                        for bb in range(k):
                            grid[(g, a, bb)] = carry_gate(b, block, k, a, bb)
                combined = combine_gate(b, u, v, k, n, grid)
                merged = carry_gate(b, (1, N), k, u, v)
                b.set_output(b.or_([combined, merged]))
                circ = b.build()
                via_combined = eval_batch(
                    type(circ)(gates=circ.gates, output=combined, k=k, N=N, monotone=True), inputs)
                via_merged = eval_batch(
                    type(circ)(gates=circ.gates, output=merged, k=k, N=N, monotone=True), inputs)
                assert (via_combined == via_merged).all(), (k, widths, u, v)


GRID = [(k, N, d) for k in (2, 3) for N in (2, 3, 4, 8, 9) for d in (1, 2, 3) if k * N <= 20]


@pytest.mark.parametrize("k,N,d", GRID)
def test_synth_majority_oracle_exact(k, N, d):
    circuit = synth_majority(k, N, d)
    report = exhaustive_check(circuit)
    assert report.equivalent, report.counterexamples[:3]
    assert depth(circuit) <= d
    params = SynthParams.derive(k, N, d)
    if params.mode == "layered":
        assert depth(circuit) == params.s - params.t + 1


def test_layer_size_bounds():
    # base gates within k * 2^M wires, combiner gates below k^(n+1)
    for k, N, d in [(2, 9, 2), (2, 8, 3), (3, 4, 2)]:
        params = SynthParams.derive(k, N, d)
        if params.mode != "layered":
            continue
        circuit = synth_majority(k, N, d)
        base_cap = k * (1 << params.M)
        comb_cap = k ** (params.n + 1)
        for gate in circuit.gates.values():
            if gate.kind != "Thr":
                continue
            feeds_inputs = any(circuit.gates[c].kind == "Input" for c, _ in gate.children)
            cap = base_cap if feeds_inputs else comb_cap
            assert gate.fan_in() <= cap


def test_direct_circuit_size():
    c = direct_circuit(2, 5)
    assert size(c) == 2 * ((1 << 5) - 1)
    assert depth(c) == 1


def test_theoretical_size_bound_examples():
    assert theoretical_size_bound(2, 4, 2) == 1 << 24
    assert theoretical_size_bound(2, 16, 4) == 1 << 36
    # non-integer root: ceil(2^(6*(8^(1/3)*log2(3) + 3))) with 8^(1/3) = 2
    assert theoretical_size_bound(3, 8, 3) == (3 ** 12) * (8 ** 6)
    bound = theoretical_size_bound(3, 5, 2)  # irrational exponent path
    assert isinstance(bound, int) and bound > 0


def test_size_within_bound_on_grid():
    for k, N, d in GRID:
        rec = size_report(k, N, d)
        assert rec["measured_size"] <= rec["bound"], rec


def test_padding_restricts_to_requested_columns():
    c = synth_majority(2, 3, 2)  # padded internally to 4 columns
    assert (c.k, c.N) == (2, 3)
    assert exhaustive_check(c).equivalent
