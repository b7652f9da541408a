import numpy as np

from monosynth.circuits import CircuitBuilder


def random_circuit(rng, k, N, n_gates=8, monotone=True):
    """Seeded random DAG over all k*N inputs with nothing left dangling."""
    b = CircuitBuilder(k, N, monotone=monotone)
    pool = [b.input(i, j) for i in range(1, k + 1) for j in range(1, N + 1)]
    pool.append(b.const(int(rng.integers(0, 2))))
    used: set[int] = set()
    for _ in range(n_gates):
        picks = rng.choice(len(pool), size=int(rng.integers(2, min(5, len(pool)))), replace=False)
        kids = [(pool[p], int(rng.integers(1, 3))) for p in picks]
        used.update(pool[p] for p in picks)
        kind = int(rng.integers(0, 3))
        if kind == 0:
            total = sum(m for _, m in kids)
            pool.append(b.thr(int(rng.integers(0, total + 2)), kids))
        elif kind == 1:
            pool.append(b.and_(kids))
        else:
            pool.append(b.or_(kids))
    dangling = [g for g in pool[:-1] if g not in used]
    b.set_output(pool[-1] if not dangling else b.or_([pool[-1]] + dangling))
    return b.build()
