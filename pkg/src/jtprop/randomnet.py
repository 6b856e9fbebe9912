"""Seed-deterministic random networks and evidence draws.

All randomness comes from numpy's PCG64 bit generator, whose streams are
stable across platforms and releases for a fixed seed.  The draw order
is part of the contract: first every variable's cardinality, then per
variable its parent count, the parent set, and the conditional columns
(one flat Dirichlet per tail configuration, tail configurations in
canonical layout order).
"""

from __future__ import annotations

import numpy as np

from .model import BayesianNetwork, Evidence, Factor, Variable

RNG_ID = "numpy-pcg64"


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def generate_random_network(
    n: int, max_parents: int, max_card: int, seed
) -> BayesianNetwork:
    """Random DAG over n variables; variable i only draws parents below i."""
    if n < 1 or max_parents < 0 or max_card < 2:
        raise ValueError("need n >= 1, max_parents >= 0, max_card >= 2")
    rng = _rng(seed)
    cards = [int(rng.integers(2, max_card + 1)) for _ in range(n)]
    variables = tuple(
        Variable(i, f"V{i}", cards[i], tuple(f"s{k}" for k in range(cards[i])))
        for i in range(n)
    )
    parents: list[tuple[int, ...]] = []
    cpds: list[Factor] = []
    card_map = {i: cards[i] for i in range(n)}
    for i in range(n):
        limit = min(i, max_parents)
        count = int(rng.integers(0, limit + 1)) if limit else 0
        pa = tuple(sorted(int(p) for p in rng.choice(i, size=count, replace=False))) if count else ()
        parents.append(pa)
        domain = tuple(sorted({i, *pa}))
        shape = tuple(card_map[v] for v in domain)
        table = np.empty(shape)
        child_axis = domain.index(i)
        tail_axes = [a for a in range(len(domain)) if a != child_axis]
        tail_shape = tuple(shape[a] for a in tail_axes)
        for tail_idx in np.ndindex(tail_shape) if tail_shape else [()]:
            col = rng.dirichlet(np.ones(cards[i]))
            idx: list = [slice(None)] * len(domain)
            for a, s in zip(tail_axes, tail_idx):
                idx[a] = s
            table[tuple(idx)] = col
        cpds.append(Factor(domain, table, frozenset({i}), True))
    return BayesianNetwork(variables, tuple(parents), tuple(cpds), name=f"random{n}")


def sample_evidence(bn: BayesianNetwork, k: int, seed) -> Evidence:
    """k distinct variables uniformly without replacement, states uniform."""
    if k > bn.n:
        raise ValueError(f"cannot observe {k} of {bn.n} variables")
    rng = _rng(seed)
    chosen = sorted(int(v) for v in rng.choice(bn.n, size=k, replace=False))
    return Evidence({v: int(rng.integers(0, bn.variables[v].cardinality)) for v in chosen})
