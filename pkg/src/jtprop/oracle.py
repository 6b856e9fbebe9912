"""Ground-truth references for differential testing.

``enumerate_joint`` materializes the full joint table by direct numpy
broadcasting, with no junction tree, no message passing, and no head/tail
bookkeeping, so it shares no code path with the propagation engines.
``d_separated`` is reachability in the moralized ancestral graph, again
independent of the engines' factored-message machinery.
"""

from __future__ import annotations

import numpy as np

from .model import BayesianNetwork, Evidence, Factor

DEFAULT_CELL_CAP = 2**24


class OracleCapError(RuntimeError):
    """The requested joint table exceeds the configured cell cap."""


def enumerate_joint(
    bn: BayesianNetwork, evidence: Evidence, cap: int = DEFAULT_CELL_CAP
) -> Factor:
    """Unnormalized joint over all unobserved variables.

    Each conditional table is sliced at the observed states and broadcast
    into the full remaining domain; the total mass equals the probability
    of the evidence.
    """
    bn.check_evidence(evidence)
    cards = bn.cards()
    free = [v for v in range(bn.n) if v not in evidence]
    shape = tuple(cards[v] for v in free)
    cells = 1
    for c in shape:
        cells *= c
    if cells > cap:
        raise OracleCapError(f"joint would need {cells} cells, cap is {cap}")
    axis_of = {v: i for i, v in enumerate(free)}
    joint = np.ones(shape)
    for v in range(bn.n):
        cpd = bn.cpds[v]
        sub = cpd.table[tuple(evidence[u] if u in evidence else slice(None) for u in cpd.domain)]
        kept = [u for u in cpd.domain if u not in evidence]
        bshape = [1] * len(free)
        for u, c in zip(kept, sub.shape):
            bshape[axis_of[u]] = c
        joint = joint * sub.reshape(bshape)
    return Factor(tuple(free), joint)


def oracle_marginal(
    bn: BayesianNetwork, evidence: Evidence, v: int, cap: int = DEFAULT_CELL_CAP
) -> np.ndarray:
    """Posterior over v's states by brute-force summation."""
    if v in evidence:
        out = np.zeros(bn.variables[v].cardinality)
        out[evidence[v]] = 1.0
        return out
    joint = enumerate_joint(bn, evidence, cap)
    axis = joint.domain.index(v)
    others = tuple(i for i in range(len(joint.domain)) if i != axis)
    dist = joint.table.sum(axis=others) if others else joint.table.copy()
    total = dist.sum()
    if total == 0:
        raise ZeroDivisionError("evidence has zero probability")
    return dist / total


def d_separated(bn: BayesianNetwork, xs, ys, zs) -> bool:
    """True iff every path between xs and ys is blocked given zs.

    Implemented as connectivity in the moral graph of the ancestral set
    of xs | ys | zs, after deleting the conditioning vertices.
    """
    xs, ys, zs = set(xs), set(ys), set(zs)
    if xs & ys or xs & zs or ys & zs:
        raise ValueError("variable sets must be disjoint")
    for v in xs | ys | zs:
        if not 0 <= v < bn.n:
            raise ValueError(f"unknown variable id {v}")

    ancestral = set(xs | ys | zs)
    frontier = list(ancestral)
    while frontier:
        v = frontier.pop()
        for p in bn.parents[v]:
            if p not in ancestral:
                ancestral.add(p)
                frontier.append(p)

    adj: dict[int, set[int]] = {v: set() for v in ancestral}
    for v in ancestral:
        pa = [p for p in bn.parents[v] if p in ancestral]
        for p in pa:
            adj[v].add(p)
            adj[p].add(v)
        for i, p in enumerate(pa):
            for q in pa[i + 1 :]:
                adj[p].add(q)
                adj[q].add(p)

    seen = set(xs) - zs
    frontier = list(seen)
    while frontier:
        v = frontier.pop()
        if v in ys:
            return False
        for u in adj[v]:
            if u not in seen and u not in zs:
                seen.add(u)
                frontier.append(u)
    return not (seen & ys)
