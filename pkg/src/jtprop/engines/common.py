"""Shared run setup for the three propagation architectures.

Evidence is applied by subtable restriction: observed variables leave
factor domains entirely, so clique and separator domains shrink for the
duration of a run.  The ``RunContext`` snapshots everything a run needs —
reduced tables, post-evidence domains, per-component roots, and the
collect/distribute schedules — and is never mutated by the engines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import model
from ..compilation import JunctionTree
from ..model import BayesianNetwork, Evidence, Factor
from .trace import PropagationTrace, t_multiply, t_sum_out


class ImpossibleEvidenceError(ValueError):
    """The observed states carry zero probability mass.

    Carries the trace accumulated up to the point of detection.
    """

    def __init__(self, msg: str, trace: PropagationTrace | None = None):
        super().__init__(msg)
        self.trace = trace


class SchedulingError(RuntimeError):
    """A message was requested before its prerequisites were available."""


@dataclass(frozen=True)
class RunContext:
    jt: JunctionTree
    bn: BayesianNetwork
    evidence: Evidence
    reduced: tuple[Factor, ...]  # one evidence-reduced table per variable
    clique_domains: tuple[tuple[int, ...], ...]  # post-evidence
    sep_domains: dict[tuple[int, int], tuple[int, ...]]  # post-evidence
    components: tuple[tuple[int, ...], ...]
    roots: tuple[int, ...]

    def sep_domain(self, a: int, b: int) -> tuple[int, ...]:
        return self.sep_domains[(min(a, b), max(a, b))]


def prepare(jt: JunctionTree, bn: BayesianNetwork, evidence: Evidence, root: int = 0) -> RunContext:
    """Validate inputs and snapshot the per-run derived structure.

    ``root`` selects the root within its own connected component; every
    other component is rooted at its lowest clique index.
    """
    if jt.assignment is None:
        raise model.StructuralError("junction tree has no CPD assignment")
    bn.check_evidence(evidence)
    if not 0 <= root < jt.n_cliques:
        raise model.StructuralError(f"root clique {root} out of range")
    reduced = tuple(model.reduce(bn.cpds[v], evidence) for v in range(bn.n))
    clique_domains = tuple(
        tuple(v for v in clq if v not in evidence) for clq in jt.cliques
    )
    sep_domains = {
        e: tuple(v for v in s if v not in evidence) for e, s in jt.separators.items()
    }
    components = tuple(tuple(c) for c in jt.components())
    roots = tuple(root if root in comp else comp[0] for comp in components)
    return RunContext(jt, bn, evidence, reduced, clique_domains, sep_domains, components, roots)


def schedule(ctx: RunContext) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Directed (sender, receiver) lists for collect and distribute.

    Children are visited in ascending clique order, so the schedule is a
    deterministic function of the tree.
    """
    collect: list[tuple[int, int]] = []
    distribute: list[tuple[int, int]] = []
    for comp, root in zip(ctx.components, ctx.roots):
        seen = {root}
        stack = [root]
        order: list[tuple[int, int]] = []  # (parent, child) in discovery order
        while stack:
            node = stack.pop()
            for nb in reversed(ctx.jt.neighbors(node)):
                if nb not in seen:
                    seen.add(nb)
                    order.append((node, nb))
                    stack.append(nb)
        collect.extend((child, parent) for parent, child in reversed(order))
        distribute.extend(order)
    return collect, distribute


def clique_factors(ctx: RunContext) -> list[list[Factor]]:
    """Evidence-reduced tables grouped by their assigned clique."""
    out: list[list[Factor]] = [[] for _ in range(ctx.jt.n_cliques)]
    for v in range(ctx.bn.n):
        out[ctx.jt.assignment[v]].append(ctx.reduced[v])
    return out


def materialize(factors, domain: tuple[int, ...], cards: dict[int, int]) -> Factor:
    """Product of factors broadcast over a fixed domain (setup work; uncounted)."""
    out = Factor.unity(domain, cards)
    for f in factors:
        out = model.multiply(out, f)
    return out


def belief_product(factors, domain, cards, trace: PropagationTrace) -> Factor:
    """Counted product of factors over a fixed domain."""
    out = Factor.unity(domain, cards)
    for f in factors:
        out = t_multiply(trace, out, f)
    return out


def point_distribution(card: int, state: int) -> np.ndarray:
    out = np.zeros(card)
    out[state] = 1.0
    return out


def smallest_clique_with(ctx: RunContext, v: int) -> int:
    """Lowest-cost clique containing v, by post-evidence state space."""
    cards = ctx.bn.cards()
    best = None
    for i, dom in enumerate(ctx.clique_domains):
        if v in dom:
            space = 1
            for u in dom:
                space *= cards[u]
            key = (space, i)
            if best is None or key < best:
                best = key
    if best is None:
        raise model.StructuralError(f"no clique contains variable {v}")
    return best[1]


def normalized(dist: np.ndarray) -> np.ndarray:
    total = dist.sum()
    if total == 0:
        raise ImpossibleEvidenceError("zero total mass in queried clique")
    return dist / total
