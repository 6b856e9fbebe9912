"""Absorption-based propagation with materialized clique tables.

Each clique holds one dense table over its post-evidence domain, formed
as the product of its assigned evidence-reduced conditionals.  A message
marginalizes the sender onto the separator, divides out the old
separator table (0/0 = 0), and multiplies the ratio into the receiver.
After collect and distribute every clique and separator table is the
unnormalized joint marginal consistent with the evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..compilation import JunctionTree
from ..model import BayesianNetwork, Evidence, Factor
from . import common
from .common import ImpossibleEvidenceError, RunContext
from .trace import PropagationTrace, t_divide, t_marginalize_onto, t_multiply


@dataclass
class HuginState:
    ctx: RunContext
    clique_potentials: list[Factor]
    sep_potentials: dict[tuple[int, int], Factor]
    p_evidence: float = 0.0

    def belief(self, i: int) -> Factor:
        return self.clique_potentials[i]

    def clique_mass(self, i: int) -> float:
        return float(self.clique_potentials[i].table.sum())

    def marginal(self, v: int) -> np.ndarray:
        ev = self.ctx.evidence
        if v in ev:
            return common.point_distribution(self.ctx.bn.variables[v].cardinality, ev[v])
        i = common.smallest_clique_with(self.ctx, v)
        pot = self.clique_potentials[i]
        axes = tuple(k for k, u in enumerate(pot.domain) if u != v)
        dist = pot.table.sum(axis=axes) if axes else pot.table
        return common.normalized(np.asarray(dist, dtype=float).reshape(-1))

    def prob_evidence(self, clique: int | None = None) -> float:
        if clique is None:
            return self.p_evidence
        total = 1.0
        for comp, root in zip(self.ctx.components, self.ctx.roots):
            total *= self.clique_mass(clique if clique in comp else root)
        return total


def hugin_absorb(state: HuginState, frm: int, to: int, trace: PropagationTrace) -> HuginState:
    """Pass one message: update the separator and multiply the ratio in."""
    if to not in state.ctx.jt.neighbors(frm):
        raise common.SchedulingError(f"cliques {frm} and {to} are not adjacent")
    edge = (min(frm, to), max(frm, to))
    sep_dom = state.ctx.sep_domains[edge]
    new_sep = t_marginalize_onto(trace, state.clique_potentials[frm], sep_dom)
    ratio = t_divide(trace, new_sep, state.sep_potentials[edge])
    state.clique_potentials[to] = t_multiply(trace, state.clique_potentials[to], ratio)
    state.sep_potentials[edge] = new_sep
    return state


def hugin_propagate(
    jt: JunctionTree, bn: BayesianNetwork, evidence: Evidence, root: int = 0
) -> tuple[HuginState, PropagationTrace]:
    """Two-phase rooted propagation; raises on zero-probability evidence."""
    ctx = common.prepare(jt, bn, evidence, root)
    cards = bn.cards()
    grouped = common.clique_factors(ctx)
    potentials = [
        common.materialize(grouped[i], ctx.clique_domains[i], cards)
        for i in range(jt.n_cliques)
    ]
    seps = {e: Factor.unity(d, cards) for e, d in ctx.sep_domains.items()}
    state = HuginState(ctx, potentials, seps)
    trace = PropagationTrace()

    collect, distribute = common.schedule(ctx)
    for frm, to in collect:
        hugin_absorb(state, frm, to, trace)
    for r in ctx.roots:
        if state.clique_mass(r) == 0.0:
            raise ImpossibleEvidenceError("evidence has zero probability", trace)
    for frm, to in distribute:
        hugin_absorb(state, frm, to, trace)

    state.p_evidence = 1.0
    for r in ctx.roots:
        state.p_evidence *= state.clique_mass(r)
    return state, trace
