"""Shafer-Shenoy propagation: two directed messages per separator.

Clique tables are assembled once and never mutated; a message from i to
j is the clique table times every incoming message except j's, summed
onto the separator.  No division ever happens.  Messages can be driven
either by the rooted collect/distribute schedule or by asynchronous
firing (a clique fires toward a neighbor once it has heard from all the
others); the resulting message sets are identical because each directed
message is a pure function of the tree and the evidence, computed with a
fixed operand order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..compilation import JunctionTree
from ..model import BayesianNetwork, Evidence, Factor
from . import common
from .common import ImpossibleEvidenceError, RunContext, SchedulingError
from .trace import PropagationTrace, t_marginalize_onto, t_multiply

SCHEDULES = ("rooted", "async")


@dataclass
class SSState:
    ctx: RunContext
    psi: list[Factor]
    messages: dict[tuple[int, int], Factor]

    def belief(self, i: int, trace: PropagationTrace | None = None) -> Factor:
        own_trace = trace if trace is not None else PropagationTrace()
        out = self.psi[i]
        for nb in self.ctx.jt.neighbors(i):
            out = t_multiply(own_trace, out, self.messages[(nb, i)])
        return out

    def clique_mass(self, i: int) -> float:
        return float(self.belief(i).table.sum())

    def marginal(self, v: int) -> np.ndarray:
        ev = self.ctx.evidence
        if v in ev:
            return common.point_distribution(self.ctx.bn.variables[v].cardinality, ev[v])
        i = common.smallest_clique_with(self.ctx, v)
        pot = self.belief(i)
        axes = tuple(k for k, u in enumerate(pot.domain) if u != v)
        dist = pot.table.sum(axis=axes) if axes else pot.table
        return common.normalized(np.asarray(dist, dtype=float).reshape(-1))

    def prob_evidence(self, clique: int | None = None) -> float:
        total = 1.0
        for comp, root in zip(self.ctx.components, self.ctx.roots):
            pick = clique if clique is not None and clique in comp else root
            total *= self.clique_mass(pick)
        return total


def ss_message(state: SSState, frm: int, to: int, trace: PropagationTrace) -> Factor:
    """Compute, store, and return the directed message frm -> to."""
    jt = state.ctx.jt
    if to not in jt.neighbors(frm):
        raise SchedulingError(f"cliques {frm} and {to} are not adjacent")
    prod = state.psi[frm]
    for nb in jt.neighbors(frm):
        if nb == to:
            continue
        if (nb, frm) not in state.messages:
            raise SchedulingError(f"message {nb} -> {frm} not yet available")
        prod = t_multiply(trace, prod, state.messages[(nb, frm)])
    msg = t_marginalize_onto(trace, prod, state.ctx.sep_domain(frm, to))
    state.messages[(frm, to)] = msg
    return msg


def ss_propagate(
    jt: JunctionTree,
    bn: BayesianNetwork,
    evidence: Evidence,
    schedule: str = "rooted",
    root: int = 0,
) -> tuple[SSState, PropagationTrace]:
    """Send both messages over every separator under the chosen schedule."""
    if schedule not in SCHEDULES:
        raise ValueError(f"unknown schedule {schedule!r}")
    ctx = common.prepare(jt, bn, evidence, root)
    cards = bn.cards()
    grouped = common.clique_factors(ctx)
    psi = [
        common.materialize(grouped[i], ctx.clique_domains[i], cards)
        for i in range(jt.n_cliques)
    ]
    state = SSState(ctx, psi, {})
    trace = PropagationTrace()

    if schedule == "rooted":
        collect, distribute = common.schedule(ctx)
        for frm, to in collect:
            ss_message(state, frm, to, trace)
        _check_mass(state, trace)
        for frm, to in distribute:
            ss_message(state, frm, to, trace)
    else:
        pending = {(a, b) for a, b in jt.edges} | {(b, a) for a, b in jt.edges}
        while pending:
            fired = None
            # scan in descending order: deliberately unlike the rooted schedule
            for frm, to in sorted(pending, reverse=True):
                others = [nb for nb in jt.neighbors(frm) if nb != to]
                if all((nb, frm) in state.messages for nb in others):
                    fired = (frm, to)
                    break
            if fired is None:
                raise SchedulingError("asynchronous firing deadlocked")
            ss_message(state, fired[0], fired[1], trace)
            pending.discard(fired)
        _check_mass(state, trace)
    return state, trace


def _check_mass(state: SSState, trace: PropagationTrace) -> None:
    for r in state.ctx.roots:
        if state.clique_mass(r) == 0.0:
            raise ImpossibleEvidenceError("evidence has zero probability", trace)
