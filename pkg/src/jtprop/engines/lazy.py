"""Lazy propagation: factored clique potentials and factored messages.

Cliques keep their evidence-reduced conditionals as a set of factors
instead of one multiplied table, and messages are sets of factors with
domains inside the separator.  Work is deferred until a message forces
variables out of scope, and two structural shortcuts keep that work
small:

* barren pruning: a pure factor whose head variables are all scheduled
  for elimination and appear in no other relevant factor sums to an
  all-ones table, so it is dropped without touching a single cell;
* peeling: remaining variables are eliminated greedily, always picking
  the variable whose elimination materializes the smallest table, and a
  variable living in exactly one factor is summed out with no product.

Factors received from the target neighbor are never folded back into the
reverse message — discarding them plays the role division plays in the
absorption architecture.  Zero-variable factors arising at setup (fully
observed conditionals) go to a per-run scalar accumulator that only
feeds the probability of evidence; they never travel in messages.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..compilation import JunctionTree
from ..model import BayesianNetwork, Evidence, Factor
from . import common
from .common import ImpossibleEvidenceError, RunContext, SchedulingError
from .trace import PropagationTrace, scratch, t_multiply, t_sum_out


@dataclass
class LazyState:
    ctx: RunContext
    clique_sets: list[list[Factor]]
    messages: dict[tuple[int, int], tuple[Factor, ...]] = field(default_factory=dict)
    scalar_acc: float = 1.0
    barren: bool = True

    def relevant(self, i: int, exclude: int | None = None) -> list[Factor]:
        """The clique's own factors plus incoming sets, minus one neighbor's."""
        out = list(self.clique_sets[i])
        for nb in self.ctx.jt.neighbors(i):
            if nb == exclude:
                continue
            if (nb, i) in self.messages:
                out.extend(self.messages[(nb, i)])
        return out

    def belief(self, i: int, trace: PropagationTrace) -> Factor:
        cards = self.ctx.bn.cards()
        return common.belief_product(self.relevant(i), self.ctx.clique_domains[i], cards, trace)

    def clique_mass(self, i: int) -> float:
        return float(self.belief(i, scratch()).table.sum())

    def marginal(self, v: int) -> np.ndarray:
        ev = self.ctx.evidence
        if v in ev:
            return common.point_distribution(self.ctx.bn.variables[v].cardinality, ev[v])
        i = common.smallest_clique_with(self.ctx, v)
        elim = set(self.ctx.clique_domains[i]) - {v}
        left = eliminate_variables(self.relevant(i), elim, scratch(), self.barren)
        card = self.ctx.bn.variables[v].cardinality
        dist = np.ones(card)
        for f in left:
            dist = dist * (f.table if f.domain == (v,) else float(f.table))
        return common.normalized(dist)

    def prob_evidence(self, clique: int | None = None) -> float:
        total = self.scalar_acc
        for comp, root in zip(self.ctx.components, self.ctx.roots):
            pick = clique if clique is not None and clique in comp else root
            total *= self.clique_mass(pick)
        return total


def eliminate_variables(
    factors, elim, trace: PropagationTrace, barren: bool = True
) -> list[Factor]:
    """Remove every variable in ``elim`` from a set of factors.

    Returns the surviving factors (scalars included); provably all-ones
    results are dropped.  With ``barren`` disabled the structural
    shortcut is skipped and everything goes through peeling, which
    changes cost but never values.
    """
    elim = set(elim)
    work = [f for f in factors if not f.is_unity]

    if barren:
        changed = True
        while changed:
            changed = False
            for k, f in enumerate(work):
                if not f.cpd_pure or not f.head <= elim:
                    continue
                others = set()
                for j, g in enumerate(work):
                    if j != k:
                        others.update(g.domain)
                if f.head & others:
                    continue
                del work[k]
                changed = True
                break

    def table_size(domain) -> int:
        size = 1
        for f in work:
            for v, c in zip(f.domain, f.table.shape):
                if v in domain:
                    size *= c
                    domain = domain - {v}
        return size

    while True:
        present: dict[int, list[int]] = {}
        for k, f in enumerate(work):
            for v in f.domain:
                if v in elim:
                    present.setdefault(v, []).append(k)
        if not present:
            break
        best = None
        for v, holders in present.items():
            out_domain = set()
            for k in holders:
                out_domain.update(work[k].domain)
            out_domain.discard(v)
            key = (table_size(out_domain), v)
            if best is None or key < best:
                best = key
                best_v, best_holders = v, holders
        if len(best_holders) == 1:
            res = t_sum_out(trace, work[best_holders[0]], best_v)
        else:
            prod = work[best_holders[0]]
            for k in best_holders[1:]:
                prod = t_multiply(trace, prod, work[k])
            res = t_sum_out(trace, prod, best_v)
        for k in sorted(best_holders, reverse=True):
            del work[k]
        if not res.is_unity:
            work.append(res)
    return work


def lazy_message(state: LazyState, frm: int, to: int, trace: PropagationTrace) -> tuple[Factor, ...]:
    """Compute, store, and return the factored message frm -> to."""
    jt = state.ctx.jt
    if to not in jt.neighbors(frm):
        raise SchedulingError(f"cliques {frm} and {to} are not adjacent")
    for nb in jt.neighbors(frm):
        if nb != to and (nb, frm) not in state.messages:
            raise SchedulingError(f"message {nb} -> {frm} not yet available")
    relevant = state.relevant(frm, exclude=to)
    elim = set(state.ctx.clique_domains[frm]) - set(state.ctx.sep_domain(frm, to))
    msg = tuple(eliminate_variables(relevant, elim, trace, state.barren))
    state.messages[(frm, to)] = msg
    return msg


def lazy_propagate(
    jt: JunctionTree,
    bn: BayesianNetwork,
    evidence: Evidence,
    root: int = 0,
    barren: bool = True,
) -> tuple[LazyState, PropagationTrace]:
    """Two-phase rooted propagation over factored potentials."""
    ctx = common.prepare(jt, bn, evidence, root)
    clique_sets: list[list[Factor]] = [[] for _ in range(jt.n_cliques)]
    scalar_acc = 1.0
    for v in range(bn.n):
        f = ctx.reduced[v]
        if not f.domain:
            scalar_acc *= float(f.table)
        elif not f.is_unity:
            clique_sets[jt.assignment[v]].append(f)
    state = LazyState(ctx, clique_sets, scalar_acc=scalar_acc, barren=barren)
    trace = PropagationTrace()

    collect, distribute = common.schedule(ctx)
    for frm, to in collect:
        lazy_message(state, frm, to, trace)
    if state.prob_evidence() == 0.0:
        raise ImpossibleEvidenceError("evidence has zero probability", trace)
    for frm, to in distribute:
        lazy_message(state, frm, to, trace)
    return state, trace
