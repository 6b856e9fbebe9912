"""Operation counters for one propagation run.

Counters cover the message-passing phases only (collect and distribute);
setting up a run — slicing tables by evidence, assembling initial clique
potentials — is not counted.  A sum-out increments ``sum_outs`` only when
the table it reads has at least two cells, so pure scalar bookkeeping
never inflates the metric.  ``ops`` keeps the domain of every counted
operation for structural assertions in tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import model
from ..model import Factor


@dataclass
class PropagationTrace:
    sum_outs: int = 0
    mults: int = 0
    divs: int = 0
    cells_touched: int = 0
    max_table: int = 0
    ops: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)

    def _wrote(self, size: int) -> None:
        self.cells_touched += size
        if size > self.max_table:
            self.max_table = size

    def counters(self) -> dict[str, int]:
        return {
            "sum_outs": self.sum_outs,
            "mults": self.mults,
            "divs": self.divs,
            "cells_touched": self.cells_touched,
            "max_table": self.max_table,
        }


def t_multiply(trace: PropagationTrace, f: Factor, g: Factor) -> Factor:
    out = model.multiply(f, g)
    trace.mults += 1
    trace.ops.append(("mul", out.domain))
    trace._wrote(out.size)
    return out


def t_sum_out(trace: PropagationTrace, f: Factor, v: int) -> Factor:
    out = model.marginalize_out(f, v)
    if f.size >= 2:
        trace.sum_outs += 1
        trace.ops.append(("sum", f.domain))
    trace._wrote(out.size)
    return out


def t_divide(trace: PropagationTrace, f: Factor, g: Factor) -> Factor:
    out = model.divide(f, g)
    trace.divs += 1
    trace.ops.append(("div", out.domain))
    trace._wrote(out.size)
    return out


def t_marginalize_onto(trace: PropagationTrace, f: Factor, keep) -> Factor:
    """Sum out every variable not in ``keep``, lowest id first."""
    keep = set(keep)
    out = f
    for v in [u for u in f.domain if u not in keep]:
        out = t_sum_out(trace, out, v)
    return out


def scratch() -> PropagationTrace:
    """Throwaway trace for query-time work that must not count."""
    return PropagationTrace()
