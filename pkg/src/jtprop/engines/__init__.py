"""Three propagation architectures behind one query contract."""

from __future__ import annotations

import numpy as np

from .common import ImpossibleEvidenceError, SchedulingError
from .hugin import HuginState, hugin_absorb, hugin_propagate
from .lazy import LazyState, eliminate_variables, lazy_message, lazy_propagate
from .shafer_shenoy import SSState, ss_message, ss_propagate
from .trace import PropagationTrace

ENGINES = ("hugin", "ss", "lazy")

_PROPAGATORS = {
    "hugin": hugin_propagate,
    "ss": ss_propagate,
    "lazy": lazy_propagate,
}


def propagate(engine: str, jt, bn, evidence):
    """Run the named engine with its default schedule, rooted at clique 0."""
    try:
        run = _PROPAGATORS[engine]
    except KeyError:
        raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}") from None
    return run(jt, bn, evidence)


def marginal(state, v: int) -> np.ndarray:
    """Normalized posterior over v's states from a finished run."""
    return state.marginal(v)


def prob_evidence(state, clique: int | None = None) -> float:
    """Total mass of a calibrated clique belief (the default picks roots)."""
    return state.prob_evidence(clique)


__all__ = [
    "ENGINES",
    "HuginState",
    "ImpossibleEvidenceError",
    "LazyState",
    "PropagationTrace",
    "SSState",
    "SchedulingError",
    "eliminate_variables",
    "hugin_absorb",
    "hugin_propagate",
    "lazy_message",
    "lazy_propagate",
    "marginal",
    "prob_evidence",
    "propagate",
    "ss_message",
    "ss_propagate",
]
