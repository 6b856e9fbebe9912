"""Discrete variables, dense factors, Bayesian networks, and evidence.

A factor is an immutable dense table over an ascending tuple of variable
ids, stored with the last domain variable varying fastest.  Factors carry
head/tail bookkeeping: a factor flagged ``cpd_pure`` is known to sum to
one over its head variables for every configuration of its tail.  The
propagation engines use that flag to skip provably trivial work, so the
flag rules below are deliberately conservative: whenever an operation
cannot guarantee the property, the result is opaque (``cpd_pure=False``,
empty head), which forfeits the shortcut but never correctness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PROB_TOL = 1e-9  # probability identities (CPD normalization, posteriors)
ALG_TOL = 1e-12  # algebraic identities (commutativity etc.)


class StructuralError(ValueError):
    """Domains, cardinalities or heads used inconsistently."""


class InconsistencyError(ArithmeticError):
    """Nonzero mass divided by zero support."""


class CpdValidationError(ValueError):
    """A conditional table does not normalize over its head."""


@dataclass(frozen=True)
class Variable:
    """A discrete variable with named states."""

    id: int
    name: str
    cardinality: int
    states: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.id < 0:
            raise StructuralError(f"variable id must be non-negative, got {self.id}")
        if self.cardinality < 1:
            raise StructuralError(f"{self.name}: cardinality must be >= 1")
        if len(self.states) != self.cardinality:
            raise StructuralError(
                f"{self.name}: {len(self.states)} state labels for cardinality {self.cardinality}"
            )
        if len(set(self.states)) != len(self.states):
            raise StructuralError(f"{self.name}: state labels must be distinct")


@dataclass(frozen=True)
class Factor:
    """Dense non-negative table over an ascending variable-id domain.

    ``table`` has one axis per domain variable, in domain order; its
    C-order flattening is the canonical value layout.  ``head`` together
    with ``cpd_pure`` implements the unity shortcut: if ``cpd_pure`` is
    set, summing the table over every head variable yields all ones.
    """

    domain: tuple[int, ...]
    table: np.ndarray
    head: frozenset[int] = frozenset()
    cpd_pure: bool = False

    def __post_init__(self) -> None:
        if tuple(sorted(set(self.domain))) != self.domain:
            raise StructuralError(f"domain must be strictly ascending, got {self.domain}")
        table = np.asarray(self.table, dtype=np.float64)
        if table.ndim != len(self.domain):
            raise StructuralError(
                f"table has {table.ndim} axes for a {len(self.domain)}-variable domain"
            )
        if table.size and table.min() < 0:
            raise StructuralError("factor values must be non-negative")
        if not self.head <= set(self.domain):
            raise StructuralError(f"head {set(self.head)} not contained in domain {self.domain}")
        if self.head and not self.cpd_pure:
            raise StructuralError("non-empty head requires cpd_pure")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "head", frozenset(self.head))

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def from_values(domain, cards, values, head=frozenset(), cpd_pure=False) -> "Factor":
        """Build a factor from a flat value sequence in canonical layout."""
        domain = tuple(domain)
        shape = tuple(cards[v] for v in domain)
        table = np.asarray(values, dtype=np.float64)
        expected = int(np.prod(shape)) if shape else 1
        if table.size != expected:
            raise StructuralError(f"expected {expected} values for domain {domain}, got {table.size}")
        return Factor(domain, table.reshape(shape), frozenset(head), cpd_pure)

    @staticmethod
    def unity(domain, cards) -> "Factor":
        """All-ones factor; the multiplicative identity on its domain."""
        domain = tuple(domain)
        shape = tuple(cards[v] for v in domain)
        return Factor(domain, np.ones(shape), frozenset(), True)

    @staticmethod
    def scalar(value: float) -> "Factor":
        return Factor((), np.asarray(float(value)))

    # -- views ----------------------------------------------------------------

    @property
    def tail(self) -> frozenset[int]:
        return frozenset(self.domain) - self.head

    @property
    def values(self) -> np.ndarray:
        """Canonical flat layout: last domain variable varying fastest."""
        return self.table.ravel()

    @property
    def size(self) -> int:
        return int(self.table.size)

    @property
    def is_unity(self) -> bool:
        """Provably all ones: pure with nothing left in the head."""
        return self.cpd_pure and not self.head

    def card(self, v: int) -> int:
        return self.table.shape[self.domain.index(v)]

    def cards(self) -> dict[int, int]:
        return dict(zip(self.domain, self.table.shape))

    def __mul__(self, other: "Factor") -> "Factor":
        return multiply(self, other)


@dataclass(frozen=True)
class Evidence:
    """Partial assignment of variable ids to observed state indices."""

    assignments: dict[int, int] = field(default_factory=dict)

    def __contains__(self, v: int) -> bool:
        return v in self.assignments

    def __len__(self) -> int:
        return len(self.assignments)

    def __getitem__(self, v: int) -> int:
        return self.assignments[v]

    def items(self):
        return sorted(self.assignments.items())


@dataclass(frozen=True)
class BayesianNetwork:
    """A DAG over discrete variables with one conditional table per variable.

    The table for variable ``v`` spans the sorted domain ``{v} | parents(v)``
    with head ``{v}``; construction verifies acyclicity and that every
    table normalizes over its head to within ``PROB_TOL``.
    """

    variables: tuple[Variable, ...]
    parents: tuple[tuple[int, ...], ...]
    cpds: tuple[Factor, ...]
    name: str = "net"

    def __post_init__(self) -> None:
        n = len(self.variables)
        for i, var in enumerate(self.variables):
            if var.id != i:
                raise StructuralError(f"variable ids must be dense, got {var.id} at position {i}")
        if len(self.parents) != n or len(self.cpds) != n:
            raise StructuralError("parents and cpds must align with variables")
        self._check_acyclic()
        cards = {v.id: v.cardinality for v in self.variables}
        for v, (pa, cpd) in enumerate(zip(self.parents, self.cpds)):
            want = tuple(sorted({v, *pa}))
            if cpd.domain != want:
                raise StructuralError(f"cpd of {self.variables[v].name} spans {cpd.domain}, expected {want}")
            if cpd.head != {v} or not cpd.cpd_pure:
                raise StructuralError(f"cpd of {self.variables[v].name} must have head {{{v}}}")
            if cpd.cards() != {u: cards[u] for u in want}:
                raise StructuralError(f"cpd of {self.variables[v].name} disagrees on cardinalities")
            validate_cpd(cpd)

    def _check_acyclic(self) -> None:
        seen: set[int] = set()
        stack: set[int] = set()

        def visit(v: int) -> None:
            if v in stack:
                raise StructuralError(f"parent relation is cyclic at {self.variables[v].name}")
            if v in seen:
                return
            stack.add(v)
            for p in self.parents[v]:
                visit(p)
            stack.discard(v)
            seen.add(v)

        for v in range(len(self.variables)):
            visit(v)

    @property
    def n(self) -> int:
        return len(self.variables)

    def cards(self) -> dict[int, int]:
        return {v.id: v.cardinality for v in self.variables}

    def by_name(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)

    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v.id: [] for v in self.variables}
        for v, pa in enumerate(self.parents):
            for p in pa:
                out[p].append(v)
        return out

    def check_evidence(self, e: Evidence) -> None:
        for v, s in e.items():
            if not 0 <= v < self.n:
                raise StructuralError(f"evidence on unknown variable id {v}")
            if not 0 <= s < self.variables[v].cardinality:
                raise StructuralError(
                    f"evidence state {s} out of range for {self.variables[v].name}"
                )


# -- factor operations ---------------------------------------------------------


def _aligned(f: Factor, union: tuple[int, ...]) -> np.ndarray:
    """View of f's table broadcastable over the union domain."""
    shape = [1] * len(union)
    for v, c in zip(f.domain, f.table.shape):
        shape[union.index(v)] = c
    return f.table.reshape(shape)


def multiply(f: Factor, g: Factor) -> Factor:
    """Pointwise product over the union of the two domains.

    The product of two pure factors with disjoint heads is pure with the
    union head; any other combination is opaque.
    """
    for v in set(f.domain) & set(g.domain):
        if f.card(v) != g.card(v):
            raise StructuralError(f"cardinality mismatch on shared variable {v}")
    union = tuple(sorted(set(f.domain) | set(g.domain)))
    table = _aligned(f, union) * _aligned(g, union)
    pure = f.cpd_pure and g.cpd_pure and not (f.head & g.head)
    head = (f.head | g.head) if pure else frozenset()
    return Factor(union, table, head, pure)


def marginalize_out(f: Factor, v: int) -> Factor:
    """Sum the table over one variable, dropping it from the domain."""
    if v not in f.domain:
        raise StructuralError(f"variable {v} not in domain {f.domain}")
    axis = f.domain.index(v)
    table = f.table.sum(axis=axis)
    domain = tuple(u for u in f.domain if u != v)
    if f.cpd_pure and v in f.head:
        return Factor(domain, table, f.head - {v}, True)
    return Factor(domain, table)


def reduce(f: Factor, e: Evidence) -> Factor:
    """Restrict to the subtable consistent with the evidence.

    Observed variables leave the domain.  Purity survives only if every
    reduced variable sat in the tail; slicing a head variable destroys
    the normalization guarantee.
    """
    hit = [v for v in f.domain if v in e]
    if not hit:
        return f
    indexer = tuple(e[v] if v in e else slice(None) for v in f.domain)
    table = f.table[indexer]
    domain = tuple(v for v in f.domain if v not in e)
    if f.cpd_pure and all(v in f.tail for v in hit):
        return Factor(domain, table, f.head, True)
    return Factor(domain, table)


def divide(f: Factor, g: Factor) -> Factor:
    """Pointwise ratio with the 0/0 = 0 convention.

    A nonzero numerator over a zero denominator means the evidence
    contradicts mass established earlier in the run.
    """
    if not set(g.domain) <= set(f.domain):
        raise StructuralError(f"divisor domain {g.domain} not within {f.domain}")
    denom = _aligned(g, f.domain)
    num = f.table
    zero = denom == 0
    if bool(np.any(zero & (np.broadcast_to(num, np.broadcast_shapes(num.shape, denom.shape)) != 0))):
        raise InconsistencyError("nonzero mass divided by zero support")
    out = np.divide(num, denom, out=np.zeros(np.broadcast_shapes(num.shape, denom.shape)), where=~zero)
    return Factor(f.domain, out)


def validate_cpd(f: Factor) -> None:
    """Check that every head-sum of a single-head conditional equals one."""
    if len(f.head) != 1:
        raise StructuralError(f"validate_cpd needs a single head variable, got {set(f.head)}")
    (h,) = f.head
    sums = f.table.sum(axis=f.domain.index(h))
    bad = np.abs(sums - 1.0) > PROB_TOL
    if bool(np.any(bad)):
        tail = tuple(v for v in f.domain if v != h)
        idx = np.unravel_index(int(np.argmax(bad)), sums.shape) if sums.shape else ()
        where = ", ".join(f"{v}={i}" for v, i in zip(tail, idx)) or "()"
        raise CpdValidationError(
            f"head {h} sums to {float(sums[idx]):.12g} at tail ({where})"
        )
