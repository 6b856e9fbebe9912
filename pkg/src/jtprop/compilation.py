"""Secondary-structure construction: moral graph, triangulation, junction tree.

The pipeline is the classical one: moralize the DAG, triangulate greedily
under a vertex-selection heuristic, collect the maximal cliques of the
filled graph, join them by a maximum-weight spanning tree on separator
size, and assign each conditional table to one containing clique.  All
tie-breaking is deterministic (lowest variable id, then smallest state
space, then lexicographic clique indices) so compiled trees are
reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import BayesianNetwork, StructuralError

HEURISTICS = ("min-weight", "min-fill")


class RipViolationError(ValueError):
    """The running-intersection property fails somewhere in the tree."""


class CompilationError(RuntimeError):
    """Internal contract broken while building the secondary structure."""


@dataclass
class UndirectedGraph:
    """Symmetric adjacency over dense vertex ids; no self-loops."""

    n: int
    adj: list[set[int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.adj:
            self.adj = [set() for _ in range(self.n)]

    def add_edge(self, a: int, b: int) -> None:
        if a == b:
            raise StructuralError(f"self-loop at {a}")
        self.adj[a].add(b)
        self.adj[b].add(a)

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.adj[a]

    def edges(self) -> set[frozenset[int]]:
        return {frozenset((a, b)) for a in range(self.n) for b in self.adj[a] if a < b}

    def copy(self) -> "UndirectedGraph":
        return UndirectedGraph(self.n, [set(s) for s in self.adj])


class JunctionTree:
    """Cliques, tree edges, per-edge separators, and the CPD assignment.

    Edges may form a forest when the moral graph is disconnected; each
    connected component is then propagated independently.
    """

    def __init__(self, cliques, edges, assignment=None):
        self.cliques: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(c)) for c in cliques)
        self.edges: tuple[tuple[int, int], ...] = tuple(
            (min(a, b), max(a, b)) for a, b in edges
        )
        if len(set(self.edges)) != len(self.edges):
            raise StructuralError("duplicate junction-tree edge")
        k = len(self.cliques)
        self._adj: list[list[int]] = [[] for _ in range(k)]
        for a, b in self.edges:
            self._adj[a].append(b)
            self._adj[b].append(a)
        for nbrs in self._adj:
            nbrs.sort()
        self._check_forest()
        self.separators: dict[tuple[int, int], tuple[int, ...]] = {
            (a, b): tuple(sorted(set(self.cliques[a]) & set(self.cliques[b])))
            for a, b in self.edges
        }
        self.assignment: dict[int, int] | None = (
            dict(assignment) if assignment is not None else None
        )

    def _check_forest(self) -> None:
        seen: set[int] = set()
        for start in range(len(self.cliques)):
            if start in seen:
                continue
            stack = [(start, -1)]
            seen.add(start)
            while stack:
                node, parent = stack.pop()
                for nb in self._adj[node]:
                    if nb == parent:
                        continue
                    if nb in seen:
                        raise StructuralError("junction-tree edges contain a cycle")
                    seen.add(nb)
                    stack.append((nb, node))

    @property
    def n_cliques(self) -> int:
        return len(self.cliques)

    def neighbors(self, i: int) -> list[int]:
        return self._adj[i]

    def separator(self, a: int, b: int) -> tuple[int, ...]:
        return self.separators[(min(a, b), max(a, b))]

    def components(self) -> list[list[int]]:
        """Connected components, each as a sorted clique-index list."""
        seen: set[int] = set()
        comps: list[list[int]] = []
        for start in range(len(self.cliques)):
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            queue = [start]
            while queue:
                node = queue.pop()
                for nb in self._adj[node]:
                    if nb not in seen:
                        seen.add(nb)
                        comp.append(nb)
                        queue.append(nb)
            comps.append(sorted(comp))
        return comps

    def path(self, a: int, b: int) -> list[int] | None:
        """Clique indices from a to b inclusive, or None across components."""
        prev: dict[int, int] = {a: a}
        queue = [a]
        while queue:
            node = queue.pop(0)
            if node == b:
                out = [b]
                while out[-1] != a:
                    out.append(prev[out[-1]])
                return out[::-1]
            for nb in self._adj[node]:
                if nb not in prev:
                    prev[nb] = node
                    queue.append(nb)
        return None


# -- pipeline stages -------------------------------------------------------------


def moralize(bn: BayesianNetwork) -> UndirectedGraph:
    """Undirected skeleton plus an edge between every pair of co-parents."""
    g = UndirectedGraph(bn.n)
    for v, pa in enumerate(bn.parents):
        for p in pa:
            g.add_edge(v, p)
        for i, p in enumerate(pa):
            for q in pa[i + 1 :]:
                if p != q:
                    g.add_edge(p, q)
    return g


def _fill_needed(g: UndirectedGraph, v: int) -> int:
    nbrs = sorted(g.adj[v])
    missing = 0
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1 :]:
            if not g.has_edge(a, b):
                missing += 1
    return missing


def _cluster_weight(g: UndirectedGraph, cards: dict[int, int], v: int) -> int:
    w = cards[v]
    for u in g.adj[v]:
        w *= cards[u]
    return w


def triangulate(
    g: UndirectedGraph, cards: dict[int, int], heuristic: str = "min-weight"
) -> tuple[list[int], set[frozenset[int]]]:
    """Greedy elimination order and the fill-in edges it induces.

    min-weight picks the vertex whose closed neighborhood has the
    smallest joint state space; min-fill picks the vertex needing the
    fewest fill edges.  Ties break toward the lowest variable id.
    """
    if heuristic not in HEURISTICS:
        raise StructuralError(f"unknown heuristic {heuristic!r}")
    work = g.copy()
    remaining = set(range(g.n))
    order: list[int] = []
    fills: set[frozenset[int]] = set()
    while remaining:
        if heuristic == "min-weight":
            v = min(remaining, key=lambda u: (_cluster_weight(work, cards, u), u))
        else:
            v = min(remaining, key=lambda u: (_fill_needed(work, u), u))
        nbrs = sorted(work.adj[v])
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1 :]:
                if not work.has_edge(a, b):
                    work.add_edge(a, b)
                    fills.add(frozenset((a, b)))
        for u in nbrs:
            work.adj[u].discard(v)
        work.adj[v] = set()
        remaining.discard(v)
        order.append(v)
    return order, fills


def elimination_cliques(g: UndirectedGraph, order: list[int], fills) -> list[tuple[int, ...]]:
    """Maximal cliques of the filled graph, in elimination-discovery order."""
    work = g.copy()
    for e in fills:
        a, b = sorted(e)
        if not work.has_edge(a, b):
            work.add_edge(a, b)
    candidates: list[tuple[int, ...]] = []
    for v in order:
        candidates.append(tuple(sorted({v, *work.adj[v]})))
        for u in list(work.adj[v]):
            work.adj[u].discard(v)
        work.adj[v] = set()
    cliques: list[tuple[int, ...]] = []
    sets = [set(c) for c in candidates]
    for i, c in enumerate(candidates):
        if any(set(c) < s for s in sets) or any(set(c) <= set(k) for k in cliques):
            continue
        cliques.append(c)
    return cliques


def build_junction_tree(cliques, cards: dict[int, int]) -> JunctionTree:
    """Maximum-weight spanning forest on separator size.

    Candidate edges are ranked by separator cardinality (descending),
    then by the separator's joint state space (ascending), then by the
    clique index pair, and joined with union-find.
    """
    cliques = [tuple(sorted(c)) for c in cliques]
    k = len(cliques)
    candidates = []
    for i in range(k):
        for j in range(i + 1, k):
            sep = set(cliques[i]) & set(cliques[j])
            if sep:
                space = 1
                for v in sep:
                    space *= cards[v]
                candidates.append((-len(sep), space, (i, j)))
    candidates.sort()
    parent = list(range(k))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = []
    for _, _, (i, j) in candidates:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            edges.append((i, j))
    return JunctionTree(cliques, edges)


def verify_rip(jt: JunctionTree) -> None:
    """Check the running-intersection property for every clique pair."""
    k = jt.n_cliques
    for i in range(k):
        for j in range(i + 1, k):
            common = set(jt.cliques[i]) & set(jt.cliques[j])
            if not common:
                continue
            path = jt.path(i, j)
            if path is None:
                raise RipViolationError(
                    f"cliques {i} and {j} share {sorted(common)} but are disconnected"
                )
            for c in path[1:-1]:
                missing = common - set(jt.cliques[c])
                if missing:
                    raise RipViolationError(
                        f"intersection of cliques {i} and {j} loses "
                        f"{sorted(missing)} at clique {c}"
                    )
            for a, b in zip(path, path[1:]):
                missing = common - set(jt.separator(a, b))
                if missing:
                    raise RipViolationError(
                        f"intersection of cliques {i} and {j} loses "
                        f"{sorted(missing)} at separator {(min(a, b), max(a, b))}"
                    )


def assign_potentials(jt: JunctionTree, bn: BayesianNetwork) -> JunctionTree:
    """Attach each conditional table to the lowest-index containing clique."""
    assignment: dict[int, int] = {}
    for v in range(bn.n):
        dom = set(bn.cpds[v].domain)
        for i, clq in enumerate(jt.cliques):
            if dom <= set(clq):
                assignment[v] = i
                break
        else:
            raise CompilationError(
                f"no clique contains the cpd domain of {bn.variables[v].name!r}"
            )
    return JunctionTree(jt.cliques, jt.edges, assignment)


def compile_network(bn: BayesianNetwork, heuristic: str = "min-weight") -> JunctionTree:
    """Full pipeline from network to an assigned, RIP-checked junction tree."""
    cards = bn.cards()
    moral = moralize(bn)
    order, fills = triangulate(moral, cards, heuristic)
    cliques = elimination_cliques(moral, order, fills)
    jt = assign_potentials(build_junction_tree(cliques, cards), bn)
    verify_rip(jt)
    return jt
