"""Benchmark sweep over evidence-set sizes, and junction-tree statistics.

One sweep works on one compiled network.  For every (evidence count,
repetition) cell a single evidence draw is shared across all requested
engines, so rows are directly comparable.  Output is CSV text that is
byte-stable for a fixed configuration and seed except for the wall-clock
column; operation counters, not wall time, are the comparable metric.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .compilation import JunctionTree, compile_network
from .engines import ImpossibleEvidenceError, propagate
from .model import BayesianNetwork
from .randomnet import RNG_ID, sample_evidence

_VERSION = "0.1.0"

CSV_COLUMNS = (
    "engine",
    "n_evidence",
    "rep",
    "seed",
    "wall_ms",
    "sum_outs",
    "mults",
    "cells_touched",
    "max_table",
    "p_evidence",
    "impossible_flag",
)


@dataclass
class BenchConfig:
    network: BayesianNetwork
    counts: tuple[int, ...]
    reps: int = 50
    engines: tuple[str, ...] = ("hugin", "ss", "lazy")
    seed: int = 0
    heuristic: str = "min-weight"

    def __post_init__(self) -> None:
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        for k in self.counts:
            if not 0 <= k <= self.network.n:
                raise ValueError(f"evidence count {k} out of range for {self.network.n} variables")


@dataclass
class StatsRow:
    name: str
    nodes: int
    potential_min: int
    potential_max: int
    potential_mean: float
    cliques: int
    clique_space_min: int
    clique_space_max: int
    clique_space_mean: float
    neighbors_min: int
    neighbors_max: int
    neighbors_mean: float


def network_stats(bn: BayesianNetwork, jt: JunctionTree) -> StatsRow:
    """Node-potential and clique-size summary for one compiled network."""
    pot_sizes = [bn.cpds[v].size for v in range(bn.n)]
    cards = bn.cards()
    spaces = []
    for clq in jt.cliques:
        space = 1
        for v in clq:
            space *= cards[v]
        spaces.append(space)
    degrees = [len(jt.neighbors(i)) for i in range(jt.n_cliques)]
    return StatsRow(
        name=bn.name,
        nodes=bn.n,
        potential_min=min(pot_sizes),
        potential_max=max(pot_sizes),
        potential_mean=float(np.mean(pot_sizes)),
        cliques=jt.n_cliques,
        clique_space_min=min(spaces),
        clique_space_max=max(spaces),
        clique_space_mean=float(np.mean(spaces)),
        neighbors_min=min(degrees),
        neighbors_max=max(degrees),
        neighbors_mean=float(np.mean(degrees)),
    )


def run_benchmark_sweep(config: BenchConfig, jt: JunctionTree | None = None) -> list[str]:
    """CSV lines (two header lines plus one row per engine/count/rep cell).

    The evidence for cell (k, rep) is drawn from the stream
    SeedSequence(seed, spawn_key=(k, rep)); repetitions own disjoint
    streams, so rows are reproducible in any execution order.
    """
    bn = config.network
    if jt is None:
        jt = compile_network(bn, config.heuristic)
    lines = [
        f"# jtprop {_VERSION} rng={RNG_ID} split=seedseq(seed;k,rep) seed={config.seed}",
        ",".join(CSV_COLUMNS),
    ]
    for k in config.counts:
        for rep in range(config.reps):
            stream = np.random.SeedSequence(config.seed, spawn_key=(k, rep))
            evidence = sample_evidence(bn, k, stream)
            for engine in config.engines:
                start = time.perf_counter()
                impossible = 0
                p = 0.0
                try:
                    state, trace = propagate(engine, jt, bn, evidence)
                    p = state.prob_evidence()
                except ImpossibleEvidenceError as exc:
                    impossible = 1
                    trace = exc.trace
                wall_ms = (time.perf_counter() - start) * 1e3
                c = trace.counters()
                lines.append(
                    ",".join(
                        (
                            engine,
                            str(k),
                            str(rep),
                            str(config.seed),
                            repr(float(wall_ms)),
                            str(c["sum_outs"]),
                            str(c["mults"]),
                            str(c["cells_touched"]),
                            str(c["max_table"]),
                            repr(float(p)),
                            str(impossible),
                        )
                    )
                )
    return lines
