"""Exact inference in discrete Bayesian networks over junction trees.

Three propagation architectures (absorption, two-message, and lazy
factored messages) run behind one query contract, instrumented with
per-run operation counters, plus a brute-force enumeration oracle, a
text file format, a seedable random-network generator, and a benchmark
sweep.
"""

from .model import (
    BayesianNetwork,
    CpdValidationError,
    Evidence,
    Factor,
    InconsistencyError,
    StructuralError,
    Variable,
    divide,
    marginalize_out,
    multiply,
    reduce,
    validate_cpd,
)
from .compilation import (
    CompilationError,
    JunctionTree,
    RipViolationError,
    UndirectedGraph,
    assign_potentials,
    build_junction_tree,
    compile_network,
    moralize,
    triangulate,
    verify_rip,
)
from .netio import (
    ParseError,
    parse_evidence,
    parse_junction_tree,
    parse_network,
    serialize_evidence,
    serialize_junction_tree,
    serialize_network,
)
from .oracle import OracleCapError, d_separated, enumerate_joint, oracle_marginal
from .engines import (
    ENGINES,
    ImpossibleEvidenceError,
    PropagationTrace,
    SchedulingError,
    eliminate_variables,
    hugin_absorb,
    hugin_propagate,
    lazy_message,
    lazy_propagate,
    marginal,
    prob_evidence,
    propagate,
    ss_message,
    ss_propagate,
)
from .randomnet import RNG_ID, generate_random_network, sample_evidence
from .bench import BenchConfig, StatsRow, network_stats, run_benchmark_sweep

__version__ = "0.1.0"
