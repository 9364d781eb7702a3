"""Planar slim semimodular lattice diagrams: exact enumeration, counting,
verification of their structure theory on generated data, and rigorous
bounds for the growth constant of N(n)/2^n."""

from .diagram import (
    BoundaryNotChain,
    Cell,
    Crossing,
    Diagram,
    DiagramError,
    NodeRef,
    NotBoundedPoset,
    NotLattice,
    ParseError,
    build,
    chain,
    parse_code,
    render_code,
)
from .generation import (
    CornerIsCoatom,
    EnumerationReport,
    GenerationError,
    ParentTag,
    RankZero,
    ResourceLimit,
    add_bottom,
    brute_force_enumerate,
    brute_force_lattices,
    children,
    enumerate_diagrams,
    insert_blocked,
    insert_left_corner,
    parent,
    remove_bottom,
    remove_corner,
)
from .counting import (
    CountRow,
    NormalizedRow,
    StateTable,
    count_exact,
    count_float,
    dp_step,
    initial_table,
    state_table,
)
from .asymptotics import (
    AnalysisParams,
    BadAnchor,
    ConstantInterval,
    DomainError,
    F,
    F_prime_check,
    MissingRow,
    check_count_inequalities,
    check_kappa_bounds,
    estimate_constant,
    kappa,
    log_lemma_check,
    params_for_anchor,
    proof_chain_check,
    remark_bounds,
)
from .verification import ALL_CHECKS, CheckReport, run_checks
from .cache import CacheMismatch, CountsCache

__version__ = "0.1.0"
