"""Variable length Markov chains from probabilized context trees:
stationary measures, the equivalent interval dynamical source, Dirichlet
series and exact word-occurrence statistics, with brute-force oracles
for everything."""

from .context_tree import (
    ContextTree,
    InfiniteBranch,
    PrefResult,
    build_bamboo,
    build_comb,
    build_finite_tree,
    load,
    loads,
    validate,
)
from .dirichlet import (
    DirichletEvaluation,
    bamboo_dirichlet,
    brute_force_dirichlet,
    comb_dirichlet,
    comb_example_closed_forms,
    oracle_gap_bound,
)
from .dynsource import (
    AdicSubdivision,
    IntervalMap,
    Iv,
    accumulation_derivatives,
    apply_map,
    build_map,
    build_subdivision,
    orbit_letters,
    seed_interval,
)
from .families import (
    ConstantFamily,
    IndifferentFamily,
    PeriodicFamily,
    QFamily,
    TableThenConstantFamily,
    TableThenGeometricFamily,
    ZetaFamily,
)
from .occurrences import (
    OccurrenceGF,
    conditional_kernel,
    occurrence_gf_bamboo,
    occurrence_gf_comb,
    occurrence_pmf,
    oracle_occurrence_pmf,
)
from .simulate import ChainState, RandomStream, empirical_report, generate, sample_initial, step
from .stationary import (
    BambooSolution,
    CombSolution,
    FiniteTreeSolution,
    StationaryMeasure,
    check_palindrome_identity,
    measure_of,
    solve,
    solve_bamboo,
    solve_comb,
    solve_finite_tree,
)

__version__ = "0.1.0"
