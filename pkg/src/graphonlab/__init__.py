"""Subgraph-count fluctuations in W-random graphs.

Exact homomorphism densities and spectra on step graphons, the limit-law
constants for centered subgraph counts, a reproducible sampler, and a Monte
Carlo verification harness.
"""

from .density import (
    ConditionalDensity,
    DegenerateGraphonError,
    REGULARITY_TOL,
    conditional_density,
    hom_density,
    is_regular,
    mean_count,
    regularity_defect,
    two_point_graphon,
)
from .graphon import (
    DEFAULT_DISCRETIZATION,
    KernelSpec,
    StepGraphon,
    as_step_graphon,
    discretize,
)
from .graphs import (
    CopySet,
    LabeledGraph,
    MultiGraph,
    automorphism_count,
    copy_set,
    count_copies,
    count_injective_homomorphisms,
    falling_factorial,
    strong_edge_join,
    vertex_join,
    weak_edge_join,
)
from .limits import LimitLaw, limit_law, sample_limit, sigma_squared, tau_squared
from .sampler import SampleRecord, normalized_statistic, sample_graph
from .simulate import (
    ExperimentConfig,
    ExperimentResult,
    ks_distance,
    run_experiment,
)
from .spectral import Spectrum, dwh, spec_minus, spectrum

__version__ = "0.1.0"

__all__ = [
    "ConditionalDensity",
    "CopySet",
    "DEFAULT_DISCRETIZATION",
    "DegenerateGraphonError",
    "ExperimentConfig",
    "ExperimentResult",
    "KernelSpec",
    "LabeledGraph",
    "LimitLaw",
    "MultiGraph",
    "REGULARITY_TOL",
    "SampleRecord",
    "Spectrum",
    "StepGraphon",
    "as_step_graphon",
    "automorphism_count",
    "conditional_density",
    "copy_set",
    "count_copies",
    "count_injective_homomorphisms",
    "discretize",
    "dwh",
    "falling_factorial",
    "hom_density",
    "is_regular",
    "ks_distance",
    "limit_law",
    "mean_count",
    "normalized_statistic",
    "regularity_defect",
    "run_experiment",
    "sample_graph",
    "sample_limit",
    "sigma_squared",
    "spec_minus",
    "spectrum",
    "strong_edge_join",
    "tau_squared",
    "two_point_graphon",
    "vertex_join",
    "weak_edge_join",
]
