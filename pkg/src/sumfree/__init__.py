"""Sum-free subsets of finite Abelian groups: exact search, extremal
families, probabilistic bounds, and reproducible threshold experiments."""

from .groups import (
    GroupSpec,
    GroupType,
    HomToZq,
    classify,
    element_add,
    element_neg,
    element_sub,
    enumerate_abelian_groups,
    enumerate_homs_to_Zq,
    kernel_subgroup,
    mu,
    parse_group_literal,
)
from .subsets import Subset
from .gadgets import (
    LinkGraph,
    LinkSets,
    build_link_graph_general,
    build_link_graph_z2n,
    count_schur_pairs,
    find_witness_U,
    is_safe,
    is_sum_free,
    link_sets,
    restrict_graph,
)
from .solver import (
    BudgetExceeded,
    GoodnessVerdict,
    SolveResult,
    augment_with_safe,
    decide_sharp_event,
    is_sum_free_good,
    max_sum_free,
)
from .extremal import (
    SFCatalog,
    StabilityVerdict,
    enumerate_sf_bruteforce,
    enumerate_sf_type1,
    saturation_check,
    stability_check,
)
from .bounds import (
    JansonStats,
    SetFamily,
    chernoff_bounds,
    exact_avoidance_probability,
    fkg_lower,
    janson_stats,
)
from .certify import (
    decide_reference_uniqueness,
    decide_sharp_event_certified,
)
from .experiments import (
    ExperimentConfig,
    SweepSummary,
    TrialRecord,
    interval_family,
    run_counterexample_witness,
    run_goodness_sweep,
    run_safe_census,
    run_sharp_sweep,
    run_sweep,
    sample_subset,
    wilson_interval,
)

__version__ = "0.1.0"
