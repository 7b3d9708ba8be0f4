"""Concentration and generalisation bounds for graph-dependent random variables."""

__version__ = "0.1.0"

from .graph import Graph, GraphError, generate, make_graph
from .covers import (
    ChiF,
    CoverError,
    FractionalCover,
    SizeLimitError,
    chi_f_exact,
    chi_f_upper,
    decompose_sum,
    equalize_cover,
    maximal_independent_sets,
    multiclass_cover,
    ranking_cover,
    validate_cover,
)
from .partitions import (
    PartitionCost,
    TreePartition,
    TreePartitionError,
    forest_complexity_exact,
    forest_complexity_heuristic,
    partition_cost,
    validate_tree_partition,
)
from .concentration import (
    BoundError,
    BoundReport,
    bound_reports,
    forest_bound,
    graph_general_bound,
    graph_uniform_bound,
    janson_fractional_bound,
    mcdiarmid_bound,
    tightest_bound,
)
from .learning import (
    GenBound,
    LearningBoundError,
    StabilityProfile,
    auc_empirical_risk,
    bipartite_ranking_bound,
    frac_rademacher_gen_bound,
    m_dependent_stability_bound,
    multiclass_bound,
    multiclass_empirical_risk,
    stability_gen_bound,
)
