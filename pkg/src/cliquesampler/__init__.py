"""Almost-uniform k-clique sampling through degree, neighbor and pair queries."""

from .edge_sampler import BaseSamplerConfig, normalization_w, sample_basic_edge
from .errors import (
    BudgetExhausted,
    ConfigError,
    IndexOutOfRange,
    NonSymmetricInput,
    NotAssigned,
    ParamError,
    ParseError,
    PreconditionError,
    RegimeUnsupported,
    UnknownVertex,
)
from .generators import PlantedInstance, gen_forest_union, gen_planted, verify_planted
from .graph import Graph, Oracle, QueryStats, load_graph, loads_graph, store_graph
from .hsim import HEdge, HLevelContext, is_l0, sample_l0_edge, sample_neighbor, witness_draw
from .order import (
    Clique,
    assigned_pair,
    clique_degree,
    clique_less,
    is_assigned_to,
    other_assigned,
    vertex_less,
)
from .sampler import (
    SampleOutcome,
    SamplerParams,
    beta_schedule,
    budget_r,
    default_tau,
    sample_clique,
    sample_edge,
)
from .validation import (
    GroundTruth,
    build_h,
    check_structural_claims,
    degeneracy,
    empirical_dist_test,
    enumerate_cliques,
    exact_layering,
)

__version__ = "0.1.0"
