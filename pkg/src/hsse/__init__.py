"""Small-set expansion in hypergraphs: SDP relaxation, orthogonal-separator rounding, exact oracles."""
from .embedding import NormalizedEmbedding, NotNormalizable, normalize
from .hypergraph import (
    DegreeProfile,
    Graph,
    Hypergraph,
    InvalidInstance,
    VertexSet,
    degree_profile,
    edges_cut,
    expansion,
    symmetric_vertex_expansion,
    vertex_expansion,
)
from .oracle import brute_force_hsse, brute_force_ssve, gen_gap_instance, gen_planted, gen_random_hypergraph
from .reductions import ssve_solve, vertex_to_hypergraph
from .rounding import AllSamplesEmpty, CutReport, RoundingConfig, round_l1, round_l2, solve_hsse, truncate
from .sdp import NonConvergence, SdpSolution, build_relaxation, check_feasibility, intended_solution, solve
from .separators import SeparatorParams, SeparatorSample, Variant, sample_separator

__version__ = "0.1.0"
