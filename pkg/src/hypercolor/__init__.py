"""Sampling, coloring and first-moment checks for random r-uniform d-regular hypergraphs."""
from .coloring import (
    PipelineResult,
    RepairError,
    check_profile,
    greedy_color,
    greedy_independent_set,
    kappa,
    pipeline_chi_upper,
    repair,
    transform_and_track,
)
from .hypergraph import (
    UNCOLORED,
    ClassProfile,
    Coloring,
    Hypergraph,
    class_profile,
    degeneracy_order,
    find_bad_edges,
    is_independent,
    is_proper,
)
from .oracles import exact_alpha, exact_chromatic
from .sampler import (
    DegreeDiagnostics,
    PointSystem,
    augment_step,
    augment_to_regular,
    degree_diagnostics,
    sample_binomial,
    sample_multi,
    sample_regular,
    sample_regular_simple,
    sample_uniform_m,
    strip,
    to_hypergraph,
    trim,
)
from .theory import (
    QkDistribution,
    TheoryReport,
    certify_alpha_upper,
    first_moment_value,
    predicted_alpha_frac,
    predicted_chi,
    qk_distribution,
    solve_z2,
    theory_report,
    z1_of,
)

__version__ = "0.1.0"
