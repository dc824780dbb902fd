"""Numerical laboratory for weighted inequalities of maximally modulated operators.

The package models the torus as a uniform dyadic grid of 2**J cells and
provides exact discrete versions of the classical objects: maximal
operators, local mean oscillation and sparse decompositions, Young
functions with Luxemburg norms, partial-sum maximal operators (Fourier and
Walsh), and a reproducible experiment harness for weighted-inequality
ratios, extremal search, and sharpness probes.
"""

from .grid import (
    CellInterval,
    DyadicInterval,
    GridFunction,
    TorusGrid,
    Weight,
    dilate,
    dyadic_descendants,
    interval_average,
    lp_norm,
    weighted_lp_power,
)
from .oscillation import (
    DecompositionConfig,
    SparseFamily,
    local_mean_oscillation,
    median,
    rearrangement_quantile,
    sparse_decompose,
    verify_domination,
)
from .young import (
    ConvergenceVerdict,
    YoungFunction,
    complementary,
    condition_1_10_check,
    holder_defect,
    logpow,
    luxemburg_norm,
    parse_young,
    power,
    power_composed,
)
from .maximal import (
    MaximalSpec,
    coifman_rochberg_ratio,
    hl_maximal,
    iterated_maximal,
    orlicz_maximal,
    parse_maximal_spec,
    power_maximal,
    sparse_operator,
)
from .operators import (
    MultiplierBV,
    OperatorProfile,
    bv_maximal_multiplier,
    carleson,
    hilbert_transform,
    lacunary_carleson,
    modulated_sup,
    polynomial_carleson,
    vector_lq,
    walsh_carleson,
)
from .harness import (
    ExperimentSpec,
    RatioRecord,
    SearchResult,
    oscillation_bound_check,
    run_experiment,
    search_extremal,
    sharpness_probe,
    two_weight_constant,
)

__version__ = "0.1.0"
