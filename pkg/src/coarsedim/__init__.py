"""Bounded covers, Property-A style witness families, and the constructions
between them on finite metric spaces."""

from .covers import (
    INFINITE,
    Cover,
    CoverReport,
    brick_cover,
    is_lebesgue_at_least,
    lebesgue_margin,
    mesh,
    multiplicity,
    verify_cover,
)
from .metric import (
    FiniteMetricSpace,
    ScaleParams,
    closed_ball,
    from_graph,
    gen_grid,
    r_step_graph,
    subset_diameter,
    validate_space,
)
from .witness import (
    WitnessFamily,
    WitnessReport,
    certify_c_implies_a,
    chain_length_table,
    choose_scale,
    cover_to_witness,
    projection_size,
    variation_ratio,
    verify_witness,
    witness_to_cover,
)

__version__ = "0.1.0"
