"""Simulation laboratory for privacy-preserving push-sum average consensus
on directed graphs: protocol execution, adversary views and attacks,
deniability witnesses, and convergence-rate certification."""

from .graph import (
    Digraph,
    build_digraph,
    demo_digraph,
    generate_ring_plus_random,
    incidence_matrix,
    is_strongly_connected,
    load_graph,
    parse_graph_spec,
    save_graph,
)
from .weights import (
    WeightSchedule,
    build_conventional_schedule,
    build_schedule,
    generate_c1_perturbation_round,
    generate_c2_round,
    generate_protocol1_round,
    max_eta,
    validate_column_stochastic,
)
from .engine import (
    RunRecord,
    first_round_within,
    run_private_push_sum,
    run_private_push_sum_vector,
    run_push_sum,
    stopping_check,
)
from .adversary import (
    AttackReport,
    DeniabilityWitness,
    EveView,
    HbcView,
    build_eve_view,
    build_hbc_view,
    construct_deniable_run_eve,
    construct_deniable_run_hbc,
    eve_attack,
    eve_reconstruction_sigma1,
    eve_recover_x_tail,
    eve_recover_y,
    eve_view_deviation,
    full_neighborhood_reconstruction,
    hbc_attack,
    hbc_view_deviation,
    states_deviation,
)
from .analysis import (
    RateBound,
    bound_constants,
    consensus_error,
    fit_linear_rate,
    theoretical_rho,
    verify_bound,
)
from .numerics import (
    matrix_product_accumulate,
    min_norm_least_squares,
    numerical_rank,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
