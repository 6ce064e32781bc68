"""Exact simulation and analysis of the SIS contact process with
non-linear infection rates lam * k**(1 + alpha)."""

from .analysis import (
    GamblersRuinSpec,
    RegimeBoundary,
    drop_probability_bound,
    drop_probability_exact,
    equilibrium_infected,
    expected_survival_clique_recursive,
    expected_survival_exact_small,
    gamblers_ruin_absorption,
    max_exponential_expectation,
    reach_equilibrium_prob_bounds,
    regime_boundary,
    star_potential,
    threshold_lambda,
)
from .dynamics import (
    CliqueChain,
    CliqueState,
    CoupledOutcome,
    GeneralState,
    LevelHit,
    ProcessParams,
    SimLimits,
    StarChain,
    StarState,
    SurvivalOutcome,
    coupled_simulate_clique,
    embedded_jump_probabilities,
    general_state,
    infection_rate,
    run_clique_to_level,
    run_spec,
    simulate,
    simulate_clique_lumped,
    simulate_standard_sis_superposition,
    simulate_star_lumped,
    total_rates,
)
from .estimator import (
    CenterHealthyDrop,
    CenterInfectedRise,
    GrowthClassification,
    HitEstimate,
    LambdaRule,
    McConfig,
    PhaseEstimate,
    SurvivalStats,
    SweepRow,
    SweepSpec,
    aggregate_outcomes,
    censor_at,
    classify_growth,
    estimate_hitting_probability,
    estimate_phase_event,
    estimate_survival,
    parse_lambda_rule,
    resolve_init,
    run_sweep,
    wilson_interval,
    write_sweep_csv,
)
from .topology import (
    Clique,
    General,
    Star,
    Topology,
    ValidationError,
    degree,
    general_from_edges,
    load_edge_list,
    neighbors,
    parse_edge_list,
    to_general,
    vertex_count,
)

__version__ = "0.1.0"
