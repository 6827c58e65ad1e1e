"""Variational machinery for exact area-preserving monotone twist maps.

The package builds a concrete family of generating functions (a quadratic
shear plus smooth periodic potentials), finds minimal and advancing
configurations by relaxation plus Newton polishing, evaluates Peierls
barriers at rational and irrational rotation symbols, and packages the
desk-scale studies that probe when rotational invariant circles survive.
"""

from .generating import (
    GOLDEN_MEAN,
    BumpSpec,
    CosineWell,
    DirichletApproximant,
    GeneratingFunction,
    MollifierBump,
    PerturbationParams,
    Potential,
    Rescaled,
    TwistFamilyError,
    cr_norm_estimate,
    dirichlet_approximants,
    make_h0,
    make_hn,
    make_htilde,
    make_un,
    make_vn,
    twist_map_step,
    twist_orbit,
)
from .minimizer import (
    Configuration,
    DegenerateSymbolError,
    Heteroclinic01,
    Periodic,
    PinnedEnds,
    SolveReport,
    SolverError,
    action,
    count_in_interval,
    crossing_count,
    minimize_advancing,
    minimize_periodic,
    rotation_number,
    spacing_profile,
    stationarity_residual,
)
from .barrier import (
    BarrierProfile,
    BarrierQuery,
    HeteroclinicActions,
    Irrational,
    IrrationalBarrier,
    Rational,
    barrier_profile,
    invariant_circle_exists,
    peierls_irrational,
    peierls_rational,
    peierls_zero_plus,
    zero_plus_actions,
)
from .experiments import (
    ExperimentSpec,
    FitResult,
    StudyAssertionError,
    StudyResult,
    run_approximation_study,
    run_counting_study,
    run_lemma_herm_check,
    run_lower_bound_study,
    run_mcor_study,
    run_spacing_study,
    run_theorem_mr,
)
from .cli_io import (
    CliIoError,
    ConfigError,
    ResultRecord,
    RunConfig,
    emit_plot_data,
    main,
    parse_config,
    read_results,
    record_from_json,
    record_to_json,
    serialize_config,
    write_results,
)

__version__ = "0.1.0"

__all__ = [
    "GOLDEN_MEAN",
    "BumpSpec",
    "CosineWell",
    "DirichletApproximant",
    "GeneratingFunction",
    "MollifierBump",
    "PerturbationParams",
    "Potential",
    "Rescaled",
    "TwistFamilyError",
    "cr_norm_estimate",
    "dirichlet_approximants",
    "make_h0",
    "make_hn",
    "make_htilde",
    "make_un",
    "make_vn",
    "twist_map_step",
    "twist_orbit",
    "Configuration",
    "DegenerateSymbolError",
    "Heteroclinic01",
    "Periodic",
    "PinnedEnds",
    "SolveReport",
    "SolverError",
    "action",
    "count_in_interval",
    "crossing_count",
    "minimize_advancing",
    "minimize_periodic",
    "rotation_number",
    "spacing_profile",
    "stationarity_residual",
    "BarrierProfile",
    "BarrierQuery",
    "HeteroclinicActions",
    "Irrational",
    "IrrationalBarrier",
    "Rational",
    "barrier_profile",
    "invariant_circle_exists",
    "peierls_irrational",
    "peierls_rational",
    "peierls_zero_plus",
    "zero_plus_actions",
    "ExperimentSpec",
    "FitResult",
    "StudyAssertionError",
    "StudyResult",
    "run_approximation_study",
    "run_counting_study",
    "run_lemma_herm_check",
    "run_lower_bound_study",
    "run_mcor_study",
    "run_spacing_study",
    "run_theorem_mr",
    "CliIoError",
    "ConfigError",
    "ResultRecord",
    "RunConfig",
    "emit_plot_data",
    "main",
    "parse_config",
    "read_results",
    "record_from_json",
    "record_to_json",
    "serialize_config",
    "write_results",
]
