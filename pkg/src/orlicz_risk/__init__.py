"""Law-invariant coherent risk measures on Orlicz spaces.

Young-function conjugate pairs, Luxemburg norms on finite sample spaces,
distortion (Choquet) risk measures with their scenario-set duals, and a
Monte Carlo harness checking that plug-in estimates converge to the
population value along growing iid samples.
"""
from .distortion import (
    DistortionFunction,
    ExpectedShortfall,
    PiecewiseLinearDistortion,
    PowerDistortion,
    ScenarioSet,
    bruteforce_choquet,
    choquet_empirical,
    choquet_quadrature,
    convex_dominance,
    core_membership,
    distortion_from_dict,
    distortion_increments,
    rho_finite_scenario,
    ryff_scenarios,
)
from .harness import (
    ConvergenceTrace,
    ExperimentConfig,
    GateRefusal,
    check_gate,
    psi_lln_check,
    psi_moment_target,
    reference_value,
    run_convergence,
    run_experiment,
    sample,
    summarize_traces,
    write_trace_csv,
)
from .laws import (
    DiscreteUniform,
    Exponential,
    Lognormal,
    ParametricLaw,
    Pareto,
    Uniform,
    law_from_dict,
)
from .orlicz import AndoProfile, ando_profile, luxemburg_norm, pairing
from .quadrature import QuadratureDivergenceError, dyadic_unit_integral
from .quantiles import (
    EmpiricalDistribution,
    QuantileFunction,
    SampleCsvError,
    as_sample,
    empirical_from_sample,
    kolmogorov_distance,
    load_sample_csv,
    merge_sorted,
    psi_moment,
)
from .young import (
    Delta2Report,
    EvaluationRangeError,
    ExpMinusYoung,
    LogPlusYoung,
    PowerYoung,
    TabulatedYoung,
    YoungFunction,
    check_delta2,
    evaluate,
    young_from_dict,
)

__version__ = "0.1.0"

__all__ = [
    "AndoProfile",
    "ConvergenceTrace",
    "Delta2Report",
    "DiscreteUniform",
    "DistortionFunction",
    "EmpiricalDistribution",
    "EvaluationRangeError",
    "ExpMinusYoung",
    "ExpectedShortfall",
    "ExperimentConfig",
    "Exponential",
    "GateRefusal",
    "Lognormal",
    "LogPlusYoung",
    "ParametricLaw",
    "Pareto",
    "PiecewiseLinearDistortion",
    "PowerDistortion",
    "PowerYoung",
    "QuadratureDivergenceError",
    "QuantileFunction",
    "SampleCsvError",
    "ScenarioSet",
    "TabulatedYoung",
    "Uniform",
    "YoungFunction",
    "ando_profile",
    "as_sample",
    "bruteforce_choquet",
    "check_delta2",
    "check_gate",
    "choquet_empirical",
    "choquet_quadrature",
    "convex_dominance",
    "core_membership",
    "distortion_from_dict",
    "distortion_increments",
    "dyadic_unit_integral",
    "empirical_from_sample",
    "evaluate",
    "kolmogorov_distance",
    "law_from_dict",
    "load_sample_csv",
    "luxemburg_norm",
    "merge_sorted",
    "pairing",
    "psi_lln_check",
    "psi_moment",
    "psi_moment_target",
    "reference_value",
    "rho_finite_scenario",
    "run_convergence",
    "run_experiment",
    "ryff_scenarios",
    "sample",
    "summarize_traces",
    "write_trace_csv",
    "young_from_dict",
]
