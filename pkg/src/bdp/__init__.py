"""Numerical toolkit for the nonstationary bounded distortion property:
jet propagation, curve functionals, seminorm estimation, and theorem engines
checking the explicit distortion bounds on 1D and multidimensional map
sequences."""

__version__ = "0.1.0"

from .curves import (
    NaturalCurve,
    ParamCurve,
    circle_arc,
    length,
    max_angle,
    pushforward,
    reparameterize_natural,
    segment,
)
from .distortion import (
    BOUND_HOLDS,
    BOUND_VIOLATED,
    UNVERIFIED,
    BoundReport,
    DistortionTrace,
    HypothesisBudget,
    arc_ratio_curve,
    bound_1d,
    bound_curve,
    first_lemma_violation,
    interval_ratio_1d,
    lemma_step_checks,
    run_1d,
    run_curve,
    run_curve_holder,
)
from .jets import FDConfig, Jet1, Jet2, fd_oracle, push_jet1, push_jet2
from .maps import (
    Box,
    MapSequence,
    SeminormEstimate,
    SmoothMap,
    apply_sequence,
    estimate_seminorms,
    inverse_jacobian_norm,
    operator_norm,
    polynomial_map,
)
from .scenarios import (
    SCENARIOS,
    ScenarioSpec,
    SturmianParams,
    build_sequence,
    fibonacci_trace_map,
    quadratic_1d,
    rotation_map,
    sturmian_word,
    trace_map_invariant,
)

__all__ = [name for name in dir() if not name.startswith("_")]
