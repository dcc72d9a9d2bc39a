"""Extended forward-backward splitting with eps-subgradient oracles.

Solves ``0 in (A +e B) x`` for subdifferential operators, where the
backward operator ``A`` is used through its resolvent and the forward
operator ``B`` through eps-subgradients. The output of a run is the
step-weighted average of the iterates, together with a trace that the
diagnostics module can audit.
"""

from .core import (
    ConvergenceTrace,
    ExplicitSchedule,
    IterationState,
    PowerSchedule,
    TraceRow,
    ValidityReport,
    average_update,
    schedule_at,
    validate_passty_schedule,
    validate_schedule,
)
from .diagnostics import (
    HypothesisReport,
    check_fejer,
    check_h1,
    check_h2_example,
    check_h2prime,
    check_transportation,
    diagnose,
)
from . import errors as _errors
from .errors import *  # noqa: F401,F403
from .oracles import (
    Abs,
    Ball,
    Box,
    Halfspace,
    Indicator,
    Linear,
    NegSqrt,
    Quadratic,
    SampledOperator,
    SelectionStrategy,
    Singleton,
    check_eps_enlargement,
    check_eps_subgradient,
    check_monotone_graph,
    eps_subgradient,
    project,
    resolvent,
    sample_graph,
)
from .problems import BuiltinProblem, builtin, list_problems
from .splitting import (
    AlgorithmConfig,
    ProblemSpec,
    efb_step,
    run_efb,
    run_passty_fb,
    run_projected_eps_subgradient,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceTrace", "ExplicitSchedule", "IterationState", "PowerSchedule", "TraceRow",
    "ValidityReport", "average_update", "schedule_at", "validate_passty_schedule",
    "validate_schedule",
    "HypothesisReport", "check_fejer", "check_h1", "check_h2_example", "check_h2prime",
    "check_transportation", "diagnose",
    "Abs", "Ball", "Box", "Halfspace", "Indicator", "Linear", "NegSqrt", "Quadratic",
    "SampledOperator", "SelectionStrategy", "Singleton", "check_eps_enlargement",
    "check_eps_subgradient", "check_monotone_graph", "eps_subgradient", "project", "resolvent",
    "sample_graph",
    "BuiltinProblem", "builtin", "list_problems",
    "AlgorithmConfig", "ProblemSpec", "efb_step", "run_efb", "run_passty_fb",
    "run_projected_eps_subgradient",
    *_errors.__all__,
]
