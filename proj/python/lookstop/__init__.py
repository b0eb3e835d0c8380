"""Look-ahead optimal stopping: regression RBSDE solver and exact walk oracle."""

from lookstop._core import (  # noqa: F401
    BasisSpec,
    BoundProblem,
    Bounds,
    DataError,
    GridMismatchError,
    IntegrabilityEstimate,
    InvalidArgumentError,
    NumericalError,
    ObstacleValues,
    OracleResult,
    PathBatch,
    PathKind,
    PolicyEvalResult,
    ProblemSpec,
    RbsdeSolution,
    ResourceLimitError,
    RunOutput,
    SolveOptions,
    SweepConfig,
    SweepResult,
    SweepRow,
    TimeGrid,
    ValueEstimate,
    WalkTree,
    bind,
    bounds,
    brute_force_rules,
    build_obstacle,
    closed_form_value,
    enumerate_walk,
    evaluate_policy,
    evaluate_policy_fresh,
    expected_max,
    integrability_probe,
    lagged_index,
    make_grid,
    oracle_solve,
    oracle_value_curve,
    policy_eval_seed,
    problem,
    run_problem,
    set_max_threads,
    shiryaev_spec,
    simulate_brownian,
    simulate_walk,
    solve,
    stopping_histogram,
    sweep,
    window_max_subpolicy_value,
)

__version__ = "0.1.0"
