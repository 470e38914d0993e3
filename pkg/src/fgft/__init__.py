"""Fast approximate graph Fourier transforms.

The exact graph Fourier basis of a combinatorial Laplacian costs O(n^2) to
apply.  This package factors an approximate basis into J plane rotations, so
applying it costs 6J elementary operations, and provides the machinery to
study how the approximation error is distributed over the spectrum: random
graph models, the greedy rotation factorization, per-mode error measures and
a batch experiment harness with a CLI front end (``fgft``).
"""

from ._version import __version__
from .errors import (
    ErrorSurface,
    eigenvalue_density,
    err1,
    err1_baseline,
    err1_sq_profile,
    err2,
    err2_baseline,
    err2_spectral,
    err2_sq_profile,
    global_error,
    normalize_surface,
    orient,
    orient_columns,
)
from .estimator import FastGraphFourier
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    default_j_grid,
    run_experiment,
    snapshot_schedule,
)
from .graphs import (
    Graph,
    RngSpec,
    degree_permutation,
    erdos_renyi,
    laplacian,
    load_graph,
    random_sensor,
    save_graph,
    sbm,
    sbm_epsilon_critical,
)
from .jacobi import (
    AlreadyDiagonalError,
    ConvergenceError,
    EigenDecomposition,
    GivensRotation,
    conjugate,
    full_jacobi,
    offdiag_norm_sq,
    solve_subproblem,
    truncated_jacobi,
    truncated_jacobi_snapshots,
)
from .transform import (
    FactoredTransform,
    Signal,
    analyze,
    approx_laplacian_residual,
    load_signal,
    load_transform,
    save_signal,
    save_transform,
    synthesize,
    to_dense,
)

__all__ = [
    "__version__",
    "AlreadyDiagonalError",
    "ConvergenceError",
    "EigenDecomposition",
    "ErrorSurface",
    "ExperimentConfig",
    "ExperimentResult",
    "FactoredTransform",
    "FastGraphFourier",
    "GivensRotation",
    "Graph",
    "RngSpec",
    "Signal",
    "analyze",
    "approx_laplacian_residual",
    "conjugate",
    "default_j_grid",
    "degree_permutation",
    "eigenvalue_density",
    "erdos_renyi",
    "err1",
    "err1_baseline",
    "err1_sq_profile",
    "err2",
    "err2_baseline",
    "err2_spectral",
    "err2_sq_profile",
    "full_jacobi",
    "global_error",
    "laplacian",
    "load_graph",
    "load_signal",
    "load_transform",
    "normalize_surface",
    "offdiag_norm_sq",
    "orient",
    "orient_columns",
    "random_sensor",
    "run_experiment",
    "save_graph",
    "save_signal",
    "save_transform",
    "sbm",
    "sbm_epsilon_critical",
    "snapshot_schedule",
    "solve_subproblem",
    "synthesize",
    "to_dense",
    "truncated_jacobi",
    "truncated_jacobi_snapshots",
]
