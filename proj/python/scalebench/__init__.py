"""Feature-scaling benchmark for imbalanced binary classification."""

from ._core import (
    FittedScaler,
    __version__,
    chi2_sf,
    confusion,
    f1,
    f_beta,
    fit_scaler,
    fractional_wins,
    friedman,
    g_mean,
    imbalance_ratio,
    ir_stratum,
    load_folds,
    nemenyi_cd,
    average_ranks,
    run_cell,
    run_experiment,
    scaler_names,
    model_names,
)

__all__ = [
    "FittedScaler",
    "__version__",
    "average_ranks",
    "chi2_sf",
    "confusion",
    "f1",
    "f_beta",
    "fit_scaler",
    "fractional_wins",
    "friedman",
    "g_mean",
    "imbalance_ratio",
    "ir_stratum",
    "load_folds",
    "model_names",
    "nemenyi_cd",
    "run_cell",
    "run_experiment",
    "scaler_names",
]
