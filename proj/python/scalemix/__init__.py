from ._scalemix import (
    DEFAULT_SEED,
    block_maxima,
    depfn,
    empirical_tdc,
    eta,
    fit_prarmax,
    hill,
    moments_estimator,
    run_experiment,
    runs_extremal_index,
    simulate,
    theta,
    theta_armax_marginal,
    theta_movingmax_frechet,
)

__all__ = [
    "DEFAULT_SEED",
    "block_maxima",
    "depfn",
    "empirical_tdc",
    "eta",
    "fit_prarmax",
    "hill",
    "moments_estimator",
    "run_experiment",
    "runs_extremal_index",
    "simulate",
    "theta",
    "theta_armax_marginal",
    "theta_movingmax_frechet",
]
