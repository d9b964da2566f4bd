"""Python bindings for the delocalab random-matrix toolkit."""

from ._delocalab import (  # noqa: F401
    CollisionError,
    ConfigError,
    __version__,
    cdf_sc,
    chernoff_tail_bound,
    classical_locations,
    decimate_goe_pair,
    eigh,
    evolve,
    experiment_names,
    free_energy,
    gue_density,
    gue_expected_count,
    gue_second_factorial_moment,
    gumbel_statistic,
    integrate_emf_frozen,
    kappa,
    m_sc,
    max_sup_norm_sq,
    moment_observable,
    regularized_closeness_bound,
    regularized_eigenvalue,
    regularized_projection,
    rho_sc,
    run_experiment,
    sample,
)
