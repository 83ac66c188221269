"""Shrinkage estimation of voxel-pairwise connectivity and spectral parcellation."""

from shrinkparc._core import (  # noqa: F401
    ShrinkparcError,
    apply_shrinkage,
    build_affinity,
    compute_correlation,
    dice,
    dice_restricted,
    fisher_transform,
    generate_group_parcellation,
    global_noise_variance,
    group_mean,
    inverse_fisher,
    matrix_mse,
    noise_variance_common,
    noise_variance_individual,
    scaling_factors,
    shrinkage_parameter,
    signal_variance,
    simulate,
    spectral_cluster,
    total_variance,
    verify_appendix,
)

__all__ = [
    "ShrinkparcError",
    "apply_shrinkage",
    "build_affinity",
    "compute_correlation",
    "dice",
    "dice_restricted",
    "fisher_transform",
    "generate_group_parcellation",
    "global_noise_variance",
    "group_mean",
    "inverse_fisher",
    "matrix_mse",
    "noise_variance_common",
    "noise_variance_individual",
    "scaling_factors",
    "shrinkage_parameter",
    "signal_variance",
    "simulate",
    "spectral_cluster",
    "total_variance",
    "verify_appendix",
]
