"""Distributional-matching quantization for learned binary hashing.

Thin wrapper over the C++ core: closed-form 1D Wasserstein-2, sliced
Wasserstein distance (SWD), the coordinate-axis variant HSWD, their
gradients, and bit-packed Hamming retrieval utilities.
"""

from ._core import (
    PackedCodeSet,
    Rng,
    binarize,
    bit_correlation,
    bit_entropy,
    hamming,
    hswd,
    hswd_grad,
    load_codes,
    mean_average_precision,
    precision_at_r,
    quantization_angle,
    rank_all,
    sample_binary_target,
    sample_slices,
    save_codes,
    swd,
    swd_grad,
    wasserstein1d_grad,
    wasserstein1d_sq,
)

__all__ = [
    "PackedCodeSet",
    "Rng",
    "binarize",
    "bit_correlation",
    "bit_entropy",
    "hamming",
    "hswd",
    "hswd_grad",
    "load_codes",
    "mean_average_precision",
    "precision_at_r",
    "quantization_angle",
    "rank_all",
    "sample_binary_target",
    "sample_slices",
    "save_codes",
    "swd",
    "swd_grad",
    "wasserstein1d_grad",
    "wasserstein1d_sq",
]
