"""Extreme eigenvalues of heavy-tailed Wigner and sample covariance matrices.

Simulation and diagnostics for the regime where entries have regularly
varying tails with index alpha in (0, 4): the top eigenvalues, normalized by
the entry quantile b_n (or b_np squared), behave like the largest entries and
form a Poisson process with Frechet-distributed maximum.
"""

from .eigen import ConvergenceError, Spectrum, full_spectrum, interlacing_check, principal_minor, top_k
from .ensembles import (
    beta_range,
    generate_covariance,
    generate_wigner,
    gram,
    apply_gram,
    truncation_split,
)
from .entries import (
    inf_norm,
    lemma_diagnostics,
    predicted_top_eigenvalues,
    rayleigh_lower_bound,
    top_entries,
    truncated_moments,
    truncated_top_scaling,
)
from .pointproc import count_in, expected_count, extract_points, ks_frechet, poisson_fit, semicircle_density
from .rng import Stream, derive_stream_id
from .tails import Kind, LogPower, Symmetry, TailLaw, Unit, frechet_cdf, normalizer, quantile_tail, sample_iid, survival

__version__ = "0.1.0"
