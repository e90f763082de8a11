"""Rate-distortion toolkit for Bernoulli sources under Hamming distortion."""

from .bernoulli import (
    backward_channel,
    distortion_at_rate,
    forward_channel,
    lambda_star,
    optimal_solution,
    q_star,
    rate_distortion,
    slope_from_lambda,
)
from .blahut import BASolverConfig, BATrace, RDPoint, ba_solve, ba_step, ba_sweep
from .codes import (
    Codebook,
    CodeEvaluation,
    evaluate_code,
    hamming_per_symbol,
    mc_random_coding,
    nearest_codeword,
    optimal_code_search,
)
from .fbl import (
    BoundBracket,
    FBLQuery,
    achievability_epsilon,
    achievability_rate,
    ball_hit_prob,
    converse_epsilon,
    converse_rate,
    normal_approx_rate,
    required_blocklength,
)
from .info import (
    CapacityError,
    DegenerateInputError,
    DomainError,
    binary_entropy,
    entropy,
    expected_distortion,
    gaussian_q_inv,
    hamming_matrix,
    kl_divergence,
    mutual_information,
)
from .tilted import TiltedPair, TiltedPMF, dispersion, tilted_information, tilted_pmf

__version__ = "0.1.0"
