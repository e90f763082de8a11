"""Basic information measures over finite alphabets.

All public quantities are in bits. Probability vectors and test channels are
plain numpy arrays; :func:`as_pmf` and :func:`as_channel` validate them.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtri

LN2 = math.log(2.0)
PMF_TOL = 1e-12


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class DegenerateInputError(DomainError):
    """Iteration cannot proceed, e.g. every row normalizer vanished."""


class CapacityError(RuntimeError):
    """Requested enumeration or search exceeds the supported size."""


def as_pmf(probs, name="pmf"):
    """Validate a probability vector and return it as a float array.

    Sums within ``PMF_TOL`` of one are renormalized; anything further off
    is rejected.
    """
    arr = np.asarray(probs, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"{name} must be a non-empty 1-d vector")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 1):
        raise DomainError(f"{name} entries must lie in [0, 1]")
    total = arr.sum()
    if abs(total - 1.0) > PMF_TOL:
        raise DomainError(f"{name} sums to {total!r}, not 1")
    return arr / total


def as_channel(rows, name="channel"):
    """Validate a row-stochastic matrix (one row per source symbol)."""
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise DomainError(f"{name} must be a non-empty 2-d matrix")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 1):
        raise DomainError(f"{name} entries must lie in [0, 1]")
    sums = arr.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > PMF_TOL):
        raise DomainError(f"{name} rows must sum to 1")
    return arr / sums[:, None]


def hamming_matrix(size=2):
    """Hamming distortion on a ``size``-ary alphabet: 0 on the diagonal, 1 off it."""
    return 1.0 - np.eye(size)


def _xlog2x(x):
    # 0 log 0 = 0
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return out


def binary_entropy(p):
    """Binary entropy H(p) in bits.

    >>> binary_entropy(0.5)
    1.0
    """
    p = float(p)
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def entropy(pmf):
    """Shannon entropy of a probability vector, in bits."""
    pmf = as_pmf(pmf)
    return float(-_xlog2x(pmf).sum())


def kl_divergence(p, q):
    """Relative entropy D(p || q) in bits.

    Terms with p(i) = 0 contribute nothing; q(i) = 0 where p(i) > 0 is an error.
    """
    p = as_pmf(p, "p")
    q = as_pmf(q, "q")
    if p.shape != q.shape:
        raise DomainError("p and q must have the same length")
    support = p > 0
    if np.any(q[support] == 0):
        raise DomainError("q must be positive wherever p is positive")
    ps, qs = p[support], q[support]
    return max(float(np.sum(ps * (np.log2(ps) - np.log2(qs)))), 0.0)


def output_marginal(source, channel):
    """Distribution of the reproduction symbol induced by ``channel``."""
    source = as_pmf(source, "source")
    channel = as_channel(channel)
    if channel.shape[0] != source.size:
        raise DomainError("channel row count must equal the source alphabet size")
    return source @ channel


def mutual_information(source, channel):
    """I(X; X-hat) in bits for a source pmf and a test channel."""
    source = as_pmf(source, "source")
    channel = as_channel(channel)
    if channel.shape[0] != source.size:
        raise DomainError("channel row count must equal the source alphabet size")
    marginal = source @ channel
    joint = source[:, None] * channel
    pos = joint > 0
    ratio = channel[pos] / np.broadcast_to(marginal, channel.shape)[pos]
    return max(float(np.sum(joint[pos] * np.log2(ratio))), 0.0)


def expected_distortion(source, channel, distortion):
    """E[d(X, X-hat)] under ``source`` and ``channel``."""
    source = as_pmf(source, "source")
    channel = as_channel(channel)
    d = np.asarray(distortion, dtype=float)
    if channel.shape[0] != source.size or d.shape != channel.shape:
        raise DomainError("source, channel and distortion dimensions disagree")
    if np.any(d < 0):
        raise DomainError("distortion entries must be non-negative")
    return float(source @ (channel * d).sum(axis=1))


def conditional_entropy(source, channel):
    """H(X | X-hat) in bits, computed from the joint distribution."""
    source = as_pmf(source, "source")
    channel = as_channel(channel)
    joint = source[:, None] * channel
    marginal = joint.sum(axis=0)
    return float(-_xlog2x(joint).sum() + _xlog2x(marginal).sum())


def gaussian_q(x):
    """Upper tail of the standard normal, Q(x) = P(Z > x)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def gaussian_q_inv(eps):
    """Inverse of the Gaussian Q-function.

    Uses the normal quantile and one Newton step on ``erfc`` so the result
    holds to about 1e-12 even deep in the tails.
    """
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must lie in (0, 1), got {eps!r}")
    if eps == 0.5:
        return 0.0
    x = -float(ndtri(eps))
    density = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    if density > 0:
        x += (gaussian_q(x) - eps) / density
    return x
