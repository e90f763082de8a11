"""d-tilted information, dispersion and the exact distribution of the
block-averaged tilted information for a Bernoulli(p) source."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from . import bernoulli
from .info import DomainError, as_pmf, hamming_matrix, kl_divergence


class TiltedPair(NamedTuple):
    j0: float
    j1: float


@dataclass(frozen=True)
class TiltedPMF:
    values: np.ndarray
    probs: np.ndarray
    n: int
    mean: float
    variance: float

    @property
    def atoms(self):
        return list(zip(self.values.tolist(), self.probs.tolist()))


def _check(p, D):
    p = float(p)
    D = float(D)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    if not 0.0 <= D < min(p, 1.0 - p):
        raise DomainError(f"D must lie in [0, min(p, 1 - p)), got {D!r}")
    return p, D


def tilted_information(p, D):
    """Tilted information of source symbols 0 and 1, in bits.

    At D = 0 this is the self-information pair (-log2(1-p), -log2 p).
    """
    p, D = _check(p, D)
    if D == 0.0:
        return TiltedPair(-math.log2(1.0 - p), -math.log2(p))
    common = -D * math.log2((1.0 - D) / D)
    return TiltedPair(
        common + math.log2((1.0 - D) / (1.0 - p)),
        common + math.log2((1.0 - D) / p),
    )


def tilted_information_kl(p, D):
    """Same pair computed from the KL definition, as an independent check.

    j(x) = D(p*(.|x) || Q*) + lambda* (E[d(x, X-hat)] - D), using the optimal
    forward channel and reproduction distribution.
    """
    p, D = _check(p, D)
    if D == 0.0:
        raise DomainError("KL form needs D > 0 (lambda* diverges)")
    forward = bernoulli.forward_channel(p, D)
    q = bernoulli.q_star(p, D)
    lam = bernoulli.lambda_star(D)
    d = hamming_matrix(2)
    out = []
    for x in range(2):
        row = forward[x]
        out.append(kl_divergence(row, q) + lam * (float(row @ d[x]) - D))
    return TiltedPair(*out)


def dispersion(p, D):
    """Rate-distortion dispersion V(D) = p(1-p)(j1 - j0)^2, in bits squared."""
    j0, j1 = tilted_information(p, D)
    return float(p) * (1.0 - float(p)) * (j1 - j0) ** 2


def binomial_weights(n, p):
    """Binomial(n, p) pmf over k = 0..n.

    Multiplicative recurrence up to n = 10^4, log domain beyond that or when
    (1 - p)^n underflows.
    """
    if p in (0.0, 1.0):
        w = np.zeros(n + 1)
        w[0 if p == 0.0 else n] = 1.0
        return w
    base = (1.0 - p) ** n
    if n <= 10_000 and base > 0:
        w = np.empty(n + 1)
        ratio = p / (1.0 - p)
        term = base
        for i in range(n + 1):
            w[i] = term
            term = term * (n - i) / (i + 1) * ratio
        return w
    k = np.arange(n + 1)
    logs = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    return np.exp(logs + k * math.log(p) + (n - k) * math.log1p(-p))


def tilted_pmf(p, D, n):
    """Exact pmf of the per-symbol average tilted information over a block of n.

    Atom k (the count of ones) sits at (k j1 + (n - k) j0)/n with binomial
    probability.
    """
    j0, j1 = tilted_information(p, D)
    n = int(n)
    if n < 1:
        raise DomainError("n must be at least 1")
    k = np.arange(n + 1)
    values = (k * j1 + (n - k) * j0) / n
    probs = binomial_weights(n, float(p))
    mean = (1.0 - p) * j0 + p * j1
    variance = p * (1.0 - p) * (j1 - j0) ** 2 / n
    return TiltedPMF(values=values, probs=probs, n=n, mean=mean, variance=variance)


def gaussian_density(x, mean, variance):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * (x - mean) ** 2 / variance) / math.sqrt(2.0 * math.pi * variance)


def two_point_variance(p, pair):
    """Variance of the tilted information as a two-point random variable."""
    w = as_pmf([1.0 - p, p])
    vals = np.array(pair)
    mean = float(w @ vals)
    return float(w @ (vals - mean) ** 2)
