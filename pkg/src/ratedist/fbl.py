"""Finite-blocklength rates for a Bernoulli(p) source under Hamming distortion.

Three views of the minimum rate R(n, D, eps):

* the normal approximation R(D) + sqrt(V/n) Q^-1(eps);
* an achievability bound from Shannon random coding with i.i.d. Q* codewords,
  evaluated exactly by summing over source weight classes;
* a sphere-covering converse: M balls of radius floor(nD) cover at most
  M * |ball| sequences, so at best the M * |ball| most likely ones.

"Within distortion D" means at most floor(nD) mismatches.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, xlogy

from . import bernoulli
from .info import DomainError, gaussian_q_inv
from .tilted import binomial_weights, dispersion

MAX_EXACT_N = 4000
MAX_LOG2_M = 1024 * 8


class UnsupportedRegimeError(DomainError):
    """The normal approximation needs positive dispersion."""


@dataclass(frozen=True)
class FBLQuery:
    p: float
    D: float
    eps: float
    n: int

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"p must lie in (0, 1), got {self.p!r}")
        if not 0.0 < self.eps < 1.0:
            raise DomainError(f"eps must lie in (0, 1), got {self.eps!r}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if not 0.0 < self.D < min(self.p, 1.0 - self.p):
            raise DomainError(f"D must lie in (0, min(p, 1 - p)), got {self.D!r}")


@dataclass(frozen=True)
class BoundBracket:
    achievability_rate: float
    converse_rate: float
    normal_approx_rate: float
    achievability_M: int
    converse_M: int


def mismatch_budget(n, D):
    """Largest number of mismatches still counted as distortion <= D."""
    # guard against n*D landing a hair under an integer
    return int(math.floor(n * D + 1e-9))


def normal_approx_rate(p, D, eps, n):
    """R(D) + sqrt(V(D)/n) Q^-1(eps), without the O(log n / n) remainder."""
    q = FBLQuery(p, D, eps, n)
    r = bernoulli.rate_distortion(q.p, q.D)
    if q.eps == 0.5:
        return r
    v = dispersion(q.p, q.D)
    if v == 0.0:
        raise UnsupportedRegimeError(
            "dispersion is zero (p = 1/2); the normal approximation does not apply"
        )
    return r + math.sqrt(v / q.n) * gaussian_q_inv(q.eps)


def required_blocklength(p, D, eps, delta_rate):
    """Block length needed to come within ``delta_rate`` of R(D) per the
    normal approximation: ceil(V Q^-1(eps)^2 / delta_rate^2)."""
    if not delta_rate > 0:
        raise DomainError("delta_rate must be positive")
    FBLQuery(p, D, eps, 1)
    v = dispersion(p, D)
    qi = gaussian_q_inv(eps)
    return int(math.ceil(v * qi * qi / delta_rate**2))


def ball_hit_prob(q1, n, k, D):
    """P(a Bernoulli(q1)^n codeword is within distortion D of a fixed word with k ones).

    Mismatches are Binomial(k, 1 - q1) + Binomial(n - k, q1); the two pmfs
    are convolved directly.
    """
    q1 = float(q1)
    if not 0.0 <= q1 <= 1.0:
        raise DomainError("q1 must lie in [0, 1]")
    if n < 1 or not 0 <= k <= n:
        raise DomainError("need n >= 1 and 0 <= k <= n")
    if D < 0:
        raise DomainError("D must be non-negative")
    t = mismatch_budget(n, D)
    if t >= n:
        return 1.0
    mism = np.convolve(binomial_weights(k, 1.0 - q1), binomial_weights(n - k, q1))
    return float(min(mism[: t + 1].sum(), 1.0))


def _logsumexp_rows(a):
    m = np.max(a, axis=1, keepdims=True)
    m[~np.isfinite(m)] = 0.0
    with np.errstate(divide="ignore"):
        return np.log(np.sum(np.exp(a - m), axis=1)) + m[:, 0]


@lru_cache(maxsize=64)
def _log_hit_table(q1, n, t):
    """log P(hit) for every source weight k = 0..n, in the log domain."""
    k = np.arange(n + 1)[:, None]
    a = np.arange(t + 1)[None, :]
    lgn = gammaln(np.arange(n + 1) + 1.0)  # log m!

    def log_binom_pmf(m, j, prob):
        # log C(m, j) prob^j (1 - prob)^(m - j), -inf outside 0 <= j <= m
        valid = j <= m
        jj = np.where(valid, j, 0)
        mm = np.broadcast_to(m, jj.shape)
        out = lgn[mm] - lgn[jj] - lgn[mm - jj] + xlogy(jj, prob) + xlogy(mm - jj, 1.0 - prob)
        with np.errstate(invalid="ignore"):
            return np.where(valid, out, -np.inf)

    log_a = log_binom_pmf(k, a, 1.0 - q1)  # mismatches on the ones
    log_b = log_binom_pmf(n - k, a, q1)  # mismatches on the zeros
    log_cdf_b = np.logaddexp.accumulate(log_b, axis=1)
    # log P(A + B <= t) = logsumexp_a [log pA(a) + log P(B <= t - a)]
    terms = log_a + log_cdf_b[:, ::-1]
    return _logsumexp_rows(terms)


def _log_neg_log1m(lq):
    """log(-log(1 - q)) given log q."""
    lq = np.asarray(lq, dtype=float)
    out = np.empty_like(lq)
    tiny = lq < -40.0
    out[tiny] = lq[tiny]  # -log(1 - q) = q to double precision
    mid = ~tiny
    with np.errstate(divide="ignore"):
        q = np.exp(lq[mid])
        c = np.where(q < 0.5, -np.log1p(-q), -np.log(-np.expm1(lq[mid])))
        out[mid] = np.log(c)
    return out


@lru_cache(maxsize=64)
def _achievability_setup(p, n, t, q1):
    weights = binomial_weights(n, p)
    return weights, _log_neg_log1m(_log_hit_table(q1, n, t))


def _default_q1(p, D):
    return float(bernoulli.q_star(p, min(D, min(p, 1.0 - p)))[1])


def achievability_epsilon(p, D, n, M, q1=None):
    """Excess-distortion probability of a random code with M i.i.d. codewords.

    Codeword symbols are Bernoulli(q1), by default Q*(1) at distortion D.
    This is the exact average over codebooks, hence an upper bound on the
    best achievable excess probability with M codewords.
    """
    p, D, n = float(p), float(D), int(n)
    if not 0.0 < p < 1.0:
        raise DomainError("p must lie in (0, 1)")
    if D < 0 or n < 1:
        raise DomainError("need D >= 0 and n >= 1")
    if M < 1:
        raise DomainError("M must be at least 1")
    if n > MAX_EXACT_N:
        raise DomainError(f"exact bounds support n <= {MAX_EXACT_N}")
    t = mismatch_budget(n, D)
    if t >= n:
        return 0.0
    q1 = _default_q1(p, D) if q1 is None else float(q1)
    weights, log_c = _achievability_setup(p, n, t, q1)
    # (1 - q)^M = exp(-M c) with c = -log(1 - q), all in logs
    with np.errstate(over="ignore"):
        miss = np.exp(-np.exp(math.log(M) + log_c))
    return float(min(max(weights @ miss, 0.0), 1.0))


@lru_cache(maxsize=64)
def _converse_setup(p, n, t):
    ball = sum(math.comb(n, j) for j in range(t + 1))
    order = range(n + 1) if p <= 0.5 else range(n, -1, -1)
    order = list(order)
    log_seq = np.array([w * math.log(p) + (n - w) * math.log1p(-p) for w in order])
    lgn = gammaln(np.arange(n + 1) + 1.0)  # log m!
    w_arr = np.array(order)
    class_mass = np.exp(lgn[n] - lgn[w_arr] - lgn[n - w_arr] + log_seq)
    cum_mass = np.concatenate([[0.0], np.cumsum(class_mass)])
    cum_count = [0]
    for w in order:
        cum_count.append(cum_count[-1] + math.comb(n, w))
    return ball, log_seq, cum_mass, cum_count


def ball_size(n, D):
    """Number of binary words within distortion D of a fixed word."""
    return sum(math.comb(n, j) for j in range(min(mismatch_budget(n, D), n) + 1))


def converse_epsilon(p, D, n, M):
    """Lower bound on the excess-distortion probability of any (n, M) code.

    One minus the largest probability that M Hamming balls of radius
    floor(nD) can cover, taking sequences in decreasing probability.
    """
    p, D, n = float(p), float(D), int(n)
    if not 0.0 < p < 1.0:
        raise DomainError("p must lie in (0, 1)")
    if D < 0 or n < 1:
        raise DomainError("need D >= 0 and n >= 1")
    if M < 1:
        raise DomainError("M must be at least 1")
    if n > MAX_EXACT_N:
        raise DomainError(f"exact bounds support n <= {MAX_EXACT_N}")
    t = min(mismatch_budget(n, D), n)
    ball, log_seq, cum_mass, cum_count = _converse_setup(p, n, t)
    covered_count = int(M) * ball
    if covered_count >= cum_count[-1]:
        return 0.0
    i = bisect.bisect_right(cum_count, covered_count) - 1
    extra = covered_count - cum_count[i]
    covered = cum_mass[i]
    if extra > 0:
        covered += math.exp(math.log(extra) + log_seq[i])
    return float(min(max(1.0 - covered, 0.0), 1.0))


def _smallest_M(eps_of_M, eps):
    """Smallest integer M >= 1 with eps_of_M(M) <= eps (non-increasing in M)."""
    if eps_of_M(1) <= eps:
        return 1
    lo, hi = 1, 2
    while eps_of_M(hi) > eps:
        lo, hi = hi, hi * 2
        if hi.bit_length() > MAX_LOG2_M:
            raise DomainError("codebook size search exceeded its cap")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if eps_of_M(mid) <= eps:
            hi = mid
        else:
            lo = mid
    return hi


def achievability_rate(p, D, eps, n):
    """(log2(M)/n, M) for the smallest random-coding M meeting ``eps``."""
    q = FBLQuery(p, D, eps, n)
    M = _smallest_M(lambda m: achievability_epsilon(q.p, q.D, q.n, m), q.eps)
    return math.log2(M) / q.n, M


def converse_rate(p, D, eps, n):
    """(log2(M)/n, M): every (n, M) code with excess probability <= eps has at least this M."""
    q = FBLQuery(p, D, eps, n)
    M = _smallest_M(lambda m: converse_epsilon(q.p, q.D, q.n, m), q.eps)
    return math.log2(M) / q.n, M


def bracket(p, D, eps, n):
    """Both bounds plus the normal approximation at one query."""
    ach, ach_m = achievability_rate(p, D, eps, n)
    conv, conv_m = converse_rate(p, D, eps, n)
    return BoundBracket(
        achievability_rate=ach,
        converse_rate=conv,
        normal_approx_rate=normal_approx_rate(p, D, eps, n),
        achievability_M=ach_m,
        converse_M=conv_m,
    )
