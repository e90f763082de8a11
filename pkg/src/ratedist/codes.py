"""Concrete binary (n, M) codes under Hamming distortion.

Words are stored as integers whose most significant of ``n`` bits is the
first symbol, so ``int("011", 2)`` is the word 0, 1, 1 and integer order
matches lexicographic order of the 0/1 strings.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .bernoulli import q_star
from .fbl import mismatch_budget
from .info import CapacityError, DomainError

MAX_EVAL_N = 24
MAX_SEARCH_N = 12
MAX_SEARCH_CODEBOOKS = 10**8
MC_CHUNK = 1 << 15


def to_word(seq, n=None):
    """Convert a 0/1 string, a sequence of bits or an int into (word, n)."""
    if isinstance(seq, (int, np.integer)):
        if n is None:
            raise DomainError("integer words need an explicit length")
        if not 0 <= seq < (1 << n):
            raise DomainError(f"word {seq} does not fit in {n} bits")
        return int(seq), n
    bits = [int(b) for b in seq]
    if not bits or any(b not in (0, 1) for b in bits):
        raise DomainError("a binary sequence needs at least one 0/1 symbol")
    if n is not None and len(bits) != n:
        raise DomainError(f"sequence length {len(bits)} != {n}")
    word = 0
    for b in bits:
        word = (word << 1) | b
    return word, len(bits)


def word_str(word, n):
    return format(int(word), f"0{n}b")


@dataclass(frozen=True)
class Codebook:
    n: int
    codewords: tuple

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("block length must be at least 1")
        words = tuple(int(w) for w in self.codewords)
        if not 1 <= len(words) <= (1 << self.n):
            raise DomainError("need 1 <= M <= 2^n codewords")
        if len(set(words)) != len(words):
            raise DomainError("codewords must be distinct")
        if any(not 0 <= w < (1 << self.n) for w in words):
            raise DomainError(f"codewords must have length {self.n}")
        object.__setattr__(self, "codewords", words)

    @classmethod
    def from_strings(cls, strings):
        strings = list(strings)
        if not strings:
            raise DomainError("empty codebook")
        n = len(strings[0])
        return cls(n, tuple(to_word(s, n)[0] for s in strings))

    @property
    def M(self):
        return len(self.codewords)

    @property
    def rate(self):
        return math.log2(self.M) / self.n

    def strings(self):
        return [word_str(w, self.n) for w in self.codewords]


@dataclass
class CodeEvaluation:
    rate: float
    avg_distortion: float
    excess_prob_at: dict = field(default_factory=dict)


def hamming_per_symbol(x, y):
    """Fraction of positions where x and y differ."""
    a, n = to_word(x)
    b, m = to_word(y)
    if n != m:
        raise DomainError("sequences must have equal length")
    return (a ^ b).bit_count() / n


def nearest_codeword(cb, x):
    """Index of a closest codeword; ties go to the lowest index."""
    word, _ = to_word(x, cb.n)
    dists = [(word ^ c).bit_count() for c in cb.codewords]
    return dists.index(min(dists))


def weight_probs(p, n):
    """Probability of a single length-n word with w ones, for w = 0..n."""
    w = np.arange(n + 1)
    if p in (0.0, 1.0):
        out = np.zeros(n + 1)
        out[0 if p == 0.0 else n] = 1.0
        return out
    return np.exp(w * math.log(p) + (n - w) * math.log1p(-p))


def _weights(n):
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)


def _check_p(p):
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    return p


def encoding_table(p, cb):
    """Per-word rows (word, probability, codeword index, per-symbol distortion)."""
    p = _check_p(p)
    if cb.n > MAX_EVAL_N:
        raise CapacityError(f"exact evaluation supports n <= {MAX_EVAL_N}; use mc_random_coding")
    idx, dist = _backend.kernels.encode_all(np.array(cb.codewords, dtype=np.uint64), cb.n)
    probs = weight_probs(p, cb.n)[_weights(cb.n)]
    return np.arange(1 << cb.n), probs, np.asarray(idx), np.asarray(dist) / cb.n


def evaluate_code(p, cb, thresholds=()):
    """Exact rate, average distortion and excess probabilities of a codebook
    under nearest-neighbour encoding of a Bernoulli(p) source."""
    p = _check_p(p)
    if cb.n > MAX_EVAL_N:
        raise CapacityError(f"exact evaluation supports n <= {MAX_EVAL_N}; use mc_random_coding")
    n = cb.n
    _, dist = _backend.kernels.encode_all(np.array(cb.codewords, dtype=np.uint64), n)
    dist = np.asarray(dist, dtype=np.int64)
    weights = _weights(n)
    pw = weight_probs(p, n)
    # per weight class integer totals, then one fixed-order float pass
    totals = np.bincount(weights, weights=dist, minlength=n + 1)
    avg = 0.0
    for w in range(n + 1):
        avg = avg + totals[w] * pw[w]
    excess = {}
    for D in thresholds:
        if D < 0:
            raise DomainError("thresholds must be non-negative")
        over = np.bincount(weights[dist > mismatch_budget(n, D)], minlength=n + 1)
        prob = 0.0
        for w in range(n + 1):
            prob = prob + over[w] * pw[w]
        excess[float(D)] = float(min(prob, 1.0))
    return CodeEvaluation(rate=cb.rate, avg_distortion=float(avg) / n, excess_prob_at=excess)


def optimal_code_search(p, n, M, objective="average", D=None):
    """Best M-word codebook of length n found by scoring every subset.

    ``objective`` is ``"average"`` (mean per-symbol distortion) or
    ``"excess"`` (probability the distortion exceeds ``D``). Ties go to the
    lexicographically smallest sorted codebook.
    """
    p = _check_p(p)
    n, M = int(n), int(M)
    if n < 1 or not 1 <= M <= (1 << n):
        raise DomainError("need n >= 1 and 1 <= M <= 2^n")
    if objective not in ("average", "excess"):
        raise DomainError(f"unknown objective {objective!r}")
    if objective == "excess" and (D is None or D < 0):
        raise DomainError("the excess objective needs a threshold D >= 0")
    if n > MAX_SEARCH_N or math.comb(1 << n, M) > MAX_SEARCH_CODEBOOKS:
        raise CapacityError(
            f"C(2^{n}, {M}) codebooks exceeds the exhaustive-search limit of {MAX_SEARCH_CODEBOOKS:.0e}"
        )
    excess = objective == "excess"
    t = mismatch_budget(n, D) if excess else 0
    best, _ = _backend.kernels.search_codes(weight_probs(p, n), n, M, t, excess)
    cb = Codebook(n, tuple(int(w) for w in best))
    return cb, evaluate_code(p, cb, [D] if excess else [])


def mc_random_coding(p, q1, n, M, D, trials, seed, workers=None):
    """Monte Carlo excess-distortion probability of random coding.

    Every trial draws a fresh source word (Bernoulli(p)) and a fresh codebook
    of M Bernoulli(q1) words, and fails when the nearest codeword is more
    than D away. Trial i uses its own generator keyed by (seed, i), so the
    result does not depend on ``workers``.
    """
    p, q1 = _check_p(p), _check_p(q1)
    n, M, trials = int(n), int(M), int(trials)
    if n < 1 or M < 1 or trials < 1:
        raise DomainError("need n, M, trials >= 1")
    if D < 0:
        raise DomainError("D must be non-negative")
    if n > 64:
        raise CapacityError("Monte Carlo simulation supports n <= 64")
    t = mismatch_budget(n, D)
    if t >= n:
        return 0.0
    bounds = [(lo, min(lo + MC_CHUNK, trials)) for lo in range(0, trials, MC_CHUNK)]
    kern = _backend.kernels

    def run(bound):
        return kern.mc_excess_count(p, q1, n, M, t, int(seed), bound[0], bound[1])

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            count = sum(pool.map(run, bounds))
    else:
        count = sum(run(b) for b in bounds)
    return count / trials


def random_coding_q1(p, D):
    """Default codeword bias for the simulator: Q*(1) at distortion D."""
    return float(q_star(p, min(D, min(p, 1.0 - p)))[1])
