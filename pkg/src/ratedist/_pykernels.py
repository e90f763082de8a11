"""Pure numpy implementations of the hot kernels.

These mirror ``_kernels.pyx`` function for function and must return
identical results; the compiled module is preferred when it imports.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .info import DegenerateInputError, DomainError

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TWO_M53 = 2.0 ** -53
MASK64 = (1 << 64) - 1


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def trial_states(seed, start, stop):
    """Initial splitmix64 state for each trial index in [start, stop)."""
    base = _mix(np.array([seed & MASK64], dtype=np.uint64))[0]
    return _mix(np.arange(start, stop, dtype=np.uint64) + base)


def ba_iterate(source, dist, s, tol, max_iter):
    """Run Blahut-Arimoto from the uniform reproduction distribution.

    Returns (rates_bits, distortions, objective_nats, channel, repro, converged).
    """
    source = np.ascontiguousarray(source, dtype=float)
    dist = np.ascontiguousarray(dist, dtype=float)
    nx, ny = dist.shape
    # shift each row by its minimum; cancels in the normalization
    kernel = np.exp(-s * (dist - dist.min(axis=1, keepdims=True)))
    repro = np.full(ny, 1.0 / ny)
    rates, dists, objs = [], [], []
    channel = np.empty_like(dist)
    converged = False
    r_old = math.inf
    for _ in range(max_iter):
        w = kernel * repro
        z = w.sum(axis=1)
        if np.any((z <= 0) & (source > 0)):
            raise DegenerateInputError("reproduction mass sits only on unreachable symbols")
        z[z <= 0] = 1.0
        channel = w / z[:, None]
        repro = source @ channel
        rate = 0.0
        for x in range(nx):
            if source[x] == 0:
                continue
            row = channel[x]
            pos = row > 0
            rate += source[x] * float(np.sum(row[pos] * np.log(row[pos] / repro[pos])))
        rate = max(rate, 0.0) / math.log(2.0)
        d = float(source @ (channel * dist).sum(axis=1))
        rates.append(rate)
        dists.append(d)
        objs.append(rate * math.log(2.0) + s * d)
        if abs(rate - r_old) < tol:
            converged = True
            break
        r_old = rate
    return np.array(rates), np.array(dists), np.array(objs), channel, repro, converged


def popcount_table(n):
    """Hamming distance table between all words of length ``n``."""
    words = np.arange(1 << n, dtype=np.uint64)
    return np.bitwise_count(words[:, None] ^ words[None, :]).astype(np.int16)


def encode_all(codebook, n):
    """Nearest codeword index and distance for every word of length ``n``.

    Ties go to the lowest codebook index.
    """
    words = np.arange(1 << n, dtype=np.uint64)
    cb = np.asarray(codebook, dtype=np.uint64)
    d = np.bitwise_count(words[:, None] ^ cb[None, :]).astype(np.int64)
    idx = np.argmin(d, axis=1)
    return idx.astype(np.int64), d[np.arange(words.size), idx]


def _scores(S, pw):
    # sequential over weight classes so both backends round identically
    score = np.zeros(S.shape[0])
    for w in range(S.shape[1]):
        score = score + S[:, w] * pw[w]
    return score


def search_codes(pw, n, M, t, excess):
    """Exhaustively score every M-subset of {0,1}^n.

    ``pw[w]`` is the probability of one sequence of weight ``w``. The score is
    the average distortion times ``n`` (``excess`` false) or the probability
    that the distance exceeds ``t``. Returns (best combination, best score).
    """
    N = 1 << n
    table = popcount_table(n)
    weights = np.bitwise_count(np.arange(N, dtype=np.uint64)).astype(np.int64)
    onehot = np.zeros((N, n + 1), dtype=np.int64)
    onehot[np.arange(N), weights] = 1
    pw = np.asarray(pw, dtype=float)
    chunk = max(1, (1 << 22) // (N * M))
    best, best_score = None, math.inf
    combos = itertools.combinations(range(N), M)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        idx = np.array(block, dtype=np.int64)
        mind = table[:, idx].min(axis=2).astype(np.int64)
        if excess:
            mind = (mind > t).astype(np.int64)
        S = mind.T @ onehot
        scores = _scores(S, pw)
        for b in range(scores.size):
            if best is None or scores[b] < best_score - 1e-12 * best_score:
                best_score = scores[b]
                best = idx[b]
    return np.array(best, dtype=np.int64), float(best_score)


def mc_excess_count(p, q1, n, M, t, seed, start, stop):
    """Count trials in [start, stop) whose nearest codeword is more than ``t``
    mismatches away from the source word."""
    if n > 64:
        raise DomainError("Monte Carlo kernel packs words into 64 bits; n <= 64")
    state = trial_states(seed, start, stop)
    size = state.size

    def draw_word(prob):
        nonlocal state
        word = np.zeros(size, dtype=np.uint64)
        for i in range(n):
            state = state + GOLDEN
            u = (_mix(state) >> np.uint64(11)).astype(np.float64) * _TWO_M53
            word |= (u < prob).astype(np.uint64) << np.uint64(n - 1 - i)
        return word

    src = draw_word(p)
    best = np.full(size, n + 1, dtype=np.int64)
    for _ in range(M):
        cw = draw_word(q1)
        best = np.minimum(best, np.bitwise_count(src ^ cw).astype(np.int64))
    return int(np.count_nonzero(best > t))
