# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: Blahut-Arimoto iteration, exhaustive code search and
the Monte Carlo random-coding simulator.

Each function matches its counterpart in ``_pykernels`` exactly in
interface and, for the integer-valued kernels, in output.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, fabs, INFINITY
from libc.stdint cimport uint64_t, int64_t

from .info import DegenerateInputError, DomainError

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double TWO_M53 = 1.1102230246251565e-16


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def ba_iterate(source, dist, double s, double tol, long max_iter):
    cdef cnp.ndarray[double, ndim=1] px = np.ascontiguousarray(source, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] d = np.ascontiguousarray(dist, dtype=np.float64)
    cdef Py_ssize_t nx = d.shape[0], ny = d.shape[1], x, y
    cdef cnp.ndarray[double, ndim=2] kern = np.exp(-s * (d - d.min(axis=1, keepdims=True)))
    cdef cnp.ndarray[double, ndim=2] ch = np.empty((nx, ny))
    cdef cnp.ndarray[double, ndim=1] repro = np.full(ny, 1.0 / ny)
    cdef cnp.ndarray[double, ndim=1] z = np.empty(nx)
    cdef cnp.ndarray[double, ndim=1] rates = np.empty(max_iter)
    cdef cnp.ndarray[double, ndim=1] dists = np.empty(max_iter)
    cdef cnp.ndarray[double, ndim=1] objs = np.empty(max_iter)
    cdef double r_old = INFINITY, rate, dd, acc, ln2 = log(2.0), v
    cdef long it, used = 0
    cdef bint converged = False
    for it in range(max_iter):
        for x in range(nx):
            acc = 0.0
            for y in range(ny):
                v = kern[x, y] * repro[y]
                ch[x, y] = v
                acc += v
            if acc <= 0.0:
                if px[x] > 0.0:
                    raise DegenerateInputError("reproduction mass sits only on unreachable symbols")
                acc = 1.0
            for y in range(ny):
                ch[x, y] /= acc
        for y in range(ny):
            acc = 0.0
            for x in range(nx):
                acc += px[x] * ch[x, y]
            repro[y] = acc
        rate = 0.0
        dd = 0.0
        for x in range(nx):
            if px[x] == 0.0:
                continue
            acc = 0.0
            v = 0.0
            for y in range(ny):
                if ch[x, y] > 0.0:
                    acc += ch[x, y] * log(ch[x, y] / repro[y])
                v += ch[x, y] * d[x, y]
            rate += px[x] * acc
            dd += px[x] * v
        if rate < 0.0:
            rate = 0.0
        rate /= ln2
        rates[it] = rate
        dists[it] = dd
        objs[it] = rate * ln2 + s * dd
        used = it + 1
        if fabs(rate - r_old) < tol:
            converged = True
            break
        r_old = rate
    return rates[:used].copy(), dists[:used].copy(), objs[:used].copy(), ch, repro, bool(converged)


def encode_all(codebook, int n):
    cdef cnp.ndarray[uint64_t, ndim=1] cb = np.ascontiguousarray(codebook, dtype=np.uint64)
    cdef Py_ssize_t N = 1 << n, M = cb.shape[0], x, c
    cdef cnp.ndarray[int64_t, ndim=1] idx = np.empty(N, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] dist = np.empty(N, dtype=np.int64)
    cdef int best, dcur
    cdef int64_t bi
    for x in range(N):
        best = n + 1
        bi = 0
        for c in range(M):
            dcur = __builtin_popcountll(<uint64_t>x ^ cb[c])
            if dcur < best:
                best = dcur
                bi = c
        idx[x] = bi
        dist[x] = best
    return idx, dist


def search_codes(pw, int n, int M, int t, bint excess):
    cdef cnp.ndarray[double, ndim=1] w = np.ascontiguousarray(pw, dtype=np.float64)
    cdef Py_ssize_t N = 1 << n, x, lev
    cdef cnp.ndarray[int, ndim=1] weight = np.empty(N, dtype=np.intc)
    # mins[lev, x]: distance from x to the nearest of the first lev+1 codewords
    cdef cnp.ndarray[int, ndim=2] mins = np.empty((M, N), dtype=np.intc)
    cdef cnp.ndarray[int64_t, ndim=1] combo = np.empty(M, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] best = np.zeros(M, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] S = np.empty(n + 1, dtype=np.int64)
    cdef double score, best_score = INFINITY
    cdef bint have = False
    cdef int dcur, k
    if M > N:
        raise DomainError("M exceeds 2^n")
    for x in range(N):
        weight[x] = __builtin_popcountll(<uint64_t>x)
    for lev in range(M):
        combo[lev] = lev
    # refresh levels from `lev` downward after each increment
    lev = 0
    while True:
        for k in range(lev, M):
            for x in range(N):
                dcur = __builtin_popcountll(<uint64_t>x ^ <uint64_t>combo[k])
                if k > 0 and mins[k - 1, x] < dcur:
                    dcur = mins[k - 1, x]
                mins[k, x] = dcur
        for k in range(n + 1):
            S[k] = 0
        for x in range(N):
            if excess:
                if mins[M - 1, x] > t:
                    S[weight[x]] += 1
            else:
                S[weight[x]] += mins[M - 1, x]
        score = 0.0
        for k in range(n + 1):
            score = score + <double>S[k] * w[k]
        if not have or score < best_score - 1e-12 * best_score:
            have = True
            best_score = score
            for k in range(M):
                best[k] = combo[k]
        # next combination in lexicographic order
        lev = M - 1
        while lev >= 0 and combo[lev] == N - M + lev:
            lev -= 1
        if lev < 0:
            break
        combo[lev] += 1
        for k in range(lev + 1, M):
            combo[k] = combo[k - 1] + 1
    return best, float(best_score)


def mc_excess_count(double p, double q1, int n, long M, int t, seed, long start, long stop):
    if n > 64:
        raise DomainError("Monte Carlo kernel packs words into 64 bits; n <= 64")
    cdef uint64_t base = _mix(<uint64_t>(seed & 0xFFFFFFFFFFFFFFFF))
    cdef uint64_t state, src, cw
    cdef long trial, m, count = 0
    cdef int i, bestd, dcur
    with nogil:
        for trial in range(start, stop):
            state = _mix(<uint64_t>trial + base)
            src = 0
            for i in range(n):
                state += GOLDEN
                if <double>(_mix(state) >> 11) * TWO_M53 < p:
                    src |= (<uint64_t>1) << (n - 1 - i)
            bestd = n + 1
            for m in range(M):
                cw = 0
                for i in range(n):
                    state += GOLDEN
                    if <double>(_mix(state) >> 11) * TWO_M53 < q1:
                        cw |= (<uint64_t>1) << (n - 1 - i)
                dcur = __builtin_popcountll(src ^ cw)
                if dcur < bestd:
                    bestd = dcur
            if bestd > t:
                count += 1
    return count
