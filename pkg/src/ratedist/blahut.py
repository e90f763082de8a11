"""Blahut-Arimoto solver for the rate-distortion function of a finite source.

Slopes are in nats (the solver weights reproductions by ``exp(-s d)``);
use :func:`ratedist.bernoulli.slope_from_lambda` to convert a multiplier
given in bits.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .info import DegenerateInputError, DomainError, as_pmf


@dataclass(frozen=True)
class BASolverConfig:
    slope_s: float = 1.0
    tolerance: float = 1e-12
    max_iterations: int = 10000

    def __post_init__(self):
        if not self.slope_s >= 0:
            raise DomainError(f"slope_s must be non-negative, got {self.slope_s!r}")
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be at least 1")


@dataclass(frozen=True)
class RDPoint:
    distortion: float
    rate: float
    slope_s: float
    converged: bool = True


@dataclass
class BATrace:
    points: list
    converged: bool
    iterations_used: int
    objective: np.ndarray = field(repr=False)
    channel: np.ndarray = field(repr=False)
    repro: np.ndarray = field(repr=False)

    @property
    def final(self):
        return self.points[-1]


def _check_inputs(source, distortion):
    source = as_pmf(source, "source")
    d = np.asarray(distortion, dtype=float)
    if d.ndim != 2 or d.shape[0] != source.size:
        raise DomainError("distortion matrix must have one row per source symbol")
    if not np.all(np.isfinite(d)) or np.any(d < 0):
        raise DomainError("distortion entries must be finite and non-negative")
    return source, d


def ba_step(source, distortion, slope_s, repro):
    """One Blahut-Arimoto update.

    Reweights ``repro`` by ``exp(-s d(x, .))`` row by row to get the new test
    channel, then pushes the source through it to get the new reproduction
    marginal. Returns ``(channel, new_repro)``.
    """
    source, d = _check_inputs(source, distortion)
    repro = as_pmf(repro, "repro")
    if repro.size != d.shape[1]:
        raise DomainError("repro length must match the distortion matrix columns")
    if slope_s < 0:
        raise DomainError("slope_s must be non-negative")
    w = repro * np.exp(-slope_s * (d - d.min(axis=1, keepdims=True)))
    z = w.sum(axis=1)
    if np.any((z <= 0) & (source > 0)):
        raise DegenerateInputError("reproduction mass sits only on unreachable symbols")
    z[z <= 0] = 1.0
    channel = w / z[:, None]
    return channel, source @ channel


def ba_solve(source, distortion, config=None):
    """Iterate :func:`ba_step` from the uniform reproduction distribution until
    the rate changes by less than ``config.tolerance`` bits.

    Hitting ``max_iterations`` is not an error: the trace comes back with
    ``converged=False``.
    """
    config = config or BASolverConfig()
    source, d = _check_inputs(source, distortion)
    rates, dists, objs, channel, repro, converged = _backend.kernels.ba_iterate(
        source, d, float(config.slope_s), float(config.tolerance), int(config.max_iterations)
    )
    s = config.slope_s
    points = [RDPoint(float(dd), float(r), s, True) for r, dd in zip(rates, dists)]
    return BATrace(
        points=points,
        converged=bool(converged),
        iterations_used=len(points),
        objective=np.asarray(objs),
        channel=np.asarray(channel),
        repro=np.asarray(repro),
    )


def ba_sweep(source, distortion, slopes, config=None, workers=None):
    """Solve at each slope and return one :class:`RDPoint` per slope, in order.

    ``config.slope_s`` is ignored; tolerance and iteration cap apply to every
    slope. A point's ``converged`` flag reports its own solve.
    """
    slopes = [float(s) for s in slopes]
    if not slopes:
        raise DomainError("slopes must be non-empty")
    if any(not s >= 0 for s in slopes):
        raise DomainError("slopes must be non-negative")
    config = config or BASolverConfig()

    def solve(s):
        cfg = BASolverConfig(s, config.tolerance, config.max_iterations)
        trace = ba_solve(source, distortion, cfg)
        last = trace.final
        return RDPoint(last.distortion, last.rate, s, trace.converged)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(solve, slopes))
    return [solve(s) for s in slopes]


def log_slopes(lo, hi, count):
    """``count`` slopes spaced evenly in log between ``lo`` and ``hi``."""
    return list(np.geomspace(lo, hi, count))


def gibbs_residual(source, distortion, trace):
    """Largest violation of channel(x-hat|x) Z(x) = repro(x-hat) exp(-s d)."""
    source, d = _check_inputs(source, distortion)
    s = trace.final.slope_s
    w = trace.repro * np.exp(-s * d)
    z = w.sum(axis=1)
    return float(np.max(np.abs(trace.channel * z[:, None] - w)))


def lagrangian_nats(rate_bits, distortion, slope_s):
    """I + s E[d] with the rate converted to nats."""
    return rate_bits * math.log(2.0) + slope_s * distortion
