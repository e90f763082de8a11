"""Closed-form rate-distortion quantities for a Bernoulli(p) source under
Hamming distortion."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .info import DomainError, binary_entropy


@dataclass(frozen=True)
class OptimalSolution:
    rate: float
    lambda_star: float
    q_star: np.ndarray
    forward: np.ndarray
    backward: np.ndarray


def _check_p(p):
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    return p


def _check_D(D):
    D = float(D)
    if not D >= 0.0:
        raise DomainError(f"D must be non-negative, got {D!r}")
    return D


def rate_distortion(p, D):
    """R(D) = H(p) - H(D) in bits, zero once D reaches min(p, 1 - p)."""
    p, D = _check_p(p), _check_D(D)
    if D == 0.0:
        return binary_entropy(p)
    if D >= min(p, 1.0 - p):
        return 0.0
    return max(binary_entropy(p) - binary_entropy(D), 0.0)


def distortion_at_rate(p, R, tol=1e-12, max_iter=200):
    """Inverse of :func:`rate_distortion` on [0, min(p, 1 - p)], by bisection."""
    p = _check_p(p)
    R = float(R)
    hp = binary_entropy(p)
    if not 0.0 <= R <= hp:
        raise DomainError(f"R must lie in [0, H(p)] = [0, {hp!r}], got {R!r}")
    if R == 0.0:
        return min(p, 1.0 - p)
    if R == hp:
        return 0.0
    lo, hi = 0.0, min(p, 1.0 - p)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if rate_distortion(p, mid) > R:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def lambda_star(D):
    """Optimal Lagrange multiplier log2((1 - D)/D), in bits per unit distortion.

    Equals -R'(D) on the active part of the curve.
    """
    D = float(D)
    if not 0.0 < D < 1.0:
        raise DomainError(f"D must lie in (0, 1), got {D!r}")
    return math.log2((1.0 - D) / D)


def slope_from_lambda(lam):
    """Convert a multiplier in bits to the solver's slope in nats."""
    return lam * math.log(2.0)


def q_star(p, D):
    """Optimal reproduction distribution (Q*(0), Q*(1))."""
    p, D = _check_p(p), _check_D(D)
    if D > min(p, 1.0 - p) or D >= 0.5:
        raise DomainError(f"D = {D!r} exceeds min(p, 1 - p); Q* would be negative")
    denom = 1.0 - 2.0 * D
    q1 = (p - D) / denom
    q0 = (1.0 - p - D) / denom
    # clip rounding residue at the D = min(p, 1 - p) boundary
    q = np.clip(np.array([q0, q1]), 0.0, 1.0)
    return q / q.sum()


def forward_channel(p, D):
    """Optimal test channel p*(x-hat | x) as a 2x2 row-stochastic matrix."""
    p, D = _check_p(p), _check_D(D)
    if not 0.0 < D < min(p, 1.0 - p):
        raise DomainError(f"D must lie in (0, min(p, 1 - p)), got {D!r}")
    q0, q1 = q_star(p, D)
    px = (1.0 - p, p)
    # Bayes reversal of the BSC(D) backward channel
    rows = np.array(
        [
            [q0 * (1.0 - D) / px[0], q1 * D / px[0]],
            [q0 * D / px[1], q1 * (1.0 - D) / px[1]],
        ]
    )
    return rows / rows.sum(axis=1, keepdims=True)


def backward_channel(D):
    """BSC(D) backward channel p(x | x-hat)."""
    D = float(D)
    if not 0.0 <= D < 0.5:
        raise DomainError(f"D must lie in [0, 0.5), got {D!r}")
    return np.array([[1.0 - D, D], [D, 1.0 - D]])


def optimal_solution(p, D):
    """Bundle the rate, multiplier, Q* and both optimal channels at (p, D)."""
    return OptimalSolution(
        rate=rate_distortion(p, D),
        lambda_star=lambda_star(D),
        q_star=q_star(p, D),
        forward=forward_channel(p, D),
        backward=backward_channel(D),
    )
