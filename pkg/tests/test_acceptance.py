"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every test prints one ``[acceptance N] PASS|FAIL`` line, visible without -s.
"""

import math
import os
import time

import numpy as np
import pytest

from ratedist import datasets
from ratedist.bernoulli import lambda_star, q_star, rate_distortion
from ratedist.blahut import BASolverConfig, ba_solve, ba_sweep, log_slopes
from ratedist.cli import run
from ratedist.codes import mc_random_coding, optimal_code_search
from ratedist.fbl import (
    achievability_epsilon,
    achievability_rate,
    converse_rate,
    normal_approx_rate,
)
from ratedist.info import binary_entropy, hamming_matrix
from ratedist.tilted import dispersion, tilted_information

INSTANT = 0.1


@pytest.fixture
def report(capsys):
    def emit(number, checks, elapsed, budget):
        failed = [name for name, ok in checks if not ok]
        if elapsed > budget:
            failed.append(f"runtime {elapsed:.3f}s > {budget}s")
        status = "PASS" if not failed else "FAIL"
        detail = "; ".join(failed) if failed else f"{len(checks)} checks, {elapsed:.3f}s"
        with capsys.disabled():
            print(f"\n[acceptance {number}] {status}: {detail}")
        assert not failed, failed

    return emit


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_01_closed_form(report):
    (a, b), dt = timed(lambda: (rate_distortion(0.5, 0.25), rate_distortion(0.3, 0.081)))
    report(1, [
        (f"R(0.5,0.25)={a!r}", abs(a - 0.1887219) <= 1e-6),
        (f"R(0.3,0.081)={b!r}", abs(b - 0.4756) <= 5e-4),
    ], dt, INSTANT)


def test_criterion_02_ba_vs_closed(report):
    def work():
        worst = 0.0
        for p in (0.11, 0.2, 0.3, 0.5):
            for pt in ba_sweep([1 - p, p], hamming_matrix(), log_slopes(0.2, 20.0, 60)):
                closed = binary_entropy(p) - binary_entropy(pt.distortion)
                worst = max(worst, abs(pt.rate - closed))
        return worst

    worst, dt = timed(work)
    report(2, [(f"max err {worst:.2e}", worst <= 1e-6)], dt, 1.0)


def test_criterion_03_ba_convergence(report):
    def work():
        return [ba_solve([0.7, 0.3], hamming_matrix(), BASolverConfig(s, 1e-10)) for s in (2, 5, 10, 20)]

    traces, dt = timed(work)
    checks = [
        (f"s={s}: converged={t.converged}, iterations={t.iterations_used}", t.converged and t.iterations_used <= 50)
        for s, t in zip((2, 5, 10, 20), traces)
    ]
    report(3, checks, dt, 0.1)


def test_criterion_04_mean_identity(report):
    def work():
        worst = 0.0
        for p in np.linspace(0.05, 0.95, 20):
            for D in np.linspace(0.0, min(p, 1 - p), 22)[1:-1]:
                j0, j1 = tilted_information(p, D)
                worst = max(worst, abs((1 - p) * j0 + p * j1 - (binary_entropy(p) - binary_entropy(D))))
        return worst

    worst, dt = timed(work)
    report(4, [(f"max err {worst:.2e}", worst <= 1e-12)], dt, 0.1)


def test_criterion_05_dispersion(report):
    def work():
        half = [dispersion(0.5, D) for D in np.linspace(0.01, 0.49, 25)]
        v = [dispersion(0.3, D) for D in np.linspace(0.01, 0.29, 25)]
        return half, v

    (half, v), dt = timed(work)
    report(5, [
        ("V(0.5, D) == 0", all(x == 0.0 for x in half)),
        (f"V(0.3, .) spread {np.ptp(v):.1e}", np.ptp(v) <= 1e-12),
        (f"V(0.3)={v[0]!r}", abs(v[0] - 0.3137911) <= 1e-6),
    ], dt, INSTANT)


def test_criterion_06_worked_examples(report):
    def work():
        return optimal_code_search(0.5, 2, 2), optimal_code_search(0.3, 3, 4)

    ((_, ev2), (cb3, ev3)), dt = timed(work)
    report(6, [
        (f"n=2 optimum {ev2.avg_distortion!r}", ev2.avg_distortion == 0.25),
        (f"n=3 codebook {cb3.strings()}", cb3.strings() == ["000", "001", "010", "100"]),
        (f"n=3 avg {ev3.avg_distortion!r}", abs(ev3.avg_distortion - 0.081) <= 1e-12),
        (f"n=3 rate {ev3.rate!r}", abs(ev3.rate - 2 / 3) <= 1e-15),
    ], dt, 0.5)


def test_criterion_07_normal_approximation(report):
    # the stated 0.4840852 is not what the formula gives (0.48408405); kept as stated
    def work():
        return (
            normal_approx_rate(0.3, 0.1, 0.1, 100),
            normal_approx_rate(0.3, 0.1, 0.1, 2000),
            normal_approx_rate(0.3, 0.1, 0.5, 100),
        )

    (a, b, c), dt = timed(work)
    report(7, [
        (f"n=100: {a!r} vs 0.4840852 +- 1e-6", abs(a - 0.4840852) <= 1e-6),
        (f"n=2000: {b!r} vs 0.4283478 +- 1e-6", abs(b - 0.4283478) <= 1e-6),
        ("eps=0.5 gives R(D)", c == rate_distortion(0.3, 0.1)),
    ], dt, INSTANT)


def test_criterion_08_bound_bracket(report):
    ns = (100, 200, 500, 1000, 2000)

    def work():
        return [
            (achievability_rate(0.3, 0.1, 0.1, n)[0], converse_rate(0.3, 0.1, 0.1, n)[0],
             normal_approx_rate(0.3, 0.1, 0.1, n))
            for n in ns
        ]

    rows, dt = timed(work)
    ach = [r[0] for r in rows]
    conv = [r[1] for r in rows]
    checks = [(f"n={n}: converse {c:.4f} <= achievability {a:.4f}", c <= a) for n, (a, c, _) in zip(ns, rows)]
    checks += [(f"n={n}: NA {na:.4f} in bracket", c - 0.02 <= na <= a + 0.02) for n, (a, c, na) in zip(ns, rows)]
    checks.append(("achievability decreases in n", all(x > y for x, y in zip(ach, ach[1:]))))
    checks.append(("converse decreases in n", all(x > y for x, y in zip(conv, conv[1:]))))
    report(8, checks, dt, 10.0)


def test_criterion_09_monte_carlo(report):
    p, n, M, D, trials = 0.3, 20, 32, 0.1, 10**5
    q1 = float(q_star(p, D)[1])

    def work():
        return mc_random_coding(p, q1, n, M, D, trials, 42), achievability_epsilon(p, D, n, M)

    (est, exact), dt = timed(work)
    tol = 3 * math.sqrt(est * (1 - est) / trials) + 0.01
    report(9, [(f"MC {est:.5f} vs analytic {exact:.5f} (tol {tol:.4f})", abs(est - exact) <= tol)], dt, 30.0)


def test_criterion_10_sensitivity(report):
    def work():
        out = []
        for p in (0.3, 0.4):
            for D in (0.05, 0.1, 0.2):
                h = 1e-6
                fd = -(rate_distortion(p, D + h) - rate_distortion(p, D - h)) / (2 * h)
                out.append((p, D, abs(fd - lambda_star(D))))
        return out

    rows, dt = timed(work)
    report(10, [(f"p={p}, D={D}: err {e:.1e}", e <= 1e-5) for p, D, e in rows], dt, INSTANT)


def test_criterion_11_cli_manifest(report, tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"

    def work():
        return [run(["figures", "--all", "--out-dir", str(d)]) for d in (first, second)]

    codes, dt = timed(work)
    files = sorted(os.listdir(first))
    identical = all((first / f).read_bytes() == (second / f).read_bytes() for f in files)
    headers_ok = all(
        [ln for ln in (first / f"{fid}.csv").read_text().splitlines() if not ln.startswith("#")][0].split(",")
        == datasets.SCHEMAS[fid]
        for fid in datasets.FIGURE_IDS
    )
    report(11, [
        (f"exit codes {codes}", codes == [0, 0]),
        (f"{len(files)} datasets", len(files) == 9),
        ("reruns byte-identical", identical),
        ("golden headers", headers_ok),
    ], dt, 60.0)
