"""Tabular datasets behind each figure, plus CSV/JSON serialization.

Every dataset is a header plus rows of finite numbers. Numbers are written
with 12 significant digits so reruns are byte-identical.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import bernoulli, blahut, codes, fbl, tilted
from .info import binary_entropy, hamming_matrix

FIGURE_IDS = (
    "f1_entropy",
    "f3_ba_convergence",
    "f4_ba_vs_closed",
    "f5_code_example",
    "f6_dispersion",
    "f7_fbl_bounds",
    "f8_rate_vs_n",
    "f9_clt_pmf",
    "f10_comprehensive",
)

SCHEMAS = {
    "f1_entropy": ["p", "H_bits"],
    "f3_ba_convergence": ["s_nats", "iteration", "D", "R_bits", "R_gap"],
    "f4_ba_vs_closed": ["s_nats", "D_ba", "R_ba", "R_closed", "abs_err"],
    "f5_code_example": [
        "word", "weight", "prob", "codeword", "distortion",
        "avg_distortion", "rate", "shannon_rate",
    ],
    "f6_dispersion": ["p", "D", "j0_bits", "j1_bits", "V_bits2"],
    "f7_fbl_bounds": [
        "n", "converse_rate", "normal_approx_rate", "achievability_rate",
        "shannon_rate", "converse_log2M", "achievability_log2M",
    ],
    "f8_rate_vs_n": ["eps", "n", "normal_approx_rate", "shannon_rate"],
    "f9_clt_pmf": ["D", "kind", "k", "x", "y"],
    "f10_comprehensive": ["D", "R_shannon", "R_n100", "R_n500", "R_n2000"],
}

FBL_NOTE = (
    "bounds: achievability = random coding with iid Q* codewords (exact average); "
    "converse = sphere covering with Hamming balls of radius floor(nD)"
)


@dataclass
class Dataset:
    figure_id: str
    columns: list
    rows: list
    params: dict = field(default_factory=dict)
    comments: list = field(default_factory=list)

    def check(self):
        width = len(self.columns)
        for row in self.rows:
            if len(row) != width:
                raise ValueError(f"{self.figure_id}: row width {len(row)} != {width}")
            if not all(math.isfinite(float(v)) for v in row):
                raise ValueError(f"{self.figure_id}: non-finite value in {row}")
        return self


def fmt(value):
    """Shortest 12-significant-digit text for a number."""
    if isinstance(value, (int, np.integer)) and abs(int(value)) < 10**12:
        return str(int(value))
    x = float(value)
    if x == 0.0:
        return "0"
    return format(x, ".12g")


def to_csv(ds):
    lines = [f"# {c}" for c in ds.comments]
    lines.append(",".join(ds.columns))
    lines.extend(",".join(fmt(v) for v in row) for row in ds.rows)
    return "\n".join(lines) + "\n"


def to_json(ds):
    def num(v):
        text = fmt(v)
        return int(text) if text.lstrip("-").isdigit() else float(text)

    payload = {
        "figure_id": ds.figure_id,
        "params": ds.params,
        "columns": ds.columns,
        "rows": [[num(v) for v in row] for row in ds.rows],
    }
    return json.dumps(payload, separators=(",", ":")) + "\n"


def render(ds, fmt_name):
    ds.check()
    return to_csv(ds) if fmt_name == "csv" else to_json(ds)


def write_atomic(path, text):
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- individual datasets ---------------------------------------------------


def entropy_curve(points=201):
    ps = np.linspace(0.0, 1.0, points)
    rows = [[p, binary_entropy(p)] for p in ps]
    return Dataset("f1_entropy", SCHEMAS["f1_entropy"], rows, {"points": points})


def rd_curve(p, points=200):
    dmax = min(p, 1.0 - p)
    rows = [[d, bernoulli.rate_distortion(p, d)] for d in np.linspace(0.0, dmax, points)]
    return Dataset("rd_curve", ["D", "R_bits"], rows, {"p": p, "points": points})


def ba_convergence(p=0.3, slopes=(2.0, 5.0, 10.0, 20.0), tol=1e-12):
    rows = []
    for s in slopes:
        trace = blahut.ba_solve([1 - p, p], hamming_matrix(), blahut.BASolverConfig(s, tol))
        final = trace.final.rate
        for i, pt in enumerate(trace.points, start=1):
            rows.append([s, i, pt.distortion, pt.rate, abs(pt.rate - final)])
    return Dataset(
        "f3_ba_convergence", SCHEMAS["f3_ba_convergence"], rows,
        {"p": p, "slopes": list(slopes), "tol": tol},
    )


def ba_vs_closed(p=0.3, points=60, s_min=0.2, s_max=20.0, tol=1e-12, slopes=None):
    if slopes is None:
        slopes = blahut.log_slopes(s_min, s_max, points)
    sweep = blahut.ba_sweep([1 - p, p], hamming_matrix(), slopes, blahut.BASolverConfig(1.0, tol))
    rows = []
    for pt in sweep:
        closed = bernoulli.rate_distortion(p, pt.distortion)
        rows.append([pt.slope_s, pt.distortion, pt.rate, closed, abs(pt.rate - closed)])
    return Dataset(
        "f4_ba_vs_closed", SCHEMAS["f4_ba_vs_closed"], rows,
        {"p": p, "points": len(slopes), "s_min": min(slopes), "s_max": max(slopes)},
    )


def code_table(p, cb, figure_id="f5_code_example"):
    words, probs, idx, dist = codes.encoding_table(p, cb)
    ev = codes.evaluate_code(p, cb)
    shannon = bernoulli.rate_distortion(p, ev.avg_distortion)
    rows = []
    for w, pr, i, d in zip(words, probs, idx, dist):
        rows.append([
            int(w), int(w).bit_count(), pr, cb.codewords[i], d,
            ev.avg_distortion, ev.rate, shannon,
        ])
    comments = [
        f"words are {cb.n}-bit integers, first symbol most significant",
        "codebook: " + " ".join(cb.strings()),
    ]
    return Dataset(
        figure_id, SCHEMAS["f5_code_example"], rows,
        {"p": p, "n": cb.n, "codewords": cb.strings()}, comments,
    )


def code_example(p=0.3, n=3, M=4):
    cb, _ = codes.optimal_code_search(p, n, M)
    ds = code_table(p, cb)
    ds.params["M"] = M
    return ds


def dispersion_table(ps=(0.1, 0.2, 0.3, 0.5), points=50):
    rows = []
    for p in ps:
        dmax = min(p, 1.0 - p)
        # open interval (0, min(p, 1 - p))
        for d in np.linspace(0.0, dmax, points + 2)[1:-1]:
            j0, j1 = tilted.tilted_information(p, d)
            rows.append([p, d, j0, j1, tilted.dispersion(p, d)])
    return Dataset("f6_dispersion", SCHEMAS["f6_dispersion"], rows, {"p": list(ps), "points": points})


def fbl_bounds(p=0.3, D=0.1, eps=0.1, ns=(50, 100, 200, 300, 500, 750, 1000, 1500, 2000)):
    rows = []
    shannon = bernoulli.rate_distortion(p, D)
    for n in ns:
        b = fbl.bracket(p, D, eps, n)
        rows.append([
            n, b.converse_rate, b.normal_approx_rate, b.achievability_rate, shannon,
            math.log2(b.converse_M), math.log2(b.achievability_M),
        ])
    return Dataset(
        "f7_fbl_bounds", SCHEMAS["f7_fbl_bounds"], rows,
        {"p": p, "D": D, "eps": eps, "n": list(ns)}, [FBL_NOTE],
    )


def rate_vs_n(p=0.3, D=0.1, eps_list=(0.01, 0.05, 0.1, 0.2), points=60, n_max=5000):
    ns = np.unique(np.geomspace(10, n_max, points).round().astype(int))
    shannon = bernoulli.rate_distortion(p, D)
    rows = [
        [e, int(n), fbl.normal_approx_rate(p, D, e, int(n)), shannon]
        for e in eps_list
        for n in ns
    ]
    return Dataset(
        "f8_rate_vs_n", SCHEMAS["f8_rate_vs_n"], rows,
        {"p": p, "D": D, "eps": list(eps_list), "points": points, "n_max": n_max},
    )


def clt_pmf(p=0.3, n=6, eps=0.05, Ds=(0.1, 0.2), samples=101):
    """kind 0: pmf atoms (x, prob); kind 1: Gaussian density samples;
    kind 2: markers, k = 0 for R(D) and k = 1 for the normal approximation."""
    rows = []
    for D in Ds:
        pmf = tilted.tilted_pmf(p, D, n)
        for k, (x, pr) in enumerate(zip(pmf.values, pmf.probs)):
            rows.append([D, 0, k, x, pr])
        sd = math.sqrt(pmf.variance)
        xs = np.linspace(pmf.mean - 4 * sd, pmf.mean + 4 * sd, samples)
        for k, (x, y) in enumerate(zip(xs, tilted.gaussian_density(xs, pmf.mean, pmf.variance))):
            rows.append([D, 1, k, x, y])
        rows.append([D, 2, 0, bernoulli.rate_distortion(p, D), 0.0])
        rows.append([D, 2, 1, fbl.normal_approx_rate(p, D, eps, n), 0.0])
    return Dataset(
        "f9_clt_pmf", SCHEMAS["f9_clt_pmf"], rows,
        {"p": p, "n": n, "eps": eps, "D": list(Ds), "samples": samples},
    )


def comprehensive(p=0.3, eps=0.1, ns=(100, 500, 2000), points=100):
    dmax = min(p, 1.0 - p)
    columns = ["D", "R_shannon"] + [f"R_n{n}" for n in ns]
    rows = []
    for d in np.linspace(0.0, dmax, points + 2)[1:-1]:
        row = [d, bernoulli.rate_distortion(p, d)]
        row += [fbl.normal_approx_rate(p, d, eps, n) for n in ns]
        rows.append(row)
    return Dataset("f10_comprehensive", columns, rows, {"p": p, "eps": eps, "n": list(ns), "points": points})


def build_figure(figure_id, **overrides):
    """Dataset for one manifest entry; keyword overrides replace defaults."""
    builders = {
        "f1_entropy": entropy_curve,
        "f3_ba_convergence": ba_convergence,
        "f4_ba_vs_closed": ba_vs_closed,
        "f5_code_example": code_example,
        "f6_dispersion": dispersion_table,
        "f7_fbl_bounds": fbl_bounds,
        "f8_rate_vs_n": rate_vs_n,
        "f9_clt_pmf": clt_pmf,
        "f10_comprehensive": comprehensive,
    }
    if figure_id not in builders:
        raise KeyError(figure_id)
    return builders[figure_id](**overrides).check()
