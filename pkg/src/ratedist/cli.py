"""Command-line entry point: ``ratedist <subcommand> [flags]``.

Each subcommand emits one dataset as CSV (default) or JSON, to ``--out`` or
standard output. Exit status: 0 on success, 2 for usage or domain errors,
3 when an exhaustive enumeration would be too large.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import bernoulli, blahut, codes, datasets, fbl, tilted
from .info import CapacityError, DomainError, hamming_matrix

EXIT_USAGE = 2
EXIT_CAPACITY = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for {args.command}")


def _validate(args):
    if args.p is not None and not 0.0 < args.p < 1.0:
        raise UsageError(f"--p must lie in (0, 1), got {args.p}")
    if args.eps is not None and not 0.0 < args.eps < 1.0:
        raise UsageError(f"--eps must lie in (0, 1), got {args.eps}")
    if args.D is not None and any(not d >= 0.0 for d in args.D):
        raise UsageError(f"--D must be non-negative, got {args.D}")
    if args.n is not None and any(v < 1 for v in args.n):
        raise UsageError(f"--n must be at least 1, got {args.n}")
    if args.M is not None and args.M < 1:
        raise UsageError(f"--M must be at least 1, got {args.M}")
    if args.points is not None and args.points < 1:
        raise UsageError(f"--points must be at least 1, got {args.points}")
    if args.trials is not None and args.trials < 1:
        raise UsageError(f"--trials must be at least 1, got {args.trials}")
    if args.s is not None and any(not v >= 0.0 for v in args.s):
        raise UsageError(f"--s must be non-negative, got {args.s}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=float, help="source bias P(X = 1)")
    common.add_argument("--D", type=_float_list, help="target distortion(s), comma-separated")
    common.add_argument("--eps", type=float, help="excess-distortion probability")
    common.add_argument("--n", type=_int_list, help="block length(s), comma-separated")
    common.add_argument("--M", type=int, help="codebook size")
    common.add_argument("--s", type=_float_list, help="slope(s) in nats, comma-separated")
    common.add_argument("--points", type=int, help="grid size")
    common.add_argument("--trials", type=int, help="Monte Carlo trials")
    common.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output file (default: stdout)")

    parser = _Parser(prog="ratedist", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    add("rd-curve", "R(D) = H(p) - H(D) over D in [0, min(p, 1-p)]")
    add("entropy-curve", "binary entropy H(p) over [0, 1]")
    ba = add("ba", "Blahut-Arimoto trace at one slope")
    ba.add_argument("--tol", type=float, default=1e-12)
    ba.add_argument("--max-iter", type=int, default=10000)
    sweep = add("ba-sweep", "Blahut-Arimoto points against the closed form")
    sweep.add_argument("--s-min", type=float, default=0.2)
    sweep.add_argument("--s-max", type=float, default=20.0)
    add("tilted", "d-tilted information j0, j1")
    add("dispersion", "rate-distortion dispersion V(D)")
    add("fbl", "achievability, converse and normal approximation at one n")
    add("fbl-curve", "the same bracket over a list of block lengths")
    add("clt-pmf", "exact pmf of the block-averaged tilted information")
    add("code-search", "exhaustive optimal codebook search")
    ev = add("code-eval", "exact evaluation of a given codebook")
    ev.add_argument("--codewords", required=True, help="comma-separated 0/1 strings")
    mc = add("mc-sim", "Monte Carlo random coding vs the analytic average")
    mc.add_argument("--q1", type=float, help="codeword bias (default Q*(1))")
    fig = add("figures", "regenerate figure datasets")
    fig.add_argument("--all", action="store_true", help="every figure in the manifest")
    fig.add_argument("--figure", action="append", choices=datasets.FIGURE_IDS, help="one figure id")
    fig.add_argument("--out-dir", default=".", help="directory for figure files")
    return parser


def _single(values, name):
    if values is None:
        return None
    if len(values) != 1:
        raise UsageError(f"--{name} takes a single value for this command")
    return values[0]


def cmd_rd_curve(args):
    _require(args, "p")
    return datasets.rd_curve(args.p, args.points or 200)


def cmd_entropy_curve(args):
    return datasets.entropy_curve(args.points or 201)


def cmd_ba(args):
    _require(args, "p")
    s = _single(args.s, "s")
    if s is None:
        raise UsageError("--s is required for ba")
    cfg = blahut.BASolverConfig(s, args.tol, args.max_iter)
    trace = blahut.ba_solve([1 - args.p, args.p], hamming_matrix(), cfg)
    rows = [
        [i, pt.distortion, pt.rate, obj]
        for i, (pt, obj) in enumerate(zip(trace.points, trace.objective), start=1)
    ]
    comments = [f"converged={str(trace.converged).lower()} iterations={trace.iterations_used}"]
    return datasets.Dataset(
        "ba", ["iteration", "D", "R_bits", "objective_nats"], rows,
        {"p": args.p, "s": s, "tol": args.tol}, comments,
    )


def cmd_ba_sweep(args):
    _require(args, "p")
    if args.s is not None:
        ds = datasets.ba_vs_closed(args.p, slopes=args.s)
    else:
        ds = datasets.ba_vs_closed(args.p, args.points or 60, args.s_min, args.s_max)
    ds.figure_id = "ba_sweep"
    return ds


def _d_grid(p, points):
    dmax = min(p, 1.0 - p)
    return list(np.linspace(0.0, dmax, points + 1)[:-1])


def cmd_tilted(args):
    _require(args, "p")
    Ds = args.D if args.D is not None else _d_grid(args.p, args.points or 50)
    rows = []
    for d in Ds:
        j0, j1 = tilted.tilted_information(args.p, d)
        mean = (1 - args.p) * j0 + args.p * j1
        rows.append([args.p, d, j0, j1, mean, bernoulli.rate_distortion(args.p, d)])
    return datasets.Dataset(
        "tilted", ["p", "D", "j0_bits", "j1_bits", "mean_bits", "R_bits"], rows, {"p": args.p}
    )


def cmd_dispersion(args):
    _require(args, "p")
    Ds = args.D if args.D is not None else _d_grid(args.p, args.points or 50)
    rows = [[args.p, d, tilted.dispersion(args.p, d)] for d in Ds]
    return datasets.Dataset("dispersion", ["p", "D", "V_bits2"], rows, {"p": args.p})


def cmd_fbl(args):
    _require(args, "p", "D", "eps", "n")
    D = _single(args.D, "D")
    ns = args.n if args.command == "fbl-curve" else [_single(args.n, "n")]
    ds = datasets.fbl_bounds(args.p, D, args.eps, tuple(ns))
    ds.figure_id = args.command.replace("-", "_")
    return ds


def cmd_clt_pmf(args):
    _require(args, "p", "D")
    n = _single(args.n, "n") or 6
    ds = datasets.clt_pmf(args.p, n, args.eps or 0.05, tuple(args.D), args.points or 101)
    ds.figure_id = "clt_pmf"
    return ds


def cmd_code_search(args):
    _require(args, "p", "n", "M")
    n = _single(args.n, "n")
    D = _single(args.D, "D")
    objective = "average" if D is None else "excess"
    cb, ev = codes.optimal_code_search(args.p, n, args.M, objective, D)
    rows = []
    for i, w in enumerate(cb.codewords):
        rows.append([i, w, ev.avg_distortion, ev.rate, ev.excess_prob_at.get(D, 0.0) if D is not None else 0.0])
    comments = [
        f"words are {n}-bit integers, first symbol most significant",
        "codebook: " + " ".join(cb.strings()),
        f"objective: {objective}" + (f" at D={D}" if D is not None else ""),
    ]
    return datasets.Dataset(
        "code_search", ["index", "codeword", "avg_distortion", "rate", "excess_prob"], rows,
        {"p": args.p, "n": n, "M": args.M, "objective": objective}, comments,
    )


def cmd_code_eval(args):
    _require(args, "p")
    try:
        cb = codes.Codebook.from_strings(s.strip() for s in args.codewords.split(","))
    except DomainError as exc:
        raise UsageError(f"--codewords: {exc}")
    return datasets.code_table(args.p, cb, "code_eval")


def cmd_mc_sim(args):
    _require(args, "p", "n", "M", "D")
    n = _single(args.n, "n")
    D = _single(args.D, "D")
    trials = args.trials or 100_000
    q1 = args.q1 if args.q1 is not None else codes.random_coding_q1(args.p, D)
    if not 0.0 <= q1 <= 1.0:
        raise UsageError(f"--q1 must lie in [0, 1], got {q1}")
    est = codes.mc_random_coding(args.p, q1, n, args.M, D, trials, args.seed)
    exact = fbl.achievability_epsilon(args.p, D, n, args.M, q1=q1)
    stderr = math.sqrt(max(est * (1 - est), 0.0) / trials)
    return datasets.Dataset(
        "mc_sim",
        ["p", "q1", "n", "M", "D", "trials", "seed", "mc_excess", "analytic_excess", "stderr"],
        [[args.p, q1, n, args.M, D, trials, args.seed, est, exact, stderr]],
        {"p": args.p, "n": n, "M": args.M, "D": D, "trials": trials, "seed": args.seed},
    )


def figure_overrides(figure_id, args):
    """Map generic flags onto a figure's parameters."""
    kw = {}
    D = args.D
    n = args.n
    if figure_id == "f1_entropy":
        if args.points:
            kw["points"] = args.points
    elif figure_id == "f3_ba_convergence":
        if args.p is not None:
            kw["p"] = args.p
        if args.s is not None:
            kw["slopes"] = tuple(args.s)
    elif figure_id == "f4_ba_vs_closed":
        if args.p is not None:
            kw["p"] = args.p
        if args.points:
            kw["points"] = args.points
    elif figure_id == "f5_code_example":
        if args.p is not None:
            kw["p"] = args.p
        if n is not None:
            kw["n"] = _single(n, "n")
        if args.M is not None:
            kw["M"] = args.M
    elif figure_id == "f6_dispersion":
        if args.points:
            kw["points"] = args.points
    elif figure_id in ("f7_fbl_bounds", "f8_rate_vs_n", "f10_comprehensive"):
        if args.p is not None:
            kw["p"] = args.p
        if D is not None and figure_id != "f10_comprehensive":
            kw["D"] = _single(D, "D")
        if args.eps is not None:
            kw["eps_list" if figure_id == "f8_rate_vs_n" else "eps"] = (
                (args.eps,) if figure_id == "f8_rate_vs_n" else args.eps
            )
        if n is not None and figure_id == "f7_fbl_bounds":
            kw["ns"] = tuple(n)
        if args.points and figure_id != "f7_fbl_bounds":
            kw["points"] = args.points
    elif figure_id == "f9_clt_pmf":
        if args.p is not None:
            kw["p"] = args.p
        if n is not None:
            kw["n"] = _single(n, "n")
        if args.eps is not None:
            kw["eps"] = args.eps
        if D is not None:
            kw["Ds"] = tuple(D)
    return kw


def cmd_figures(args):
    if args.out:
        raise UsageError("figures writes into --out-dir, not --out")
    ids = list(datasets.FIGURE_IDS) if args.all else (args.figure or [])
    if not ids:
        raise UsageError("figures needs --all or at least one --figure")
    rendered = []
    for fid in ids:
        ds = datasets.build_figure(fid, **figure_overrides(fid, args))
        rendered.append((fid, datasets.render(ds, args.format)))
    # write only once everything has been computed
    for fid, text in rendered:
        datasets.write_atomic(os.path.join(args.out_dir, f"{fid}.{args.format}"), text)
    return None


COMMANDS = {
    "rd-curve": cmd_rd_curve,
    "entropy-curve": cmd_entropy_curve,
    "ba": cmd_ba,
    "ba-sweep": cmd_ba_sweep,
    "tilted": cmd_tilted,
    "dispersion": cmd_dispersion,
    "fbl": cmd_fbl,
    "fbl-curve": cmd_fbl,
    "clt-pmf": cmd_clt_pmf,
    "code-search": cmd_code_search,
    "code-eval": cmd_code_eval,
    "mc-sim": cmd_mc_sim,
    "figures": cmd_figures,
}


def run(argv=None, stdout=None, stderr=None):
    """Run the CLI and return the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(args)
        ds = COMMANDS[args.command](args)
        if ds is not None:
            text = datasets.render(ds, args.format)
            if args.out:
                datasets.write_atomic(args.out, text)
            else:
                stdout.write(text)
    except UsageError as exc:
        print(f"ratedist: error: {exc}", file=stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"ratedist: capacity error: {exc}", file=stderr)
        return EXIT_CAPACITY
    except DomainError as exc:
        print(f"ratedist: error: {exc}", file=stderr)
        return EXIT_USAGE
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
