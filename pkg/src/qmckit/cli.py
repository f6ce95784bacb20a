"""Command-line interface: ``qmc <subcommand> ...``.

Subcommands
-----------
gen      write a point-set file
disc     discrepancy of a point-set file
wce      worst-case error of a point-set file or lattice rule
cbc      component-by-component lattice construction
dual     dual lattice vectors, enhanced trigonometric degree, dual nets
sample   truncated Karhunen-Loeve Brownian paths as CSV
analyze  summary metrics for a file, or the random-point discrepancy experiment

Exit status is 0 on success, 2 on bad parameters or input files and 3 when a
capacity guard refuses the request.  ``QMC_THREADS`` is read and validated
but computation is single-threaded, so it has no effect.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import cbc as cbc_mod
from . import digital, discrepancy, formats, kernels, pointsets, stochastic
from .errors import CapacityError, ParameterError, ParseError, QmcError, RepresentationError
from .formats import ReportRow

EXIT_OK = 0
EXIT_PARAM = 2
EXIT_CAPACITY = 3

KINDS = (
    "vdc",
    "halton",
    "hammersley",
    "symham",
    "lattice",
    "kronecker",
    "lcg",
    "polylattice",
    "niederreiter",
    "net",
    "random",
)


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise ParameterError(f"--{n.replace('_', '-')} is required for this request")


def _need_seed(args):
    if args.seed is None:
        raise ParameterError("this command draws random numbers and requires --seed")


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="ascii", newline="\n"), True


def _emit_report(rows, args):
    out, close = _open_out(getattr(args, "out", None))
    try:
        formats.write_report(rows, out)
    finally:
        if close:
            out.close()


def _read_points(path: str) -> pointsets.PointSet:
    try:
        if path == "-":
            return formats.read_pointset(sys.stdin)
        return formats.read_pointset(path)
    except OSError as e:
        raise ParameterError(f"cannot read {path}: {e.strerror}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> None:
    k = args.kind
    if k == "vdc":
        _need(args, "n")
        P = pointsets.van_der_corput(args.b or 2, args.n)
    elif k in ("halton", "hammersley"):
        _need(args, "n", "bases")
        P = (pointsets.halton if k == "halton" else pointsets.hammersley)(args.bases, args.n)
    elif k == "symham":
        _need(args, "m")
        P = pointsets.symmetrized_hammersley(args.m)
    elif k == "lattice":
        _need(args, "n", "g")
        P = pointsets.rank1_lattice(pointsets.LatticeRule(args.n, tuple(args.g)))
    elif k == "kronecker":
        _need(args, "n", "alpha")
        P = pointsets.kronecker(args.alpha, args.n)
    elif k == "lcg":
        _need(args, "b", "a")
        P, _ = pointsets.lcg_pointset(pointsets.LcgParams(args.b, args.a, args.c, args.x0))
    elif k == "polylattice":
        _need(args, "p", "q")
        P = digital.polynomial_lattice(args.p, args.q, args.b or 2)
    elif k == "niederreiter":
        _need(args, "s", "m")
        P = digital.digital_net(digital.niederreiter_matrices(args.b or 2, args.s, args.m), args.n)
    elif k == "net":
        _need(args, "matrices")
        P = digital.digital_net(formats.read_matrices(args.matrices), args.n)
    else:  # random
        _need(args, "n", "s")
        _need_seed(args)
        P = stochastic.random_pointset(args.s, args.n, stochastic.RngStream(args.seed, args.stream))
    out, close = _open_out(args.out)
    try:
        formats.write_pointset(P, out, exact=False if args.float else None)
    finally:
        if close:
            out.close()


def cmd_disc(args) -> None:
    P = _read_points(args.file)
    base = {"N": P.N, "s": P.s}
    rows = []
    for metric in args.metric:
        if metric == "star":
            rows.append(ReportRow("star_discrepancy", base, discrepancy.star_discrepancy_exact(P)))
        elif metric == "l2":
            rows.append(ReportRow("l2_discrepancy", base, discrepancy.l2_discrepancy(P)))
        elif metric == "l2star":
            rows.append(ReportRow("l2_star_discrepancy", base, discrepancy.l2_star_discrepancy(P)))
        elif metric == "parseval":
            res = discrepancy.l2_via_parseval(P, max_level=args.level)
            rows.append(ReportRow("l2_parseval", {**base, "L": res.max_level}, res.value, res.tail))
        elif metric == "etk":
            _need(args, "m")
            rows.append(ReportRow("etk_bound", {**base, "m": args.m}, discrepancy.etk_bound(P, args.m)))
        else:  # lp
            _need_seed(args)
            est = discrepancy.lp_discrepancy_mc(P, args.p, args.samples, args.seed)
            params = {**base, "p": args.p, "samples": args.samples, "seed": args.seed}
            rows.append(ReportRow("lp_discrepancy_mc", params, est.value, est.stderr))
    _emit_report(rows, args)


def cmd_wce(args) -> None:
    spec = kernels.parse_space(args.space)
    rows = []
    if args.file is not None:
        P = _read_points(args.file)
        params = {"space": spec.name(), "N": P.N, "s": P.s}
        if args.average:
            rows.append(ReportRow("avg_case_error", params, kernels.avg_case_error(spec, P)))
        else:
            rows.append(ReportRow("wce", params, kernels.wce_kernel(spec, P)))
    else:
        _need(args, "n", "g")
        rule = pointsets.LatticeRule(args.n, tuple(args.g))
        if spec.family != "korobov":
            P = pointsets.rank1_lattice(rule)
            params = {"space": spec.name(), "N": rule.N, "g": rule.g}
            rows.append(ReportRow("wce", params, kernels.wce_kernel(spec, P)))
        else:
            params = {"alpha": spec.alpha, "N": rule.N, "g": rule.g}
            if args.trunc is not None:
                d = kernels.wce_korobov_dual(rule, spec.alpha, args.trunc)
                rows.append(ReportRow("wce2_korobov_dual", {**params, "trunc": args.trunc}, d.value, d.tail_bound))
            elif spec.integer_alpha is not None:
                rows.append(ReportRow("wce2_korobov_closed", params, kernels.wce_korobov_closed(rule, spec.integer_alpha)))
            else:
                raise ParameterError("non-integer smoothness needs --trunc for the dual sum")
    _emit_report(rows, args)


def cmd_cbc(args) -> None:
    alpha = int(args.alpha) if float(args.alpha).is_integer() else None
    if alpha is None:
        raise ParameterError("alpha must be 1, 2 or 3")
    search = cbc_mod.cbc_naive if args.method == "naive" else cbc_mod.cbc_fast
    res = search(args.n, args.s, alpha)
    rows = [ReportRow("cbc_g", {"N": res.N, "s": args.s, "alpha": alpha}, list(res.g), args.method)]
    for d, (gd, e2) in enumerate(zip(res.g, res.wce2), start=1):
        rows.append(ReportRow("cbc_wce", {"N": res.N, "alpha": alpha, "d": d, "g_d": gd}, math.sqrt(max(e2, 0.0)), e2))
    _emit_report(rows, args)


def cmd_dual(args) -> None:
    rows = []
    if args.matrices is not None:
        gen = formats.read_matrices(args.matrices)
        for k in digital.dual_net(gen):
            if any(k):
                rows.append(ReportRow("dual_net_vector", {"b": gen.b, "m": gen.m}, list(k)))
    else:
        _need(args, "n", "g")
        rule = pointsets.LatticeRule(args.n, tuple(args.g))
        params = {"N": rule.N, "g": rule.g}
        if args.bound is not None:
            for h in discrepancy.dual_lattice_enum(rule, args.bound, args.norm):
                rows.append(ReportRow("dual_vector", {**params, "norm": args.norm}, list(h), sum(abs(v) for v in h)))
        rows.append(
            ReportRow(
                "enhanced_trig_degree",
                params,
                discrepancy.enhanced_trig_degree(rule),
                discrepancy.minkowski_bound(rule.s, rule.N),
            )
        )
    _emit_report(rows, args)


def cmd_sample(args) -> None:
    _need_seed(args)
    if args.grid_size < 1:
        raise ParameterError("--grid-size must be positive")
    grid = np.arange(args.grid_size + 1) / args.grid_size
    rng = stochastic.RngStream(args.seed, args.stream)
    paths = stochastic.kl_brownian_paths(args.terms, grid, args.paths, rng)
    out, close = _open_out(args.out)
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow([formats.format_value(float(x)) for x in grid])
        for row in paths:
            w.writerow([formats.format_value(float(v)) for v in row])
    finally:
        if close:
            out.close()


def cmd_analyze(args) -> None:
    rows = []
    if args.file is not None:
        P = _read_points(args.file)
        base = {"N": P.N, "s": P.s}
        rows.append(ReportRow("n_points", {}, P.N))
        rows.append(ReportRow("dimension", {}, P.s))
        rows.append(ReportRow("l2_discrepancy", base, discrepancy.l2_discrepancy(P)))
        rows.append(ReportRow("l2_star_discrepancy", base, discrepancy.l2_star_discrepancy(P)))
        try:
            rows.append(ReportRow("star_discrepancy", base, discrepancy.star_discrepancy_exact(P)))
        except CapacityError:
            rows.append(ReportRow("star_discrepancy", base, "nan", "capacity"))
    else:
        _need(args, "s", "n")
        _need_seed(args)
        rng = stochastic.RngStream(args.seed, args.stream)
        summ = stochastic.random_discrepancy_experiment(args.s, args.n, args.reps, rng)
        params = {"s": args.s, "N": args.n, "reps": args.reps, "seed": args.seed, "stream": args.stream}
        rows.append(ReportRow("random_star_discrepancy", {**params, "stat": "mean"}, summ.mean, summ.scaled_mean))
        rows.append(ReportRow("random_star_discrepancy", {**params, "stat": "max"}, summ.max))
        for q, v in summ.quantiles.items():
            rows.append(ReportRow("random_star_discrepancy", {**params, "stat": f"q{q:g}"}, v))
        t = args.hoeffding_t if args.hoeffding_t is not None else math.sqrt(2 * args.n * math.log(2 * args.n))
        rows.append(ReportRow("hoeffding_bound", {"t": t, "N": args.n}, stochastic.hoeffding_bound(args.n, t)))
    _emit_report(rows, args)


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qmc", description="Quasi-Monte Carlo point sets and error analysis.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a point set")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--n", type=int, help="number of points (lattice modulus for --kind lattice)")
    g.add_argument("--s", type=int, help="dimension")
    g.add_argument("--m", type=int, help="digit count (niederreiter) or level (symham)")
    g.add_argument("--b", type=int, help="prime base")
    g.add_argument("--g", type=_ints, help="generating vector, e.g. 1,2")
    g.add_argument("--bases", type=_ints)
    g.add_argument("--alpha", type=_floats, help="Kronecker irrationals")
    g.add_argument("--a", type=int, help="LCG multiplier")
    g.add_argument("--c", type=int, default=0)
    g.add_argument("--x0", type=int, default=1)
    g.add_argument("--p", type=int, help="polynomial modulus as a base-b integer")
    g.add_argument("--q", type=_ints, help="polynomial numerators as base-b integers")
    g.add_argument("--matrices", help="generating-matrix file")
    g.add_argument("--float", action="store_true", help="write floats even when exact values exist")
    g.add_argument("--seed", type=int)
    g.add_argument("--stream", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("disc", help="discrepancy of a point-set file")
    d.add_argument("file")
    d.add_argument("--metric", action="append", choices=("star", "l2", "l2star", "parseval", "etk", "lp"))
    d.add_argument("--m", type=int, help="frequency cutoff for etk")
    d.add_argument("--level", type=int, help="Haar level cutoff for parseval")
    d.add_argument("--p", type=float, default=2.0)
    d.add_argument("--samples", type=int, default=100_000)
    d.add_argument("--seed", type=int)
    d.add_argument("--out")
    d.set_defaults(func=cmd_disc)

    w = sub.add_parser("wce", help="worst-case or average-case error")
    w.add_argument("file", nargs="?")
    w.add_argument("--space", required=True, help="anchored0|anchored1|sobolev|korobov:ALPHA|min")
    w.add_argument("--average", action="store_true", help="treat the kernel as a covariance")
    w.add_argument("--n", type=int)
    w.add_argument("--g", type=_ints)
    w.add_argument("--trunc", type=int, help="dual-sum truncation for Korobov spaces")
    w.add_argument("--out")
    w.set_defaults(func=cmd_wce)

    c = sub.add_parser("cbc", help="component-by-component lattice search")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--alpha", type=float, default=1.0)
    mode = c.add_mutually_exclusive_group()
    mode.add_argument("--fast", dest="method", action="store_const", const="fast")
    mode.add_argument("--naive", dest="method", action="store_const", const="naive")
    c.set_defaults(method="fast")
    c.add_argument("--out")
    c.set_defaults(func=cmd_cbc)

    du = sub.add_parser("dual", help="dual lattice or dual net")
    du.add_argument("--n", type=int)
    du.add_argument("--g", type=_ints)
    du.add_argument("--bound", type=int, help="list dual vectors with norm <= bound")
    du.add_argument("--norm", choices=("l1", "sup"), default="l1")
    du.add_argument("--matrices", help="generating-matrix file")
    du.add_argument("--out")
    du.set_defaults(func=cmd_dual)

    sa = sub.add_parser("sample", help="Karhunen-Loeve Brownian paths")
    sa.add_argument("--terms", type=int, default=100)
    sa.add_argument("--paths", type=int, default=10)
    sa.add_argument("--grid-size", type=int, default=16)
    sa.add_argument("--seed", type=int)
    sa.add_argument("--stream", type=int, default=0)
    sa.add_argument("--out")
    sa.set_defaults(func=cmd_sample)

    an = sub.add_parser("analyze", help="summary metrics or random-point experiment")
    an.add_argument("file", nargs="?")
    an.add_argument("--s", type=int)
    an.add_argument("--n", type=int)
    an.add_argument("--reps", type=int, default=20)
    an.add_argument("--hoeffding-t", type=float)
    an.add_argument("--seed", type=int)
    an.add_argument("--stream", type=int, default=0)
    an.add_argument("--out")
    an.set_defaults(func=cmd_analyze)
    return p


def _check_threads() -> None:
    raw = os.environ.get("QMC_THREADS")
    if raw is not None and raw.strip():
        try:
            if int(raw) < 1:
                raise ValueError
        except ValueError:
            raise ParameterError(f"QMC_THREADS must be a positive integer, got {raw!r}") from None


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_PARAM
    if args.command == "disc" and not args.metric:
        args.metric = ["l2"]
    try:
        _check_threads()
        args.func(args)
    except CapacityError as e:
        print(f"qmc: capacity: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ParameterError, ParseError, RepresentationError) as e:
        print(f"qmc: error: {e}", file=sys.stderr)
        return EXIT_PARAM
    except QmcError as e:
        print(f"qmc: {e}", file=sys.stderr)
        return 1
    return EXIT_OK


run = main

if __name__ == "__main__":
    sys.exit(main())
