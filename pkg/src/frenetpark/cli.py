"""Command-line front end.

    frenetpark generate   --scenario E1 --dt 1e-4 --duration 0.1 -o e1.csv
    frenetpark analyze    --scenario E2 --v-base 15e3 -o e2_tnb.csv
    frenetpark compare    --input e1.csv --theta-p0 0.5235987755982988
    frenetpark nd-analyze --scenario SIX --v-base 15e3 -o six.csv
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import analysis as an
from .frenet import EPS_KAPPA
from .frenet_nd import RANK_TOL
from .park import OMEGA_0
from .signals import (
    SCENARIO_NAMES,
    CsvFormatError,
    builtin_scenario,
    read_csv,
    sample_series,
    write_csv,
    write_rows,
)

log = logging.getLogger("frenetpark")


class UsageError(Exception):
    pass


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value

    return parse


class _Parser(argparse.ArgumentParser):
    # one-line diagnostics instead of the usage block
    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="frenetpark",
        description="Park transform and Frenet-frame analysis of multi-phase waveforms.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def source(sp, need_scenario=False):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--scenario", help=f"builtin scenario: {', '.join(SCENARIO_NAMES)}")
        if not need_scenario:
            g.add_argument("--input", help="CSV with header t,v1,...,vn")
        sp.add_argument("--dt", type=_positive(float), default=1e-4, help="sample step in s (default: %(default)s)")
        sp.add_argument("--duration", type=_positive(float), default=0.1, help="window length in s (default: %(default)s)")
        sp.add_argument("--t0", type=float, default=0.0, help="window start in s (default: %(default)s)")
        sp.add_argument("-o", "--output", help="output CSV path (stdout when omitted)")

    def analysis_opts(sp):
        sp.add_argument(
            "--deriv-mode",
            choices=("analytic", "finite-difference"),
            default="analytic",
            help="derivative source; file inputs always use finite differences",
        )
        sp.add_argument("--park-omega", type=float, default=OMEGA_0, help="Park frame speed in rad/s (default: 2*pi*60)")
        sp.add_argument(
            "--theta-p0",
            dest="theta_P0",
            type=float,
            default=0.0,
            help="initial Park angle in rad (default 0; the builtin scenarios start at pi/6)",
        )
        sp.add_argument("--v-base", type=_positive(float), help="voltage base in V; enables per-unit output")
        sp.add_argument("--eps-v", type=_positive(float), default=an.EPS_V_REL, help="zero-voltage threshold relative to the largest |v| (default: %(default)s)")
        sp.add_argument("--eps-kappa", type=_positive(float), default=EPS_KAPPA, help="relative threshold on |v x v'| (default: %(default)s)")

    g = sub.add_parser("generate", help="sample a builtin scenario to CSV")
    source(g, need_scenario=True)
    g.add_argument("--with-derivatives", action="store_true", help="add analytic derivative columns vi_d1..vi_d3")

    a = sub.add_parser("analyze", help="per-sample dqo and TNB components with frequencies")
    source(a)
    analysis_opts(a)

    c = sub.add_parser("compare", help="Park-vs-Frenet deviation and Psi rotation report")
    source(c)
    analysis_opts(c)

    nd = sub.add_parser("nd-analyze", help="generalized frequencies of an n-phase signal")
    source(nd)
    analysis_opts(nd)
    nd.add_argument("--rank-tol", type=_positive(float), default=RANK_TOL, help="relative Gram-Schmidt degeneracy tolerance (default: %(default)s)")
    nd.add_argument("--allow-high-order", action="store_true", help="permit finite-difference derivatives above order 3 (noise-amplifying)")
    return p


def _load(args):
    if args.scenario is not None:
        try:
            scenario = builtin_scenario(args.scenario)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        series = sample_series(scenario, args.t0, args.duration, args.dt)
        if getattr(args, "deriv_mode", "analytic") == "finite-difference":
            scenario = None
        return series, scenario
    if args.deriv_mode == "analytic":
        log.warning("analytic derivatives need a builtin scenario; using finite differences for %s", args.input)
    return read_csv(args.input), None


def _nominal(args, n):
    return args.v_base * (n / 2) ** 0.5 if args.v_base else None


def _emit(header, rows, output):
    write_rows(header, rows, output or sys.stdout)


def cmd_generate(args) -> int:
    try:
        scenario = builtin_scenario(args.scenario)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    series = sample_series(scenario, args.t0, args.duration, args.dt, with_analytic=args.with_derivatives)
    write_csv(series, args.output or sys.stdout)
    return 0


def _analysis3(args):
    series, scenario = _load(args)
    if series.dim != 3:
        raise UsageError(f"input has {series.dim} phases; the dqo/TNB pipeline needs 3, use nd-analyze")
    stack = an.derivative_stack(series, 2, scenario)
    eps_v = an.eps_v_for(series, args.eps_v, _nominal(args, 3))
    return an.analyze3(series, stack, args.park_omega, args.theta_P0, eps_v, args.eps_kappa)


def cmd_analyze(args) -> int:
    result = _analysis3(args)
    _emit(an.HEADER_3, result.rows(args.v_base), args.output)
    return 0


def cmd_compare(args) -> int:
    result = _analysis3(args)
    cmp = an.compare3(result, args.park_omega)
    summary = cmp.summary()
    if args.output:
        rows = (
            [float(cmp.t[k]), int(cmp.defined[k]), float(cmp.deviation[k]),
             float(cmp.psi_rotation[k, 0, 1]), float(cmp.psi_rotation[k, 1, 2]), float(cmp.psi_rotation[k, 0, 2])]
            for k in range(cmp.t.size)
        )
        write_rows(["t", "defined", "deviation", "psi_w12", "psi_w23", "psi_w13"], rows, args.output)
    width = max(len(k) for k in summary)
    print(f"{'quantity':<{width}}  value")
    for key, value in summary.items():
        print(f"{key:<{width}}  {value:.6g}")
    return 0


def cmd_nd_analyze(args) -> int:
    series, scenario = _load(args)
    n = series.dim
    if n < 3:
        raise UsageError(f"nd-analyze needs at least 3 phases, got {n}")
    order = n - 1
    if scenario is None and order > 3 and not args.allow_high_order:
        log.warning("finite differences limited to order 3; pass --allow-high-order for order %d", order)
        order = 3
    stack = an.derivative_stack(series, order, scenario, allow_high_order=args.allow_high_order)
    eps_v = an.eps_v_for(series, args.eps_v, _nominal(args, n))
    result = an.analyze_nd(series, stack, args.rank_tol, eps_v)
    _emit(result.header(), result.rows(args.v_base), args.output)
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "compare": cmd_compare,
    "nd-analyze": cmd_nd_analyze,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, CsvFormatError, ValueError, OSError) as exc:
        print(f"frenetpark: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
