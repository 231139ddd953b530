"""Command-line front end: ``bia {bound,sweep,synth,verify,lp,efficiency}``.

Exit codes: 0 ok, 1 verification failed, 2 usage or parse error,
3 domain error, 4 unsupported configuration.
"""

from __future__ import annotations

import argparse
import os
import sys

from .bounds import (decimal, downlink_cell_bound, format_fraction, ldof_function,
                     optimal_preset_modes, sweep_bound, sweep_csv, uplink_cell_bound)
from .converse import (DEFAULT_BUDGET, bound_for_cardinalities, build_converse_lp, export_lp,
                       solve_converse_lp)
from .core_model import CellularConfig, SystemConfig, dumps_scheme, load_scheme
from .errors import BiaError, UsageError
from .synth import golden_example, synthesize
from .verifier import RankBackend, format_report, monte_carlo


def _frac(x) -> str:
    return f"{format_fraction(x)} (~{decimal(x)})"


def _default_seed() -> int:
    raw = os.environ.get("BIA_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"BIA_SEED must be an integer, got {raw!r}") from None


def _write(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_cells(text: str):
    try:
        return [[int(x) for x in cell.split(",") if x.strip()] for cell in text.split(";")]
    except ValueError:
        raise UsageError(f"bad --cells value {text!r}") from None


def cmd_bound(args) -> int:
    if args.cell:
        if args.uplink:
            if args.cells is None or args.N is None:
                raise UsageError("--uplink needs --cells and --N")
            r = uplink_cell_bound(_parse_cells(args.cells), args.N)
        else:
            if None in (args.G, args.per_cell_users, args.M, args.N):
                raise UsageError("--downlink needs --G --per-cell-users --M --N")
            r = downlink_cell_bound(CellularConfig(args.G, args.per_cell_users, args.M, args.N))
    else:
        if None in (args.M, args.N, args.K):
            raise UsageError("bound needs --M --N --K")
        r = optimal_preset_modes(SystemConfig(args.M, args.N, args.K))
    extra = f" Gamma_opt={r.Gamma_opt}" if r.Gamma_opt is not None else ""
    print(f"n*={r.n_star} bound={_frac(r.bound)}")
    print(f"branch={r.branch} Gamma={r.Gamma} alpha={r.alpha}{extra}")
    return 0


def cmd_sweep(args) -> int:
    _write(sweep_csv(sweep_bound(args.M, args.K, args.n_max)), args.out)
    return 0


def cmd_synth(args) -> int:
    if args.golden:
        scheme = golden_example(args.golden)
    else:
        if None in (args.M, args.N, args.K):
            raise UsageError("synth needs --M --N --K or --golden")
        scheme = synthesize(SystemConfig(args.M, args.N, args.K))
    _write(dumps_scheme(scheme), args.out)
    return 0


def cmd_verify(args) -> int:
    scheme = load_scheme(args.scheme)
    seed = args.seed if args.seed is not None else _default_seed()
    backend = RankBackend("float") if args.float else RankBackend()
    mc = monte_carlo(scheme, args.trials, seed, backend, workers=args.workers)
    sums = sorted(set(mc.sum_dofs))
    sum_txt = ",".join(format_fraction(s) for s in sums)
    print(f"{mc.passes}/{mc.trials} pass, sum={sum_txt}, m={scheme.m}, seed={seed}")
    shown = next((r for r in mc.reports if not r.passed), mc.reports[0])
    sys.stdout.write(format_report(shown))
    if not mc.all_passed:
        bad = sorted({j for r in mc.reports for j in r.failing_users()})
        print("failing users: " + " ".join(str(j) for j in bad))
        return 1
    return 0


def cmd_lp(args) -> int:
    cfg = SystemConfig(args.M, args.N, args.K)
    lp = build_converse_lp(cfg, args.n, budget=args.budget)
    opt = solve_converse_lp(lp)
    closed = ldof_function(cfg.M, cfg.K, args.n)
    print(f"lp_opt={format_fraction(opt)} closed_form={format_fraction(closed)} "
          f"gap={format_fraction(closed - opt)} variables={lp.num_variables}")
    if args.export:
        _write(export_lp(lp), args.export)
    return 0


def cmd_efficiency(args) -> int:
    text = (args.cardinalities or "").strip()
    try:
        cards = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad --cardinalities {text!r}") from None
    print(format_fraction(bound_for_cardinalities(args.M, args.K, cards)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bia", description="Blind interference alignment workbench")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="closed-form linear sum-DoF bound")
    b.add_argument("--M", type=int)
    b.add_argument("--N", type=int)
    b.add_argument("--K", type=int)
    b.add_argument("--cell", action="store_true", help="cellular variant")
    d = b.add_mutually_exclusive_group()
    d.add_argument("--downlink", action="store_true")
    d.add_argument("--uplink", action="store_true")
    b.add_argument("--G", type=int, help="number of cells (downlink)")
    b.add_argument("--per-cell-users", type=int, help="users per cell (downlink)")
    b.add_argument("--cells", help="uplink antenna counts, e.g. '1,1;2;1,1'")
    b.set_defaults(func=cmd_bound)

    s = sub.add_parser("sweep", help="bound as a function of N (CSV)")
    s.add_argument("--M", type=int, required=True)
    s.add_argument("--K", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    y = sub.add_parser("synth", help="synthesize a scheme document")
    y.add_argument("--M", type=int)
    y.add_argument("--N", type=int)
    y.add_argument("--K", type=int)
    y.add_argument("--golden", help="ex3 or ex4")
    y.add_argument("--out")
    y.set_defaults(func=cmd_synth)

    v = sub.add_parser("verify", help="Monte Carlo rank verification")
    v.add_argument("scheme")
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--seed", type=int, help="master seed (default: $BIA_SEED or 0)")
    v.add_argument("--float", action="store_true", help="float SVD backend")
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    lp = sub.add_parser("lp", help="exact converse LP")
    lp.add_argument("--M", type=int, required=True)
    lp.add_argument("--N", type=int, required=True)
    lp.add_argument("--K", type=int, required=True)
    lp.add_argument("--n", type=int, required=True)
    lp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    lp.add_argument("--export")
    lp.set_defaults(func=cmd_lp)

    e = sub.add_parser("efficiency", help="bound for a multiset of set cardinalities")
    e.add_argument("--M", type=int, required=True)
    e.add_argument("--K", type=int, required=True)
    e.add_argument("--cardinalities", default="")
    e.set_defaults(func=cmd_efficiency)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BiaError as exc:
        print(str(exc), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"IO_ERROR: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
