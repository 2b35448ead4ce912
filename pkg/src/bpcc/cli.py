"""Command-line entry point: ``bpcc {solve,bench,export,exact,derive,check}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import load_bounds, run_bench
from .bounds import l_cont, l_mt
from .exact import DEFAULT_BUDGET, solve_exact
from .instance_io import (
    CategoryScheme,
    DerivationSpec,
    derive_bpcc,
    export_lp,
    parse_bpp_instance,
    parse_matrix,
    parse_solution,
    read_instance,
    write_instance,
    write_solution,
)
from .model import BpccError
from .vns import VnsParams, run_vns


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.replace(",", " ").split()]


def _ints(text: str) -> list[int]:
    out = []
    for tok in text.replace(",", " ").split():
        if "-" in tok.lstrip("-"):
            lo, hi = tok.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(tok))
    return out


def _add_vns_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("search parameters")
    d = VnsParams()
    g.add_argument("--lambda", dest="lam", type=int, default=d.lam, help="iterations without improvement before stopping")
    g.add_argument("--phi", type=int, default=d.phi, help="total iteration cap")
    g.add_argument("--alpha", type=float, default=d.alpha, help="max fraction of bins emptied by N3")
    g.add_argument("--beta", type=float, default=d.beta, help="max fraction of bins emptied by N4")
    g.add_argument("--gamma", type=float, default=d.gamma, help="fill fraction below which L1 empties a bin")


def _add_derive_flags(p: argparse.ArgumentParser, factor: bool = True) -> None:
    g = p.add_argument_group("derivation of classical instances")
    if factor:
        g.add_argument("--capacity-factor", type=float, default=100, help="percent of the original capacity")
    g.add_argument("--scheme", choices=[s.value for s in CategoryScheme], default=CategoryScheme.UNIFORM_RANDOM.value)
    g.add_argument("--categories", type=int, default=6, help="number of categories p")
    g.add_argument("--category-seed", type=int, default=0)
    g.add_argument("--matrix-file", type=Path, help="p x p 0/1 matrix; default is the built-in six-category matrix")


def _vns_params(args, seed: int = 0) -> VnsParams:
    return VnsParams(lam=args.lam, phi=args.phi, alpha=args.alpha, beta=args.beta, gamma=args.gamma, seed=seed)


def _derivation(args, factor: float = 100) -> DerivationSpec:
    matrix = parse_matrix(args.matrix_file.read_text()) if args.matrix_file else None
    return DerivationSpec(
        capacity_factor=getattr(args, "capacity_factor", factor),
        category_scheme=args.scheme,
        p=args.categories,
        seed=args.category_seed,
        matrix=matrix,
    )


def _load(path: Path, args):
    return read_instance(path.read_text(), _derivation(args), path.stem)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def cmd_solve(args) -> int:
    inst = _load(args.instance, args)
    result = run_vns(inst, _vns_params(args, args.seed))
    summary = (
        f"# objective={result.objective} fitness={result.fitness:.6f} "
        f"l_cont={l_cont(inst).value} l_mt={l_mt(inst).value} "
        f"stop={result.stop_reason.value} iterations={result.iterations} "
        f"time={result.wall_time:.3f}s"
    )
    print(summary)
    _emit(write_solution(result.solution), args.out)
    return 0


def cmd_bench(args) -> int:
    bounds = load_bounds(args.bounds.read_text()) if args.bounds else None
    if not args.instance_dir.is_dir():
        raise FileNotFoundError(2, "No such directory", str(args.instance_dir))
    report = run_bench(
        args.instance_dir,
        derivation=_derivation(args),
        capacity_factors=args.capacity_factors,
        params=_vns_params(args),
        seeds=args.seeds,
        bounds=bounds,
        jobs=args.jobs,
    )
    if not report.rows:
        print(f"warning: no instances found in {args.instance_dir}", file=sys.stderr)
    for f in report.failures:
        print(f"warning: {f.instance} @ {f.capacity_factor}%: {f.message}", file=sys.stderr)
    if args.out:
        args.out.write_text(report.to_csv())
    else:
        sys.stdout.write(report.to_csv())
    print(report.to_table(), file=sys.stderr if args.out is None else sys.stdout)
    return 0


def cmd_export(args) -> int:
    inst = _load(args.instance, args)
    _emit(export_lp(inst, args.bin_limit), args.out)
    return 0


def cmd_exact(args) -> int:
    inst = _load(args.instance, args)
    res = solve_exact(inst, args.budget)
    status = "optimal" if res.proven else "budget-exceeded"
    print(f"# {status} objective={res.objective} proven={str(res.proven).lower()} nodes={res.nodes}")
    _emit(write_solution(res.solution), args.out)
    return 0 if res.proven else 3


def cmd_derive(args) -> int:
    bpp = parse_bpp_instance(args.bpp.read_text())
    inst = derive_bpcc(bpp, _derivation(args), args.bpp.stem)
    _emit(write_instance(inst), args.out)
    return 0


def cmd_check(args) -> int:
    inst = _load(args.instance, args)
    parse_solution(args.solution.read_text(), inst)
    print("ok")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bpcc", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the VNS on one instance")
    p.add_argument("instance", type=Path)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, help="solution file (default: stdout)")
    _add_vns_flags(p)
    _add_derive_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="multi-seed benchmark over a directory")
    p.add_argument("instance_dir", type=Path)
    p.add_argument("--seeds", type=_ints, default=list(range(10)), help="e.g. 0-9 or 1,5,7")
    p.add_argument("--capacity-factors", type=_floats, default=[100, 120, 150, 200])
    p.add_argument("--bounds", type=Path, help="external bounds: 'name factor bound' per line")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=Path, help="CSV report (default: stdout)")
    _add_vns_flags(p)
    _add_derive_flags(p, factor=False)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export", help="write the integer model in LP format")
    p.add_argument("instance", type=Path)
    p.add_argument("--bin-limit", type=int, help="number of bin slots (default: n)")
    p.add_argument("--out", type=Path)
    _add_derive_flags(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser(
        "exact", help="branch and bound for small instances (exit 3 if the node budget runs out)"
    )
    p.add_argument("instance", type=Path)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="node limit")
    p.add_argument("--out", type=Path)
    _add_derive_flags(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("derive", help="turn a classical instance into a BPCC instance")
    p.add_argument("bpp", type=Path)
    p.add_argument("--out", type=Path)
    _add_derive_flags(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("check", help="validate a solution file")
    p.add_argument("instance", type=Path)
    p.add_argument("solution", type=Path)
    _add_derive_flags(p)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename or exc}", file=sys.stderr)
    except (BpccError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
