"""Desk-scale version of the benchmark protocol on synthetic classical instances.

Writes two instance groups of classical files (weights between b/3 and b/2,
sizes 201 and 402 by default) into a work directory, then runs every
instance under four capacity factors and several seeds and prints the
aggregate table.

    python scripts/desk_benchmark.py --instances 5 --seeds 0-2 --out report.csv
"""

import argparse
import logging
from pathlib import Path

from bpcc.bench import run_bench
from bpcc.cli import _ints
from bpcc.generate import hard_bpp
from bpcc.instance_io import CategoryScheme, DerivationSpec, write_bpp_instance
from bpcc.vns import VnsParams


def write_corpus(root: Path, sizes, count, capacity):
    for n in sizes:
        group = root / f"SYN{n}"
        group.mkdir(parents=True, exist_ok=True)
        for s in range(count):
            _, b, w = hard_bpp(1000 * n + s, n=n, b=capacity)
            (group / f"syn_{n}_{s:02d}.txt").write_text(write_bpp_instance(b, w))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--work", type=Path, default=Path("bench_work"))
    ap.add_argument("--sizes", type=_ints, default=[201, 402])
    ap.add_argument("--instances", type=int, default=5, help="instances per size")
    ap.add_argument("--capacity", type=int, default=10_000)
    ap.add_argument("--seeds", type=_ints, default=list(range(10)))
    ap.add_argument("--scheme", default="uniform-random", choices=[s.value for s in CategoryScheme])
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING)

    write_corpus(args.work, args.sizes, args.instances, args.capacity)
    report = run_bench(
        args.work,
        derivation=DerivationSpec(category_scheme=args.scheme),
        params=VnsParams(),
        seeds=args.seeds,
        jobs=args.jobs,
    )
    print(report.to_table())
    if args.out:
        args.out.write_text(report.to_csv())


if __name__ == "__main__":
    main()
