"""How often the greedy start is already optimal as bins get larger.

For each capacity factor, counts instances whose FFCD packing meets the
continuous bound and the Martello-Toth bound, and the mean gap to each.
"""

import argparse

from bpcc.bounds import l_cont, l_mt
from bpcc.generate import hard_bpp
from bpcc.greedy import initial_solution
from bpcc.instance_io import DerivationSpec, derive_bpcc
from bpcc.model import objective_z

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--n", type=int, default=200)
ap.add_argument("--instances", type=int, default=50)
ap.add_argument("--factors", type=float, nargs="+", default=[100, 120, 150, 200])
args = ap.parse_args()

print(f"{'factor':>6} {'=l_cont':>8} {'gap':>6} {'=l_mt':>6} {'gap':>6}")
for f in args.factors:
    hit_c = hit_m = gap_c = gap_m = 0
    for s in range(args.instances):
        inst = derive_bpcc(hard_bpp(s, n=args.n), DerivationSpec(f, seed=s))
        z = objective_z(initial_solution(inst))
        lc, lm = l_cont(inst).value, l_mt(inst).value
        hit_c += z == lc
        hit_m += z == lm
        gap_c += z - lc
        gap_m += z - lm
    k = args.instances
    print(f"{f:>6g} {hit_c / k:>8.2f} {gap_c / k:>6.2f} {hit_m / k:>6.2f} {gap_m / k:>6.2f}")
