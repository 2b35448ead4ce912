"""Variable neighbourhood search with adaptive neighbourhood choice.

Each iteration perturbs the best packing found so far with one of four
shaking operators (picked by roulette over success scores), improves it with
a move-based and a swap-based local search, and keeps the result only if it
raises the fill fitness without using more bins.
"""

from __future__ import annotations

import math
import random
import time
from bisect import bisect_right, insort
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .bounds import l_cont
from .greedy import ffcd, initial_solution
from .model import (
    InfeasibleSolutionError,
    Instance,
    Solution,
    category_mask,
    check_solution,
    fill_score,
    objective_z,
)

K_MAX = 4


@dataclass(frozen=True)
class VnsParams:
    """Search knobs. Defaults are the published experimental settings."""

    lam: int = 200  # iterations without improvement before stopping
    phi: int = 2000  # total iteration cap
    alpha: float = 0.25  # max fraction of bins emptied by N3
    beta: float = 0.5  # max fraction of bins emptied by N4
    gamma: float = 1.0  # L1 only empties bins filled below gamma * b
    k_max: int = K_MAX
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.alpha < self.beta <= 1:
            raise ValueError(f"need 0 < alpha < beta <= 1, got {self.alpha}, {self.beta}")
        if not 0 < self.gamma <= 1:
            raise ValueError(f"need 0 < gamma <= 1, got {self.gamma}")
        if self.lam < 1 or self.phi < 1 or self.lam > self.phi:
            raise ValueError(f"need 1 <= lam <= phi, got lam={self.lam}, phi={self.phi}")
        if self.k_max != K_MAX:
            raise ValueError(f"k_max is fixed at {K_MAX}")


class StopReason(str, Enum):
    NO_IMPROVEMENT = "no-improvement"
    ITERATION_CAP = "iteration-cap"
    PROVEN_OPTIMAL = "proven-optimal"


@dataclass(frozen=True)
class Improvement:
    iteration: int
    neighbourhood: int
    objective: int
    fitness: float


@dataclass
class VnsResult:
    solution: Solution
    objective: int
    fitness: float
    iterations: int
    stop_reason: StopReason
    wall_time: float = field(compare=False)
    lower_bound: int = 0
    initial_objective: int = 0
    initial_fitness: float = 0.0
    scores: tuple[int, ...] = ()
    improvements: list[Improvement] = field(default_factory=list)


def choose_neighbourhood(scores: Sequence[int], rng: random.Random) -> int:
    """Pick k in 1..len(scores) with probability proportional to its score."""
    return rng.choices(range(1, len(scores) + 1), weights=scores)[0]


def shake(
    inst: Instance, x: Solution, k: int, params: VnsParams, rng: random.Random
) -> Solution:
    """Empty part of ``x`` according to neighbourhood ``k`` and repack with FFCD.

    1 and 2 remove every item of one or two random categories; 3 and 4
    empty a random number of random bins, N4 drawing strictly more bins
    than N3 can.
    """
    cat = inst.categories
    bins = [items for items in x.bins if items]
    if k in (1, 2):
        present = [c for c, group in enumerate(inst.items_by_category) if group]
        count = 2 if k == 2 and len(present) >= 2 else 1
        chosen = set(rng.sample(present, count))
        removed = [j for items in bins for j in items if cat[j] in chosen]
        partial = [[j for j in items if cat[j] not in chosen] for items in bins]
    elif k in (3, 4):
        nb = len(bins)
        n3 = math.floor(params.alpha * nb)
        if k == 3:
            m = rng.randint(1, max(1, n3))
        else:
            lo = n3 + 1
            m = min(nb, rng.randint(lo, max(lo, math.floor(params.beta * nb))))
        emptied = set(rng.sample(range(nb), m))
        removed = [j for i in sorted(emptied) for j in bins[i]]
        partial = [items for i, items in enumerate(bins) if i not in emptied]
    else:
        raise ValueError(f"neighbourhood must be in 1..{K_MAX}, got {k}")
    return ffcd(inst, Solution(partial), removed)


def local_search_l1(x: Solution, inst: Instance, gamma: float = 1.0) -> Solution:
    """Move items out of under-filled bins into fuller bins.

    Sources are bins with load below ``gamma * b``, visited by ascending
    load. Each of their items goes to the fullest strictly more loaded bin
    that can take it, which always raises the fitness. Passes repeat until
    none moves anything; emptied bins are dropped.
    """
    b = inst.capacity
    w = inst.weights
    cat = inst.categories
    bad = inst.item_incompat
    bins = [list(items) for items in x.bins if items]
    nb = len(bins)
    loads = [sum(w[j] for j in items) for items in bins]
    counts = [[0] * inst.p for _ in range(nb)]
    for i, items in enumerate(bins):
        for j in items:
            counts[i][cat[j]] += 1
    masks = [category_mask(inst, items) for items in bins]
    by_load = sorted((loads[i], i) for i in range(nb))
    threshold = gamma * b

    moved = True
    while moved:
        moved = False
        sources = sorted(
            (i for i in range(nb) if bins[i] and loads[i] < threshold),
            key=lambda i: (loads[i], i),
        )
        for s in sources:
            for j in list(bins[s]):
                a = loads[s]
                wj = w[j]
                pos = bisect_right(by_load, (b - wj, nb)) - 1
                target = -1
                while pos >= 0:
                    c, t = by_load[pos]
                    if c <= a:
                        break
                    if not masks[t] & bad[j]:
                        target = t
                        break
                    pos -= 1
                if target < 0:
                    continue
                t = target
                by_load.pop(pos)
                by_load.remove((a, s))
                bins[s].remove(j)
                bins[t].append(j)
                loads[s] -= wj
                loads[t] += wj
                cj = cat[j]
                counts[s][cj] -= 1
                if counts[s][cj] == 0:
                    masks[s] &= ~(1 << cj)
                counts[t][cj] += 1
                masks[t] |= 1 << cj
                insort(by_load, (loads[s], s))
                insort(by_load, (loads[t], t))
                moved = True
    return Solution([items for items in bins if items])


def _swap_candidates(inst: Instance, bins: list[list[int]], loads: list[int]):
    """All improving feasible inter-bin swaps, best first, as (i, j) item pairs."""
    n = inst.n
    b = inst.capacity
    w = inst.weight_array
    cats = inst.category_array
    binof = np.empty(n, dtype=np.int64)
    for i, items in enumerate(bins):
        binof[items] = i
    counts = np.zeros((len(bins), inst.p), dtype=np.int64)
    np.add.at(counts, (binof, cats), 1)
    # categories left in each item's bin once the item is taken out
    rest = counts[binof]
    rest[np.arange(n), cats] -= 1
    clash = (rest > 0).astype(np.int64) @ inst.compat.incompat_array
    # accepts[i, j]: item j may replace item i in i's bin
    accepts = clash[:, cats] == 0
    load = np.asarray(loads, dtype=np.int64)[binof]
    d = w[None, :] - w[:, None]
    diff = load[:, None] - load[None, :]
    gain = 2 * d * (diff + d)
    ok = (
        (gain > 0)
        & (binof[:, None] != binof[None, :])
        & (load[:, None] + d <= b)
        & (load[None, :] - d <= b)
        & accepts
        & accepts.T
    )
    I, J = np.nonzero(np.triu(ok, 1))
    if I.size == 0:
        return []
    g = gain[I, J]
    order = np.lexsort((J, I, -g))
    return list(zip(I[order].tolist(), J[order].tolist()))


def local_search_l2(x: Solution, inst: Instance) -> Solution:
    """Apply improving pairwise swaps between bins, best gain first.

    The ranked list is computed once; each swap is re-checked against the
    current packing when its turn comes and skipped if it no longer fits,
    clashes, or stopped improving.
    """
    b = inst.capacity
    w = inst.weights
    cat = inst.categories
    bad = inst.item_incompat
    bins = [list(items) for items in x.bins if items]
    loads = [sum(w[j] for j in items) for items in bins]
    ranked = _swap_candidates(inst, bins, loads)
    if not ranked:
        return Solution(bins)

    binof = [0] * inst.n
    counts = [[0] * inst.p for _ in bins]
    for i, items in enumerate(bins):
        for j in items:
            binof[j] = i
            counts[i][cat[j]] += 1
    masks = [category_mask(inst, items) for items in bins]

    def mask_without(bi: int, j: int) -> int:
        if counts[bi][cat[j]] == 1:
            return masks[bi] & ~(1 << cat[j])
        return masks[bi]

    for i, j in ranked:
        bi, bj = binof[i], binof[j]
        if bi == bj:
            continue
        d = w[j] - w[i]
        A, B = loads[bi], loads[bj]
        if A + d > b or B - d > b or 2 * d * (A - B + d) <= 0:
            continue
        if mask_without(bi, i) & bad[j] or mask_without(bj, j) & bad[i]:
            continue
        ci, cj = cat[i], cat[j]
        bins[bi].remove(i)
        bins[bj].remove(j)
        bins[bi].append(j)
        bins[bj].append(i)
        binof[i], binof[j] = bj, bi
        loads[bi] += d
        loads[bj] -= d
        for bin_, out, into in ((bi, ci, cj), (bj, cj, ci)):
            counts[bin_][out] -= 1
            if counts[bin_][out] == 0:
                masks[bin_] &= ~(1 << out)
            counts[bin_][into] += 1
            masks[bin_] |= 1 << into
    return Solution(bins)


def local_searches(x: Solution, inst: Instance, gamma: float) -> Solution:
    return local_search_l2(local_search_l1(x, inst, gamma), inst)


def _verify(inst: Instance, sol: Solution, step: str) -> None:
    problem = check_solution(inst, sol)
    if problem is not None:
        raise InfeasibleSolutionError(f"after {step}: {problem}")


def run_vns(
    inst: Instance,
    params: VnsParams = VnsParams(),
    initial: Solution | None = None,
    verify: bool = False,
) -> VnsResult:
    """Run the search from FFCD (or ``initial``) until a stopping rule fires.

    Stops after ``params.lam`` consecutive non-improving iterations, after
    ``params.phi`` iterations, or once the bin count reaches the continuous
    bound. ``verify`` checks feasibility after every operator.
    """
    start = time.perf_counter()
    rng = random.Random(params.seed)
    b2 = inst.capacity**2
    bound = l_cont(inst).value

    best = initial.compacted() if initial is not None else initial_solution(inst)
    if verify:
        _verify(inst, best, "construction")
    best_z = objective_z(best)
    best_score = fill_score(best.loads(inst))
    init_z, init_h = best_z, best_score / b2

    scores = [1] * params.k_max
    improvements: list[Improvement] = []
    total = stale = 0
    if best_z <= bound:
        reason = StopReason.PROVEN_OPTIMAL
    else:
        while True:
            if total >= params.phi:
                reason = StopReason.ITERATION_CAP
                break
            if stale >= params.lam:
                reason = StopReason.NO_IMPROVEMENT
                break
            k = choose_neighbourhood(scores, rng)
            shaken = shake(inst, best, k, params, rng)
            if verify:
                _verify(inst, shaken, f"shake N{k}")
            cand = local_search_l1(shaken, inst, params.gamma)
            if verify:
                _verify(inst, cand, "L1")
            cand = local_search_l2(cand, inst)
            if verify:
                _verify(inst, cand, "L2")
            total += 1
            cand_z = objective_z(cand)
            cand_score = fill_score(cand.loads(inst))
            if cand_score > best_score and cand_z <= best_z:
                best, best_z, best_score = cand, cand_z, cand_score
                scores[k - 1] += 1
                stale = 0
                improvements.append(Improvement(total, k, best_z, best_score / b2))
                if best_z <= bound:
                    reason = StopReason.PROVEN_OPTIMAL
                    break
            else:
                stale += 1

    return VnsResult(
        solution=best,
        objective=best_z,
        fitness=best_score / b2,
        iterations=total,
        stop_reason=reason,
        wall_time=time.perf_counter() - start,
        lower_bound=bound,
        initial_objective=init_z,
        initial_fitness=init_h,
        scores=tuple(scores),
        improvements=improvements,
    )
