"""Depth-first branch and bound for small instances.

Used as ground truth in tests; practical up to roughly 18 items.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bounds import ceil_div, l_mt
from .greedy import initial_solution
from .model import Instance, Solution

DEFAULT_BUDGET = 10**7


@dataclass
class ExactResult:
    solution: Solution
    objective: int
    proven: bool
    nodes: int


class _BudgetExceeded(Exception):
    pass


def solve_exact(inst: Instance, limit: int = DEFAULT_BUDGET) -> ExactResult:
    """Minimum-bin packing of ``inst``, or the best found within ``limit`` nodes.

    Items are branched in non-increasing weight order into every open bin
    that accepts them (bins in identical state are tried once) and into at
    most one new bin. A node is cut when its bound reaches the incumbent;
    the bound counts open bins plus the weight that cannot be absorbed by
    the free space usable by the remaining items.
    """
    b = inst.capacity
    w = inst.weights
    bad = inst.item_incompat
    bit = [1 << c for c in inst.categories]
    order = sorted(range(inst.n), key=lambda j: (-w[j], j))
    suffix = [0] * (inst.n + 1)
    for d in range(inst.n - 1, -1, -1):
        suffix[d] = suffix[d + 1] + w[order[d]]

    best = initial_solution(inst)
    root_bound = l_mt(inst).value
    state = {"best": best, "z": len(best.bins), "nodes": 0}
    if state["z"] <= root_bound:
        return ExactResult(best, state["z"], True, 0)

    loads: list[int] = []
    masks: list[int] = []
    contents: list[list[int]] = []

    def bound(depth: int) -> int:
        rem = suffix[depth]
        usable = 0
        for load, mask in zip(loads, masks):
            room = b - load
            if room <= 0:
                continue
            fits = 0
            for d in range(depth, inst.n):
                j = order[d]
                if w[j] <= room and not mask & bad[j]:
                    fits += w[j]
                    if fits >= room:
                        break
            usable += min(room, fits)
        return len(loads) + ceil_div(max(0, rem - usable), b)

    def dfs(depth: int) -> None:
        state["nodes"] += 1
        if state["nodes"] > limit:
            raise _BudgetExceeded
        if depth == inst.n:
            if len(loads) < state["z"]:
                state["z"] = len(loads)
                state["best"] = Solution([list(c) for c in contents])
            return
        if max(root_bound, bound(depth)) >= state["z"]:
            return
        j = order[depth]
        wj = w[j]
        tried = set()
        for i in range(len(loads)):
            if loads[i] + wj > b or masks[i] & bad[j]:
                continue
            key = (loads[i], masks[i])
            if key in tried:
                continue
            tried.add(key)
            old_mask = masks[i]
            loads[i] += wj
            masks[i] |= bit[j]
            contents[i].append(j)
            dfs(depth + 1)
            contents[i].pop()
            masks[i] = old_mask
            loads[i] -= wj
            if state["z"] <= root_bound:
                return
        if len(loads) + 1 < state["z"]:
            loads.append(wj)
            masks.append(bit[j])
            contents.append([j])
            dfs(depth + 1)
            contents.pop()
            masks.pop()
            loads.pop()

    try:
        dfs(0)
    except _BudgetExceeded:
        return ExactResult(state["best"], state["z"], False, state["nodes"] - 1)
    return ExactResult(state["best"], state["z"], True, state["nodes"])
