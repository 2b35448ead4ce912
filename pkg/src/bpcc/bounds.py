"""Lower bounds on the number of bins.

All bounds here ignore categories: a BPCC instance is a classical bin
packing instance with extra constraints, so any classical lower bound holds.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from enum import Enum
from itertools import accumulate
from typing import Sequence

from .model import Instance


class BoundMethod(str, Enum):
    CONT = "CONT"
    MT = "MT"


@dataclass(frozen=True)
class Bound:
    value: int
    method: BoundMethod


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def continuous_bound(weights: Sequence[int], capacity: int) -> int:
    return ceil_div(sum(weights), capacity)


def l_cont(inst: Instance) -> Bound:
    return Bound(continuous_bound(inst.weights, inst.capacity), BoundMethod.CONT)


def martello_toth_l2(weights: Sequence[int], capacity: int) -> int:
    """L2 bound of Martello and Toth for the classical problem.

    For every threshold ``a`` in ``[0, c/2]`` the items split into
    ``J1 = {w > c - a}``, ``J2 = {c/2 < w <= c - a}`` and
    ``J3 = {a <= w <= c/2}``. No J3 item fits with a J1 item, so::

        L(a) = |J1| + |J2| + max(0, ceil((sum J3 - (|J2| c - sum J2)) / c))

    It suffices to try ``a = 0`` and every distinct weight ``<= c/2``.
    """
    if not weights:
        return 0
    c = capacity
    asc = sorted(weights)
    prefix = [0, *accumulate(asc)]
    n = len(asc)
    best = ceil_div(prefix[-1], c)
    half = bisect_right(asc, c // 2)  # asc[:half] are the items with 2w <= c
    for a in [0, *sorted(set(asc[:half]))]:
        hi = bisect_right(asc, c - a)  # asc[hi:] is J1
        lo3 = bisect_left(asc, a)  # J3 = asc[lo3:half]
        n1 = n - hi
        n2 = hi - half
        s2 = prefix[hi] - prefix[half]
        s3 = prefix[half] - prefix[lo3]
        value = n1 + n2 + max(0, ceil_div(s3 - (n2 * c - s2), c))
        if value > best:
            best = value
    return best


def reduce_items(weights: Sequence[int], capacity: int) -> tuple[int, list[int]]:
    """Dominance reduction: fix bins that some optimal packing must contain.

    Scans free items from the largest. For item ``j`` let ``k`` be the
    largest other free item fitting with it. A bin is fixed when

    * nothing fits with ``j``: ``{j}`` alone;
    * ``w_j + w_k == c``: ``{j, k}`` (any companion set weighs at most ``w_k``);
    * no two other free items fit with ``j``: ``{j, k}``.

    Returns ``(fixed_bins, remaining_weights)``, remaining sorted ascending.
    """
    c = capacity
    free = sorted(weights)
    fixed = 0
    changed = True
    while changed and free:
        changed = False
        idx = len(free) - 1
        while idx >= 0 and free:
            idx = min(idx, len(free) - 1)
            wj = free[idx]
            k = bisect_right(free, c - wj) - 1
            if k == idx:
                k -= 1
            if k < 0:
                free.pop(idx)
                fixed += 1
                changed = True
                idx -= 1
                continue
            smallest = [w for t, w in enumerate(free[:3]) if t != idx][:2]
            two_fit = len(smallest) == 2 and wj + smallest[0] + smallest[1] <= c
            if wj + free[k] == c or not two_fit:
                first, second = max(idx, k), min(idx, k)
                free.pop(first)
                free.pop(second)
                fixed += 1
                changed = True
                idx -= 1
                continue
            idx -= 1
    return fixed, free


def martello_toth_l3(weights: Sequence[int], capacity: int) -> int:
    """L3: alternate dominance reduction and L2, dropping the smallest item each round.

    Removing an item can only lower the optimum, and reduction preserves
    it, so every round's ``fixed + L2(residual)`` is a valid bound.
    """
    remaining = sorted(weights)
    fixed_total = 0
    best = martello_toth_l2(remaining, capacity)
    while remaining and fixed_total + len(remaining) > best:
        fixed, remaining = reduce_items(remaining, capacity)
        fixed_total += fixed
        best = max(best, fixed_total + martello_toth_l2(remaining, capacity))
        remaining = remaining[1:]
    return best


def l_mt(inst: Instance) -> Bound:
    value = max(
        martello_toth_l3(inst.weights, inst.capacity),
        continuous_bound(inst.weights, inst.capacity),
    )
    return Bound(value, BoundMethod.MT)
