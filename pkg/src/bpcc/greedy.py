"""FFCD: first-fit decreasing applied category by category."""

from __future__ import annotations

from typing import Iterable

from .model import Instance, Solution, category_mask


def category_order(inst: Instance, items: Iterable[int]) -> list[list[int]]:
    """Group items by category, heaviest category first, items heaviest first.

    Ties: categories by ascending index, items by ascending index.
    """
    groups: dict[int, list[int]] = {}
    for j in items:
        groups.setdefault(inst.categories[j], []).append(j)
    w = inst.weights
    totals = {c: sum(w[j] for j in g) for c, g in groups.items()}
    order = sorted(groups, key=lambda c: (-totals[c], c))
    return [sorted(groups[c], key=lambda j: (-w[j], j)) for c in order]


def first_fit(
    inst: Instance,
    bins: list[list[int]],
    loads: list[int],
    masks: list[int],
    items: Iterable[int],
) -> None:
    """Place ``items`` in order, each into the lowest-index bin that accepts it.

    Mutates ``bins``, ``loads`` and ``masks`` in place; opens new bins at the end.
    """
    b = inst.capacity
    w = inst.weights
    cat = inst.categories
    bad = inst.item_incompat
    for j in items:
        wj = w[j]
        room = b - wj
        bit = 1 << cat[j]
        conflict = bad[j]
        for i in range(len(bins)):
            if loads[i] <= room and not masks[i] & conflict:
                bins[i].append(j)
                loads[i] += wj
                masks[i] |= bit
                break
        else:
            bins.append([j])
            loads.append(wj)
            masks.append(bit)


def ffcd(inst: Instance, partial: Solution, loose_items: Iterable[int]) -> Solution:
    """Complete ``partial`` by packing ``loose_items`` with FFCD.

    Bins of ``partial`` keep their order (empty ones are dropped) and are
    available to every loose item; mixing compatible categories is allowed.
    """
    bins = [list(items) for items in partial.bins if items]
    w = inst.weights
    loads = [sum(w[j] for j in items) for items in bins]
    masks = [category_mask(inst, items) for items in bins]
    for group in category_order(inst, loose_items):
        first_fit(inst, bins, loads, masks, group)
    return Solution(bins)


def initial_solution(inst: Instance) -> Solution:
    return ffcd(inst, Solution([]), range(inst.n))
