"""Instances, solutions and the feasibility/quality semantics of BPCC.

Items and categories are 0-based internally. Every user-facing message
(violation reports, files) uses 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class BpccError(Exception):
    """Base class for errors raised by this package."""


class InvalidInstanceError(BpccError, ValueError):
    pass


class InfeasibleSolutionError(BpccError, ValueError):
    pass


@dataclass(frozen=True)
class CompatibilityMatrix:
    """Square 0/1 matrix; ``entries[k][l] == 1`` iff categories k and l may share a bin."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "entries", tuple(tuple(int(v) for v in row) for row in self.entries)
        )

    @classmethod
    def all_compatible(cls, p: int) -> CompatibilityMatrix:
        return cls(tuple(tuple(1 for _ in range(p)) for _ in range(p)))

    @property
    def p(self) -> int:
        return len(self.entries)

    def compatible(self, k: int, l: int) -> bool:
        return self.entries[k][l] == 1

    @cached_property
    def incompat_masks(self) -> tuple[int, ...]:
        """Bitmask per category of the categories it conflicts with."""
        masks = []
        for row in self.entries:
            m = 0
            for l, v in enumerate(row):
                if v == 0:
                    m |= 1 << l
            masks.append(m)
        return tuple(masks)

    @cached_property
    def incompat_array(self) -> np.ndarray:
        arr = np.array(self.entries, dtype=np.int64).reshape(self.p, self.p)
        return (arr == 0).astype(np.int64)

    def incompatible_pairs(self) -> list[tuple[int, int]]:
        """Unordered pairs ``k < l`` with c^{kl} = 0."""
        return [
            (k, l)
            for k in range(self.p)
            for l in range(k + 1, self.p)
            if self.entries[k][l] == 0
        ]


# Six-category matrix used in the published experiments.
TABLE1 = CompatibilityMatrix(
    (
        (1, 0, 1, 0, 0, 0),
        (0, 1, 0, 1, 1, 1),
        (1, 0, 1, 1, 0, 0),
        (0, 1, 1, 1, 1, 1),
        (0, 1, 0, 1, 1, 0),
        (0, 1, 0, 1, 0, 1),
    )
)


@dataclass(frozen=True)
class Instance:
    """A BPCC instance. Immutable; safe to share between solver runs.

    ``categories[j]`` is 0-based. Construction does not validate, use
    :func:`validate_instance` or :meth:`validated`.
    """

    capacity: int
    weights: tuple[int, ...]
    categories: tuple[int, ...]
    compat: CompatibilityMatrix
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "categories", tuple(int(c) for c in self.categories))
        object.__setattr__(self, "capacity", int(self.capacity))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def p(self) -> int:
        return self.compat.p

    @property
    def b(self) -> int:
        return self.capacity

    @cached_property
    def total_weight(self) -> int:
        return sum(self.weights)

    @cached_property
    def items_by_category(self) -> tuple[tuple[int, ...], ...]:
        """The subsets J^k, as item index tuples per category."""
        groups: list[list[int]] = [[] for _ in range(self.p)]
        for j, c in enumerate(self.categories):
            groups[c].append(j)
        return tuple(tuple(g) for g in groups)

    @cached_property
    def item_incompat(self) -> tuple[int, ...]:
        """Per item, bitmask of categories its category conflicts with."""
        masks = self.compat.incompat_masks
        return tuple(masks[c] for c in self.categories)

    @cached_property
    def weight_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=np.int64)

    @cached_property
    def category_array(self) -> np.ndarray:
        return np.asarray(self.categories, dtype=np.int64)

    def validated(self) -> Instance:
        problem = validate_instance(self)
        if problem is not None:
            raise InvalidInstanceError(problem)
        return self

    def with_capacity(self, capacity: int) -> Instance:
        return Instance(capacity, self.weights, self.categories, self.compat, self.name)


@dataclass
class Solution:
    """A packing as an ordered list of bins, each a list of item indices.

    Bin ``i`` of the model is ``bins[i]``; a bin is used iff it is nonempty.
    The normal form keeps every listed bin nonempty.
    """

    bins: list[list[int]]

    @classmethod
    def from_assignment(cls, assignment: Sequence[int]) -> Solution:
        """Build from a per-item bin index; bins are renumbered contiguously."""
        order: dict[int, int] = {}
        bins: list[list[int]] = []
        for j, i in enumerate(assignment):
            if i not in order:
                order[i] = len(bins)
                bins.append([])
            bins[order[i]].append(j)
        return cls(bins)

    def assignment(self, n: int) -> list[int]:
        out = [-1] * n
        for i, items in enumerate(self.bins):
            for j in items:
                out[j] = i
        return out

    def copy(self) -> Solution:
        return Solution([list(b) for b in self.bins])

    def compacted(self) -> Solution:
        return Solution([list(b) for b in self.bins if b])

    def loads(self, inst: Instance) -> list[int]:
        w = inst.weights
        return [sum(w[j] for j in items) for items in self.bins]

    def category_sets(self, inst: Instance) -> list[set[int]]:
        cat = inst.categories
        return [{cat[j] for j in items} for items in self.bins]

    @property
    def n_items(self) -> int:
        return sum(len(b) for b in self.bins)


def validate_instance(inst: Instance) -> str | None:
    """Return ``None`` if ``inst`` is valid, else a report of the first violation."""
    p = len(inst.compat.entries)
    if p < 1:
        return "matrix has no categories"
    for k, row in enumerate(inst.compat.entries):
        if len(row) != p:
            return f"matrix row {k + 1} has {len(row)} entries, expected {p}"
    for k in range(p):
        for l in range(p):
            v = inst.compat.entries[k][l]
            if v not in (0, 1):
                return f"matrix entry ({k + 1},{l + 1}) is {v}, expected 0 or 1"
    for k in range(p):
        if inst.compat.entries[k][k] != 1:
            return f"non-reflexive diagonal at ({k + 1},{k + 1})"
    for k in range(p):
        for l in range(k + 1, p):
            if inst.compat.entries[k][l] != inst.compat.entries[l][k]:
                return f"asymmetric at ({k + 1},{l + 1})"
    if inst.capacity < 1:
        return f"capacity {inst.capacity} is not positive"
    if inst.n < 1:
        return "instance has no items"
    if len(inst.categories) != inst.n:
        return f"{len(inst.categories)} categories given for {inst.n} items"
    for j, (w, c) in enumerate(zip(inst.weights, inst.categories)):
        if w < 1:
            return f"item {j + 1} has non-positive weight {w}"
        if w > inst.capacity:
            return f"item exceeds capacity: item {j + 1} weight {w} > {inst.capacity}"
        if not 0 <= c < p:
            return f"item {j + 1} has out-of-range category {c + 1}"
    return None


def category_mask(inst: Instance, items: Iterable[int]) -> int:
    m = 0
    for j in items:
        m |= 1 << inst.categories[j]
    return m


def bin_feasible(inst: Instance, items: Iterable[int]) -> bool:
    """True iff the items fit in one bin and their categories are pairwise compatible."""
    items = list(items)
    if sum(inst.weights[j] for j in items) > inst.capacity:
        return False
    mask = category_mask(inst, items)
    masks = inst.compat.incompat_masks
    c = 0
    while mask >> c:
        if (mask >> c) & 1 and masks[c] & mask:
            return False
        c += 1
    return True


def objective_z(sol: Solution) -> int:
    """Number of used (nonempty) bins."""
    return sum(1 for items in sol.bins if items)


def fill_score(loads: Iterable[int]) -> int:
    """Exact integer numerator of the fitness: sum of squared bin loads."""
    return sum(l * l for l in loads)


def fitness_h(sol: Solution, inst: Instance) -> float:
    """Sum over used bins of the squared fill ratio ``(load / b) ** 2``.

    Lies in ``[0, nb]``; higher means fuller bins. Comparisons inside the
    solver use :func:`fill_score`, which orders solutions identically.
    """
    return fill_score(sol.loads(inst)) / inst.capacity**2


def check_solution(inst: Instance, sol: Solution) -> str | None:
    """Return ``None`` if ``sol`` is a feasible normal-form packing of ``inst``."""
    seen = [-1] * inst.n
    for i, items in enumerate(sol.bins):
        if not items:
            return f"non-contiguous bins: bin {i + 1} is empty"
        for j in items:
            if not 0 <= j < inst.n:
                return f"unknown item {j + 1} in bin {i + 1}"
            if seen[j] >= 0:
                return f"item {j + 1} assigned twice (bins {seen[j] + 1} and {i + 1})"
            seen[j] = i
    for j, i in enumerate(seen):
        if i < 0:
            return f"unassigned item {j + 1}"
    for i, items in enumerate(sol.bins):
        load = sum(inst.weights[j] for j in items)
        if load > inst.capacity:
            return f"overweight bin {i + 1}: load {load} > {inst.capacity}"
        cats = sorted({inst.categories[j] for j in items})
        for a, k in enumerate(cats):
            for l in cats[a + 1:]:
                if not inst.compat.compatible(k, l):
                    return f"incompatible categories ({k + 1},{l + 1}) in bin {i + 1}"
    return None


def ensure_feasible(inst: Instance, sol: Solution) -> Solution:
    problem = check_solution(inst, sol)
    if problem is not None:
        raise InfeasibleSolutionError(problem)
    return sol
