"""Text formats: BPCC instances, classical BPP instances, solutions, LP models.

BPCC instance::

    # comment
    n p b
    <p rows of p 0/1 entries>
    <n rows: weight category>      (categories 1..p)

Classical BPP instance: ``n``, then ``b``, then ``n`` weights, one per line.

Solution: one line per used bin, listing its 1-based item indices.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator

from .bounds import l_cont
from .model import (
    TABLE1,
    BpccError,
    CompatibilityMatrix,
    InfeasibleSolutionError,
    Instance,
    InvalidInstanceError,
    Solution,
    check_solution,
    validate_instance,
)


class InstanceFormatError(BpccError, ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


class DerivationError(BpccError, ValueError):
    pass


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        bad = next(t for t in tokens if not t.lstrip("+-").isdigit())
        raise InstanceFormatError(f"non-integer token {bad!r}", lineno) from None


def _read_matrix_rows(rows: Iterator[tuple[int, list[str]]], p: int) -> CompatibilityMatrix:
    entries = []
    for k in range(p):
        try:
            lineno, tokens = next(rows)
        except StopIteration:
            raise InstanceFormatError(f"expected {p} matrix rows, found {k}") from None
        vals = _ints(tokens, lineno)
        if len(vals) != p:
            raise InstanceFormatError(f"matrix row has {len(vals)} entries, expected {p}", lineno)
        entries.append(tuple(vals))
    return CompatibilityMatrix(tuple(entries))


def parse_instance(text: str, name: str = "") -> Instance:
    """Parse and validate a BPCC instance."""
    rows = _lines(text)
    try:
        lineno, tokens = next(rows)
    except StopIteration:
        raise InstanceFormatError("empty file") from None
    header = _ints(tokens, lineno)
    if len(header) != 3:
        raise InstanceFormatError("header must be 'n p b'", lineno)
    n, p, b = header
    if n < 1 or p < 1:
        raise InstanceFormatError("n and p must be positive", lineno)
    compat = _read_matrix_rows(rows, p)
    weights, cats = [], []
    for lineno, tokens in rows:
        if len(weights) == n:
            raise InstanceFormatError(f"more than {n} item lines", lineno)
        vals = _ints(tokens, lineno)
        if len(vals) != 2:
            raise InstanceFormatError("item line must be 'weight category'", lineno)
        w, c = vals
        if not 1 <= c <= p:
            raise InstanceFormatError(f"category {c} outside 1..{p}", lineno)
        weights.append(w)
        cats.append(c - 1)
    if len(weights) != n:
        raise InstanceFormatError(f"expected {n} items, found {len(weights)}")
    inst = Instance(b, tuple(weights), tuple(cats), compat, name)
    problem = validate_instance(inst)
    if problem is not None:
        raise InvalidInstanceError(problem)
    return inst


def write_instance(inst: Instance) -> str:
    out = []
    if inst.name:
        out.append(f"# {inst.name}")
    out.append(f"{inst.n} {inst.p} {inst.capacity}")
    out.extend(" ".join(str(v) for v in row) for row in inst.compat.entries)
    out.extend(f"{w} {c + 1}" for w, c in zip(inst.weights, inst.categories))
    return "\n".join(out) + "\n"


def parse_matrix(text: str) -> CompatibilityMatrix:
    """A bare matrix file: p rows of p 0/1 entries."""
    rows = list(_lines(text))
    if not rows:
        raise InstanceFormatError("empty matrix file")
    p = len(rows[0][1])
    matrix = _read_matrix_rows(iter(rows), p)
    if len(rows) != p:
        raise InstanceFormatError(f"expected {p} rows, found {len(rows)}", rows[p][0] if len(rows) > p else None)
    return matrix


def parse_bpp_instance(text: str) -> tuple[int, int, list[int]]:
    """Parse the classical format into ``(n, b, weights)``; weights are not checked against b."""
    rows = list(_lines(text))
    if len(rows) < 2:
        raise InstanceFormatError("expected item count and capacity lines")
    header = []
    for lineno, tokens in rows[:2]:
        vals = _ints(tokens, lineno)
        if len(vals) != 1:
            raise InstanceFormatError("expected a single integer", lineno)
        header.append(vals[0])
    n, b = header
    if n < 1 or b < 1:
        raise InstanceFormatError("n and b must be positive", rows[0][0])
    weights = []
    for lineno, tokens in rows[2:]:
        vals = _ints(tokens, lineno)
        if len(vals) != 1:
            raise InstanceFormatError("expected one weight per line", lineno)
        if vals[0] < 1:
            raise InstanceFormatError(f"non-positive weight {vals[0]}", lineno)
        weights.append(vals[0])
    if len(weights) != n:
        raise InstanceFormatError(f"declared {n} items, found {len(weights)}")
    return n, b, weights


def write_bpp_instance(b: int, weights: list[int]) -> str:
    return "\n".join([str(len(weights)), str(b), *map(str, weights)]) + "\n"


def looks_like_bpcc(text: str) -> bool:
    first = next(_lines(text), None)
    return first is not None and len(first[1]) == 3


class CategoryScheme(str, Enum):
    UNIFORM_RANDOM = "uniform-random"
    ROUND_ROBIN = "round-robin"


@dataclass(frozen=True)
class DerivationSpec:
    capacity_factor: float = 100
    category_scheme: CategoryScheme = CategoryScheme.UNIFORM_RANDOM
    p: int = 6
    seed: int = 0
    matrix: CompatibilityMatrix | None = None  # None: the built-in six-category matrix

    def __post_init__(self):
        if self.capacity_factor <= 0:
            raise ValueError("capacity_factor must be positive")
        if self.p < 1:
            raise ValueError("p must be at least 1")
        object.__setattr__(self, "category_scheme", CategoryScheme(self.category_scheme))
        if self.matrix is not None and self.matrix.p != self.p:
            raise ValueError(f"matrix has {self.matrix.p} categories, p is {self.p}")
        if self.matrix is None and self.p != TABLE1.p:
            raise ValueError(f"built-in matrix has {TABLE1.p} categories; supply a matrix for p={self.p}")


def scaled_capacity(b: int, capacity_factor: float) -> int:
    """``floor(b * factor / 100)``, computed exactly."""
    return math.floor(Fraction(str(capacity_factor)) * b / 100)


def derive_bpcc(bpp: tuple[int, int, list[int]], spec: DerivationSpec, name: str = "") -> Instance:
    """Attach categories and a matrix to a classical instance and rescale its capacity."""
    n, b, weights = bpp
    cap = scaled_capacity(b, spec.capacity_factor)
    if weights and cap < max(weights):
        raise DerivationError(f"scaled capacity {cap} below largest weight {max(weights)}")
    if spec.category_scheme is CategoryScheme.ROUND_ROBIN:
        cats = [j % spec.p for j in range(n)]
    else:
        rng = random.Random(spec.seed)
        cats = [rng.randrange(spec.p) for _ in range(n)]
    matrix = spec.matrix if spec.matrix is not None else TABLE1
    inst = Instance(cap, tuple(weights), tuple(cats), matrix, name)
    problem = validate_instance(inst)
    if problem is not None:
        raise DerivationError(problem)
    return inst


def write_solution(sol: Solution, inst: Instance | None = None) -> str:
    return "".join(" ".join(str(j + 1) for j in items) + "\n" for items in sol.bins)


def parse_solution(text: str, inst: Instance) -> Solution:
    """Parse a solution file and check it against ``inst``."""
    bins = []
    lines = text.rstrip("\n").split("\n") if text.strip() else []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if raw.lstrip().startswith("#"):
                continue
            raise InstanceFormatError("empty bin line", lineno)
        items = _ints(line.split(), lineno)
        for j in items:
            if not 1 <= j <= inst.n:
                raise InstanceFormatError(f"unknown item {j}", lineno)
        bins.append([j - 1 for j in items])
    sol = Solution(bins)
    problem = check_solution(inst, sol)
    if problem is not None:
        raise InfeasibleSolutionError(problem)
    return sol


def lp_row_counts(inst: Instance, bin_limit: int) -> dict[str, int]:
    """Closed-form size of the exported model."""
    m, n, p = bin_limit, inst.n, inst.p
    return {
        "variables": m + m * n + m * p,
        "capacity": m,
        "assignment": n,
        "linking": m * n,
        "conflict": m * len(inst.compat.incompatible_pairs()),
        "symmetry": m - 1,
    }


def _terms(coefs: list[tuple[int, str]]) -> str:
    parts = []
    for a, var in coefs:
        sign = "-" if a < 0 else "+"
        mag = "" if abs(a) == 1 else f"{abs(a)} "
        parts.append(f"{sign} {mag}{var}")
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else s


def _wrap(prefix: str, body: str, width: int = 250) -> list[str]:
    # LP readers cap line length; continuation lines are allowed anywhere between terms
    lines, cur = [], prefix
    for tok in body.split(" "):
        if len(cur) + len(tok) + 1 > width and cur.strip():
            lines.append(cur)
            cur = "   "
        cur = f"{cur} {tok}" if cur.strip() else f"{cur}{tok}"
    lines.append(cur)
    return lines


def export_lp(inst: Instance, bin_limit: int | None = None) -> str:
    """The integer model in CPLEX LP format.

    Variables: ``y_i`` (bin used), ``x_i_j`` (item j in bin i), ``f_i_k``
    (category k present in bin i), all binary and 1-based.
    """
    m = inst.n if bin_limit is None else bin_limit
    lb = l_cont(inst).value
    if m < lb:
        raise ValueError(f"bin limit {m} below continuous bound {lb}")
    n, p, b = inst.n, inst.p, inst.capacity
    bins, items, cats = range(1, m + 1), range(1, n + 1), range(1, p + 1)
    out = [f"\\ BPCC model {inst.name}".rstrip(), f"\\ n={n} p={p} b={b} bins={m}", "Minimize"]
    out += _wrap(" obj:", _terms([(1, f"y_{i}") for i in bins]))
    out.append("Subject To")
    for i in bins:
        body = _terms([(inst.weights[j - 1], f"x_{i}_{j}") for j in items] + [(-b, f"y_{i}")])
        out += _wrap(f" cap_{i}:", body + " <= 0")
    for j in items:
        out += _wrap(f" assign_{j}:", _terms([(1, f"x_{i}_{j}") for i in bins]) + " = 1")
    for i in bins:
        for j in items:
            k = inst.categories[j - 1] + 1
            out.append(f" link_{i}_{j}: x_{i}_{j} - f_{i}_{k} <= 0")
    pairs = inst.compat.incompatible_pairs()
    for i in bins:
        for k, l in pairs:
            out.append(f" conflict_{i}_{k + 1}_{l + 1}: f_{i}_{k + 1} + f_{i}_{l + 1} <= 1")
    for i in range(1, m):
        out.append(f" order_{i}: y_{i} - y_{i + 1} >= 0")
    out.append("Binary")
    names = [f"y_{i}" for i in bins]
    names += [f"x_{i}_{j}" for i in bins for j in items]
    names += [f"f_{i}_{k}" for i in bins for k in cats]
    for start in range(0, len(names), 10):
        out.append(" " + " ".join(names[start:start + 10]))
    out.append("End")
    return "\n".join(out) + "\n"


def read_instance(text: str, spec: DerivationSpec | None = None, name: str = "") -> Instance:
    """Parse either format; classical instances are derived with ``spec``."""
    if looks_like_bpcc(text):
        inst = parse_instance(text, name)
        if spec is not None and spec.capacity_factor != 100:
            inst = inst.with_capacity(scaled_capacity(inst.capacity, spec.capacity_factor))
            problem = validate_instance(inst)
            if problem is not None:
                raise DerivationError(problem)
        return inst
    return derive_bpcc(parse_bpp_instance(text), spec or DerivationSpec(), name)
