"""Multi-seed benchmark harness with per-group aggregate reports.

One report row per (instance type, item count, capacity factor) group:
instances solved to the bound, total bins of the best run per instance,
and wall-time statistics of the solver runs.
"""

from __future__ import annotations

import csv
import io
import logging
import statistics
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .bounds import l_mt
from .instance_io import DerivationSpec, read_instance
from .model import BpccError, Instance
from .vns import VnsParams, run_vns

log = logging.getLogger(__name__)

NA = "N/A"
INSTANCE_SUFFIXES = {".txt", ".bpp", ".bpcc", ".dat", ".inst"}


@dataclass(frozen=True)
class RunRecord:
    instance: str
    label: str
    n: int
    capacity_factor: float
    seed: int
    objective: int
    initial_objective: int
    bound: int
    iterations: int
    stop_reason: str
    wall_time: float


@dataclass(frozen=True)
class Failure:
    instance: str
    label: str
    n: int | None
    capacity_factor: float
    message: str


@dataclass
class BenchRow:
    instance_type: str
    n_items: int
    capacity_factor: float
    n_instances: int
    n_opt: int
    total_bins_best: int
    total_bound: int
    mean_time: float | None
    std_time: float | None
    timed_runs: int
    seeds: tuple[int, ...]
    bound_method: str
    category_scheme: str
    failures: int = 0


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    runs: list[RunRecord] = field(default_factory=list)
    failures: list[Failure] = field(default_factory=list)

    COLUMNS = (
        "instance_type", "n_items", "capacity_factor", "n_instances", "n_opt",
        "total_bins_best", "total_bound", "mean_time_s", "std_time_s",
        "timed_runs", "seeds", "bound_method", "category_scheme", "failures",
    )
    TIMING = ("mean_time_s", "std_time_s")

    def to_csv(self, timing: bool = True) -> str:
        cols = [c for c in self.COLUMNS if timing or c not in self.TIMING]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in self.rows:
            rec = _row_fields(row)
            writer.writerow([rec[c] for c in cols])
        return buf.getvalue()

    def to_table(self) -> str:
        head = ("Type", "#Items", "Cap(%)", "#Inst", "#Opt", "Bins(best)", "Bound", "Mean(s)", "Std(s)")
        body = []
        for row in self.rows:
            rec = _row_fields(row)
            body.append((
                row.instance_type, str(row.n_items), rec["capacity_factor"],
                str(row.n_instances), str(row.n_opt), str(row.total_bins_best),
                str(row.total_bound), rec["mean_time_s"], rec["std_time_s"],
            ))
        widths = [max(len(r[i]) for r in [head, *body]) for i in range(len(head))]
        fmt = lambda r: "  ".join(v.rjust(w) for v, w in zip(r, widths))
        lines = [fmt(head), fmt(tuple("-" * w for w in widths)), *map(fmt, body)]
        return "\n".join(lines)


def _fmt_factor(f: float) -> str:
    return str(int(f)) if float(f).is_integer() else str(f)


def _row_fields(row: BenchRow) -> dict[str, str]:
    t = lambda v: NA if v is None else f"{v:.3f}"
    return {
        "instance_type": row.instance_type,
        "n_items": str(row.n_items),
        "capacity_factor": _fmt_factor(row.capacity_factor),
        "n_instances": str(row.n_instances),
        "n_opt": str(row.n_opt),
        "total_bins_best": str(row.total_bins_best),
        "total_bound": str(row.total_bound),
        "mean_time_s": t(row.mean_time),
        "std_time_s": t(row.std_time),
        "timed_runs": str(row.timed_runs),
        "seeds": " ".join(map(str, row.seeds)),
        "bound_method": row.bound_method,
        "category_scheme": row.category_scheme,
        "failures": str(row.failures),
    }


def discover_instances(root: Path) -> list[tuple[str, Path]]:
    """Instance files under ``root`` with their type label.

    The label is the first directory below ``root``, or ``root``'s own
    name for files directly inside it.
    """
    root = Path(root)
    found = []
    for path in sorted(root.rglob("*")):
        if not path.is_file() or path.suffix.lower() not in INSTANCE_SUFFIXES:
            continue
        rel = path.relative_to(root)
        label = rel.parts[0] if len(rel.parts) > 1 else root.resolve().name
        found.append((label, path))
    return found


def load_bounds(text: str) -> dict[tuple[str, float], int]:
    """External bounds: lines ``instance capacity-factor bound``.

    ``instance`` is the file's path below the benchmark directory without
    suffix, or just its stem.
    """
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) != 3:
            raise BpccError(f"bounds line {lineno}: expected 'name factor bound'")
        out[(line[0], float(line[1]))] = int(line[2])
    return out


def instance_seed(base: int, name: str) -> int:
    """Per-instance category seed, stable across runs and platforms."""
    return (base * 1_000_003 + zlib.crc32(name.encode())) % 2**64


def _solve(task: tuple[Instance, VnsParams]):
    inst, params = task
    r = run_vns(inst, params)
    return r.objective, r.initial_objective, r.iterations, r.stop_reason.value, r.wall_time


def run_bench(
    instance_dir: Path,
    derivation: DerivationSpec = DerivationSpec(),
    capacity_factors: Sequence[float] = (100, 120, 150, 200),
    params: VnsParams = VnsParams(),
    seeds: Sequence[int] = tuple(range(10)),
    bounds: dict[tuple[str, float], int] | None = None,
    jobs: int = 1,
) -> BenchReport:
    """Run every instance x capacity factor x seed and aggregate.

    Classical files are derived with ``derivation`` (its capacity factor is
    replaced by each entry of ``capacity_factors``); BPCC files keep their
    categories and only get their capacity scaled. An instance counts as
    optimal when its best run meets ``max(l_mt, external bound)``.
    """
    bounds = bounds or {}
    files = discover_instances(instance_dir)
    report = BenchReport()
    if not files:
        log.warning("no instance files found in %s", instance_dir)
        return report

    jobs_meta: list[tuple[str, str, Instance, float, int, str]] = []
    root = Path(instance_dir)
    for label, path in files:
        name = path.relative_to(root).with_suffix("").as_posix()
        text = path.read_text()
        for factor in capacity_factors:
            spec = replace(
                derivation,
                capacity_factor=factor,
                seed=instance_seed(derivation.seed, name),
            )
            try:
                inst = read_instance(text, spec, name)
            except BpccError as exc:
                report.failures.append(Failure(name, label, _item_count(text), factor, str(exc)))
                log.warning("%s @ %s%%: %s", path, factor, exc)
                continue
            bound = l_mt(inst).value
            method = "MT"
            ext = bounds.get((name, float(factor)), bounds.get((path.stem, float(factor))))
            if ext is not None:
                method = "MT+EXT"
                bound = max(bound, ext)
            jobs_meta.append((name, label, inst, factor, bound, method))

    tasks = [(inst, replace(params, seed=s)) for _, _, inst, _, _, _ in jobs_meta for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_solve, tasks, chunksize=4))
    else:
        results = [_solve(t) for t in tasks]

    it = iter(results)
    methods: dict[tuple, set[str]] = {}
    for name, label, inst, factor, bound, method in jobs_meta:
        methods.setdefault((label, inst.n, factor), set()).add(method)
        for s in seeds:
            obj, init, iters, reason, wall = next(it)
            report.runs.append(
                RunRecord(name, label, inst.n, factor, s, obj, init, bound, iters, reason, wall)
            )
    report.rows = aggregate(report.runs, seeds, methods, derivation.category_scheme.value, report.failures)
    return report


def _item_count(text: str) -> int | None:
    for raw in text.splitlines():
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            try:
                return int(tokens[0])
            except ValueError:
                return None
    return None


def aggregate(
    runs: Iterable[RunRecord],
    seeds: Sequence[int],
    methods: dict[tuple, set[str]],
    scheme: str,
    failures: Iterable[Failure] = (),
) -> list[BenchRow]:
    groups: dict[tuple, dict[str, list[RunRecord]]] = {}
    for r in runs:
        groups.setdefault((r.label, r.n, r.capacity_factor), {}).setdefault(r.instance, []).append(r)
    failed: dict[tuple, int] = {}
    for f in failures:
        failed[(f.label, f.n, f.capacity_factor)] = failed.get((f.label, f.n, f.capacity_factor), 0) + 1

    rows = []
    for key in sorted(set(groups) | set(failed), key=lambda k: (k[0], k[1] or 0, k[2])):
        label, n, factor = key
        per_instance = groups.get(key, {})
        n_opt = total_best = total_bound = 0
        times = []
        for inst_runs in per_instance.values():
            bound = inst_runs[0].bound
            best = min(r.objective for r in inst_runs)
            total_best += best
            total_bound += bound
            n_opt += best <= bound
            # runs whose greedy start already met the bound are not timed
            times += [r.wall_time for r in inst_runs if r.initial_objective > bound]
        rows.append(BenchRow(
            instance_type=label,
            n_items=n or 0,
            capacity_factor=factor,
            n_instances=len(per_instance),
            n_opt=n_opt,
            total_bins_best=total_best,
            total_bound=total_bound,
            mean_time=statistics.fmean(times) if times else None,
            std_time=statistics.stdev(times) if len(times) > 1 else None,
            timed_runs=len(times),
            seeds=tuple(seeds),
            bound_method="|".join(sorted(methods.get(key, {"MT"}))) if per_instance else NA,
            category_scheme=scheme,
            failures=failed.get(key, 0),
        ))
    return rows
