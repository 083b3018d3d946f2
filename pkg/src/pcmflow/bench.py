"""Random-instance experiment: timings and subproblem counts per (n, a_max)."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from .lwae import DEFAULT_EPSILON, solve
from .pcm import random_pcm
from .refine import refine_to_unique

STAT_KEYS = ("time_bisect", "time_cancel", "time_refine_bisect", "time_refine_cancel", "lw", "checks")


@dataclass
class Stats:
    avg: float
    dev: float
    min: float
    max: float

    @classmethod
    def of(cls, values) -> Stats:
        x = np.asarray(values, dtype=float)
        dev = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
        return cls(float(np.mean(x)), dev, float(np.min(x)), float(np.max(x)))


@dataclass
class BenchSummary:
    n: int
    a_max: int
    trials: int
    time_bisect: Stats
    time_cancel: Stats
    time_refine_bisect: Stats
    time_refine_cancel: Stats
    lw: Stats
    checks: Stats

    @classmethod
    def from_records(cls, n, a_max, records) -> BenchSummary:
        cols = {k: [r[k] for r in records] for k in STAT_KEYS}
        return cls(n, a_max, len(records), **{k: Stats.of(v) for k, v in cols.items()})


def run_instance(A, epsilon: float = DEFAULT_EPSILON) -> dict:
    """Time both LWAE solvers and both full refinement pipelines on one matrix.

    ``lw`` counts LWAE problems solved by the refinement loop; ``checks``
    counts shortest-path feasibility tests in the first cycle-cancel solve.
    """
    clock = time.perf_counter
    t0 = clock()
    solve(A, epsilon, "bisection")
    t1 = clock()
    cancel = solve(A, epsilon, "cycle-cancel")
    t2 = clock()
    refine_to_unique(A, epsilon, method="bisection")
    t3 = clock()
    refined = refine_to_unique(A, epsilon, method="cycle-cancel")
    t4 = clock()
    return {
        "time_bisect": t1 - t0,
        "time_cancel": t2 - t1,
        "time_refine_bisect": t3 - t2,
        "time_refine_cancel": t4 - t3,
        "lw": refined.iterations,
        "checks": cancel.subproblems_solved,
        "z_opt": cancel.z_opt,
    }


def run_bench(n_list=(10, 20), a_max_list=(3, 5, 10), trials: int = 100, epsilon: float = DEFAULT_EPSILON, seed: int = 0):
    """Run every (n, a_max) cell; returns ``(summaries, records)``.

    Each cell draws its matrices from its own stream seeded by
    ``(seed, n, a_max)``, so cells can be rerun independently.
    """
    summaries = []
    records = []
    for n in n_list:
        for a_max in a_max_list:
            rng = np.random.default_rng((seed, n, a_max))
            cell = []
            for trial in range(trials):
                A = random_pcm(n, a_max, rng)
                rec = run_instance(A, epsilon)
                rec.update(n=n, a_max=a_max, trial=trial)
                cell.append(rec)
            summaries.append(BenchSummary.from_records(n, a_max, cell))
            records.extend(cell)
    return summaries, records


def summaries_to_json(summaries) -> str:
    return json.dumps([asdict(s) for s in summaries], indent=2)


def summaries_from_json(text: str) -> list:
    out = []
    for item in json.loads(text):
        stats = {k: Stats(**item[k]) for k in STAT_KEYS}
        out.append(BenchSummary(item["n"], item["a_max"], item["trials"], **stats))
    return out


_COLUMNS = [
    ("Time1", "time_bisect"),
    ("Time2", "time_cancel"),
    ("#LW", "lw"),
    ("Pipe1", "time_refine_bisect"),
    ("Pipe2", "time_refine_cancel"),
    ("#SP", "checks"),
]


def format_table(summaries) -> str:
    """Plain-text table, one block per cell; numbers print in round-trip form."""
    lines = [
        "Time1/Time2: first LWAE solve by bisection / cycle cancel (s); "
        "Pipe1/Pipe2: full refinement (s); #LW: LWAE problems per refinement; "
        "#SP: feasibility checks in the cycle-cancel solve",
    ]
    header = "n\ta_max\ttrials\tstat\t" + "\t".join(name for name, _ in _COLUMNS)
    lines.append(header)
    for s in summaries:
        for stat in ("avg", "dev", "min", "max"):
            vals = "\t".join(repr(getattr(getattr(s, key), stat)) for _, key in _COLUMNS)
            lines.append(f"{s.n}\t{s.a_max}\t{s.trials}\t{stat.upper()}\t{vals}")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> list:
    """Inverse of :func:`format_table`."""
    rows = [ln.split("\t") for ln in text.splitlines()[2:] if ln.strip()]
    cells = {}
    for row in rows:
        n, a_max, trials, stat = int(row[0]), int(row[1]), int(row[2]), row[3].lower()
        cell = cells.setdefault((n, a_max), {"trials": trials})
        for (_, key), val in zip(_COLUMNS, row[4:]):
            cell.setdefault(key, {})[stat] = float(val)
    out = []
    for (n, a_max), cell in cells.items():
        stats = {k: Stats(**cell[k]) for k in STAT_KEYS}
        out.append(BenchSummary(n, a_max, cell["trials"], **stats))
    return out
