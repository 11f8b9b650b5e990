"""Trial runner: approximation quality and oracle-call budgets, as CSV.

A trial = one estimator run with its own derived random stream and its own
oracle counters.  The runner computes the exact count once per experiment,
derives per-trial streams from the master seed, and emits an append-only
CSV whose only nondeterministic column is wall_time_ns (determinism checks
strip it).
"""

from __future__ import annotations

import json
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .edgecount import (
    DEFAULT_CONFIG,
    EdgeCountConfig,
    EdgeCountStats,
    IterationBudgetExceeded,
    edge_count,
)
from .exact import exact_count
from .generators import GeneratorSpec, generate
from .instances import Problem, ProblemInstance, load_instance, problem_kind
from .oracles import matrix_oracles
from .reductions import CountStats, count_3sum, count_nwt, count_ov
from .rng import RngStream, derive_stream
from .satcount import CnfFormula, approx_count_cnf

__all__ = [
    "Outcome",
    "TrialRecord",
    "ExperimentConfig",
    "CSV_TAG",
    "records_to_csv",
    "strip_timing",
    "run_trials",
    "instance_counter",
    "bipartite_counter",
    "run_experiment",
    "success_fraction",
    "summary_line",
    "scaling_probe",
    "probe_to_csv",
]

CSV_TAG = "# fgcount-csv v1"
_COLUMNS = (
    "trial_id",
    "seed",
    "outcome",
    "estimate",
    "exact",
    "rel_error",
    "independence_calls",
    "adjacency_calls",
    "wall_time_ns",
)


class Outcome(Enum):
    OK = "OK"
    NO_ESTIMATE = "NO_ESTIMATE"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    seed: int
    outcome: Outcome
    estimate: Optional[int]
    exact: Optional[int]
    rel_error: Optional[float]
    independence_calls: int
    adjacency_calls: int
    wall_time_ns: int


def _rel_error(estimate: Optional[int], exact: Optional[int]) -> Optional[float]:
    if estimate is None or exact is None:
        return None
    return abs(float(estimate) - float(exact)) / max(float(exact), 1.0)


def records_to_csv(records: Sequence[TrialRecord]) -> str:
    lines = [CSV_TAG, ",".join(_COLUMNS)]
    for r in records:
        lines.append(
            ",".join(
                [
                    str(r.trial_id),
                    str(r.seed),
                    r.outcome.value,
                    "" if r.estimate is None else repr(r.estimate),
                    "" if r.exact is None else str(r.exact),
                    "" if r.rel_error is None else repr(r.rel_error),
                    str(r.independence_calls),
                    str(r.adjacency_calls),
                    str(r.wall_time_ns),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def strip_timing(csv_text: str) -> str:
    """Drop the wall_time_ns column (the one legitimately varying field)."""
    out = []
    for line in csv_text.splitlines():
        if line.startswith("#"):
            out.append(line)
            continue
        cells = line.split(",")
        out.append(",".join(cells[:-1]))
    return "\n".join(out) + "\n"


# A counter callback runs one estimate: (trial_rng, stats) -> value or None.
Counter = Callable[[RngStream, CountStats], Optional[int]]


def instance_counter(
    inst: ProblemInstance,
    eps: float,
    *,
    config: EdgeCountConfig = DEFAULT_CONFIG,
    cnf_delta: float = 0.3,
) -> Counter:
    """Counting callback for a problem instance (dispatch on its kind)."""
    kind = problem_kind(inst)

    def run(rng: RngStream, stats: CountStats) -> Optional[int]:
        if kind is Problem.THREESUM:
            return count_3sum(inst, eps, rng, config=config, stats=stats)
        if kind is Problem.OV:
            return count_ov(inst, eps, rng, config=config, stats=stats)
        if kind is Problem.NWT:
            return count_nwt(inst, eps, rng, config=config, stats=stats)
        assert isinstance(inst, CnfFormula)
        return approx_count_cnf(inst, eps, cnf_delta, rng)

    return run


def bipartite_counter(
    adjacency: np.ndarray,
    eps: float,
    *,
    config: EdgeCountConfig = DEFAULT_CONFIG,
) -> Counter:
    """Counting callback for an explicit synthetic bipartite graph."""

    def run(rng: RngStream, stats: CountStats) -> Optional[int]:
        oracles = matrix_oracles(adjacency)
        ec_stats = EdgeCountStats()
        value = edge_count(oracles, eps, rng, config=config, stats=ec_stats)
        stats.layers += 1
        stats.independence_calls += oracles.independence_calls
        stats.adjacency_calls += oracles.adjacency_calls
        stats.edgecount.append(ec_stats)
        return value

    return run


def run_trials(
    counter: Counter,
    trials: int,
    master: RngStream,
    *,
    exact: Optional[int] = None,
    workers: int = 1,
) -> list[TrialRecord]:
    """Run seeded trials; per-trial failures become outcomes, not aborts."""

    def one(trial_id: int) -> TrialRecord:
        trial_rng = derive_stream(master, f"trial-{trial_id}")
        stats = CountStats()
        start = time.perf_counter_ns()
        outcome = Outcome.OK
        estimate: Optional[int] = None
        try:
            estimate = counter(trial_rng, stats)
            if estimate is None:
                outcome = Outcome.NO_ESTIMATE
        except IterationBudgetExceeded:
            outcome = Outcome.BUDGET_EXCEEDED
        elapsed = time.perf_counter_ns() - start
        return TrialRecord(
            trial_id=trial_id,
            seed=trial_rng.fingerprint(),
            outcome=outcome,
            estimate=estimate,
            exact=exact,
            rel_error=_rel_error(estimate, exact),
            independence_calls=stats.independence_calls,
            adjacency_calls=stats.adjacency_calls,
            wall_time_ns=elapsed,
        )

    ids = range(trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one, ids))
    else:
        records = [one(i) for i in ids]
    records.sort(key=lambda r: r.trial_id)
    return records


@dataclass(frozen=True)
class ExperimentConfig:
    """One batch: an instance source, a tolerance, and a trial budget."""

    eps: float
    trials: int
    master_seed: int
    instance_path: Optional[str] = None
    generator: Optional[GeneratorSpec] = None
    compute_exact: bool = True
    cnf_delta: float = 0.3
    workers: int = 1
    edgecount: EdgeCountConfig = field(default_factory=lambda: DEFAULT_CONFIG)

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 < self.eps < 1.0:
            raise ValueError("eps must lie in (0,1)")
        if (self.instance_path is None) == (self.generator is None):
            raise ValueError("exactly one of instance_path / generator must be given")

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        payload = json.loads(text)
        generator = None
        if "generator" in payload:
            g = dict(payload["generator"])
            g["problem"] = Problem(g["problem"])
            if "parts" in g and g["parts"] is not None:
                g["parts"] = tuple(g["parts"])
            generator = GeneratorSpec(**g)
        overrides = payload.get("overrides", {})
        ec = replace(DEFAULT_CONFIG, **overrides) if overrides else DEFAULT_CONFIG
        return cls(
            eps=payload["eps"],
            trials=payload["trials"],
            master_seed=payload.get("master_seed", 0),
            instance_path=payload.get("instance_path"),
            generator=generator,
            compute_exact=payload.get("compute_exact", True),
            cnf_delta=payload.get("cnf_delta", 0.3),
            workers=payload.get("workers", 1),
            edgecount=ec,
        )


def run_experiment(cfg: ExperimentConfig) -> list[TrialRecord]:
    if cfg.instance_path is not None:
        inst = load_instance(cfg.instance_path)
    else:
        inst = generate(cfg.generator)
    exact = exact_count(inst) if cfg.compute_exact else None
    counter = instance_counter(inst, cfg.eps, config=cfg.edgecount, cnf_delta=cfg.cnf_delta)
    master = RngStream(cfg.master_seed)
    return run_trials(counter, cfg.trials, master, exact=exact, workers=cfg.workers)


def success_fraction(records: Sequence[TrialRecord], eps: float) -> float:
    ok = [r for r in records if r.outcome is Outcome.OK and r.rel_error is not None]
    if not records:
        return 0.0
    hits = sum(1 for r in ok if r.rel_error <= eps)
    return hits / len(records)


def summary_line(records: Sequence[TrialRecord], eps: float) -> str:
    frac = success_fraction(records, eps)
    return f"# summary: trials={len(records)} success_fraction_at_eps={frac:.4f}"


def scaling_probe(
    template: GeneratorSpec,
    sizes: Sequence[int],
    eps: float,
    trials: int,
    master: RngStream,
    *,
    config: EdgeCountConfig = DEFAULT_CONFIG,
) -> list[tuple[int, int]]:
    """Median independence-query count per instance size.

    One random instance per size (seeded off the template seed and the
    size), ``trials`` estimator runs each; the median is what the polylog
    growth assertion is made against.
    """
    results = []
    for size in sizes:
        spec = replace(template, n=size, seed=template.seed)
        inst = generate(spec)
        counter = instance_counter(inst, eps, config=config)
        records = run_trials(
            counter, trials, derive_stream(master, f"probe-{size}"), exact=None
        )
        median = int(statistics.median(r.independence_calls for r in records))
        results.append((size, median))
    return results


def probe_to_csv(results: Sequence[tuple[int, int]]) -> str:
    lines = [CSV_TAG, "size,median_independence_calls"]
    for size, median in results:
        lines.append(f"{size},{median}")
    return "\n".join(lines) + "\n"
