"""Trial runner: records, CSV determinism, outcomes, scaling probe."""

import pytest

from fgcount.experiments import (
    ExperimentConfig,
    Outcome,
    bipartite_counter,
    probe_to_csv,
    records_to_csv,
    run_experiment,
    run_trials,
    scaling_probe,
    strip_timing,
    success_fraction,
)
from fgcount.generators import GeneratorSpec
from fgcount.instances import Problem
from fgcount.rng import RngStream
from fgcount.synthetic import random_bipartite


def _ov_config(trials=4, seed=7):
    return ExperimentConfig(
        eps=0.3,
        trials=trials,
        master_seed=seed,
        generator=GeneratorSpec(problem=Problem.OV, n=80, d=16, seed=3),
    )


def test_run_experiment_exact_path_zero_error():
    records = run_experiment(_ov_config())
    assert len(records) == 4
    for r in records:
        assert r.outcome is Outcome.OK
        assert r.rel_error == 0.0  # n < 3000: the estimator is exact here
        assert r.exact is not None and r.estimate == r.exact
    assert success_fraction(records, 0.3) == 1.0


def test_csv_deterministic_modulo_timing():
    a = strip_timing(records_to_csv(run_experiment(_ov_config())))
    b = strip_timing(records_to_csv(run_experiment(_ov_config())))
    assert a == b
    assert a.startswith("# fgcount-csv v1\n")


def test_distinct_master_seeds_give_distinct_trial_seeds():
    a = run_experiment(_ov_config(seed=1))
    b = run_experiment(_ov_config(seed=2))
    assert [r.seed for r in a] != [r.seed for r in b]


def test_outcomes_are_the_three_defined_ones():
    records = run_experiment(_ov_config())
    for r in records:
        assert r.outcome in (Outcome.OK, Outcome.NO_ESTIMATE, Outcome.BUDGET_EXCEEDED)


def test_budget_exceeded_is_recorded_not_raised():
    # A counter that always exceeds the loop budget must yield records, not
    # an exception.
    from fgcount.edgecount import IterationBudgetExceeded

    def counter(rng, stats):
        raise IterationBudgetExceeded("forced")

    records = run_trials(counter, 3, RngStream(1))
    assert all(r.outcome is Outcome.BUDGET_EXCEEDED for r in records)
    assert all(r.estimate is None for r in records)


def test_no_estimate_recorded():
    records = run_trials(lambda rng, stats: None, 2, RngStream(2))
    assert all(r.outcome is Outcome.NO_ESTIMATE for r in records)


def test_workers_preserve_order_and_results():
    cfg = _ov_config(trials=6)
    sequential = run_experiment(cfg)
    threaded = run_experiment(
        ExperimentConfig(
            eps=cfg.eps,
            trials=cfg.trials,
            master_seed=cfg.master_seed,
            generator=cfg.generator,
            workers=4,
        )
    )
    assert [r.trial_id for r in threaded] == list(range(6))
    assert [(r.estimate, r.seed) for r in threaded] == [
        (r.estimate, r.seed) for r in sequential
    ]


def test_bipartite_counter_runs_and_counts_queries():
    adj = random_bipartite(60, 60, 0.1, RngStream(5))
    counter = bipartite_counter(adj, 0.3)
    records = run_trials(counter, 3, RngStream(6), exact=int(adj.sum()))
    for r in records:
        assert r.outcome is Outcome.OK
        assert r.estimate == int(adj.sum())
        assert r.adjacency_calls > 0


def test_rel_error_definition():
    records = run_trials(lambda rng, stats: 8, 1, RngStream(1), exact=10)
    assert records[0].rel_error == pytest.approx(0.2)
    records = run_trials(lambda rng, stats: 3, 1, RngStream(1), exact=0)
    assert records[0].rel_error == pytest.approx(3.0)  # max(exact, 1) divisor


def test_config_from_json_with_overrides():
    cfg = ExperimentConfig.from_json(
        '{"eps": 0.25, "trials": 2, "master_seed": 5,'
        ' "generator": {"problem": "ov", "n": 40, "d": 8, "seed": 1},'
        ' "overrides": {"exact_cutoff": 100}}'
    )
    assert cfg.edgecount.exact_cutoff == 100
    assert cfg.generator.problem is Problem.OV
    records = run_experiment(cfg)
    assert len(records) == 2


def test_run_experiment_from_instance_file(tmp_path):
    from fgcount.generators import generate
    from fgcount.instances import save_instance

    inst = generate(GeneratorSpec(problem=Problem.THREESUM, n=30, planted_count=4, seed=8))
    path = tmp_path / "inst.json"
    save_instance(inst, path)
    cfg = ExperimentConfig(
        eps=0.3, trials=2, master_seed=3, instance_path=str(path)
    )
    records = run_experiment(cfg)
    assert all(r.estimate == 4 and r.exact == 4 for r in records)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(eps=0.3, trials=0, master_seed=1, instance_path="x")
    with pytest.raises(ValueError):
        ExperimentConfig(eps=0.3, trials=1, master_seed=1)  # no source


def test_scaling_probe_deterministic():
    template = GeneratorSpec(problem=Problem.OV, n=64, d=16, seed=4)
    a = scaling_probe(template, [64, 128], 0.3, 2, RngStream(9))
    b = scaling_probe(template, [64, 128], 0.3, 2, RngStream(9))
    assert a == b
    text = probe_to_csv(a)
    assert text.splitlines()[1] == "size,median_independence_calls"
