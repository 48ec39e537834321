"""Tests for the run history ring buffer."""

import json

from gsdo.models import Scenario, TerminationReason, TrialSummary
from gsdo.services.history import RunHistory, get_run_history


def summary(problem="G24", seed=0, best_f=-5.5):
    return TrialSummary(
        problem=problem,
        scenario=Scenario.SET1,
        seed=seed,
        budget=45,
        best_f=best_f,
        feasible=best_f is not None,
        evaluations=45,
        termination=TerminationReason.BUDGET_EXHAUSTED,
    )


def test_record_and_get(tmp_path):
    history = RunHistory(max_entries=5, storage_path=tmp_path / "runs.json")
    run_id = history.record(summary())
    assert run_id
    record = history.get(run_id)
    assert record.problem == "G24"
    assert record.best_f == -5.5
    assert history.get("nope") is None


def test_most_recent_first_and_limit(tmp_path):
    history = RunHistory(max_entries=5, storage_path=tmp_path / "runs.json")
    for seed in range(3):
        history.record(summary(seed=seed))
    assert [r.seed for r in history.get_history()] == [2, 1, 0]
    assert [r.seed for r in history.get_history(limit=2)] == [2, 1]


def test_ring_drops_oldest(tmp_path):
    history = RunHistory(max_entries=3, storage_path=tmp_path / "runs.json")
    for seed in range(5):
        history.record(summary(seed=seed))
    assert len(history) == 3
    assert [r.seed for r in history.get_history()] == [4, 3, 2]


def test_persistence(tmp_path):
    path = tmp_path / "runs.json"
    RunHistory(max_entries=5, storage_path=path).record(summary(problem="Hesse", best_f=None))
    reloaded = RunHistory(max_entries=5, storage_path=path)
    (record,) = reloaded.get_history()
    assert record.problem == "Hesse"
    assert record.feasible is False


def test_clear_removes_file(tmp_path):
    path = tmp_path / "runs.json"
    history = RunHistory(max_entries=5, storage_path=path)
    history.record(summary())
    assert path.exists()
    history.clear()
    assert len(history) == 0
    assert not path.exists()


def test_disabled_history(tmp_path):
    path = tmp_path / "runs.json"
    history = RunHistory(max_entries=0, storage_path=path)
    assert history.record(summary()) == ""
    assert history.get_history() == []
    assert not path.exists()


def test_unreadable_file_starts_empty(tmp_path):
    path = tmp_path / "runs.json"
    path.write_text("{not json")
    assert len(RunHistory(max_entries=5, storage_path=path)) == 0


def test_malformed_entries_are_skipped(tmp_path):
    path = tmp_path / "runs.json"
    history = RunHistory(max_entries=5, storage_path=path)
    history.record(summary())
    data = json.loads(path.read_text())
    data["runs"].append({"id": "broken"})
    path.write_text(json.dumps(data))
    assert len(RunHistory(max_entries=5, storage_path=path).get_history()) == 1


def test_global_history_uses_settings(isolated_history):
    history = get_run_history()
    assert history is get_run_history()
    history.record(summary())
    assert isolated_history.exists()
