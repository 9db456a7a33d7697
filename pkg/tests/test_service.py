import json

import pytest
from fastapi.testclient import TestClient

from liteval.corpus import bws_from_dict, load_corpus, mqm_from_dict, sqm_from_dict
from liteval.service import (
    SubmissionError,
    TaskStore,
    create_app,
    load_tasks,
    make_tasks,
    save_tasks,
)


@pytest.fixture
def store(tiny_corpus, tmp_path):
    tasks = (
        make_tasks(tiny_corpus, "mqm", "stu-1", systems=["deepl"])
        + make_tasks(tiny_corpus, "sqm", "stu-1", systems=["deepl"])
        + make_tasks(tiny_corpus, "bws", "stu-1")
        + make_tasks(tiny_corpus, "free", "pro-1", systems=["human"])
    )
    return TaskStore(tasks, tmp_path / "journal.jsonl")


@pytest.fixture
def client(store):
    return TestClient(create_app(store))


def test_make_tasks_shapes(tiny_corpus):
    bws = make_tasks(tiny_corpus, "bws", "e")
    assert bws and all(4 <= len(t.candidates) <= 5 for t in bws)
    sqm = make_tasks(tiny_corpus, "sqm", "e", systems=["deepl"])
    assert all(len(t.candidates) == 1 for t in sqm)
    assert all(t.context_translations for t in sqm)
    mqm = make_tasks(tiny_corpus, "mqm", "e", systems=["deepl"])
    assert all(not t.context_translations for t in mqm)


def test_tasks_round_trip(tiny_corpus, tmp_path):
    tasks = make_tasks(tiny_corpus, "bws", "e")
    save_tasks(tasks, tmp_path / "tasks.jsonl")
    loaded = load_tasks(tmp_path / "tasks.jsonl")
    assert [t.task_id for t in loaded] == [t.task_id for t in tasks]
    assert loaded[0].candidates == tasks[0].candidates


def test_next_task_deterministic_order(store):
    first = store.next_task("stu-1", "mqm")
    again = store.next_task("stu-1", "mqm")
    assert first.task_id == again.task_id
    all_ids = sorted(
        t.task_id for t in store.tasks.values()
        if t.evaluator_id == "stu-1" and t.scheme == "mqm"
    )
    assert first.task_id == all_ids[0]


def test_next_task_unknown_evaluator(store):
    with pytest.raises(SubmissionError) as err:
        store.next_task("ghost")
    assert err.value.status == 404


def test_api_next_submit_progress(client, store):
    r = client.get("/api/tasks/next", params={"evaluator": "stu-1", "scheme": "mqm"})
    assert r.status_code == 200
    task = r.json()["task"]
    assert task["scheme"] == "mqm"

    body = {
        "spans": [
            {
                "start": 0,
                "end": 5,
                "category": {"major": "Accuracy", "sub": "omission"},
                "severity": "Major",
                "comment": None,
            }
        ]
    }
    r = client.post("/api/submissions", json={"task_id": task["task_id"], "body": body})
    assert r.status_code == 200 and r.json()["ok"]

    r = client.get("/api/progress", params={"evaluator": "stu-1"})
    assert r.json()["done"] == 1

    # duplicate submission is a conflict
    r = client.post("/api/submissions", json={"task_id": task["task_id"], "body": body})
    assert r.status_code == 409


def test_api_empty_queue_returns_null(client, store):
    for task in list(store.tasks.values()):
        if task.evaluator_id == "pro-1":
            store.submit(task.task_id, {"spans": []})
    r = client.get("/api/tasks/next", params={"evaluator": "pro-1"})
    assert r.status_code == 200
    assert r.json()["task"] is None


def test_submit_rejects_bws_best_equals_worst(client, store):
    task = store.next_task("stu-1", "bws")
    r = client.post(
        "/api/submissions",
        json={"task_id": task.task_id, "body": {"best_key": "a", "worst_key": "a"}},
    )
    assert r.status_code == 422
    assert any("best_id must differ" in v for v in r.json()["violations"])


def test_submit_rejects_scheme_mismatch(client, store):
    task = store.next_task("stu-1", "sqm")
    r = client.post(
        "/api/submissions",
        json={"task_id": task.task_id, "body": {"spans": []}},
    )
    assert r.status_code == 422


def test_submit_rejects_out_of_range_span(client, store):
    task = store.next_task("stu-1", "mqm")
    body = {
        "spans": [
            {
                "start": 0,
                "end": 99999,
                "category": {"major": "Accuracy", "sub": "omission"},
                "severity": "Major",
            }
        ]
    }
    r = client.post("/api/submissions", json={"task_id": task.task_id, "body": body})
    assert r.status_code == 422
    assert any("end beyond text" in v for v in r.json()["violations"])


def test_blind_invariant_no_system_or_segment_ids(client, store, tiny_corpus):
    for scheme in ("mqm", "sqm", "bws", "free"):
        for evaluator in ("stu-1", "pro-1"):
            r = client.get(
                "/api/tasks/next", params={"evaluator": evaluator, "scheme": scheme}
            )
            task = r.json()["task"]
            if task is None:
                continue
            blob = json.dumps(task)
            for system_id in tiny_corpus.systems:
                assert system_id not in blob, (scheme, system_id)
            for segment_id in tiny_corpus.segments:
                assert segment_id not in blob, (scheme, segment_id)


def test_candidate_order_fixed_at_creation(store):
    task = store.next_task("stu-1", "bws")
    assert task.blinded_order() == task.blinded_order()
    assert set(task.key_to_segment().values()) == {
        c.segment_id for c in task.candidates
    }


def test_journal_replay_and_append_only(store, tmp_path):
    task = store.next_task("stu-1", "sqm")
    store.submit(task.task_id, {"score": 5})
    journal = store.journal_path
    first = journal.read_text()

    reloaded = TaskStore(list(store.tasks.values()), journal)
    assert reloaded.tasks[task.task_id].status == "done"
    assert len(reloaded.submissions) == 1

    other = reloaded.next_task("stu-1", "sqm")
    reloaded.submit(other.task_id, {"score": 2})
    assert journal.read_text().startswith(first)  # nothing rewritten


def test_export_round_trips_into_corpus_formats(store, tiny_corpus, tmp_path):
    mqm_task = store.next_task("stu-1", "mqm")
    store.submit(
        mqm_task.task_id,
        {"spans": [{"start": 1, "end": 4,
                    "category": {"major": "Style", "sub": "register"},
                    "severity": "Minor", "comment": "flat"}]},
    )
    sqm_task = store.next_task("stu-1", "sqm")
    store.submit(sqm_task.task_id, {"score": 4})
    bws_task = store.next_task("stu-1", "bws")
    mapping = bws_task.key_to_segment()
    store.submit(bws_task.task_id, {"best_key": "a", "worst_key": "b"})

    out = tmp_path / "export"
    counts = store.export(out)
    assert counts == {"mqm": 1, "sqm": 1, "bws": 1, "free": 0}

    mqm_lines = (out / "mqm.jsonl").read_text().strip().splitlines()
    record = mqm_from_dict(json.loads(mqm_lines[0]))
    assert record.evaluator_id == "stu-1"
    assert record.spans[0].start == 1

    sqm_record = sqm_from_dict(
        json.loads((out / "sqm.jsonl").read_text().strip())
    )
    assert sqm_record.score == 4

    bws_record = bws_from_dict(
        json.loads((out / "bws.jsonl").read_text().strip())
    )
    assert bws_record.best_id == mapping["a"]
    assert bws_record.worst_id == mapping["b"]
    assert bws_record.best_id in tiny_corpus.segments
