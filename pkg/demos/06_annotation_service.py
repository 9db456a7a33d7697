"""The annotation task service, exercised in-process.

Builds blind tasks from the corpus, serves them through the HTTP API,
submits judgments, and exports the journal back into corpus-format JSONL
that the analysis commands consume unchanged. Run the real server with:

    liteval make-tasks <corpus> --scheme mqm --evaluator e1 --out tasks.jsonl
    liteval serve <corpus> --tasks tasks.jsonl --journal journal.jsonl
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from demo_corpus import demo_corpus

from liteval.corpus import mqm_from_dict
from liteval.service import TaskStore, create_app, make_tasks

corpus, _ = demo_corpus()
workdir = Path(tempfile.mkdtemp(prefix="liteval-service-demo-"))

tasks = (
    make_tasks(corpus, "mqm", "annotator-1", systems=["deepl"], limit=2)
    + make_tasks(corpus, "bws", "annotator-1", limit=1)
)
store = TaskStore(tasks, workdir / "journal.jsonl")
client = TestClient(create_app(store))

# ---------------------------------------------------------------------------
# the payload is blind: candidates carry opaque keys, never system ids

task = client.get(
    "/api/tasks/next", params={"evaluator": "annotator-1", "scheme": "mqm"}
).json()["task"]
print("served task:", task["task_id"], "| scheme", task["scheme"])
print("candidate keys:", [c["key"] for c in task["candidates"]])
blob = json.dumps(task)
print("payload mentions a system id:",
      any(s in blob for s in corpus.systems))

# ---------------------------------------------------------------------------
# submit a span annotation; invalid bodies come back with the violated rule

ack = client.post("/api/submissions", json={
    "task_id": task["task_id"],
    "body": {"spans": [{"start": 0, "end": 6,
                        "category": {"major": "Style", "sub": "awkwardness"},
                        "severity": "Minor", "comment": "stiff opening"}]},
}).json()
print("\nack:", ack)

rejected = client.post("/api/submissions", json={
    "task_id": task["task_id"],
    "body": {"spans": []},
})
print("duplicate submission ->", rejected.status_code)

bws_task = client.get(
    "/api/tasks/next", params={"evaluator": "annotator-1", "scheme": "bws"}
).json()["task"]
bad = client.post("/api/submissions", json={
    "task_id": bws_task["task_id"],
    "body": {"best_key": "a", "worst_key": "a"},
})
print("best == worst ->", bad.status_code, bad.json()["violations"])
client.post("/api/submissions", json={
    "task_id": bws_task["task_id"],
    "body": {"best_key": "a", "worst_key": "b"},
})

print("\nprogress:", client.get(
    "/api/progress", params={"evaluator": "annotator-1"}
).json())

# ---------------------------------------------------------------------------
# export writes the standard judgment files; they load like any corpus data

counts = store.export(workdir / "export")
print("exported:", counts)
line = (workdir / "export" / "mqm.jsonl").read_text().strip()
record = mqm_from_dict(json.loads(line))
print("round-tripped annotation:", record.segment_id,
      [f"{sp.start}-{sp.end}" for sp in record.spans])
