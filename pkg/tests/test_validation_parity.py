"""Service-side verdicts for the shared validation fixture set.

The browser client validates submissions with its own implementation of the
same rules; both sides consume frontend/tests/fixtures/validation_cases.json
so no body can be accepted by one side and rejected by the other.
"""

import json
from pathlib import Path

import pytest

from liteval.service import Candidate, Task, validate_submission_body

CASES_PATH = (
    Path(__file__).resolve().parent.parent
    / "frontend" / "tests" / "fixtures" / "validation_cases.json"
)
CASES = json.loads(CASES_PATH.read_text(encoding="utf-8"))


def task_for(case: dict) -> Task:
    candidates = tuple(
        Candidate(
            segment_id=f"seg-{i}",
            text=case["segment_text"],
            sentence_count=case["sentence_count"],
        )
        for i in range(case["n_candidates"])
    )
    return Task(
        task_id="task-x",
        scheme=case["scheme"],
        evaluator_id="e1",
        source_text="Quelltext.",
        source_lang="de",
        target_lang="en",
        candidates=candidates,
    )


def test_fixture_set_covers_all_schemes():
    assert {c["scheme"] for c in CASES} == {"mqm", "sqm", "bws", "free"}
    assert len(CASES) >= 20


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_service_verdict_matches_fixture(case):
    violations = validate_submission_body(task_for(case), case["body"])
    if case["valid"]:
        assert violations == [], violations
    else:
        assert violations
