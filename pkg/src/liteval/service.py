"""Annotation task service: dispenses blind tasks, persists judgments.

Evaluators never see which system produced a candidate: payloads carry
opaque candidate keys whose order is fixed at task creation by a hash of the
task id, and the server resolves keys back to segment ids only when a
submission arrives. Persistence is a single append-only JSONL journal with
an in-memory index; a crash loses at most a partial trailing line.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import pydantic as _pydantic

from . import corpus as cio
from .corpus import Corpus
from .model import (
    BWSJudgment,
    FreeAnnotation,
    MQMAnnotation,
    SQMRating,
    TranslationSegment,
    validate_annotation,
    validate_bws,
    validate_free,
    validate_rating,
)

SCHEMES = ("mqm", "sqm", "bws", "free")
_KEYS = "abcde"


@dataclass(frozen=True)
class Candidate:
    segment_id: str
    text: str
    sentence_count: int


@dataclass
class Task:
    task_id: str
    scheme: str
    evaluator_id: str
    source_text: str
    source_lang: str
    target_lang: str
    candidates: tuple[Candidate, ...]
    context_translations: tuple[str, ...] = ()
    status: str = "open"

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        n = len(self.candidates)
        if self.scheme == "bws" and not 4 <= n <= 5:
            raise ValueError("bws tasks need 4-5 candidates")
        if self.scheme != "bws" and n != 1:
            raise ValueError(f"{self.scheme} tasks need exactly 1 candidate")

    def blinded_order(self) -> list[int]:
        """Candidate order, randomized but fixed at creation by task id."""
        digest = hashlib.sha256(self.task_id.encode("utf-8")).digest()
        indices = list(range(len(self.candidates)))
        indices.sort(key=lambda i: digest[i % len(digest)] * 31 + i * digest[-1 - i])
        return indices

    def key_to_segment(self) -> dict[str, str]:
        order = self.blinded_order()
        return {
            _KEYS[pos]: self.candidates[i].segment_id
            for pos, i in enumerate(order)
        }

    def payload(self) -> dict:
        """The JSON served to evaluators; carries no segment or system ids."""
        order = self.blinded_order()
        body = {
            "task_id": self.task_id,
            "scheme": self.scheme,
            "source_text": self.source_text,
            "source_lang": self.source_lang,
            "target_lang": self.target_lang,
            "candidates": [
                {
                    "key": _KEYS[pos],
                    "text": self.candidates[i].text,
                    "sentence_count": self.candidates[i].sentence_count,
                }
                for pos, i in enumerate(order)
            ],
        }
        if self.scheme == "sqm":
            body["context_translations"] = list(self.context_translations)
        return body


def task_to_dict(task: Task) -> dict:
    return {
        "task_id": task.task_id,
        "scheme": task.scheme,
        "evaluator_id": task.evaluator_id,
        "source_text": task.source_text,
        "source_lang": task.source_lang,
        "target_lang": task.target_lang,
        "candidates": [
            {
                "segment_id": c.segment_id,
                "text": c.text,
                "sentence_count": c.sentence_count,
            }
            for c in task.candidates
        ],
        "context_translations": list(task.context_translations),
    }


def task_from_dict(d: dict) -> Task:
    return Task(
        task_id=d["task_id"],
        scheme=d["scheme"],
        evaluator_id=d["evaluator_id"],
        source_text=d["source_text"],
        source_lang=d["source_lang"],
        target_lang=d["target_lang"],
        candidates=tuple(
            Candidate(c["segment_id"], c["text"], int(c["sentence_count"]))
            for c in d["candidates"]
        ),
        context_translations=tuple(d.get("context_translations", ())),
    )


def load_tasks(path: str | Path) -> list[Task]:
    tasks = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                tasks.append(task_from_dict(json.loads(line)))
    return tasks


def save_tasks(tasks: Sequence[Task], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for t in tasks:
            f.write(json.dumps(task_to_dict(t), ensure_ascii=False) + "\n")


def _opaque_task_id(scheme: str, name: str) -> str:
    # task ids are served to evaluators, so they must not embed segment or
    # system identifiers
    digest = hashlib.sha256(f"{scheme}:{name}".encode("utf-8")).hexdigest()[:12]
    return f"task-{scheme}-{digest}"


def make_tasks(
    corpus: Corpus,
    scheme: str,
    evaluator_id: str,
    systems: Sequence[str] | None = None,
    limit: int | None = None,
) -> list[Task]:
    """Derive annotation tasks from a corpus, one per segment or tuple."""
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    tasks: list[Task] = []
    for para_id in sorted(corpus.paragraphs):
        para = corpus.paragraphs[para_id]
        all_segments = corpus.segments_of_paragraph(para_id)
        segments = all_segments
        if systems is not None:
            segments = [s for s in segments if s.system_id in systems]
        if not segments:
            continue
        if scheme == "bws":
            chosen = _bws_candidates(corpus, segments)
            if chosen is None:
                continue
            tasks.append(
                Task(
                    task_id=_opaque_task_id("bws", para_id),
                    scheme=scheme,
                    evaluator_id=evaluator_id,
                    source_text=para.text,
                    source_lang=para.language,
                    target_lang=para.target_language,
                    candidates=tuple(
                        Candidate(s.id, s.text, s.sentence_count) for s in chosen
                    ),
                )
            )
        else:
            siblings = tuple(s.text for s in all_segments)
            for seg in segments:
                context = tuple(t for t in siblings if t != seg.text)
                tasks.append(
                    Task(
                        task_id=_opaque_task_id(scheme, seg.id),
                        scheme=scheme,
                        evaluator_id=evaluator_id,
                        source_text=para.text,
                        source_lang=para.language,
                        target_lang=para.target_language,
                        candidates=(Candidate(seg.id, seg.text, seg.sentence_count),),
                        context_translations=context if scheme == "sqm" else (),
                    )
                )
        if limit is not None and len(tasks) >= limit:
            return tasks[:limit]
    return tasks


def _bws_candidates(
    corpus: Corpus, segments: list[TranslationSegment]
) -> list[TranslationSegment] | None:
    from .adequacy import DEFAULT_TOP_SYSTEMS

    by_system: dict[str, TranslationSegment] = {}
    for seg in segments:
        by_system.setdefault(seg.system_id, seg)
    chosen = []
    if "human" in by_system:
        chosen.append(by_system["human"])
    for system in sorted(DEFAULT_TOP_SYSTEMS):
        if system in by_system and len(chosen) < 5:
            chosen.append(by_system[system])
    return chosen if 4 <= len(chosen) <= 5 else None


class SubmissionError(Exception):
    def __init__(self, status: int, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.status = status
        self.violations = violations or []


@dataclass(frozen=True)
class SubmissionRecord:
    task_id: str
    timestamp: float
    scheme: str
    body: dict  # corpus_io wire form with resolved segment ids


class TaskStore:
    """In-memory task index over an append-only submission journal."""

    def __init__(self, tasks: Sequence[Task], journal_path: str | Path):
        self.tasks: dict[str, Task] = {}
        for task in tasks:
            if task.task_id in self.tasks:
                raise ValueError(f"duplicate task id {task.task_id!r}")
            self.tasks[task.task_id] = task
        self.journal_path = Path(journal_path)
        self.submissions: list[SubmissionRecord] = []
        self._lock = threading.Lock()
        if self.journal_path.exists():
            self._replay()

    def _replay(self) -> None:
        with open(self.journal_path, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                record = SubmissionRecord(
                    task_id=rec["task_id"],
                    timestamp=rec["timestamp"],
                    scheme=rec["scheme"],
                    body=rec["body"],
                )
                self.submissions.append(record)
                task = self.tasks.get(record.task_id)
                if task is not None:
                    task.status = "done"

    def evaluators(self) -> set[str]:
        return {t.evaluator_id for t in self.tasks.values()}

    def next_task(self, evaluator_id: str, scheme: str | None = None) -> Task | None:
        if evaluator_id not in self.evaluators():
            raise SubmissionError(404, f"unknown evaluator {evaluator_id!r}")
        candidates = [
            t
            for t in self.tasks.values()
            if t.evaluator_id == evaluator_id
            and t.status == "open"
            and (scheme is None or t.scheme == scheme)
        ]
        if not candidates:
            return None
        return min(candidates, key=lambda t: t.task_id)

    def progress(self, evaluator_id: str) -> dict:
        if evaluator_id not in self.evaluators():
            raise SubmissionError(404, f"unknown evaluator {evaluator_id!r}")
        mine = [t for t in self.tasks.values() if t.evaluator_id == evaluator_id]
        done = sum(1 for t in mine if t.status == "done")
        return {"evaluator": evaluator_id, "total": len(mine), "done": done,
                "open": len(mine) - done}

    def submit(self, task_id: str, body: dict) -> SubmissionRecord:
        with self._lock:
            task = self.tasks.get(task_id)
            if task is None:
                raise SubmissionError(404, f"unknown task {task_id!r}")
            if task.status != "open":
                raise SubmissionError(409, f"task {task_id!r} already submitted")
            record_body = self._validate(task, body)
            record = SubmissionRecord(
                task_id=task_id,
                timestamp=time.time(),
                scheme=task.scheme,
                body=record_body,
            )
            line = json.dumps(
                {
                    "task_id": record.task_id,
                    "timestamp": record.timestamp,
                    "scheme": record.scheme,
                    "body": record.body,
                },
                ensure_ascii=False,
            )
            with open(self.journal_path, "a", encoding="utf-8") as f:
                f.write(line + "\n")
            self.submissions.append(record)
            task.status = "done"
            return record

    def _validate(self, task: Task, body: dict) -> dict:
        """Resolve candidate keys to segment ids and check every invariant."""
        if not isinstance(body, dict):
            raise SubmissionError(422, "body must be an object")
        single = task.candidates[0] if len(task.candidates) == 1 else None
        try:
            if task.scheme == "mqm":
                record = cio.mqm_from_dict(
                    {
                        "segment_id": single.segment_id,
                        "evaluator_id": task.evaluator_id,
                        "spans": body.get("spans", []),
                    }
                )
                violations = validate_annotation(record, _segment_stub(single))
                wire = cio.mqm_to_dict(record)
            elif task.scheme == "sqm":
                score = body.get("score")
                if not isinstance(score, int) or isinstance(score, bool):
                    raise SubmissionError(
                        422, "submission violates the annotation rules",
                        ["score must be an integer"],
                    )
                record = cio.sqm_from_dict(
                    {
                        "segment_id": single.segment_id,
                        "evaluator_id": task.evaluator_id,
                        "score": score,
                    }
                )
                violations = validate_rating(record)
                wire = cio.sqm_to_dict(record)
            elif task.scheme == "free":
                record = cio.free_from_dict(
                    {
                        "segment_id": single.segment_id,
                        "evaluator_id": task.evaluator_id,
                        "spans": body.get("spans", []),
                    }
                )
                violations = validate_free(record, _segment_stub(single))
                wire = cio.free_to_dict(record)
            else:
                mapping = task.key_to_segment()
                best = mapping.get(body.get("best_key"))
                worst = mapping.get(body.get("worst_key"))
                if best is None or worst is None:
                    raise SubmissionError(422, "best_key/worst_key must name candidates")
                record = BWSJudgment(
                    tuple_id=task.task_id,
                    segment_ids=tuple(c.segment_id for c in task.candidates),
                    best_id=best,
                    worst_id=worst,
                    evaluator_id=task.evaluator_id,
                )
                violations = validate_bws(record)
                wire = cio.bws_to_dict(record)
        except SubmissionError:
            raise
        except (KeyError, ValueError, TypeError, AttributeError) as exc:
            raise SubmissionError(422, f"malformed body: {exc}") from exc
        if violations:
            raise SubmissionError(422, "submission violates the annotation rules",
                                  violations)
        return wire

    def export(self, out_dir: str | Path) -> dict[str, int]:
        """Write judgment JSONL files in the corpus formats, journal order."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        grouped: dict[str, list[dict]] = {s: [] for s in SCHEMES}
        for record in self.submissions:
            grouped[record.scheme].append(record.body)
        cio.dump_jsonl(grouped["mqm"], out / cio.MQM_FILE)
        cio.dump_jsonl(grouped["sqm"], out / cio.SQM_FILE)
        cio.dump_jsonl(grouped["bws"], out / cio.BWS_FILE)
        cio.dump_jsonl(grouped["free"], out / cio.FREE_FILE)
        return {scheme: len(rows) for scheme, rows in grouped.items()}


def validate_submission_body(task: Task, body: dict) -> list[str]:
    """Violations a submission body would be rejected with; [] means accepted.

    The browser client mirrors these rules; the shared fixture suite keeps
    both sides in lockstep.
    """
    probe = TaskStore([task], Path("/dev/null"))
    try:
        probe._validate(task, body)
    except SubmissionError as exc:
        return exc.violations or [str(exc)]
    return []


def _segment_stub(candidate: Candidate) -> TranslationSegment:
    return TranslationSegment(
        id=candidate.segment_id,
        source_id="unused",
        system_id="unused",
        text=candidate.text,
        sentence_count=candidate.sentence_count,
    )


class SubmissionIn(_pydantic.BaseModel):
    task_id: str
    body: dict = {}


def create_app(store: TaskStore, static_dir: str | Path | None = None):
    """FastAPI application over a task store."""
    from fastapi import FastAPI
    from fastapi.responses import JSONResponse

    app = FastAPI(title="liteval review service")

    @app.exception_handler(SubmissionError)
    async def _submission_error(_request, exc: SubmissionError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": str(exc), "violations": exc.violations},
        )

    @app.get("/api/tasks/next")
    def next_task(evaluator: str, scheme: str | None = None):
        task = store.next_task(evaluator, scheme)
        return {"task": task.payload() if task else None}

    @app.post("/api/submissions")
    def submit(submission: SubmissionIn):
        record = store.submit(submission.task_id, submission.body)
        return {"ok": True, "task_id": record.task_id, "status": "done"}

    @app.get("/api/progress")
    def progress(evaluator: str):
        return store.progress(evaluator)

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="ui")
    return app
