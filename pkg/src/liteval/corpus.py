"""Corpus loading, validation, statistics, and every on-disk format.

A corpus directory holds one UTF-8 JSONL file per record kind
(``paragraphs.jsonl``, ``segments.jsonl``, ``systems.jsonl``,
``evaluators.jsonl``, ``mqm.jsonl``, ``sqm.jsonl``, ``bws.jsonl``,
``free.jsonl``) with field names exactly matching the domain types, plus
an optional ``metric_scores.csv``. Loading is strict: malformed lines,
dangling references, duplicate ids, and invariant violations all raise
with file name and line number.
"""

from __future__ import annotations

import csv
import json
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .model import (
    BWSJudgment,
    Era,
    ErrorCategory,
    ErrorSpan,
    Evaluator,
    EvaluatorRole,
    FreeAnnotation,
    FreeSpan,
    LanguagePair,
    MajorCategory,
    MQMAnnotation,
    Polarity,
    Severity,
    SourceParagraph,
    SQMRating,
    System,
    SystemKind,
    TranslationSegment,
    validate_annotation,
    validate_bws,
    validate_free,
    validate_rating,
)

PARAGRAPHS_FILE = "paragraphs.jsonl"
SEGMENTS_FILE = "segments.jsonl"
SYSTEMS_FILE = "systems.jsonl"
EVALUATORS_FILE = "evaluators.jsonl"
MQM_FILE = "mqm.jsonl"
SQM_FILE = "sqm.jsonl"
BWS_FILE = "bws.jsonl"
FREE_FILE = "free.jsonl"
METRICS_FILE = "metric_scores.csv"

REQUIRED_FILES = (PARAGRAPHS_FILE, SEGMENTS_FILE, SYSTEMS_FILE, EVALUATORS_FILE)
JUDGMENT_FILES = (MQM_FILE, SQM_FILE, BWS_FILE, FREE_FILE)


class CorpusError(Exception):
    """Base class for corpus loading failures."""


class CorpusParseError(CorpusError):
    """A line could not be parsed; message carries file and line number."""


class CorpusReferenceError(CorpusError):
    """A record references an id that does not exist."""


class DuplicateIdError(CorpusError):
    """Two records claim the same id."""


@dataclass(frozen=True)
class MetricScore:
    """A (segment, metric, value) triple from an internal judge or imported file."""

    segment_id: str
    metric_id: str
    value: float


@dataclass
class Corpus:
    """A fully cross-referenced evaluation corpus. Treat as immutable after load."""

    paragraphs: dict[str, SourceParagraph] = field(default_factory=dict)
    segments: dict[str, TranslationSegment] = field(default_factory=dict)
    systems: dict[str, System] = field(default_factory=dict)
    evaluators: dict[str, Evaluator] = field(default_factory=dict)
    mqm: list[MQMAnnotation] = field(default_factory=list)
    sqm: list[SQMRating] = field(default_factory=list)
    bws: list[BWSJudgment] = field(default_factory=list)
    free: list[FreeAnnotation] = field(default_factory=list)

    def pairs(self) -> list[LanguagePair]:
        seen: dict[str, LanguagePair] = {}
        for p in self.paragraphs.values():
            seen.setdefault(str(p.pair), p.pair)
        return [seen[k] for k in sorted(seen)]

    def paragraph_of_segment(self, segment_id: str) -> SourceParagraph:
        return self.paragraphs[self.segments[segment_id].source_id]

    def pair_of_segment(self, segment_id: str) -> LanguagePair:
        return self.paragraph_of_segment(segment_id).pair

    def segments_of_paragraph(self, paragraph_id: str) -> list[TranslationSegment]:
        return sorted(
            (s for s in self.segments.values() if s.source_id == paragraph_id),
            key=lambda s: s.id,
        )

    def segments_of_system(
        self, system_id: str, pair: LanguagePair | None = None
    ) -> list[TranslationSegment]:
        out = []
        for seg in self.segments.values():
            if seg.system_id != system_id:
                continue
            if pair is not None and self.paragraphs[seg.source_id].pair != pair:
                continue
            out.append(seg)
        return sorted(out, key=lambda s: s.id)


@dataclass(frozen=True)
class PairStats:
    pair: str
    paragraph_count: int
    segment_count: int
    sentence_count: int
    mean_source_sentences: float
    mean_target_sentences: float


@dataclass(frozen=True)
class CorpusStats:
    per_pair: tuple[PairStats, ...]
    total: PairStats


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Aggregate counts per language pair from the stored sentence_count fields.

    Sentence counts ship with the data files and are not recomputed here;
    ``sentence_count`` totals cover the translation side, matching how the
    corpus reports "annotated sentences".
    """
    rows: list[PairStats] = []
    by_pair: dict[str, list[SourceParagraph]] = {}
    for p in corpus.paragraphs.values():
        by_pair.setdefault(str(p.pair), []).append(p)
    segs_by_source: dict[str, list[TranslationSegment]] = {}
    for s in corpus.segments.values():
        segs_by_source.setdefault(s.source_id, []).append(s)

    tot_paras = tot_segs = tot_sents = 0
    tot_src_sents = 0
    for pair_key in sorted(by_pair):
        paras = by_pair[pair_key]
        segs = [s for p in paras for s in segs_by_source.get(p.id, [])]
        n_sents = sum(s.sentence_count for s in segs)
        src_sents = sum(p.sentence_count for p in paras)
        rows.append(
            PairStats(
                pair=pair_key,
                paragraph_count=len(paras),
                segment_count=len(segs),
                sentence_count=n_sents,
                mean_source_sentences=src_sents / len(paras) if paras else 0.0,
                mean_target_sentences=n_sents / len(segs) if segs else 0.0,
            )
        )
        tot_paras += len(paras)
        tot_segs += len(segs)
        tot_sents += n_sents
        tot_src_sents += src_sents

    total = PairStats(
        pair="total",
        paragraph_count=tot_paras,
        segment_count=tot_segs,
        sentence_count=tot_sents,
        mean_source_sentences=tot_src_sents / tot_paras if tot_paras else 0.0,
        mean_target_sentences=tot_sents / tot_segs if tot_segs else 0.0,
    )
    return CorpusStats(per_pair=tuple(rows), total=total)


#: Fallback sentence splitter configuration. The shipped sentence_count fields
#: take precedence; this splitter only fills gaps in third-party files.
DEFAULT_ABBREVIATIONS = frozenset(
    {"Dr.", "Mr.", "Mrs.", "Ms.", "Prof.", "Nr.", "z.B.", "bzw.", "etc.", "St.", "ca."}
)

_TERMINALS = ".!?…。！？"
# full-width terminators delimit sentences without trailing whitespace
_SELF_DELIMITING = "。！？"


def count_sentences(
    text: str, language: str, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS
) -> int:
    """Count sentences by terminal punctuation, guarding a small abbreviation list.

    Splits on ``. ! ? … 。 ！ ？`` followed by whitespace or end of
    text. A period does not terminate when the token ending at it (everything
    back to the previous whitespace, including the period) is a known
    abbreviation. Deterministic and idempotent; used only when input files
    omit sentence_count.
    """
    if not text or not text.strip():
        raise ValueError("cannot count sentences of empty text")
    del language  # same rules everywhere; the abbreviation list carries locale bits
    count = 0
    in_sentence = False
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in _TERMINALS:
            # swallow runs like "?!" or "..." as one terminator
            j = i
            while j + 1 < n and text[j + 1] in _TERMINALS:
                j += 1
            at_boundary = (
                j + 1 >= n
                or text[j + 1].isspace()
                or any(t in _SELF_DELIMITING for t in text[i : j + 1])
            )
            token_start = i
            while token_start > 0 and not text[token_start - 1].isspace():
                token_start -= 1
            token = text[token_start : j + 1]
            if at_boundary and token not in abbreviations:
                count += 1
                in_sentence = False
            i = j + 1
            continue
        if not ch.isspace():
            in_sentence = True
        i += 1
    if in_sentence:
        count += 1
    return max(count, 1)


# ---------------------------------------------------------------------------
# JSON codecs. Key order is fixed so exports are byte-reproducible.


def paragraph_to_dict(p: SourceParagraph) -> dict:
    return {
        "id": p.id,
        "work_id": p.work_id,
        "language": p.language,
        "target_language": p.target_language,
        "text": p.text,
        "sentence_count": p.sentence_count,
        "era": p.era.value,
        "publication_year": p.publication_year,
    }


def paragraph_from_dict(d: dict) -> SourceParagraph:
    return SourceParagraph(
        id=d["id"],
        work_id=d["work_id"],
        language=d["language"],
        target_language=d["target_language"],
        text=d["text"],
        sentence_count=int(d["sentence_count"]),
        era=Era(d["era"]),
        publication_year=int(d["publication_year"]),
    )


def segment_to_dict(s: TranslationSegment) -> dict:
    d = {
        "id": s.id,
        "source_id": s.source_id,
        "system_id": s.system_id,
        "text": s.text,
        "sentence_count": s.sentence_count,
        "translation_year": s.translation_year,
    }
    if s.version is not None:
        d["version"] = s.version
    return d


def segment_from_dict(d: dict) -> TranslationSegment:
    year = d.get("translation_year")
    version = d.get("version")
    return TranslationSegment(
        id=d["id"],
        source_id=d["source_id"],
        system_id=d["system_id"],
        text=d["text"],
        sentence_count=int(d["sentence_count"]),
        translation_year=int(year) if year is not None else None,
        version=int(version) if version is not None else None,
    )


def system_to_dict(s: System) -> dict:
    return {
        "id": s.id,
        "display_name": s.display_name,
        "kind": s.kind.value,
        "param_count_billions": s.param_count_billions,
    }


def system_from_dict(d: dict) -> System:
    params = d.get("param_count_billions")
    return System(
        id=d["id"],
        display_name=d["display_name"],
        kind=SystemKind(d["kind"]),
        param_count_billions=float(params) if params is not None else None,
    )


def evaluator_to_dict(e: Evaluator) -> dict:
    return {
        "id": e.id,
        "role": e.role.value,
        "pair": {"source_lang": e.pair.source_lang, "target_lang": e.pair.target_lang},
    }


def evaluator_from_dict(d: dict) -> Evaluator:
    return Evaluator(
        id=d["id"],
        role=EvaluatorRole(d["role"]),
        pair=LanguagePair(d["pair"]["source_lang"], d["pair"]["target_lang"]),
    )


def mqm_to_dict(a: MQMAnnotation) -> dict:
    return {
        "segment_id": a.segment_id,
        "evaluator_id": a.evaluator_id,
        "spans": [
            {
                "start": sp.start,
                "end": sp.end,
                "category": {
                    "major": sp.category.major.value,
                    "sub": sp.category.sub,
                },
                "severity": sp.severity.value,
                "comment": sp.comment,
            }
            for sp in a.spans
        ],
    }


def mqm_from_dict(d: dict) -> MQMAnnotation:
    spans = tuple(
        ErrorSpan(
            start=int(sp["start"]),
            end=int(sp["end"]),
            category=ErrorCategory(
                MajorCategory(sp["category"]["major"]), sp["category"].get("sub")
            ),
            severity=Severity(sp["severity"]),
            comment=sp.get("comment"),
        )
        for sp in d.get("spans", [])
    )
    return MQMAnnotation(
        segment_id=d["segment_id"], evaluator_id=d["evaluator_id"], spans=spans
    )


def sqm_to_dict(r: SQMRating) -> dict:
    return {
        "segment_id": r.segment_id,
        "evaluator_id": r.evaluator_id,
        "score": r.score,
    }


def sqm_from_dict(d: dict) -> SQMRating:
    return SQMRating(
        segment_id=d["segment_id"],
        evaluator_id=d["evaluator_id"],
        score=int(d["score"]),
    )


def bws_to_dict(j: BWSJudgment) -> dict:
    return {
        "tuple_id": j.tuple_id,
        "segment_ids": list(j.segment_ids),
        "best_id": j.best_id,
        "worst_id": j.worst_id,
        "evaluator_id": j.evaluator_id,
    }


def bws_from_dict(d: dict) -> BWSJudgment:
    return BWSJudgment(
        tuple_id=d["tuple_id"],
        segment_ids=tuple(d["segment_ids"]),
        best_id=d["best_id"],
        worst_id=d["worst_id"],
        evaluator_id=d["evaluator_id"],
    )


def free_to_dict(a: FreeAnnotation) -> dict:
    return {
        "segment_id": a.segment_id,
        "evaluator_id": a.evaluator_id,
        "spans": [
            {
                "start": sp.start,
                "end": sp.end,
                "polarity": sp.polarity.value,
                "comment": sp.comment,
            }
            for sp in a.spans
        ],
    }


def free_from_dict(d: dict) -> FreeAnnotation:
    spans = tuple(
        FreeSpan(
            start=int(sp["start"]),
            end=int(sp["end"]),
            polarity=Polarity(sp["polarity"]),
            comment=sp.get("comment", ""),
        )
        for sp in d.get("spans", [])
    )
    return FreeAnnotation(
        segment_id=d["segment_id"], evaluator_id=d["evaluator_id"], spans=spans
    )


def dump_jsonl(records: list[dict], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False))
            f.write("\n")


def _read_jsonl(path: Path) -> list[tuple[int, dict]]:
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusParseError(f"{path.name}:{lineno}: {exc}") from exc
            if not isinstance(obj, dict):
                raise CorpusParseError(f"{path.name}:{lineno}: expected a JSON object")
            out.append((lineno, obj))
    return out


def load_corpus(path: str | Path) -> Corpus:
    """Load and fully validate a corpus directory.

    Raises :class:`CorpusReferenceError` when required files are missing or ids
    dangle, :class:`DuplicateIdError` on id collisions, and
    :class:`CorpusParseError` on malformed lines (with line numbers). The
    returned corpus has every cross-reference resolved and every judgment
    checked against the model invariants.
    """
    root = Path(path)
    if not root.is_dir():
        raise CorpusReferenceError(f"not a corpus directory: {root}")
    missing = [name for name in REQUIRED_FILES if not (root / name).exists()]
    if missing:
        raise CorpusReferenceError(
            f"missing corpus files in {root}: {', '.join(missing)}"
        )

    corpus = Corpus()

    def _decode(name: str, decode, sink) -> None:
        fpath = root / name
        if not fpath.exists():
            return
        for lineno, obj in _read_jsonl(fpath):
            try:
                sink(lineno, decode(obj))
            except CorpusError:
                raise
            except (KeyError, ValueError, TypeError) as exc:
                raise CorpusParseError(f"{name}:{lineno}: {exc}") from exc

    def _into(mapping: dict, kind: str, name: str):
        def add(lineno: int, rec) -> None:
            if rec.id in mapping:
                raise DuplicateIdError(f"{name}:{lineno}: duplicate {kind} id {rec.id!r}")
            mapping[rec.id] = rec

        return add

    _decode(PARAGRAPHS_FILE, paragraph_from_dict, _into(corpus.paragraphs, "paragraph", PARAGRAPHS_FILE))
    _decode(SYSTEMS_FILE, system_from_dict, _into(corpus.systems, "system", SYSTEMS_FILE))
    _decode(SEGMENTS_FILE, segment_from_dict, _into(corpus.segments, "segment", SEGMENTS_FILE))
    _decode(EVALUATORS_FILE, evaluator_from_dict, _into(corpus.evaluators, "evaluator", EVALUATORS_FILE))
    _decode(MQM_FILE, mqm_from_dict, lambda _l, a: corpus.mqm.append(a))
    _decode(SQM_FILE, sqm_from_dict, lambda _l, r: corpus.sqm.append(r))
    _decode(BWS_FILE, bws_from_dict, lambda _l, j: corpus.bws.append(j))
    _decode(FREE_FILE, free_from_dict, lambda _l, a: corpus.free.append(a))

    _check_references(corpus)
    return corpus


def _check_references(corpus: Corpus) -> None:
    seen_keys: set[tuple] = set()
    for seg in corpus.segments.values():
        if seg.source_id not in corpus.paragraphs:
            raise CorpusReferenceError(
                f"segment {seg.id!r} references unknown paragraph {seg.source_id!r}"
            )
        if seg.system_id not in corpus.systems:
            raise CorpusReferenceError(
                f"segment {seg.id!r} references unknown system {seg.system_id!r}"
            )
        key = (seg.source_id, seg.system_id, seg.version)
        if key in seen_keys:
            raise DuplicateIdError(
                f"segment {seg.id!r}: duplicate (source, system, version) {key!r}"
            )
        seen_keys.add(key)

    def _segment(sid: str, what: str) -> TranslationSegment:
        seg = corpus.segments.get(sid)
        if seg is None:
            raise CorpusReferenceError(f"{what} references unknown segment {sid!r}")
        return seg

    def _evaluator(eid: str, what: str) -> None:
        if eid not in corpus.evaluators:
            raise CorpusReferenceError(f"{what} references unknown evaluator {eid!r}")

    source_of = {s.id: s.source_id for s in corpus.segments.values()}

    for a in corpus.mqm:
        seg = _segment(a.segment_id, "mqm annotation")
        _evaluator(a.evaluator_id, "mqm annotation")
        problems = validate_annotation(a, seg)
        if problems:
            raise CorpusError(
                f"invalid mqm annotation for {a.segment_id!r}: {'; '.join(problems)}"
            )
    for r in corpus.sqm:
        _segment(r.segment_id, "sqm rating")
        _evaluator(r.evaluator_id, "sqm rating")
        problems = validate_rating(r)
        if problems:
            raise CorpusError(
                f"invalid sqm rating for {r.segment_id!r}: {'; '.join(problems)}"
            )
    for j in corpus.bws:
        for sid in j.segment_ids:
            _segment(sid, f"bws tuple {j.tuple_id!r}")
        _evaluator(j.evaluator_id, f"bws tuple {j.tuple_id!r}")
        problems = validate_bws(j, source_of)
        if problems:
            raise CorpusError(f"invalid bws tuple {j.tuple_id!r}: {'; '.join(problems)}")
    for a in corpus.free:
        seg = _segment(a.segment_id, "free annotation")
        _evaluator(a.evaluator_id, "free annotation")
        problems = validate_free(a, seg)
        if problems:
            raise CorpusError(
                f"invalid free annotation for {a.segment_id!r}: {'; '.join(problems)}"
            )


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write all corpus files; inverse of :func:`load_corpus`."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    dump_jsonl([paragraph_to_dict(p) for p in corpus.paragraphs.values()], root / PARAGRAPHS_FILE)
    dump_jsonl([segment_to_dict(s) for s in corpus.segments.values()], root / SEGMENTS_FILE)
    dump_jsonl([system_to_dict(s) for s in corpus.systems.values()], root / SYSTEMS_FILE)
    dump_jsonl([evaluator_to_dict(e) for e in corpus.evaluators.values()], root / EVALUATORS_FILE)
    dump_jsonl([mqm_to_dict(a) for a in corpus.mqm], root / MQM_FILE)
    dump_jsonl([sqm_to_dict(r) for r in corpus.sqm], root / SQM_FILE)
    dump_jsonl([bws_to_dict(j) for j in corpus.bws], root / BWS_FILE)
    dump_jsonl([free_to_dict(a) for a in corpus.free], root / FREE_FILE)


def import_metric_scores(path: str | Path, corpus: Corpus) -> list[MetricScore]:
    """Read metric scores from CSV and attach them to known segments.

    Requires a header row with columns segment_id, metric_id, value. Rows
    naming unknown segments or carrying non-numeric values raise with the row
    number. A repeated (segment, metric) pair keeps the last value and warns.
    """
    fpath = Path(path)
    scores: dict[tuple[str, str], MetricScore] = {}
    order: list[tuple[str, str]] = []
    with open(fpath, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        required = {"segment_id", "metric_id", "value"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise CorpusParseError(
                f"{fpath.name}: header must contain segment_id, metric_id, value"
            )
        for rownum, row in enumerate(reader, start=2):
            sid = row["segment_id"]
            if sid not in corpus.segments:
                raise CorpusReferenceError(
                    f"{fpath.name}:{rownum}: unknown segment id {sid!r}"
                )
            try:
                value = float(row["value"])
            except (TypeError, ValueError) as exc:
                raise CorpusParseError(
                    f"{fpath.name}:{rownum}: non-numeric value {row['value']!r}"
                ) from exc
            key = (sid, row["metric_id"])
            if key in scores:
                warnings.warn(
                    f"{fpath.name}:{rownum}: duplicate score for {key}, keeping last",
                    stacklevel=2,
                )
            else:
                order.append(key)
            scores[key] = MetricScore(sid, row["metric_id"], value)
    return [scores[k] for k in order]
