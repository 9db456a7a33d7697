"""Prompting-based judge metrics: templates, parsing, scoring, and analysis.

The judge backend is any chat-completion endpoint; nothing here depends on a
vendor. Responses are cached by content hash so temperature studies are
reproducible and reruns are free, and raw responses can be persisted as JSONL
for audit. Two guided-error prompt variants exist (a generic annotator and a
literary critic) plus a rubric-based scalar variant.
"""

from __future__ import annotations

import enum
import hashlib
import json
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from .agreement import kendall_tau_b, spearman_rho
from .corpus import Corpus
from .model import MajorCategory, MQMAnnotation
from .scoring import DEFAULT_WEIGHTS, SeverityWeights

LANGUAGE_NAMES = {"en": "English", "de": "German", "zh": "Chinese"}


class JudgeSeverity(str, enum.Enum):
    CRITICAL = "critical"
    MAJOR = "major"
    MINOR = "minor"


@dataclass(frozen=True)
class JudgeError:
    severity: JudgeSeverity
    category_path: str
    span_text: str = ""

    def __post_init__(self) -> None:
        if not self.category_path:
            raise ValueError("category_path must be non-empty")


@dataclass(frozen=True)
class JudgeWeights:
    critical: float = 25.0
    major: float = 5.0
    minor: float = 1.0


DEFAULT_JUDGE_WEIGHTS = JudgeWeights()


@dataclass(frozen=True)
class FewShot:
    source_lang: str
    source_seg: str
    target_lang: str
    target_seg: str
    answer: str


@dataclass(frozen=True)
class PromptTemplate:
    id: str
    system_text: str
    instruction_text: str
    few_shots: tuple[FewShot, ...] = ()

    def __post_init__(self) -> None:
        if self.id in (GEMBA_ORIGINAL_ID, GEMBA_LITERARY_ID) and len(self.few_shots) < 2:
            raise ValueError("guided-error templates need at least two few-shots")
        if self.id == RUBRIC_SQM_ID:
            for marker in ("Score 0:", "Score 2:", "Score 4:", "Score 6:"):
                if marker not in self.instruction_text:
                    raise ValueError(f"rubric template must carry {marker!r}")


GEMBA_ORIGINAL_ID = "gemba_original"
GEMBA_LITERARY_ID = "gemba_literary"
RUBRIC_SQM_ID = "rubric_sqm"

_GEMBA_INSTRUCTION = (
    "Based on the source segment and machine translation surrounded with triple "
    "backticks, identify error types in the translation and classify them. The "
    "categories of errors are: accuracy (addition, omission, misnomer, "
    "mistranslation [including too-literal translation and temporal effect], "
    "untranslated text), fluency (inconsistency, coherence, grammar, punctuation, "
    "spelling), style (awkward, register, inconsistent, unidiomatic), terminology "
    "(inappropriate for context, inconsistent use, please pay attention to "
    "cultural specific items and extra-linguistic terms), non-translation, other, "
    "locale convention, or no error.\n"
    "Each error is classified as one of three categories: critical, major, and "
    "minor. Critical errors inhibit comprehension of the text. Major errors "
    "disrupt the flow, but what the text is trying to say is still "
    "understandable. Minor errors are technically errors, but do not disrupt the "
    "flow or hinder comprehension."
)

_LITERARY_SYSTEM = (
    "As a literary translation critic, your role is to identify errors and "
    "evaluate the translation's quality. Focus on the subtleties of literary "
    "style, emotional impact, and creative expression. An excellent translation "
    "captures the original work's aesthetic qualities, tone, and cultural "
    "nuances, rather than adhering to a word-for-word approach. Translations "
    "that are excessively literal and fail to adapt to the target language's "
    "literary conventions and natural flow should be critiqued accordingly."
)

GEMBA_ORIGINAL = PromptTemplate(
    id=GEMBA_ORIGINAL_ID,
    system_text=(
        "You are an annotator for the quality of machine translation. Your task "
        "is to identify errors and assess the quality of the translation."
    ),
    instruction_text=_GEMBA_INSTRUCTION,
    few_shots=(
        FewShot(
            source_lang="English",
            source_seg=(
                "I do apologise about this, we must gain permission from the "
                "account holder to discuss an order with another person, I "
                "apologise if this was done previously, however, I would not "
                "be able to discuss this with yourself without the account "
                "holders permission."
            ),
            target_lang="German",
            target_seg=(
                "Ich entschuldige mich dafür, wir müssen die Erlaubnis "
                "einholen, um eine Bestellung mit einer anderen Person zu "
                "besprechen. Ich entschuldige mich, falls dies zuvor geschehen "
                "wäre, aber ohne die Erlaubnis des Kontoinhabers wäre "
                "ich nicht in der Lage, dies mit dir involvement."
            ),
            answer=(
                'Critical:\nno-error\nMajor:\naccuracy/mistranslation - "involvement"\n'
                'accuracy/omission - "the account holder"\nMinor:\n'
                'fluency/grammar - "wäre"\nstyle/register - "dir"'
            ),
        ),
        FewShot(
            source_lang="Chinese",
            source_seg=(
                "大众点评乌鲁木齐家居"
                "卖场频道为您提供高铁"
                "居然之家地址，电话，"
                "营业时间等最新商户信"
                "息，找装修公司，就上"
                "大众点评"
            ),
            target_lang="English",
            target_seg=(
                "Urumqi Home Furnishing Store Channel provides you with the "
                "latest business information such as the address, telephone "
                "number, business hours, etc., of high-speed rail, and find a "
                "decoration company, and go to the reviews."
            ),
            answer=(
                'Critical:\naccuracy/addition - "of high-speed rail"\nMajor:\n'
                'accuracy/mistranslation - "go to the reviews"\nMinor:\n'
                'style/awkward - "etc.,"'
            ),
        ),
    ),
)

GEMBA_LITERARY = PromptTemplate(
    id=GEMBA_LITERARY_ID,
    system_text=_LITERARY_SYSTEM,
    instruction_text=_GEMBA_INSTRUCTION,
    few_shots=(
        FewShot(
            source_lang="English",
            source_seg=(
                "At intervals, while turning over the leaves of my book, I "
                "studied the aspect of that winter afternoon."
            ),
            target_lang="German",
            target_seg=(
                "Von Zeit zu Zeit, während ich in meinem Buch "
                "blätterte, studierte ich das Aussehen dieses "
                "Winternachmittags."
            ),
            answer=(
                'Critical:\naccuracy/mistranslation (Too-literal) - "studierte"\n'
                'Major:\naccuracy/omission - "das Aussehen"\nMinor:\nno-error'
            ),
        ),
        FewShot(
            source_lang="Chinese",
            source_seg=(
                "太阳他有脚啊，轻轻悄"
                "悄地挪移了。"
            ),
            target_lang="English",
            target_seg="The sun he has feet, ah, gently and quietly moved.",
            answer=(
                'Critical:\nstyle/awkward - "ah"\nMajor:\n'
                'fluency/grammar - "gently and quietly moved"\nMinor:\n'
                'accuracy/mistranslation (Too-literal) - "he has feet"'
            ),
        ),
    ),
)

RUBRIC_SQM = PromptTemplate(
    id=RUBRIC_SQM_ID,
    system_text=_LITERARY_SYSTEM,
    instruction_text=(
        "What is the overall quality of the given literary translation based on "
        "the source texts?\n"
        "Score 0: Nonsense: Nearly all information is lost between the "
        "translation and source. Grammar and style are irrelevant.\n"
        "Score 2: Some Meaning and Style Preserved: The translation preserves "
        "some of the meaning and style of the source but misses significant "
        "parts. The narrative is hard to follow due to fundamental errors. "
        "Grammar may be poor. Style may be inconsistent.\n"
        "Score 4: Most Meaning and Style Preserved and Few Grammar Mistakes: "
        "The translation retains most of the meaning and style of the source. "
        "This may contain some grammar mistakes or minor style and contextual "
        "inconsistencies.\n"
        "Score 6: Perfect Meaning and Style Preserved: The meaning and style of "
        "the translation are completely consistent with the source and the "
        "surrounding context.\n"
        "Respond with your analysis followed by a final line of the form "
        '"Score: N" where N is an even number between 0 and 6.'
    ),
)

TEMPLATES = {t.id: t for t in (GEMBA_ORIGINAL, GEMBA_LITERARY, RUBRIC_SQM)}

SUPPORTED_LANGUAGES = frozenset(LANGUAGE_NAMES)


def _segment_block(
    source_lang: str, source_seg: str, target_lang: str, target_seg: str
) -> str:
    return (
        f"{source_lang} source: ```{source_seg}```\n"
        f"{target_lang} translation: ```{target_seg}```\n"
        "MQM annotations:"
    )


def build_prompt(
    template: PromptTemplate,
    source_lang: str,
    source_text: str,
    target_lang: str,
    target_text: str,
) -> list[dict[str, str]]:
    """Assemble the chat message sequence for one segment, deterministically.

    Language arguments accept ISO codes or full names. Identical inputs yield
    byte-identical messages.
    """
    src_name = LANGUAGE_NAMES.get(source_lang, source_lang)
    tgt_name = LANGUAGE_NAMES.get(target_lang, target_lang)
    known = set(LANGUAGE_NAMES) | set(LANGUAGE_NAMES.values())
    if source_lang not in known or target_lang not in known:
        raise ValueError(
            f"unsupported language pair {source_lang}-{target_lang} for few-shot selection"
        )

    messages = [{"role": "system", "content": template.system_text}]
    if template.id == RUBRIC_SQM_ID:
        messages.append(
            {
                "role": "user",
                "content": template.instruction_text
                + "\n\n"
                + _segment_block(src_name, source_text, tgt_name, target_text).replace(
                    "\nMQM annotations:", ""
                ),
            }
        )
        return messages

    for shot in template.few_shots:
        messages.append(
            {
                "role": "user",
                "content": template.instruction_text
                + "\n\n"
                + _segment_block(
                    shot.source_lang, shot.source_seg, shot.target_lang, shot.target_seg
                ),
            }
        )
        messages.append({"role": "assistant", "content": shot.answer})
    messages.append(
        {
            "role": "user",
            "content": template.instruction_text
            + "\n\n"
            + _segment_block(src_name, source_text, tgt_name, target_text),
        }
    )
    return messages


# ---------------------------------------------------------------------------
# Response parsing. The parser is deliberately tolerant: severity blocks may
# sit on one line or many, quotes come in typographic variants, and anything
# unrecognizable is skipped rather than fatal.

_QUOTE_TRANSLATION = str.maketrans(
    {
        "“": '"',
        "”": '"',
        "„": '"',
        "«": '"',
        "»": '"',
        "‘": "'",
        "’": "'",
        "‚": "'",
        "`": "'",
        "´": "'",
    }
)

_SEVERITY_MARKER = re.compile(r"\b(critical|major|minor)\s*:", re.IGNORECASE)
_ITEM = re.compile(
    r"(?P<path>[A-Za-z][A-Za-z_-]*(?:\s*/\s*[A-Za-z_-]+)?(?:\s*\([^)]*\))?)"
    r"\s*-\s*(?P<quote>[\"'])(?P<span>.*?)(?P=quote)",
    re.DOTALL,
)
_NO_ERROR = re.compile(r"\bno[- ]?errors?\b", re.IGNORECASE)


def normalize_category_path(path: str) -> str:
    path = re.sub(r"\s*/\s*", "/", path.strip().lower())
    return re.sub(r"\s+", " ", path)


@dataclass(frozen=True)
class JudgeParse:
    errors: tuple[JudgeError, ...]
    parse_failed: bool


def parse_judge_response(text: str) -> JudgeParse:
    """Extract judged errors from a guided-error response.

    Returns the parsed errors and a failure flag; an unparseable response
    yields no errors with the flag set, never an exception.
    """
    normalized = text.translate(_QUOTE_TRANSLATION).replace("''", '"')
    markers = list(_SEVERITY_MARKER.finditer(normalized))
    if not markers:
        return JudgeParse(errors=(), parse_failed=True)

    errors: list[JudgeError] = []
    for i, marker in enumerate(markers):
        severity = JudgeSeverity(marker.group(1).lower())
        block_end = markers[i + 1].start() if i + 1 < len(markers) else len(normalized)
        block = normalized[marker.end() : block_end]
        for m in _ITEM.finditer(block):
            errors.append(
                JudgeError(
                    severity=severity,
                    category_path=normalize_category_path(m.group("path")),
                    span_text=m.group("span").strip(),
                )
            )
        if not _ITEM.search(block) and not _NO_ERROR.search(block):
            # tolerate bare category mentions without a quoted span
            for piece in re.findall(
                r"[A-Za-z][A-Za-z_-]*/[A-Za-z_-]+(?:\s*\([^)]*\))?", block
            ):
                errors.append(
                    JudgeError(
                        severity=severity,
                        category_path=normalize_category_path(piece),
                        span_text="",
                    )
                )
    return JudgeParse(errors=tuple(errors), parse_failed=False)


def render_judge_errors(errors: Sequence[JudgeError]) -> str:
    """Canonical textual form of an error list; inverse of the parser."""
    lines: list[str] = []
    for severity in (JudgeSeverity.CRITICAL, JudgeSeverity.MAJOR, JudgeSeverity.MINOR):
        lines.append(severity.value.capitalize() + ":")
        items = [e for e in errors if e.severity is severity]
        if not items:
            lines.append("no-error")
        for e in items:
            if e.span_text:
                lines.append(f'{e.category_path} - "{e.span_text}"')
            else:
                lines.append(f'{e.category_path} - ""')
    return "\n".join(lines)


_RUBRIC_SCORE = re.compile(r"score\s*:?\s*([0-6])\b", re.IGNORECASE)


def parse_rubric_response(text: str) -> int | None:
    """Pull the final 0-6 score out of a rubric response, if any."""
    matches = _RUBRIC_SCORE.findall(text)
    return int(matches[-1]) if matches else None


def judge_score(
    errors: Sequence[JudgeError],
    weights: JudgeWeights = DEFAULT_JUDGE_WEIGHTS,
    sentence_count: int | None = None,
    normalize: bool = False,
) -> float:
    """Negative weighted error count; optional per-sentence normalization."""
    per_severity = {
        JudgeSeverity.CRITICAL: weights.critical,
        JudgeSeverity.MAJOR: weights.major,
        JudgeSeverity.MINOR: weights.minor,
    }
    total = sum(per_severity[e.severity] for e in errors)
    if normalize:
        if not sentence_count or sentence_count < 1:
            raise ValueError("normalization requires a positive sentence_count")
        return -total / sentence_count
    return -float(total)


def map_to_major_category(category_path: str) -> MajorCategory | None:
    head = normalize_category_path(category_path).split("/")[0].split("(")[0].strip()
    return {
        "accuracy": MajorCategory.ACCURACY,
        "fluency": MajorCategory.FLUENCY,
        "style": MajorCategory.STYLE,
        "terminology": MajorCategory.TERMINOLOGY,
        "locale convention": MajorCategory.LOCALE_CONVENTION,
        "locale_convention": MajorCategory.LOCALE_CONVENTION,
        "locale-convention": MajorCategory.LOCALE_CONVENTION,
        "non-translation": MajorCategory.NON_TRANSLATION,
        "non translation": MajorCategory.NON_TRANSLATION,
        "other": MajorCategory.OTHERS,
        "others": MajorCategory.OTHERS,
    }.get(head)


# ---------------------------------------------------------------------------
# Running a judge over segments, with caching, retries, and an audit trail.


class ChatClient(Protocol):
    def complete(self, messages: list[dict[str, str]], temperature: float) -> str: ...

    @property
    def signature(self) -> str: ...


class JudgeTransportError(Exception):
    pass


class HttpChatClient:
    """Minimal client for an OpenAI-style chat completions endpoint."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str | None = None,
        timeout: float = 60.0,
        max_retries: int = 3,
    ) -> None:
        import httpx

        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self.api_key = api_key
        self.max_retries = max_retries
        self._http = httpx.Client(timeout=timeout)

    @property
    def signature(self) -> str:
        return f"{self.endpoint}#{self.model}"

    def complete(self, messages: list[dict[str, str]], temperature: float) -> str:
        import httpx

        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "model": self.model,
            "messages": messages,
            "temperature": temperature,
        }
        last_error: Exception | None = None
        for attempt in range(self.max_retries):
            try:
                resp = self._http.post(
                    f"{self.endpoint}/chat/completions", json=payload, headers=headers
                )
                if resp.status_code >= 500:
                    raise JudgeTransportError(f"server error {resp.status_code}")
                resp.raise_for_status()
                return resp.json()["choices"][0]["message"]["content"]
            except (httpx.HTTPError, JudgeTransportError, KeyError) as exc:
                last_error = exc
                time.sleep(min(2.0**attempt * 0.5, 8.0))
        raise JudgeTransportError(f"judge request failed after retries: {last_error}")


@dataclass(frozen=True)
class JudgeInput:
    segment_id: str
    source_lang: str
    source_text: str
    target_lang: str
    target_text: str
    sentence_count: int = 1


def judge_inputs_from_corpus(
    corpus: Corpus, segment_ids: Sequence[str] | None = None
) -> list[JudgeInput]:
    ids = sorted(segment_ids if segment_ids is not None else corpus.segments)
    out = []
    for sid in ids:
        seg = corpus.segments[sid]
        para = corpus.paragraphs[seg.source_id]
        out.append(
            JudgeInput(
                segment_id=sid,
                source_lang=para.language,
                source_text=para.text,
                target_lang=para.target_language,
                target_text=seg.text,
                sentence_count=seg.sentence_count,
            )
        )
    return out


@dataclass(frozen=True)
class JudgeRun:
    segment_id: str
    template_id: str
    temperature: float
    query_index: int
    raw_response: str
    errors: tuple[JudgeError, ...]
    score: float
    parse_failed: bool = False
    failed: bool = False


class ResponseCache:
    """Content-addressed response store: one JSON file per request hash."""

    def __init__(self, directory: str | Path) -> None:
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def key(
        self,
        signature: str,
        messages: list[dict[str, str]],
        temperature: float,
        query_index: int,
    ) -> str:
        blob = json.dumps(
            {
                "signature": signature,
                "messages": messages,
                "temperature": temperature,
                "query_index": query_index,
            },
            sort_keys=True,
            ensure_ascii=False,
        )
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def get(self, key: str) -> str | None:
        fpath = self.directory / f"{key}.json"
        if not fpath.exists():
            return None
        return json.loads(fpath.read_text(encoding="utf-8"))["response"]

    def put(self, key: str, response: str) -> None:
        fpath = self.directory / f"{key}.json"
        fpath.write_text(
            json.dumps({"response": response}, ensure_ascii=False), encoding="utf-8"
        )


def run_judge(
    client: ChatClient,
    inputs: Sequence[JudgeInput],
    template: PromptTemplate,
    temperature: float = 0.0,
    n_queries: int = 1,
    cache: ResponseCache | None = None,
    weights: JudgeWeights = DEFAULT_JUDGE_WEIGHTS,
    normalize: bool = False,
    parallelism: int = 4,
    audit_path: str | Path | None = None,
) -> list[JudgeRun]:
    """Query the judge ``n_queries`` times per segment and score the answers.

    Responses are cached by (client signature, messages, temperature, query
    index), so rerunning an identical study performs no network calls.
    Transport failures after bounded retries mark the run failed and the
    pipeline continues.
    """
    audit_lock = threading.Lock()
    audit_file = open(audit_path, "a", encoding="utf-8") if audit_path else None

    def one(job: tuple[JudgeInput, int]) -> JudgeRun:
        item, query_index = job
        messages = build_prompt(
            template,
            item.source_lang,
            item.source_text,
            item.target_lang,
            item.target_text,
        )
        signature = getattr(client, "signature", "")
        cache_key = (
            cache.key(signature, messages, temperature, query_index) if cache else None
        )
        response: str | None = cache.get(cache_key) if cache and cache_key else None
        from_cache = response is not None
        if response is None:
            try:
                response = client.complete(messages, temperature)
            except Exception as exc:  # noqa: BLE001 - pipeline must continue
                return JudgeRun(
                    segment_id=item.segment_id,
                    template_id=template.id,
                    temperature=temperature,
                    query_index=query_index,
                    raw_response=f"<transport failure: {exc}>",
                    errors=(),
                    score=0.0,
                    parse_failed=True,
                    failed=True,
                )
        if cache and cache_key and not from_cache:
            cache.put(cache_key, response)
        if audit_file is not None:
            with audit_lock:
                audit_file.write(
                    json.dumps(
                        {
                            "segment_id": item.segment_id,
                            "template_id": template.id,
                            "temperature": temperature,
                            "query_index": query_index,
                            "response": response,
                        },
                        ensure_ascii=False,
                    )
                    + "\n"
                )

        if template.id == RUBRIC_SQM_ID:
            rubric = parse_rubric_response(response)
            return JudgeRun(
                segment_id=item.segment_id,
                template_id=template.id,
                temperature=temperature,
                query_index=query_index,
                raw_response=response,
                errors=(),
                score=float(rubric) if rubric is not None else 0.0,
                parse_failed=rubric is None,
            )
        parsed = parse_judge_response(response)
        score = judge_score(
            parsed.errors,
            weights,
            sentence_count=item.sentence_count,
            normalize=normalize,
        )
        return JudgeRun(
            segment_id=item.segment_id,
            template_id=template.id,
            temperature=temperature,
            query_index=query_index,
            raw_response=response,
            errors=parsed.errors,
            score=score,
            parse_failed=parsed.parse_failed,
        )

    jobs = [(item, q) for item in inputs for q in range(n_queries)]
    try:
        if parallelism <= 1:
            runs = [one(job) for job in jobs]
        else:
            with ThreadPoolExecutor(max_workers=parallelism) as pool:
                runs = list(pool.map(one, jobs))
    finally:
        if audit_file is not None:
            audit_file.close()
    return runs


@dataclass(frozen=True)
class ConsistencyReport:
    temperature: float
    mean_spearman: float
    pct_delta_le_1: float
    pct_delta_1_5: float
    pct_delta_gt_5: float
    n_segments: int
    n_queries: int


def consistency_analysis(runs: Sequence[JudgeRun]) -> list[ConsistencyReport]:
    """Score stability per temperature: rank correlation plus difference buckets.

    The correlation is the mean pairwise Spearman between per-query score
    vectors; the buckets classify absolute score differences over every
    (segment, query pair), where a difference of 1 equals one minor error and
    5 one major error (both bucket edges inclusive).
    """
    by_temp: dict[float, dict[int, dict[str, float]]] = {}
    for run in runs:
        if run.failed:
            continue
        by_temp.setdefault(run.temperature, {}).setdefault(run.query_index, {})[
            run.segment_id
        ] = run.score

    reports: list[ConsistencyReport] = []
    for temperature in sorted(by_temp):
        queries = by_temp[temperature]
        if len(queries) < 2:
            raise ValueError(
                f"consistency analysis needs >= 2 queries per temperature, "
                f"got {len(queries)} at {temperature}"
            )
        indices = sorted(queries)
        common = set.intersection(*(set(queries[q]) for q in indices))
        if not common:
            raise ValueError(f"no shared segments across queries at {temperature}")
        segs = sorted(common)
        vectors = {q: [queries[q][s] for s in segs] for q in indices}

        corrs: list[float] = []
        n_le1 = n_mid = n_gt5 = 0
        for a_pos, qa in enumerate(indices):
            for qb in indices[a_pos + 1 :]:
                va, vb = vectors[qa], vectors[qb]
                if len(set(va)) == 1 and len(set(vb)) == 1 and va == vb:
                    corrs.append(1.0)
                else:
                    corrs.append(spearman_rho(va, vb))
                for sa, sb in zip(va, vb):
                    delta = abs(sa - sb)
                    if delta <= 1.0:
                        n_le1 += 1
                    elif delta <= 5.0:
                        n_mid += 1
                    else:
                        n_gt5 += 1
        n_pairs = n_le1 + n_mid + n_gt5
        reports.append(
            ConsistencyReport(
                temperature=temperature,
                mean_spearman=sum(corrs) / len(corrs),
                pct_delta_le_1=100.0 * n_le1 / n_pairs,
                pct_delta_1_5=100.0 * n_mid / n_pairs,
                pct_delta_gt_5=100.0 * n_gt5 / n_pairs,
                n_segments=len(segs),
                n_queries=len(indices),
            )
        )
    return reports


def segment_correlation(
    metric_scores: dict[str, float],
    human_scores: dict[str, float],
    corpus: Corpus | None = None,
) -> dict[str, float]:
    """Kendall tau-b between a metric and human scores on shared segments.

    Returns {"all": tau} plus one entry per language pair when a corpus is
    supplied for pair lookup.
    """
    shared = sorted(set(metric_scores) & set(human_scores))
    if len(shared) < 2:
        raise ValueError("need at least two shared segments")
    out = {
        "all": kendall_tau_b(
            [metric_scores[s] for s in shared], [human_scores[s] for s in shared]
        )
    }
    if corpus is not None:
        by_pair: dict[str, list[str]] = {}
        for sid in shared:
            by_pair.setdefault(str(corpus.pair_of_segment(sid)), []).append(sid)
        for pair_key, ids in sorted(by_pair.items()):
            if len(ids) >= 2:
                out[pair_key] = kendall_tau_b(
                    [metric_scores[s] for s in ids], [human_scores[s] for s in ids]
                )
    return out


def category_correlation(
    human_annotations: Sequence[MQMAnnotation],
    judge_runs: Sequence[JudgeRun],
    category: MajorCategory,
    human_weights: SeverityWeights = DEFAULT_WEIGHTS,
    judge_weights: JudgeWeights = DEFAULT_JUDGE_WEIGHTS,
) -> float:
    """Tau-b between category-restricted error scores of humans and the judge.

    Each side contributes, per segment, the negated weighted count of its
    errors falling in the given major category; both-sides-empty categories
    are degenerate (all tied) and raise.
    """
    from .model import Severity

    human_w = {
        Severity.NON_TRANSLATION: human_weights.non_translation,
        Severity.MAJOR: human_weights.major,
        Severity.MINOR: human_weights.minor,
    }
    judge_w = {
        JudgeSeverity.CRITICAL: judge_weights.critical,
        JudgeSeverity.MAJOR: judge_weights.major,
        JudgeSeverity.MINOR: judge_weights.minor,
    }

    human_side: dict[str, float] = {}
    for ann in human_annotations:
        penalty = sum(
            human_w[sp.severity] for sp in ann.spans if sp.category.major is category
        )
        human_side[ann.segment_id] = human_side.get(ann.segment_id, 0.0) - penalty

    judge_side: dict[str, float] = {}
    for run in judge_runs:
        if run.failed:
            continue
        penalty = sum(
            judge_w[e.severity]
            for e in run.errors
            if map_to_major_category(e.category_path) is category
        )
        judge_side[run.segment_id] = judge_side.get(run.segment_id, 0.0) - penalty

    shared = sorted(set(human_side) & set(judge_side))
    if len(shared) < 2:
        raise ValueError("need at least two segments scored by both sides")
    try:
        return kendall_tau_b(
            [human_side[s] for s in shared], [judge_side[s] for s in shared]
        )
    except ValueError as exc:
        raise ValueError(
            f"degenerate (all-tied) category {category.value}: {exc}"
        ) from exc


def length_bias(
    metric_scores: dict[str, float],
    corpus: Corpus,
    measure: str = "pearson",
) -> float:
    """Correlation between translation character length and metric score."""
    shared = sorted(set(metric_scores) & set(corpus.segments))
    if len(shared) < 2:
        raise ValueError("need at least two scored segments")
    lengths = [float(len(corpus.segments[s].text)) for s in shared]
    values = [metric_scores[s] for s in shared]
    if len(set(lengths)) == 1:
        raise ValueError("constant lengths; correlation undefined")
    if measure == "pearson":
        if len(set(values)) == 1:
            raise ValueError("constant scores; correlation undefined")
        return float(np.corrcoef(lengths, values)[0, 1])
    if measure == "spearman":
        return spearman_rho(lengths, values)
    raise ValueError(f"unknown measure {measure!r}")
