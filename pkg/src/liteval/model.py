"""Core domain types: texts, systems, evaluators, and all judgment records.

Character offsets throughout are Unicode scalar-value (code point) indices,
never bytes or UTF-16 units, so German and Chinese texts behave identically.
All types are immutable value objects and safe to share across threads.
Validation of cross-field rules is data, not construction failure: invalid
judgments are representable so that :func:`validate_annotation` and friends
can report violations collected from files or HTTP submissions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class SystemKind(str, enum.Enum):
    HUMAN = "human"
    COMMERCIAL = "commercial"
    NMT = "nmt"
    LLM = "llm"


class Era(str, enum.Enum):
    CLASSIC = "classic"
    CONTEMPORARY = "contemporary"


class EvaluatorRole(str, enum.Enum):
    STUDENT = "student"
    PROFESSIONAL = "professional"


class MajorCategory(str, enum.Enum):
    ACCURACY = "Accuracy"
    FLUENCY = "Fluency"
    STYLE = "Style"
    TERMINOLOGY = "Terminology"
    LOCALE_CONVENTION = "LocaleConvention"
    NON_TRANSLATION = "NonTranslation"
    OTHERS = "Others"


class Severity(str, enum.Enum):
    MINOR = "Minor"
    MAJOR = "Major"
    NON_TRANSLATION = "NonTranslation"


class Polarity(str, enum.Enum):
    GOOD = "good"
    ERROR = "error"


#: Valid sub-categories per major category. NonTranslation and Others carry none.
SUBCATEGORIES: dict[MajorCategory, frozenset[str]] = {
    MajorCategory.ACCURACY: frozenset(
        {
            "addition",
            "omission",
            "misnomer",
            "mistranslation_general",
            "mistranslation_overly_literal",
            "mistranslation_temporal",
            "untranslated",
        }
    ),
    MajorCategory.FLUENCY: frozenset(
        {"punctuation_spelling", "grammar", "inconsistency", "coherence"}
    ),
    MajorCategory.STYLE: frozenset(
        {"awkwardness", "register", "inconsistent", "unidiomatic"}
    ),
    MajorCategory.TERMINOLOGY: frozenset({"mistranslation", "inconsistent"}),
    MajorCategory.LOCALE_CONVENTION: frozenset({"location_format", "number_format"}),
    MajorCategory.NON_TRANSLATION: frozenset(),
    MajorCategory.OTHERS: frozenset(),
}


@dataclass(frozen=True)
class LanguagePair:
    """A translation direction, e.g. de->en. Source and target must differ."""

    source_lang: str
    target_lang: str

    def __post_init__(self) -> None:
        if not self.source_lang or not self.target_lang:
            raise ValueError("language codes must be non-empty")
        if self.source_lang == self.target_lang:
            raise ValueError("source_lang must differ from target_lang")

    def __str__(self) -> str:
        return f"{self.source_lang}-{self.target_lang}"

    @classmethod
    def parse(cls, text: str) -> "LanguagePair":
        src, sep, tgt = text.partition("-")
        if not sep:
            raise ValueError(f"not a language pair: {text!r}")
        return cls(src.lower(), tgt.lower())


@dataclass(frozen=True)
class System:
    """A translation producer: a human translator pool, an MT engine, or an LLM."""

    id: str
    display_name: str
    kind: SystemKind
    param_count_billions: float | None = None


@dataclass(frozen=True)
class SourceParagraph:
    id: str
    work_id: str
    language: str
    target_language: str
    text: str
    sentence_count: int
    era: Era
    publication_year: int

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError(f"paragraph {self.id}: text must be non-empty")
        if self.sentence_count < 1:
            raise ValueError(f"paragraph {self.id}: sentence_count must be >= 1")

    @property
    def pair(self) -> LanguagePair:
        return LanguagePair(self.language, self.target_language)


@dataclass(frozen=True)
class TranslationSegment:
    """One paragraph-level translation of one source paragraph by one system."""

    id: str
    source_id: str
    system_id: str
    text: str
    sentence_count: int
    translation_year: int | None = None
    version: int | None = None

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError(f"segment {self.id}: text must be non-empty")
        if self.sentence_count < 1:
            raise ValueError(f"segment {self.id}: sentence_count must be >= 1")


@dataclass(frozen=True)
class ErrorCategory:
    """Two-level error category; ``sub`` is optional and must fit ``major``."""

    major: MajorCategory
    sub: str | None = None

    def path(self) -> str:
        return self.major.value if self.sub is None else f"{self.major.value}/{self.sub}"

    def is_valid(self) -> bool:
        if self.sub is None:
            return True
        return self.sub in SUBCATEGORIES[self.major]


@dataclass(frozen=True)
class ErrorSpan:
    start: int
    end: int
    category: ErrorCategory
    severity: Severity
    comment: str | None = None


@dataclass(frozen=True)
class MQMAnnotation:
    """Guided error annotation: a possibly empty list of categorized spans."""

    segment_id: str
    evaluator_id: str
    spans: tuple[ErrorSpan, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "spans", tuple(self.spans))


@dataclass(frozen=True)
class SQMRating:
    """Holistic 0-6 quality rating of one segment."""

    segment_id: str
    evaluator_id: str
    score: int


@dataclass(frozen=True)
class BWSJudgment:
    """Best and worst pick out of a 4-5 segment tuple sharing one source."""

    tuple_id: str
    segment_ids: tuple[str, ...]
    best_id: str
    worst_id: str
    evaluator_id: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "segment_ids", tuple(self.segment_ids))


@dataclass(frozen=True)
class FreeSpan:
    start: int
    end: int
    polarity: Polarity
    comment: str = ""


@dataclass(frozen=True)
class FreeAnnotation:
    """Unguided span highlighting with good/error polarity and comments."""

    segment_id: str
    evaluator_id: str
    spans: tuple[FreeSpan, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "spans", tuple(self.spans))


@dataclass(frozen=True)
class Evaluator:
    id: str
    role: EvaluatorRole
    pair: LanguagePair


@dataclass(frozen=True)
class SeverityCounts:
    non_translation: int = 0
    major: int = 0
    minor: int = 0

    def __post_init__(self) -> None:
        if min(self.non_translation, self.major, self.minor) < 0:
            raise ValueError("severity counts must be non-negative")

    @property
    def total(self) -> int:
        return self.non_translation + self.major + self.minor


def count_severities(annotation: MQMAnnotation) -> SeverityCounts:
    """Count each span exactly once in its severity bucket."""
    nt = major = minor = 0
    for span in annotation.spans:
        if span.severity is Severity.NON_TRANSLATION:
            nt += 1
        elif span.severity is Severity.MAJOR:
            major += 1
        else:
            minor += 1
    return SeverityCounts(non_translation=nt, major=major, minor=minor)


def validate_annotation(
    annotation: MQMAnnotation, segment: TranslationSegment
) -> list[str]:
    """Check an MQM annotation against its segment.

    Returns an empty list exactly when every invariant holds; each violation
    names the offending span and the broken rule. Violations are data, not
    exceptions, so callers can surface all of them at once.
    """
    violations: list[str] = []
    if annotation.segment_id != segment.id:
        violations.append(
            f"annotation targets {annotation.segment_id!r}, not segment {segment.id!r}"
        )
    n = len(segment.text)
    for i, span in enumerate(annotation.spans):
        if span.start < 0:
            violations.append(f"span {i}: negative start")
        if span.start >= span.end:
            violations.append(f"span {i}: start must be < end")
        if span.end > n:
            violations.append(f"span {i}: end beyond text")
        if not span.category.is_valid():
            violations.append(
                f"span {i}: sub-category {span.category.sub!r} invalid for "
                f"{span.category.major.value}"
            )
        nt_cat = span.category.major is MajorCategory.NON_TRANSLATION
        nt_sev = span.severity is Severity.NON_TRANSLATION
        if nt_cat != nt_sev:
            violations.append(f"span {i}: severity mismatch")
    return violations


def validate_rating(rating: SQMRating) -> list[str]:
    if 0 <= rating.score <= 6:
        return []
    return [f"score {rating.score} outside [0, 6]"]


def validate_bws(
    judgment: BWSJudgment, source_of_segment: dict[str, str] | None = None
) -> list[str]:
    """Check a BWS judgment; with a segment->source map, also check the shared source."""
    violations: list[str] = []
    if len(judgment.segment_ids) < 2:
        violations.append("tuple must contain at least two segments")
    if len(set(judgment.segment_ids)) != len(judgment.segment_ids):
        violations.append("tuple contains duplicate segment ids")
    if judgment.best_id == judgment.worst_id:
        violations.append("best_id must differ from worst_id")
    for label, sid in (("best_id", judgment.best_id), ("worst_id", judgment.worst_id)):
        if sid not in judgment.segment_ids:
            violations.append(f"{label} {sid!r} not a member of the tuple")
    if source_of_segment is not None:
        sources = {
            source_of_segment[s] for s in judgment.segment_ids if s in source_of_segment
        }
        if len(sources) > 1:
            violations.append("tuple segments do not share one source paragraph")
    return violations


def validate_free(annotation: FreeAnnotation, segment: TranslationSegment) -> list[str]:
    violations: list[str] = []
    if annotation.segment_id != segment.id:
        violations.append(
            f"annotation targets {annotation.segment_id!r}, not segment {segment.id!r}"
        )
    n = len(segment.text)
    for i, span in enumerate(annotation.spans):
        if span.start < 0:
            violations.append(f"span {i}: negative start")
        if span.start >= span.end:
            violations.append(f"span {i}: start must be < end")
        if span.end > n:
            violations.append(f"span {i}: end beyond text")
    return violations
