"""Turn judgment records into numeric scores and system rankings.

The guided-error score is the negative weighted error count normalized by
the segment's sentence count; severity weights default to 25 for
non-translation, 5 for major, and 1 for minor errors and are configurable
so alternative weightings stay a constructor call away.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .corpus import Corpus
from .model import FreeAnnotation, MQMAnnotation, Polarity, count_severities


@dataclass(frozen=True)
class SeverityWeights:
    non_translation: float = 25.0
    major: float = 5.0
    minor: float = 1.0

    def __post_init__(self) -> None:
        if min(self.non_translation, self.major, self.minor) <= 0:
            raise ValueError("severity weights must be positive")
        if not (self.non_translation >= self.major >= self.minor):
            raise ValueError("weights must satisfy non_translation >= major >= minor")


DEFAULT_WEIGHTS = SeverityWeights()


def mqm_score(
    annotation: MQMAnnotation,
    sentence_count: int,
    weights: SeverityWeights = DEFAULT_WEIGHTS,
) -> float:
    """Negative weighted error count per sentence; 0.0 for error-free segments."""
    if sentence_count < 1:
        raise ValueError("sentence_count must be >= 1")
    c = count_severities(annotation)
    penalty = (
        c.non_translation * weights.non_translation
        + c.major * weights.major
        + c.minor * weights.minor
    )
    return -penalty / sentence_count


def minmax_scale(scores: list[float], lo: float, hi: float) -> list[float]:
    """Affinely map [min(scores), max(scores)] onto [lo, hi], preserving order.

    All-equal input is degenerate: every value maps to the midpoint and a
    warning is emitted.
    """
    if len(scores) < 2:
        raise ValueError("need at least two values to scale")
    if hi <= lo:
        raise ValueError("target interval must be non-empty")
    smin, smax = min(scores), max(scores)
    if smin == smax:
        warnings.warn("all values equal; min-max scaling returns midpoints", stacklevel=2)
        mid = (lo + hi) / 2.0
        return [mid for _ in scores]
    scale = (hi - lo) / (smax - smin)
    return [lo + (s - smin) * scale for s in scores]


def combined_score(mqm_scaled: float, sqm: float, alpha: float) -> float:
    """Convex combination (1 - alpha) * mqm_scaled + alpha * sqm.

    Both inputs must already live on the same 0-6 scale. Note the orientation:
    alpha = 1 yields the scalar rating alone, alpha = 0 the scaled error score
    alone (one published figure caption states the opposite; the formula wins).
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    return (1.0 - alpha) * mqm_scaled + alpha * sqm


def free_annotation_score(annotation: FreeAnnotation) -> int:
    """Good-span count minus error-span count."""
    good = sum(1 for sp in annotation.spans if sp.polarity is Polarity.GOOD)
    bad = sum(1 for sp in annotation.spans if sp.polarity is Polarity.ERROR)
    return good - bad


@dataclass(frozen=True)
class RankedSystem:
    system_id: str
    mean_score: float
    rank: int
    n_segments: int


@dataclass(frozen=True)
class SystemRanking:
    scheme: str
    entries: tuple[RankedSystem, ...]

    def mean_of(self, system_id: str) -> float:
        for e in self.entries:
            if e.system_id == system_id:
                return e.mean_score
        raise KeyError(system_id)

    def rank_of(self, system_id: str) -> int:
        for e in self.entries:
            if e.system_id == system_id:
                return e.rank
        raise KeyError(system_id)


def system_ranking(
    scores: dict[str, float], corpus: Corpus, scheme: str
) -> SystemRanking:
    """Rank systems by mean segment score, descending.

    Ties break lexicographically by system id for determinism. Systems present
    in the corpus but absent from the score map are omitted with a warning.
    """
    by_system: dict[str, list[float]] = {}
    for segment_id, value in scores.items():
        seg = corpus.segments.get(segment_id)
        if seg is None:
            raise KeyError(f"score for unknown segment {segment_id!r}")
        by_system.setdefault(seg.system_id, []).append(value)

    unscored = sorted(set(corpus.systems) - set(by_system))
    if unscored:
        warnings.warn(
            f"no scores for systems: {', '.join(unscored)}; omitted from ranking",
            stacklevel=2,
        )

    means = sorted(
        ((sid, sum(vals) / len(vals), len(vals)) for sid, vals in by_system.items()),
        key=lambda t: (-t[1], t[0]),
    )
    entries = tuple(
        RankedSystem(system_id=sid, mean_score=mean, rank=i + 1, n_segments=n)
        for i, (sid, mean, n) in enumerate(means)
    )
    return SystemRanking(scheme=scheme, entries=entries)


def mqm_scores_by_segment(
    corpus: Corpus,
    evaluator_ids: set[str] | None = None,
    weights: SeverityWeights = DEFAULT_WEIGHTS,
) -> dict[str, float]:
    """Per-segment guided-error scores, averaged when several evaluators annotated."""
    acc: dict[str, list[float]] = {}
    for a in corpus.mqm:
        if evaluator_ids is not None and a.evaluator_id not in evaluator_ids:
            continue
        seg = corpus.segments[a.segment_id]
        acc.setdefault(a.segment_id, []).append(
            mqm_score(a, seg.sentence_count, weights)
        )
    return {sid: sum(v) / len(v) for sid, v in acc.items()}


def sqm_scores_by_segment(
    corpus: Corpus, evaluator_ids: set[str] | None = None
) -> dict[str, float]:
    """Per-segment scalar ratings, averaged over the selected evaluators."""
    acc: dict[str, list[int]] = {}
    for r in corpus.sqm:
        if evaluator_ids is not None and r.evaluator_id not in evaluator_ids:
            continue
        acc.setdefault(r.segment_id, []).append(r.score)
    return {sid: sum(v) / len(v) for sid, v in acc.items()}


def free_scores_by_segment(
    corpus: Corpus, evaluator_ids: set[str] | None = None
) -> dict[str, float]:
    """Per-segment free-annotation scores (good minus error counts), averaged."""
    acc: dict[str, list[int]] = {}
    for a in corpus.free:
        if evaluator_ids is not None and a.evaluator_id not in evaluator_ids:
            continue
        acc.setdefault(a.segment_id, []).append(free_annotation_score(a))
    return {sid: sum(v) / len(v) for sid, v in acc.items()}
