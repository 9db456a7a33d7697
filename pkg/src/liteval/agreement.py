"""Inter-annotator consistency statistics for all judgment schemes.

Rank statistics are tie-corrected (tau-b) because guided-error and scalar
scores contain many ties. Span agreement is computed per character, which is
tokenizer-free and therefore behaves identically for German, English, and
Chinese text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from scipy import stats as _scipy_stats

from .model import (
    FreeAnnotation,
    MQMAnnotation,
    Polarity,
    Severity,
    TranslationSegment,
)
from .model import BWSJudgment

NO_ERROR = "none"

_SEVERITY_RANK = {
    Severity.NON_TRANSLATION: 2,
    Severity.MAJOR: 1,
    Severity.MINOR: 0,
}


@dataclass(frozen=True)
class AgreementReport:
    pair: str
    statistic: str
    value: float
    n_items: int

    def __post_init__(self) -> None:
        if not -1.0 - 1e-9 <= self.value <= 1.0 + 1e-9:
            raise ValueError(f"statistic {self.statistic} out of [-1, 1]: {self.value}")
        if self.n_items < 2:
            raise ValueError("agreement needs at least two items")


def _check_paired(x: Sequence[float], y: Sequence[float]) -> None:
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("need at least two paired observations")
    if len(set(x)) == 1 or len(set(y)) == 1:
        raise ValueError("correlation undefined for all-tied input")


def kendall_tau_b(x: Sequence[float], y: Sequence[float]) -> float:
    """Kendall's tau-b with tie correction. All-tied input raises, never 0."""
    _check_paired(x, y)
    tau = _scipy_stats.kendalltau(x, y, variant="b").statistic
    return float(tau)


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of average-ranked data."""
    _check_paired(x, y)
    rho = _scipy_stats.spearmanr(x, y).statistic
    return float(rho)


def cohen_kappa(a: Sequence, b: Sequence) -> float:
    """Chance-corrected label agreement with empirical marginals.

    When both annotators are constant and identical, expected agreement is 1
    and the statistic is undefined; by convention that counts as perfect
    agreement and returns 1.0.
    """
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if not a:
        raise ValueError("need at least one paired label")
    n = len(a)
    observed = sum(1 for la, lb in zip(a, b) if la == lb) / n
    labels = set(a) | set(b)
    pa = {lab: 0 for lab in labels}
    pb = {lab: 0 for lab in labels}
    for la in a:
        pa[la] += 1
    for lb in b:
        pb[lb] += 1
    expected = sum(pa[lab] * pb[lab] for lab in labels) / (n * n)
    if expected >= 1.0:
        return 1.0
    return (observed - expected) / (1.0 - expected)


def span_unit_labels(
    segment: TranslationSegment,
    annotation: MQMAnnotation | FreeAnnotation,
    mode: str = "binary",
) -> list[str]:
    """Project an annotation onto one label per character of the segment.

    binary mode labels each character "error" or "none"; category mode labels
    it with the major category. Overlaps resolve to the more severe span,
    ties to the earlier span (smaller start, then input order). Free
    annotations contribute their error-polarity spans and support binary mode
    only.
    """
    if mode not in ("binary", "category"):
        raise ValueError(f"unknown mode {mode!r}")
    n = len(segment.text)
    labels = [NO_ERROR] * n
    winner_key: list[tuple | None] = [None] * n

    if isinstance(annotation, FreeAnnotation):
        if mode != "binary":
            raise ValueError("free annotations support binary mode only")
        for sp in annotation.spans:
            if sp.polarity is not Polarity.ERROR:
                continue
            for i in range(max(sp.start, 0), min(sp.end, n)):
                labels[i] = "error"
        return labels

    for index, sp in enumerate(annotation.spans):
        key = (-_SEVERITY_RANK[sp.severity], sp.start, index)
        value = "error" if mode == "binary" else sp.category.major.value
        for i in range(max(sp.start, 0), min(sp.end, n)):
            if winner_key[i] is None or key < winner_key[i]:
                winner_key[i] = key
                labels[i] = value
    return labels


def span_match_kappa(
    ann_a: MQMAnnotation | FreeAnnotation,
    ann_b: MQMAnnotation | FreeAnnotation,
    segment: TranslationSegment,
    mode: str = "binary",
) -> float:
    """Character-level kappa between two annotations of the same segment.

    binary mode measures where errors are; category mode where and what they
    are.
    """
    if ann_a.segment_id != ann_b.segment_id:
        raise ValueError("annotations target different segments")
    la = span_unit_labels(segment, ann_a, mode)
    lb = span_unit_labels(segment, ann_b, mode)
    return cohen_kappa(la, lb)


def span_match_kappa_multi(
    pairs: Sequence[tuple[MQMAnnotation | FreeAnnotation, MQMAnnotation | FreeAnnotation, TranslationSegment]],
    mode: str = "binary",
) -> float:
    """Kappa over the concatenated per-character labels of many segments."""
    la: list[str] = []
    lb: list[str] = []
    for ann_a, ann_b, segment in pairs:
        la.extend(span_unit_labels(segment, ann_a, mode))
        lb.extend(span_unit_labels(segment, ann_b, mode))
    return cohen_kappa(la, lb)


def bws_agreement(
    judgments_a: Sequence[BWSJudgment], judgments_b: Sequence[BWSJudgment]
) -> float:
    """Kappa over best/worst/neither labels of every (tuple, segment) item.

    Both evaluators must have judged the same tuples over the same segments.
    """
    by_tuple_a = {j.tuple_id: j for j in judgments_a}
    by_tuple_b = {j.tuple_id: j for j in judgments_b}
    if set(by_tuple_a) != set(by_tuple_b):
        only_a = sorted(set(by_tuple_a) - set(by_tuple_b))
        only_b = sorted(set(by_tuple_b) - set(by_tuple_a))
        raise ValueError(
            f"tuple sets differ (only first: {only_a}; only second: {only_b})"
        )

    def label(j: BWSJudgment, sid: str) -> str:
        if sid == j.best_id:
            return "best"
        if sid == j.worst_id:
            return "worst"
        return "neither"

    la: list[str] = []
    lb: list[str] = []
    for tuple_id in sorted(by_tuple_a):
        ja, jb = by_tuple_a[tuple_id], by_tuple_b[tuple_id]
        if set(ja.segment_ids) != set(jb.segment_ids):
            raise ValueError(f"tuple {tuple_id!r} covers different segments")
        for sid in ja.segment_ids:
            la.append(label(ja, sid))
            lb.append(label(jb, sid))
    return cohen_kappa(la, lb)
