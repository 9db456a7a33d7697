"""Human-vs-machine preference analysis.

A scheme is adequate to the extent that verified human translations outrank
machine outputs under it. "Preferred" is strict: the human side must beat
every rival; ties count against the human. When a paragraph has several
human translation versions, the best-scoring version represents the human
side.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

from .corpus import Corpus
from .model import BWSJudgment, EvaluatorRole, LanguagePair
from .scoring import (
    free_scores_by_segment,
    mqm_scores_by_segment,
    sqm_scores_by_segment,
)

#: Systems the strongest outputs come from; rivals in the "top" scenario.
DEFAULT_TOP_SYSTEMS = frozenset({"gpt4o", "deepl", "google", "qwen"})


@dataclass(frozen=True)
class PreferenceReport:
    pair: str
    scheme: str
    scenario: str
    percentage: float
    n_paragraphs: int
    preferred_count: int

    def __post_init__(self) -> None:
        if self.n_paragraphs:
            expect = self.preferred_count / self.n_paragraphs * 100.0
            if abs(expect - self.percentage) > 1e-9:
                raise ValueError("percentage inconsistent with counts")


def _best_score(scores: dict[str, float], segment_ids: Sequence[str]) -> float | None:
    vals = [scores[sid] for sid in segment_ids if sid in scores]
    return max(vals) if vals else None


def preference_rate(
    scores: dict[str, float],
    corpus: Corpus,
    human_system: str,
    rivals: set[str] | frozenset[str],
    pair: LanguagePair | None = None,
    scheme: str = "",
    scenario: str = "",
) -> PreferenceReport:
    """Share of paragraphs whose human translation strictly beats every rival.

    Only paragraphs with a scored human segment and at least one scored rival
    enter the denominator. The maximum over human versions represents the
    human side; each rival likewise contributes its best-scoring version.
    """
    if not rivals:
        raise ValueError("rival set must be non-empty")
    if human_system in rivals:
        raise ValueError("human system cannot be its own rival")

    segs_by_para_system: dict[str, dict[str, list[str]]] = {}
    for seg in corpus.segments.values():
        if pair is not None and corpus.paragraphs[seg.source_id].pair != pair:
            continue
        segs_by_para_system.setdefault(seg.source_id, {}).setdefault(
            seg.system_id, []
        ).append(seg.id)

    n_considered = 0
    n_preferred = 0
    for para_id in sorted(segs_by_para_system):
        per_system = segs_by_para_system[para_id]
        human = _best_score(scores, per_system.get(human_system, []))
        if human is None:
            continue
        rival_scores = [
            s
            for r in rivals
            if (s := _best_score(scores, per_system.get(r, []))) is not None
        ]
        if not rival_scores:
            continue
        n_considered += 1
        if all(human > r for r in rival_scores):
            n_preferred += 1

    if n_considered == 0:
        raise ValueError("no paragraph offers a complete human-vs-rival comparison")
    return PreferenceReport(
        pair=str(pair) if pair is not None else "all",
        scheme=scheme,
        scenario=scenario,
        percentage=n_preferred / n_considered * 100.0,
        n_paragraphs=n_considered,
        preferred_count=n_preferred,
    )


def preference_by_pair(
    scores: dict[str, float],
    corpus: Corpus,
    human_system: str,
    rivals: set[str] | frozenset[str],
    scheme: str = "",
    scenario: str = "",
) -> tuple[list[PreferenceReport], float]:
    """Per-pair preference reports plus their unweighted mean percentage.

    Pairs without any complete comparison (e.g. a judgment scheme that only
    covered some pairs) are skipped; at least one pair must be comparable.
    """
    reports = []
    for pair in corpus.pairs():
        try:
            reports.append(
                preference_rate(
                    scores, corpus, human_system, rivals, pair,
                    scheme=scheme, scenario=scenario,
                )
            )
        except ValueError:
            continue
    if not reports:
        raise ValueError("no language pair offers a complete comparison")
    mean = sum(r.percentage for r in reports) / len(reports)
    return reports, mean


def bws_preference_rate(
    judgments: Sequence[BWSJudgment],
    corpus: Corpus,
    human_system: str = "human",
) -> float:
    """Fraction of tuples whose best pick is a human translation, in percent.

    Tuples that do not contain any human segment are excluded with a warning.
    """
    considered = 0
    human_best = 0
    skipped = 0
    for j in judgments:
        systems = {corpus.segments[sid].system_id for sid in j.segment_ids}
        if human_system not in systems:
            skipped += 1
            continue
        considered += 1
        if corpus.segments[j.best_id].system_id == human_system:
            human_best += 1
    if skipped:
        warnings.warn(
            f"{skipped} tuples lack a {human_system!r} segment; excluded", stacklevel=2
        )
    if considered == 0:
        raise ValueError("no tuple contains the human system")
    return human_best / considered * 100.0


def bws_win_rate(
    judgments: Sequence[BWSJudgment], corpus: Corpus, system: str
) -> float:
    """(best count - worst count) / appearance count, in [-1, 1].

    An appearance is one segment of the system inside one judged tuple.
    """
    appearances = best = worst = 0
    for j in judgments:
        for sid in j.segment_ids:
            if corpus.segments[sid].system_id != system:
                continue
            appearances += 1
            if sid == j.best_id:
                best += 1
            if sid == j.worst_id:
                worst += 1
    if appearances == 0:
        raise ValueError(f"system {system!r} never appears in the judged tuples")
    return (best - worst) / appearances


@dataclass(frozen=True)
class AdequacyRow:
    scheme: str
    evaluator_role: str
    scenario: str
    per_pair: tuple[PreferenceReport, ...]
    mean_percentage: float


def adequacy_matrix(
    corpus: Corpus,
    human_system: str = "human",
    top_systems: frozenset[str] = DEFAULT_TOP_SYSTEMS,
    metric_scores: dict[str, dict[str, float]] | None = None,
) -> list[AdequacyRow]:
    """Preference percentages for every scheme and evaluator-role combination.

    Includes guided-error (mqm), scalar (sqm), and free-annotation rows per
    role where data exists, the comparative (bws) row, and one row per
    imported metric. Scenario "top" compares the human system against the
    strongest rivals, scenario "other" against everything else.
    """
    rivals_other = frozenset(
        s for s in corpus.systems if s != human_system and s not in top_systems
    )
    evaluators_by_role: dict[EvaluatorRole, set[str]] = {}
    for ev in corpus.evaluators.values():
        evaluators_by_role.setdefault(ev.role, set()).add(ev.id)

    rows: list[AdequacyRow] = []

    def add_score_rows(scheme: str, role: EvaluatorRole, scores: dict[str, float]) -> None:
        if not scores:
            return
        for scenario, rivals in (("top", top_systems), ("other", rivals_other)):
            if not rivals:
                continue
            try:
                reports, mean = preference_by_pair(
                    scores, corpus, human_system, rivals, scheme=scheme, scenario=scenario
                )
            except ValueError:
                continue
            rows.append(
                AdequacyRow(
                    scheme=scheme,
                    evaluator_role=role.value,
                    scenario=scenario,
                    per_pair=tuple(reports),
                    mean_percentage=mean,
                )
            )

    for role, ids in sorted(evaluators_by_role.items(), key=lambda kv: kv[0].value):
        add_score_rows("mqm", role, mqm_scores_by_segment(corpus, ids))
        add_score_rows("sqm", role, sqm_scores_by_segment(corpus, ids))
        add_score_rows("free", role, free_scores_by_segment(corpus, ids))

    if corpus.bws:
        by_pair: dict[str, list[BWSJudgment]] = {}
        for j in corpus.bws:
            by_pair.setdefault(str(corpus.pair_of_segment(j.best_id)), []).append(j)
        reports = []
        for pair_key in sorted(by_pair):
            considered = preferred = 0
            for j in by_pair[pair_key]:
                systems = {corpus.segments[sid].system_id for sid in j.segment_ids}
                if human_system not in systems:
                    continue
                considered += 1
                if corpus.segments[j.best_id].system_id == human_system:
                    preferred += 1
            if not considered:
                continue
            reports.append(
                PreferenceReport(
                    pair=pair_key,
                    scheme="bws",
                    scenario="top",
                    percentage=preferred / considered * 100.0,
                    n_paragraphs=considered,
                    preferred_count=preferred,
                )
            )
        mean = sum(r.percentage for r in reports) / len(reports)
        rows.append(
            AdequacyRow(
                scheme="bws",
                evaluator_role=EvaluatorRole.STUDENT.value,
                scenario="top",
                per_pair=tuple(reports),
                mean_percentage=mean,
            )
        )

    for metric_id, scores in sorted((metric_scores or {}).items()):
        for scenario, rivals in (("top", top_systems), ("other", rivals_other)):
            if not rivals:
                continue
            try:
                reports, mean = preference_by_pair(
                    scores, corpus, human_system, rivals, scheme=metric_id, scenario=scenario
                )
            except ValueError:
                continue
            rows.append(
                AdequacyRow(
                    scheme=metric_id,
                    evaluator_role="metric",
                    scenario=scenario,
                    per_pair=tuple(reports),
                    mean_percentage=mean,
                )
            )
    return rows
