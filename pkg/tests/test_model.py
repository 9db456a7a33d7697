import pytest
from hypothesis import given, strategies as st

from liteval.model import (
    ErrorCategory,
    ErrorSpan,
    LanguagePair,
    MajorCategory,
    MQMAnnotation,
    Severity,
    SeverityCounts,
    SUBCATEGORIES,
    TranslationSegment,
    count_severities,
    validate_annotation,
    validate_bws,
    validate_rating,
)
from liteval.model import BWSJudgment, SQMRating

from conftest import make_span


def test_language_pair_rejects_same_language():
    with pytest.raises(ValueError):
        LanguagePair("de", "de")
    assert str(LanguagePair("de", "en")) == "de-en"
    assert LanguagePair.parse("En-Zh") == LanguagePair("en", "zh")


def test_count_severities_empty():
    ann = MQMAnnotation("s", "e", ())
    assert count_severities(ann) == SeverityCounts(0, 0, 0)


def test_count_severities_mixed():
    ann = MQMAnnotation(
        "s",
        "e",
        (
            make_span(0, 2, severity=Severity.MAJOR),
            make_span(2, 4, MajorCategory.STYLE, "register", Severity.MINOR),
            make_span(4, 6, MajorCategory.STYLE, "awkwardness", Severity.MINOR),
        ),
    )
    assert count_severities(ann) == SeverityCounts(0, 1, 2)


def test_count_severities_non_translation():
    ann = MQMAnnotation(
        "s",
        "e",
        (make_span(0, 3, MajorCategory.NON_TRANSLATION, None, Severity.NON_TRANSLATION),),
    )
    assert count_severities(ann) == SeverityCounts(1, 0, 0)


@given(
    st.lists(
        st.sampled_from([Severity.MINOR, Severity.MAJOR, Severity.NON_TRANSLATION]),
        max_size=30,
    )
)
def test_count_severities_total_equals_span_count(severities):
    spans = tuple(
        ErrorSpan(
            start=i,
            end=i + 1,
            category=ErrorCategory(
                MajorCategory.NON_TRANSLATION
                if sev is Severity.NON_TRANSLATION
                else MajorCategory.ACCURACY,
                None,
            ),
            severity=sev,
        )
        for i, sev in enumerate(severities)
    )
    ann = MQMAnnotation("s", "e", spans)
    assert count_severities(ann).total == len(spans)


def test_validate_annotation_end_beyond_text(segment):
    ann = MQMAnnotation("seg-1", "e", (make_span(2, 99),))
    assert validate_annotation(ann, segment) == ["span 0: end beyond text"]


def test_validate_annotation_severity_mismatch(segment):
    span = ErrorSpan(
        start=0,
        end=3,
        category=ErrorCategory(MajorCategory.NON_TRANSLATION),
        severity=Severity.MINOR,
    )
    ann = MQMAnnotation("seg-1", "e", (span,))
    assert validate_annotation(ann, segment) == ["span 0: severity mismatch"]


def test_validate_annotation_accepts_valid(segment):
    ann = MQMAnnotation("seg-1", "e", (make_span(2, 5),))
    assert validate_annotation(ann, segment) == []


def test_validate_annotation_flags_bad_subcategory(segment):
    span = ErrorSpan(
        start=0,
        end=2,
        category=ErrorCategory(MajorCategory.FLUENCY, "omission"),
        severity=Severity.MINOR,
    )
    ann = MQMAnnotation("seg-1", "e", (span,))
    problems = validate_annotation(ann, segment)
    assert len(problems) == 1 and "invalid" in problems[0]


_VALID_CATEGORIES = [
    (major, sub)
    for major, subs in SUBCATEGORIES.items()
    for sub in (list(subs) + [None])
]


@given(
    data=st.data(),
    n_spans=st.integers(min_value=0, max_value=8),
    mutate=st.booleans(),
)
def test_validate_annotation_empty_iff_invariants_hold(data, n_spans, mutate):
    """Random valid annotations pass; a random single mutation is caught."""
    text = "x" * 40
    segment = TranslationSegment(
        id="seg", source_id="p", system_id="m", text=text, sentence_count=2
    )
    spans = []
    for _ in range(n_spans):
        start = data.draw(st.integers(0, len(text) - 1))
        end = data.draw(st.integers(start + 1, len(text)))
        major, sub = data.draw(st.sampled_from(_VALID_CATEGORIES))
        severity = (
            Severity.NON_TRANSLATION
            if major is MajorCategory.NON_TRANSLATION
            else data.draw(st.sampled_from([Severity.MINOR, Severity.MAJOR]))
        )
        spans.append(ErrorSpan(start, end, ErrorCategory(major, sub), severity))
    if mutate and spans:
        i = data.draw(st.integers(0, len(spans) - 1))
        kind = data.draw(st.sampled_from(["end", "severity", "sub"]))
        sp = spans[i]
        if kind == "end":
            spans[i] = ErrorSpan(sp.start, len(text) + 5, sp.category, sp.severity)
        elif kind == "severity":
            bad = (
                Severity.MINOR
                if sp.category.major is MajorCategory.NON_TRANSLATION
                else Severity.NON_TRANSLATION
            )
            spans[i] = ErrorSpan(sp.start, sp.end, sp.category, bad)
        else:
            spans[i] = ErrorSpan(
                sp.start,
                sp.end,
                ErrorCategory(sp.category.major, "no_such_subcategory"),
                sp.severity,
            )
    ann = MQMAnnotation("seg", "e", tuple(spans))
    problems = validate_annotation(ann, segment)
    if mutate and spans:
        assert problems
    else:
        assert problems == []


def test_validate_rating_bounds():
    assert validate_rating(SQMRating("s", "e", 0)) == []
    assert validate_rating(SQMRating("s", "e", 6)) == []
    assert validate_rating(SQMRating("s", "e", 7)) != []
    assert validate_rating(SQMRating("s", "e", -1)) != []


def test_validate_bws_best_equals_worst():
    j = BWSJudgment("t", ("a", "b", "c", "d"), "a", "a", "e")
    assert any("best_id must differ" in v for v in validate_bws(j))


def test_validate_bws_membership_and_source():
    j = BWSJudgment("t", ("a", "b", "c", "d"), "a", "zz", "e")
    problems = validate_bws(j, {"a": "p1", "b": "p1", "c": "p2", "d": "p1"})
    assert any("not a member" in v for v in problems)
    assert any("share one source" in v for v in problems)


def test_error_category_path():
    assert ErrorCategory(MajorCategory.ACCURACY, "omission").path() == "Accuracy/omission"
    assert ErrorCategory(MajorCategory.OTHERS).path() == "Others"
