import pytest
from hypothesis import given, strategies as st

from liteval.model import (
    FreeAnnotation,
    FreeSpan,
    MajorCategory,
    MQMAnnotation,
    Polarity,
    Severity,
)
from liteval.scoring import (
    SeverityWeights,
    combined_score,
    free_annotation_score,
    minmax_scale,
    mqm_score,
    system_ranking,
)

from conftest import make_span


def ann(*severities):
    spans = []
    for i, sev in enumerate(severities):
        major = (
            MajorCategory.NON_TRANSLATION
            if sev is Severity.NON_TRANSLATION
            else MajorCategory.ACCURACY
        )
        sub = None if major is MajorCategory.NON_TRANSLATION else "omission"
        spans.append(make_span(i, i + 1, major, sub, sev))
    return MQMAnnotation("s", "e", tuple(spans))


def test_mqm_score_direct_formula():
    a = ann(Severity.MAJOR, Severity.MINOR, Severity.MINOR)
    assert mqm_score(a, 4) == pytest.approx(-1.75)


def test_mqm_score_error_free():
    assert mqm_score(ann(), 3) == 0.0


def test_mqm_score_non_translation():
    assert mqm_score(ann(Severity.NON_TRANSLATION), 5) == pytest.approx(-5.0)


def test_mqm_score_requires_sentences():
    with pytest.raises(ValueError):
        mqm_score(ann(), 0)


def test_weights_must_be_ordered():
    with pytest.raises(ValueError):
        SeverityWeights(non_translation=1, major=5, minor=1)
    with pytest.raises(ValueError):
        SeverityWeights(non_translation=0, major=0, minor=0)


@given(
    counts=st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)),
    extra=st.sampled_from(list(Severity)),
    n_sent=st.integers(1, 12),
)
def test_mqm_score_monotone_under_added_errors(counts, extra, n_sent):
    nt, major, minor = counts
    sevs = (
        [Severity.NON_TRANSLATION] * nt + [Severity.MAJOR] * major + [Severity.MINOR] * minor
    )
    base = mqm_score(ann(*sevs), n_sent)
    worse = mqm_score(ann(*(sevs + [extra])), n_sent)
    assert worse < base


@given(
    counts=st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(1, 4)),
    n_sent=st.integers(1, 10),
)
def test_mqm_score_doubling_counts_doubles_magnitude(counts, n_sent):
    nt, major, minor = counts
    sevs = (
        [Severity.NON_TRANSLATION] * nt + [Severity.MAJOR] * major + [Severity.MINOR] * minor
    )
    single = mqm_score(ann(*sevs), n_sent)
    double = mqm_score(ann(*(sevs * 2)), n_sent)
    assert double == pytest.approx(2 * single)


def test_minmax_endpoints():
    assert minmax_scale([-10.0, 0.0], 0, 6) == [0.0, 6.0]


def test_minmax_linearity():
    assert minmax_scale([-10.0, -5.0, 0.0], 0, 6) == pytest.approx([0.0, 3.0, 6.0])


def test_minmax_published_score_column():
    # oracle: recompute the affine map by hand for the ten system means
    col = [-1.3, -1.7, -3.1, -3.2, -8.7, -9.0, -11.2, -11.9, -12.3, -12.6]
    scaled = minmax_scale(col, 0, 6)
    lo, hi = min(col), max(col)
    expected = [(v - lo) / (hi - lo) * 6 for v in col]
    assert scaled == pytest.approx(expected)
    assert scaled[col.index(max(col))] == pytest.approx(6.0)
    assert scaled[col.index(min(col))] == pytest.approx(0.0)


def test_minmax_all_equal_returns_midpoint_with_warning():
    with pytest.warns(UserWarning):
        assert minmax_scale([2.0, 2.0, 2.0], 0, 6) == [3.0, 3.0, 3.0]


@given(
    st.lists(
        st.floats(-100, 100).map(lambda v: round(v, 4)),
        min_size=2,
        max_size=30,
    ).filter(lambda v: len(set(v)) > 1)
)
def test_minmax_preserves_order_relations(values):
    scaled = minmax_scale(values, 0.0, 6.0)
    for i in range(len(values)):
        for j in range(len(values)):
            if values[i] < values[j]:
                assert scaled[i] < scaled[j] + 1e-9
    assert scaled.index(max(scaled)) == values.index(max(values))
    assert scaled.index(min(scaled)) == values.index(min(values))


def test_combined_score_endpoints_and_midpoint():
    assert combined_score(4.0, 6.0, 0.0) == 4.0
    assert combined_score(4.0, 6.0, 1.0) == 6.0
    assert combined_score(4.0, 6.0, 0.5) == 5.0


def test_combined_score_rejects_bad_alpha():
    with pytest.raises(ValueError):
        combined_score(1.0, 2.0, 1.5)


@given(
    a=st.floats(0, 6), b=st.floats(0, 6), bump=st.floats(0.01, 2),
    alpha=st.floats(0.01, 0.99),
)
def test_combined_score_monotone_in_both_inputs(a, b, bump, alpha):
    base = combined_score(a, b, alpha)
    assert combined_score(min(a + bump, 8.0), b, alpha) > base - 1e-12
    assert combined_score(a, min(b + bump, 8.0), alpha) > base - 1e-12


def free(good, error):
    spans = tuple(
        [FreeSpan(i, i + 1, Polarity.GOOD, "g") for i in range(good)]
        + [FreeSpan(10 + i, 11 + i, Polarity.ERROR, "e") for i in range(error)]
    )
    return FreeAnnotation("s", "e", spans)


def test_free_annotation_score():
    assert free_annotation_score(free(2, 1)) == 1
    assert free_annotation_score(free(0, 0)) == 0
    assert free_annotation_score(free(0, 3)) == -3


def test_system_ranking_single(tiny_corpus):
    ranking = system_ranking({"p1-deepl": -2.0}, tiny_corpus, "mqm")
    with pytest.warns(UserWarning):
        ranking = system_ranking({"p1-deepl": -2.0}, tiny_corpus, "mqm")
    assert ranking.entries[0].system_id == "deepl"
    assert ranking.entries[0].mean_score == -2.0
    assert ranking.entries[0].rank == 1


def test_system_ranking_orders_and_breaks_ties(tiny_corpus):
    scores = {
        "p1-human": 0.0, "p2-human": -1.0,     # mean -0.5
        "p1-deepl": -2.0, "p2-deepl": -1.0,    # mean -1.5
        "p1-gpt4o": -1.0, "p2-gpt4o": -2.0,    # mean -1.5, tie with deepl
    }
    with pytest.warns(UserWarning, match="google"):
        ranking = system_ranking(scores, tiny_corpus, "mqm")
    assert [e.system_id for e in ranking.entries] == ["human", "deepl", "gpt4o"]
    assert [e.rank for e in ranking.entries] == [1, 2, 3]


def test_system_ranking_invariant_under_permutation(tiny_corpus):
    scores = {
        "p1-human": 0.0, "p2-human": -1.0,
        "p1-deepl": -2.0, "p2-deepl": -1.0,
        "p1-gpt4o": -1.0, "p2-gpt4o": -2.0,
    }
    with pytest.warns(UserWarning):
        forward = system_ranking(scores, tiny_corpus, "mqm")
    with pytest.warns(UserWarning):
        backward = system_ranking(
            dict(reversed(list(scores.items()))), tiny_corpus, "mqm"
        )
    assert forward == backward


def test_system_ranking_unknown_segment(tiny_corpus):
    with pytest.raises(KeyError):
        system_ranking({"ghost": 1.0}, tiny_corpus, "mqm")
