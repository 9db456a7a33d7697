import pytest

from liteval.corpus import load_corpus
from liteval.datagen import generate_demo_corpus
from liteval.model import (
    Era,
    ErrorCategory,
    ErrorSpan,
    Evaluator,
    EvaluatorRole,
    LanguagePair,
    MajorCategory,
    MQMAnnotation,
    Severity,
    SourceParagraph,
    System,
    SystemKind,
    TranslationSegment,
)


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """The generated demo corpus; built once per test session."""
    path = tmp_path_factory.mktemp("demo-corpus")
    generate_demo_corpus(path)
    return path


@pytest.fixture(scope="session")
def corpus(corpus_dir):
    return load_corpus(corpus_dir)


@pytest.fixture
def segment():
    return TranslationSegment(
        id="seg-1",
        source_id="para-1",
        system_id="deepl",
        text="Ten chars.",  # length 10
        sentence_count=1,
    )


@pytest.fixture
def paragraph():
    return SourceParagraph(
        id="para-1",
        work_id="work-1",
        language="de",
        target_language="en",
        text="Ein Satz.",
        sentence_count=1,
        era=Era.CLASSIC,
        publication_year=1912,
    )


def make_span(start, end, major=MajorCategory.ACCURACY, sub="omission",
              severity=Severity.MAJOR, comment=None):
    return ErrorSpan(
        start=start,
        end=end,
        category=ErrorCategory(major, sub),
        severity=severity,
        comment=comment,
    )


@pytest.fixture
def tiny_corpus():
    """Two paragraphs, two systems, a handful of judgments; fully valid."""
    from liteval.corpus import Corpus
    from liteval.model import BWSJudgment, FreeAnnotation, FreeSpan, Polarity, SQMRating

    corpus = Corpus()
    for i, (lang, tgt) in enumerate([("de", "en"), ("de", "en")], start=1):
        corpus.paragraphs[f"p{i}"] = SourceParagraph(
            id=f"p{i}",
            work_id="w1",
            language=lang,
            target_language=tgt,
            text=f"Quelle {i}. Noch ein Satz.",
            sentence_count=2,
            era=Era.CLASSIC,
            publication_year=1900,
        )
    corpus.systems["human"] = System("human", "Human Translator", SystemKind.HUMAN)
    corpus.systems["deepl"] = System("deepl", "DeepL", SystemKind.COMMERCIAL)
    corpus.systems["google"] = System("google", "Google Translate", SystemKind.COMMERCIAL)
    corpus.systems["gpt4o"] = System("gpt4o", "GPT-4o", SystemKind.LLM, 200.0)
    texts = {
        ("p1", "human"): "A first translation here.",
        ("p1", "deepl"): "A first machine rendering.",
        ("p1", "google"): "A first engine rendering.",
        ("p1", "gpt4o"): "A first model rendering.",
        ("p2", "human"): "Second translation, longer one.",
        ("p2", "deepl"): "Second machine output, longer.",
        ("p2", "google"): "Second engine output, longer.",
        ("p2", "gpt4o"): "Second model output, longer.",
    }
    for (pid, sysid), text in texts.items():
        sid = f"{pid}-{sysid}"
        corpus.segments[sid] = TranslationSegment(
            id=sid,
            source_id=pid,
            system_id=sysid,
            text=text,
            sentence_count=2,
            translation_year=2020 if sysid == "human" else 2024,
            version=1 if sysid == "human" else None,
        )
    corpus.evaluators["stu-1"] = Evaluator(
        "stu-1", EvaluatorRole.STUDENT, LanguagePair("de", "en")
    )
    corpus.evaluators["pro-1"] = Evaluator(
        "pro-1", EvaluatorRole.PROFESSIONAL, LanguagePair("de", "en")
    )
    corpus.mqm.append(
        MQMAnnotation(
            segment_id="p1-deepl",
            evaluator_id="stu-1",
            spans=(make_span(2, 7),),
        )
    )
    corpus.sqm.append(SQMRating("p1-deepl", "stu-1", 4))
    corpus.sqm.append(SQMRating("p1-human", "stu-1", 6))
    corpus.bws.append(
        BWSJudgment(
            tuple_id="t1",
            segment_ids=("p1-human", "p1-deepl", "p1-gpt4o"),
            best_id="p1-human",
            worst_id="p1-gpt4o",
            evaluator_id="stu-1",
        )
    )
    corpus.free.append(
        FreeAnnotation(
            segment_id="p1-deepl",
            evaluator_id="pro-1",
            spans=(FreeSpan(0, 4, Polarity.GOOD, "nice"),),
        )
    )
    return corpus
