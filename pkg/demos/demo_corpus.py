"""Shared helper: build (once) and load the bundled demo corpus.

Every demo script works against the same generated corpus directory so the
first run takes a few seconds and later runs are instant. Point CORPUS_DIR
at a real corpus directory to run the demos on actual data instead.
"""

from pathlib import Path

from liteval.corpus import Corpus, load_corpus
from liteval.datagen import generate_demo_corpus

CORPUS_DIR = Path(__file__).parent / ".demo-corpus"


def demo_corpus() -> tuple[Corpus, Path]:
    if not (CORPUS_DIR / "paragraphs.jsonl").exists():
        print(f"building demo corpus in {CORPUS_DIR} (one-time, ~10s)...")
        generate_demo_corpus(CORPUS_DIR)
    return load_corpus(CORPUS_DIR), CORPUS_DIR
