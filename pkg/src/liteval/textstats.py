"""Literalness and diversity analytics.

Two families live here. Syntactic similarity between source and translation
uses a subset-tree convolution kernel over constituency parses (trees are
supplied as bracketed text; producing them is a parser's job, not ours).
Lexical diversity uses mean pairwise BLEU between one system's translations
and every other system's translations of the same paragraphs: lower overlap
means a more distinct vocabulary.
"""

from __future__ import annotations

import math
import re
import sys
import unicodedata
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .corpus import Corpus
from .model import Era

DEFAULT_LAMBDA = 0.4


@dataclass(frozen=True)
class ParseTree:
    label: str
    children: tuple["ParseTree", ...] = ()

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("tree nodes need a non-empty label")
        object.__setattr__(self, "children", tuple(self.children))

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def production(self) -> tuple[str, ...]:
        return (self.label,) + tuple(c.label for c in self.children)

    def nodes(self) -> list["ParseTree"]:
        out = [self]
        for c in self.children:
            out.extend(c.nodes())
        return out

    def to_bracketed(self) -> str:
        if self.is_leaf:
            return f"({self.label})"
        return "(" + self.label + " " + " ".join(c.to_bracketed() for c in self.children) + ")"


@dataclass(frozen=True)
class ParseTreeDoc:
    segment_id: str
    trees: tuple[ParseTree, ...]

    def __post_init__(self) -> None:
        if not self.trees:
            raise ValueError(f"tree document {self.segment_id!r} is empty")
        object.__setattr__(self, "trees", tuple(self.trees))


_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")


def parse_bracketed(line: str) -> ParseTree:
    """Parse one Penn-Treebank-style bracketed tree, dropping terminal tokens.

    Terminals are the bare tokens inside preterminal brackets, e.g. the word
    in ``(NN dog)``; only the nonterminal structure survives, so the kernel
    sees syntax, not lexicon.
    """
    tokens = _TOKEN_RE.findall(line)
    if not tokens:
        raise ValueError("empty tree line")
    pos = 0

    def parse_node() -> ParseTree:
        nonlocal pos
        if tokens[pos] != "(":
            raise ValueError(f"expected '(' at token {pos}: {tokens[pos]!r}")
        pos += 1
        if pos >= len(tokens) or tokens[pos] in "()":
            raise ValueError("node without a label")
        label = tokens[pos]
        pos += 1
        children: list[ParseTree] = []
        while pos < len(tokens) and tokens[pos] != ")":
            if tokens[pos] == "(":
                children.append(parse_node())
            else:
                pos += 1  # terminal token: dropped
        if pos >= len(tokens):
            raise ValueError("unbalanced brackets")
        pos += 1
        return ParseTree(label=label, children=tuple(children))

    tree = parse_node()
    if pos != len(tokens):
        raise ValueError("trailing tokens after tree")
    return tree


def load_tree_doc(path: str | Path, segment_id: str | None = None) -> ParseTreeDoc:
    """Read one tree per line from ``trees/<segment_id>.txt``."""
    fpath = Path(path)
    trees = tuple(
        parse_bracketed(line)
        for line in fpath.read_text(encoding="utf-8").splitlines()
        if line.strip()
    )
    return ParseTreeDoc(segment_id=segment_id or fpath.stem, trees=trees)


def tree_kernel(a: ParseTree, b: ParseTree, lam: float = DEFAULT_LAMBDA) -> float:
    """Subset-tree convolution kernel: weighted count of shared tree fragments.

    Node pairs contribute nothing on label mismatch, ``lam`` when both are
    (terminal-stripped) preterminal leaves with equal labels, and
    ``lam * prod(1 + delta(child_i, child_i'))`` when their productions match.
    """
    if not 0.0 < lam <= 1.0:
        raise ValueError("lambda must lie in (0, 1]")
    nodes_a = a.nodes()
    nodes_b = b.nodes()
    by_prod_b: dict[tuple[str, ...], list[ParseTree]] = {}
    for nb in nodes_b:
        by_prod_b.setdefault(nb.production(), []).append(nb)

    memo: dict[tuple[int, int], float] = {}

    def delta(n1: ParseTree, n2: ParseTree) -> float:
        key = (id(n1), id(n2))
        got = memo.get(key)
        if got is not None:
            return got
        if n1.production() != n2.production():
            value = 0.0
        elif n1.is_leaf:
            value = lam
        else:
            value = lam
            for c1, c2 in zip(n1.children, n2.children):
                value *= 1.0 + delta(c1, c2)
        memo[key] = value
        return value

    total = 0.0
    for na in nodes_a:
        for nb in by_prod_b.get(na.production(), ()):
            total += delta(na, nb)
    return total


def normalized_kernel(a: ParseTree, b: ParseTree, lam: float = DEFAULT_LAMBDA) -> float:
    """Cosine-normalized kernel, K(a,b) / sqrt(K(a,a) K(b,b)), in [0, 1]."""
    kaa = tree_kernel(a, a, lam)
    kbb = tree_kernel(b, b, lam)
    if kaa <= 0.0 or kbb <= 0.0:
        raise ValueError("degenerate tree with zero self-kernel")
    value = tree_kernel(a, b, lam) / math.sqrt(kaa * kbb)
    return min(max(value, 0.0), 1.0)


def doc_syntactic_similarity(
    src_doc: ParseTreeDoc, tgt_doc: ParseTreeDoc, lam: float = DEFAULT_LAMBDA
) -> float:
    """Symmetric document similarity from best-match sentence kernels.

    Each source tree takes its best normalized kernel over the target trees;
    those maxima are averaged, the same is done in the opposite direction,
    and the two directions are averaged. Self-kernels are computed once per
    tree, which matters on corpus-sized inputs.
    """
    selfs_src = [tree_kernel(t, t, lam) for t in src_doc.trees]
    selfs_tgt = [tree_kernel(u, u, lam) for u in tgt_doc.trees]
    if min(selfs_src, default=0.0) <= 0.0 or min(selfs_tgt, default=0.0) <= 0.0:
        raise ValueError("degenerate tree with zero self-kernel")
    matrix = [
        [
            tree_kernel(t, u, lam) / math.sqrt(ks * ku)
            for u, ku in zip(tgt_doc.trees, selfs_tgt)
        ]
        for t, ks in zip(src_doc.trees, selfs_src)
    ]
    forward = sum(max(row) for row in matrix) / len(matrix)
    backward = sum(
        max(matrix[i][j] for i in range(len(matrix)))
        for j in range(len(tgt_doc.trees))
    ) / len(tgt_doc.trees)
    return 0.5 * (forward + backward)


# ---------------------------------------------------------------------------
# BLEU with the reference scorer's sentence-level defaults: case-sensitive,
# 4-gram, exponential smoothing for zero matches, effective order, and a
# brevity penalty. en/de use international punctuation splitting; zh splits
# CJK characters.

TOKENIZER_INTL = "intl_13a"
TOKENIZER_CJK = "char_cjk"

_MAX_ORDER = 4


@lru_cache(maxsize=1)
def _punct_chars() -> str:
    return "".join(
        chr(cp)
        for cp in range(sys.maxunicode + 1)
        if unicodedata.category(chr(cp)).startswith("P")
    )


@lru_cache(maxsize=1)
def _symbol_chars() -> str:
    return "".join(
        chr(cp)
        for cp in range(sys.maxunicode + 1)
        if unicodedata.category(chr(cp)).startswith("S")
    )


@lru_cache(maxsize=1)
def _intl_res() -> tuple[re.Pattern, re.Pattern, re.Pattern]:
    p, s = re.escape(_punct_chars()), re.escape(_symbol_chars())
    return (
        re.compile(rf"([^\d])([{p}])"),
        re.compile(rf"([{p}])([^\d])"),
        re.compile(rf"([{s}])"),
    )


def _tokenize_intl(text: str) -> list[str]:
    nondigit_punct, punct_nondigit, symbol = _intl_res()
    text = nondigit_punct.sub(r"\1 \2 ", text)
    text = punct_nondigit.sub(r" \1 \2", text)
    text = symbol.sub(r" \1 ", text)
    return text.split()


def _is_cjk(ch: str) -> bool:
    cp = ord(ch)
    return (
        0x3400 <= cp <= 0x4DBF
        or 0x4E00 <= cp <= 0x9FFF
        or 0xF900 <= cp <= 0xFAFF
        or 0x20000 <= cp <= 0x2A6DF
        or 0x3000 <= cp <= 0x303F
        or 0xFF00 <= cp <= 0xFFEF
    )


def _tokenize_cjk(text: str) -> list[str]:
    pieces: list[str] = []
    for ch in text:
        if _is_cjk(ch):
            pieces.append(f" {ch} ")
        else:
            pieces.append(ch)
    return _tokenize_intl("".join(pieces))


_TOKENIZERS = {TOKENIZER_INTL: _tokenize_intl, TOKENIZER_CJK: _tokenize_cjk}


def tokenizer_for_language(language: str) -> str:
    return TOKENIZER_CJK if language == "zh" else TOKENIZER_INTL


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _ngram_profile(tokens: list[str]) -> tuple[int, list[Counter]]:
    return len(tokens), [_ngrams(tokens, n) for n in range(1, _MAX_ORDER + 1)]


def _bleu_from_profiles(
    hyp: tuple[int, list[Counter]], ref: tuple[int, list[Counter]]
) -> float:
    hyp_len, hyp_counts = hyp
    ref_len, ref_counts = ref
    log_precisions: list[float] = []
    smooth = 1.0
    for hyp_ngrams, ref_ngrams in zip(hyp_counts, ref_counts):
        total = sum(hyp_ngrams.values())
        if total == 0:
            break
        match = sum(
            min(count, ref_ngrams[gram])
            for gram, count in hyp_ngrams.items()
            if gram in ref_ngrams
        )
        if match == 0:
            smooth *= 2.0
            precision = 1.0 / (smooth * total)
        else:
            precision = match / total
        log_precisions.append(math.log(precision))

    brevity = 1.0
    if hyp_len < ref_len:
        brevity = math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(sum(log_precisions) / len(log_precisions))


def bleu(hypothesis: str, reference: str, tokenizer: str = TOKENIZER_INTL) -> float:
    """Sentence-level BLEU in [0, 100] against a single reference."""
    if not hypothesis.strip() or not reference.strip():
        raise ValueError("hypothesis and reference must be non-empty")
    try:
        tok = _TOKENIZERS[tokenizer]
    except KeyError:
        raise ValueError(f"unknown tokenizer {tokenizer!r}") from None
    hyp = tok(hypothesis)
    ref = tok(reference)
    if not hyp or not ref:
        raise ValueError("tokenizer produced no tokens")
    return _bleu_from_profiles(_ngram_profile(hyp), _ngram_profile(ref))


@dataclass(frozen=True)
class OverlapMatrix:
    systems: tuple[str, ...]
    values: np.ndarray  # square, diagonal fixed at 100 by convention

    def mean_overlap(self, system_id: str) -> float:
        i = self.systems.index(system_id)
        others = [self.values[i, j] for j in range(len(self.systems)) if j != i]
        return float(np.mean(others))


def _representative_segments(corpus: Corpus, era: Era | None = None) -> dict[str, dict[str, str]]:
    """paragraph -> system -> segment id, taking the lowest-id version per system."""
    table: dict[str, dict[str, str]] = {}
    for seg in sorted(corpus.segments.values(), key=lambda s: s.id):
        para = corpus.paragraphs[seg.source_id]
        if era is not None and para.era is not era:
            continue
        table.setdefault(seg.source_id, {}).setdefault(seg.system_id, seg.id)
    return table


def pairwise_lexical_overlap(
    corpus: Corpus, era: Era | None = None
) -> tuple[dict[str, float], OverlapMatrix]:
    """Mean pairwise BLEU per system plus the full system-by-system matrix.

    For each paragraph, every system's translation is scored as hypothesis
    against each other system's translation as reference; per system, those
    overlaps are averaged over rivals and then over paragraphs. Paragraph
    cells average over the paragraphs both systems cover.
    """
    table = _representative_segments(corpus, era)
    systems = sorted(
        {sys_id for per_system in table.values() for sys_id in per_system}
    )
    if len(systems) < 2:
        raise ValueError("pairwise overlap needs at least two systems")
    index = {s: i for i, s in enumerate(systems)}
    sums = np.zeros((len(systems), len(systems)))
    counts = np.zeros((len(systems), len(systems)), dtype=int)
    per_system_acc: dict[str, list[float]] = {s: [] for s in systems}

    for para_id, per_system in table.items():
        if len(per_system) < 2:
            continue
        tok = _TOKENIZERS[
            tokenizer_for_language(corpus.paragraphs[para_id].target_language)
        ]
        present = sorted(per_system)
        profiles = {
            s: _ngram_profile(tok(corpus.segments[per_system[s]].text))
            for s in present
        }
        for sj in present:
            overlaps = []
            for sk in present:
                if sj == sk:
                    continue
                score = _bleu_from_profiles(profiles[sj], profiles[sk])
                overlaps.append(score)
                sums[index[sj], index[sk]] += score
                counts[index[sj], index[sk]] += 1
            per_system_acc[sj].append(sum(overlaps) / len(overlaps))

    values = np.full((len(systems), len(systems)), np.nan)
    np.divide(sums, counts, out=values, where=counts > 0)
    np.fill_diagonal(values, 100.0)
    matrix = OverlapMatrix(systems=tuple(systems), values=values)

    means: dict[str, float] = {}
    for s in systems:
        if not per_system_acc[s]:
            raise ValueError(f"system {s!r} shares no paragraph with another system")
        means[s] = sum(per_system_acc[s]) / len(per_system_acc[s])
    return means, matrix


@dataclass(frozen=True)
class LiteralnessRow:
    system_id: str
    mean_human_score: float
    mean_judge_score: float | None
    syntactic_similarity: float
    lexical_overlap: float
    rank_human: int
    rank_judge: int | None


def literalness_report(
    corpus: Corpus,
    tree_docs: dict[str, ParseTreeDoc],
    human_scores: dict[str, float],
    judge_scores: dict[str, float] | None = None,
    lam: float = DEFAULT_LAMBDA,
    era: Era | None = None,
) -> list[LiteralnessRow]:
    """Per-system literalness table: scores, syntactic similarity, overlap, ranks.

    ``tree_docs`` maps both paragraph ids (source parses) and segment ids
    (translation parses) to their tree documents. The optional era filter
    restricts everything to classic or contemporary works.
    """
    table = _representative_segments(corpus, era)
    overlap_means, _ = pairwise_lexical_overlap(corpus, era)

    rows: list[tuple[str, float, float | None, float]] = []
    systems = sorted({s for per in table.values() for s in per})
    for system in systems:
        human_vals: list[float] = []
        judge_vals: list[float] = []
        syn_vals: list[float] = []
        for para_id, per_system in table.items():
            sid = per_system.get(system)
            if sid is None:
                continue
            if sid in human_scores:
                human_vals.append(human_scores[sid])
            if judge_scores and sid in judge_scores:
                judge_vals.append(judge_scores[sid])
            if para_id in tree_docs and sid in tree_docs:
                syn_vals.append(
                    doc_syntactic_similarity(tree_docs[para_id], tree_docs[sid], lam)
                )
        if not human_vals or not syn_vals:
            raise ValueError(f"system {system!r} lacks scores or parse trees")
        rows.append(
            (
                system,
                sum(human_vals) / len(human_vals),
                sum(judge_vals) / len(judge_vals) if judge_vals else None,
                sum(syn_vals) / len(syn_vals),
            )
        )

    def ranks(values: list[tuple[str, float]]) -> dict[str, int]:
        ordered = sorted(values, key=lambda t: (-t[1], t[0]))
        return {sid: i + 1 for i, (sid, _) in enumerate(ordered)}

    rank_human = ranks([(sid, h) for sid, h, _j, _s in rows])
    have_judge = all(j is not None for _sid, _h, j, _s in rows)
    rank_judge = (
        ranks([(sid, j) for sid, _h, j, _s in rows]) if have_judge and rows else {}
    )

    out = []
    for sid, human_mean, judge_mean, syn in rows:
        out.append(
            LiteralnessRow(
                system_id=sid,
                mean_human_score=human_mean,
                mean_judge_score=judge_mean,
                syntactic_similarity=syn,
                lexical_overlap=overlap_means[sid],
                rank_human=rank_human[sid],
                rank_judge=rank_judge.get(sid) if have_judge else None,
            )
        )
    out.sort(key=lambda r: r.rank_human)
    return out
