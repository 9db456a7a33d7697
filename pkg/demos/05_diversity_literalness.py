"""Literalness and diversity analytics.

Lexical overlap is the mean pairwise BLEU between one system's translations
and every other system's translations of the same paragraphs; syntactic
similarity is a subset-tree kernel between source and translation parses.
Human translations sit lowest on both axes: less literal, more distinct.
"""

from demo_corpus import demo_corpus

from liteval.model import Era, EvaluatorRole
from liteval.scoring import mqm_scores_by_segment
from liteval.textstats import (
    doc_syntactic_similarity,
    literalness_report,
    load_tree_doc,
    normalized_kernel,
    pairwise_lexical_overlap,
    parse_bracketed,
)

corpus, corpus_dir = demo_corpus()

# ---------------------------------------------------------------------------
# the kernel counts shared tree fragments; identical trees normalize to 1

a = parse_bracketed("(S (NP (DT the) (NN cat)) (VP (VB sat)))")
b = parse_bracketed("(S (NP (DT the) (NN dog)) (VP (VB ran) (PP (IN off))))")
print("normalized kernel, related trees:", round(normalized_kernel(a, b), 3))
print("normalized kernel, identical trees:", normalized_kernel(a, a))

# ---------------------------------------------------------------------------
# per-system mean lexical overlap; the full matrix is what the heatmap shows

means, matrix = pairwise_lexical_overlap(corpus)
print("\nmean lexical overlap (low = more distinct wording):")
for system, value in sorted(means.items(), key=lambda kv: kv[1]):
    print(f"  {system:8s} {value:5.1f}")
human_gpt = matrix.values[matrix.systems.index("human"),
                          matrix.systems.index("gpt4o")]
print(f"cell human vs gpt4o: {human_gpt:.1f}")

# ---------------------------------------------------------------------------
# the three-axis literalness table (score, similarity, overlap, rank pair)

trees_dir = corpus_dir / "trees"
docs = {}
for para_id in sorted(corpus.paragraphs):
    docs[para_id] = load_tree_doc(trees_dir / f"{para_id}.txt", para_id)
for seg_id in sorted(corpus.segments):
    docs[seg_id] = load_tree_doc(trees_dir / f"{seg_id}.txt", seg_id)

students = {e.id for e in corpus.evaluators.values()
            if e.role is EvaluatorRole.STUDENT}
human_scores = mqm_scores_by_segment(corpus, students)

print("\nsystem     score   syn.sim  overlap")
for row in literalness_report(corpus, docs, human_scores):
    print(f"{row.system_id:8s} {row.mean_human_score:7.2f}  "
          f"{row.syntactic_similarity:7.3f}  {row.lexical_overlap:6.1f}")

# the era filter reruns everything on contemporary works only
contemporary = literalness_report(
    corpus, docs, human_scores, era=Era.CONTEMPORARY
)
human_row = next(r for r in contemporary if r.system_id == "human")
print(f"\ncontemporary works only: human overlap {human_row.lexical_overlap:.1f}, "
      f"similarity {human_row.syntactic_similarity:.3f}")
