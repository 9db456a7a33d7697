"""Corpus loading, statistics, and system rankings.

Walks the basic workflow: load a corpus directory, print its per-pair
shape, turn guided error annotations into scores, and rank the ten
translation systems the way the published system table does.
"""

from demo_corpus import demo_corpus

from liteval.corpus import corpus_stats
from liteval.model import EvaluatorRole
from liteval.scoring import (
    mqm_score,
    mqm_scores_by_segment,
    sqm_scores_by_segment,
    system_ranking,
)

corpus, corpus_dir = demo_corpus()

# ---------------------------------------------------------------------------
# corpus shape: counts come from the sentence_count fields shipped with the
# data, never from re-segmentation

stats = corpus_stats(corpus)
print("pair        paras  segments  sentences  src/para  tgt/para")
for row in list(stats.per_pair) + [stats.total]:
    print(f"{row.pair:10s} {row.paragraph_count:6d} {row.segment_count:9d} "
          f"{row.sentence_count:10d} {row.mean_source_sentences:9.1f} "
          f"{row.mean_target_sentences:9.1f}")

# ---------------------------------------------------------------------------
# one segment, by hand: the score is the negative weighted error count per
# sentence (non-translation 25, major 5, minor 1)

annotation = corpus.mqm[0]
segment = corpus.segments[annotation.segment_id]
print(f"\nsegment {segment.id}: {len(annotation.spans)} error spans over "
      f"{segment.sentence_count} sentences")
print("guided-error score:", round(mqm_score(annotation, segment.sentence_count), 3))

# ---------------------------------------------------------------------------
# system ranking over all student annotations; ties break by system id

students = {e.id for e in corpus.evaluators.values()
            if e.role is EvaluatorRole.STUDENT}
for scheme, scores in (
    ("MQM", mqm_scores_by_segment(corpus, students)),
    ("SQM", sqm_scores_by_segment(corpus, students)),
):
    ranking = system_ranking(scores, corpus, scheme.lower())
    print(f"\n{scheme} ranking:")
    for entry in ranking.entries:
        print(f"  {entry.rank:2d}. {entry.system_id:8s} {entry.mean_score:7.2f} "
              f"({entry.n_segments} segments)")
