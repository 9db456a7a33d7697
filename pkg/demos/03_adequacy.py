"""Human-vs-machine adequacy analysis.

A scheme is adequate when verified human translations outrank machine
outputs under it. The matrix below shows how sharply that differs across
schemes and evaluator expertise: comparative judgments and professional
ratings identify the human translation far more often than guided error
annotation does.
"""

from demo_corpus import demo_corpus

from liteval.adequacy import (
    DEFAULT_TOP_SYSTEMS,
    adequacy_matrix,
    bws_win_rate,
    preference_by_pair,
)
from liteval.corpus import import_metric_scores
from liteval.model import EvaluatorRole
from liteval.scoring import mqm_scores_by_segment

corpus, corpus_dir = demo_corpus()

# ---------------------------------------------------------------------------
# the full matrix: scheme x evaluator role x scenario

metric_scores = {}
for score in import_metric_scores(corpus_dir / "metric_scores.csv", corpus):
    metric_scores.setdefault(score.metric_id, {})[score.segment_id] = score.value

rows = adequacy_matrix(corpus, metric_scores=metric_scores)
print("scheme       role          scenario  mean%   per pair")
for row in rows:
    per_pair = "  ".join(f"{p.pair}={p.percentage:5.1f}" for p in row.per_pair)
    print(f"{row.scheme:12s} {row.evaluator_role:13s} {row.scenario:9s}"
          f" {row.mean_percentage:5.1f}   {per_pair}")

# ---------------------------------------------------------------------------
# ties count against the human side: strictly greater than every rival

students = {e.id for e in corpus.evaluators.values()
            if e.role is EvaluatorRole.STUDENT}
reports, mean = preference_by_pair(
    mqm_scores_by_segment(corpus, students), corpus, "human", DEFAULT_TOP_SYSTEMS,
)
print(f"\nstudent MQM vs top systems, mean over pairs: {mean:.1f}%")
for r in reports:
    print(f"  {r.pair}: {r.preferred_count}/{r.n_paragraphs} paragraphs preferred")

# ---------------------------------------------------------------------------
# best-worst win rates: (times best - times worst) / appearances

print("\nBWS win rates:")
for system in sorted(corpus.systems):
    try:
        rate = bws_win_rate(corpus.bws, corpus, system)
    except ValueError:
        continue  # system never sampled into a tuple
    print(f"  {system:8s} {rate:+.2%}")
