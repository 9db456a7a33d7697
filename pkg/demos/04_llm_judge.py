"""The chat-model judge layer, fully offline.

Shows the two guided-error prompt variants and the rubric variant, the
tolerant response parser, score computation, response caching, and the
temperature consistency analysis. A stub client stands in for a live
endpoint; swap in HttpChatClient with LITEVAL_JUDGE_API_KEY for real runs.
"""

import tempfile

from demo_corpus import demo_corpus

from liteval.judge import (
    GEMBA_LITERARY,
    GEMBA_ORIGINAL,
    RUBRIC_SQM,
    ResponseCache,
    build_prompt,
    consistency_analysis,
    judge_inputs_from_corpus,
    judge_score,
    parse_judge_response,
    run_judge,
    segment_correlation,
)
from liteval.model import EvaluatorRole
from liteval.scoring import mqm_scores_by_segment

corpus, _ = demo_corpus()

# ---------------------------------------------------------------------------
# prompt construction is deterministic; the literary variant swaps in a
# critic persona and literary few-shots

messages = build_prompt(
    GEMBA_LITERARY, "de",
    "Der Herbst kam früh in diesem Jahr.",
    "en", "Autumn came early this year.",
)
print(f"literary template: {len(messages)} messages")
print("system persona:", messages[0]["content"][:68], "...")
print("original persona:", GEMBA_ORIGINAL.system_text[:68], "...")
print("rubric carries scores:", "Score 6:" in RUBRIC_SQM.instruction_text)

# ---------------------------------------------------------------------------
# responses list errors per severity block; the parser tolerates one-line
# and multi-line layouts and typographic quotes

response = (
    'Critical: no-error\n'
    'Major: accuracy/mistranslation (Too-literal) - "studied the aspect"\n'
    'Minor: style/register - "dir" fluency/grammar - "wäre"'
)
parsed = parse_judge_response(response)
for error in parsed.errors:
    print(f"  {error.severity.value:8s} {error.category_path:40s} '{error.span_text}'")
print("score:", judge_score(parsed.errors))

# ---------------------------------------------------------------------------
# a stub endpoint: answers depend only on the prompt, so repeated queries
# agree perfectly and the consistency analysis lands at spearman 1.0


class StubClient:
    signature = "stub-model"

    def complete(self, messages, temperature):
        key = hash(messages[-1]["content"]) % 5
        errors = [
            "Major: accuracy/omission - \"x\"" * (key % 3),
            "Minor: style/awkward - \"y\"" * (key % 2),
        ]
        return "Critical: no-error " + " ".join(errors) or "no-error"


inputs = judge_inputs_from_corpus(
    corpus, sorted(corpus.segments)[:40]
)
with tempfile.TemporaryDirectory() as cache_dir:
    cache = ResponseCache(cache_dir)
    runs = run_judge(StubClient(), inputs, GEMBA_LITERARY, temperature=0.0,
                     n_queries=3, cache=cache)
    rerun = run_judge(StubClient(), inputs, GEMBA_LITERARY, temperature=0.0,
                      n_queries=3, cache=cache)
print(f"\n{len(runs)} runs; rerun served entirely from cache:",
      [r.raw_response for r in runs] == [r.raw_response for r in rerun])

for report in consistency_analysis(runs):
    print(f"temperature {report.temperature}: mean spearman "
          f"{report.mean_spearman:.3f}, delta buckets "
          f"{report.pct_delta_le_1:.0f}/{report.pct_delta_1_5:.0f}/"
          f"{report.pct_delta_gt_5:.0f}")

# ---------------------------------------------------------------------------
# meta-evaluation: correlate judge scores with the human scores

judge_scores = {r.segment_id: r.score for r in runs if r.query_index == 0}
students = {e.id for e in corpus.evaluators.values()
            if e.role is EvaluatorRole.STUDENT}
human = mqm_scores_by_segment(corpus, students)
taus = segment_correlation(judge_scores, human, corpus)
print("\nsegment correlation of the stub judge (expect ~0):",
      round(taus["all"], 3))
