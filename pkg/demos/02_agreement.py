"""Inter-annotator agreement across all judgment schemes.

Three language pairs carry a second student annotator; this script
reproduces the consistency analysis: tau-b on guided-error and scalar
scores, kappa on best-worst picks, and character-level span match.
"""

from demo_corpus import demo_corpus

from liteval.agreement import (
    bws_agreement,
    kendall_tau_b,
    span_match_kappa_multi,
    span_unit_labels,
)
from liteval.scoring import mqm_score

corpus, _ = demo_corpus()

print("pair    n    MQM tau  SQM tau  BWS kappa  span k   label k")
mqm_taus, sqm_taus, bws_kappas = [], [], []
for pair_key in ("de-en", "en-de", "en-zh"):
    e1, e2 = f"stu-{pair_key}-1", f"stu-{pair_key}-2"
    ann1 = {a.segment_id: a for a in corpus.mqm if a.evaluator_id == e1}
    ann2 = {a.segment_id: a for a in corpus.mqm if a.evaluator_id == e2}
    shared = sorted(set(ann1) & set(ann2))

    scores1 = [mqm_score(ann1[s], corpus.segments[s].sentence_count) for s in shared]
    scores2 = [mqm_score(ann2[s], corpus.segments[s].sentence_count) for s in shared]
    tau_mqm = kendall_tau_b(scores1, scores2)

    r1 = {r.segment_id: r.score for r in corpus.sqm if r.evaluator_id == e1}
    r2 = {r.segment_id: r.score for r in corpus.sqm if r.evaluator_id == e2}
    tau_sqm = kendall_tau_b([r1[s] for s in shared], [r2[s] for s in shared])

    kappa_bws = bws_agreement(
        [j for j in corpus.bws if j.evaluator_id == e1],
        [j for j in corpus.bws if j.evaluator_id == e2],
    )
    pairs = [(ann1[s], ann2[s], corpus.segments[s]) for s in shared]
    span_k = span_match_kappa_multi(pairs, "binary")
    label_k = span_match_kappa_multi(pairs, "category")

    mqm_taus.append(tau_mqm)
    sqm_taus.append(tau_sqm)
    bws_kappas.append(kappa_bws)
    print(f"{pair_key}  {len(shared):3d}   {tau_mqm:6.3f}   {tau_sqm:6.3f} "
          f"   {kappa_bws:6.3f}   {span_k:6.3f}  {label_k:6.3f}")

print(f"mean          {sum(mqm_taus)/3:6.3f}   {sum(sqm_taus)/3:6.3f} "
      f"   {sum(bws_kappas)/3:6.3f}")

# ---------------------------------------------------------------------------
# span agreement works per character, so offsets behave the same for
# Chinese and German; here is the raw label projection for one segment

seg_id = sorted(
    set(a.segment_id for a in corpus.mqm if a.evaluator_id == "stu-de-en-2")
)[0]
annotation = next(
    a for a in corpus.mqm
    if a.segment_id == seg_id and a.evaluator_id == "stu-de-en-1"
)
labels = span_unit_labels(corpus.segments[seg_id], annotation, "binary")
covered = sum(1 for l in labels if l == "error")
print(f"\n{seg_id}: {covered}/{len(labels)} characters marked as errors")
