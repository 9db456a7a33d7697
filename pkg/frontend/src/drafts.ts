/**
 * Draft state for each annotation scheme.
 *
 * A draft lives entirely in the browser until submit: the UI mutates it
 * through these functions, each returning inline problems for immediate
 * feedback, and `buildBody` produces the wire form only when the draft
 * passes the same validation the service applies.
 */

import {
  BwsBody,
  ErrorSpanBody,
  FreeBody,
  FreeSpanBody,
  MajorCategory,
  MqmBody,
  Severity,
  SqmBody,
  SubmissionBody,
  TaskPayload,
  validateSubmission,
} from "./model.js";
import { codePointLength, sentenceSpans } from "./offsets.js";

export interface MqmDraft {
  kind: "mqm";
  spans: ErrorSpanBody[];
}

export interface SqmDraft {
  kind: "sqm";
  score: number | null;
}

export interface BwsDraft {
  kind: "bws";
  bestKey: string | null;
  worstKey: string | null;
}

export interface FreeDraft {
  kind: "free";
  spans: FreeSpanBody[];
}

export type Draft = MqmDraft | SqmDraft | BwsDraft | FreeDraft;

export function newDraft(scheme: TaskPayload["scheme"]): Draft {
  switch (scheme) {
    case "mqm":
      return { kind: "mqm", spans: [] };
    case "sqm":
      return { kind: "sqm", score: null };
    case "bws":
      return { kind: "bws", bestKey: null, worstKey: null };
    case "free":
      return { kind: "free", spans: [] };
  }
}

/** Add a guided-error span; zero-length selections are rejected inline. */
export function addErrorSpan(
  draft: MqmDraft,
  text: string,
  start: number,
  end: number,
  major: MajorCategory,
  sub: string | null,
  severity: Severity,
  comment: string | null = null,
): string | null {
  if (start === end) return "select at least one character";
  if (start > end) [start, end] = [end, start];
  if (start < 0 || end > codePointLength(text)) return "selection outside the text";
  draft.spans.push({ start, end, category: { major, sub }, severity, comment });
  return null;
}

/**
 * Whole-sentence non-translation shortcut: marks the sentence containing
 * the given position as NonTranslation/NonTranslation.
 */
export function addNonTranslationSentence(
  draft: MqmDraft,
  text: string,
  position: number,
): string | null {
  for (const [start, end] of sentenceSpans(text)) {
    if (position >= start && position < end) {
      draft.spans.push({
        start,
        end,
        category: { major: "NonTranslation", sub: null },
        severity: "NonTranslation",
        comment: null,
      });
      return null;
    }
  }
  return "position not inside a sentence";
}

export function removeSpan(draft: MqmDraft | FreeDraft, index: number): void {
  draft.spans.splice(index, 1);
}

export function setScore(draft: SqmDraft, score: number): string | null {
  if (!Number.isInteger(score) || score < 0 || score > 6) {
    return "score must be an integer between 0 and 6";
  }
  draft.score = score;
  return null;
}

export function pickBest(draft: BwsDraft, key: string): void {
  draft.bestKey = key;
}

export function pickWorst(draft: BwsDraft, key: string): void {
  draft.worstKey = key;
}

/** Submit stays disabled until both picks exist and differ. */
export function bwsComplete(draft: BwsDraft): boolean {
  return (
    draft.bestKey !== null &&
    draft.worstKey !== null &&
    draft.bestKey !== draft.worstKey
  );
}

/** Free spans require a comment; empty highlights are rejected inline. */
export function addFreeSpan(
  draft: FreeDraft,
  text: string,
  start: number,
  end: number,
  polarity: "good" | "error",
  comment: string,
): string | null {
  if (start === end) return "select at least one character";
  if (start > end) [start, end] = [end, start];
  if (start < 0 || end > codePointLength(text)) return "selection outside the text";
  if (!comment.trim()) return "a comment is required for each highlight";
  draft.spans.push({ start, end, polarity, comment });
  return null;
}

/** Problems that block submission, shown next to the submit button. */
export function draftProblems(draft: Draft): string[] {
  switch (draft.kind) {
    case "mqm":
      return [];
    case "sqm":
      return draft.score === null ? ["pick a score between 0 and 6"] : [];
    case "bws": {
      const problems: string[] = [];
      if (draft.bestKey === null) problems.push("pick the best translation");
      if (draft.worstKey === null) problems.push("pick the worst translation");
      if (
        draft.bestKey !== null &&
        draft.worstKey !== null &&
        draft.bestKey === draft.worstKey
      ) {
        problems.push("best and worst must differ");
      }
      return problems;
    }
    case "free":
      return draft.spans
        .map((span, i) => (span.comment.trim() ? null : `span ${i}: comment required`))
        .filter((p): p is string => p !== null);
  }
}

/**
 * Produce the wire body, running the shared validation first. Throws when
 * the draft is incomplete or would be rejected by the service.
 */
export function buildBody(task: TaskPayload, draft: Draft): SubmissionBody {
  const problems = draftProblems(draft);
  if (problems.length > 0) {
    throw new Error(`draft incomplete: ${problems.join("; ")}`);
  }
  let body: SubmissionBody;
  switch (draft.kind) {
    case "mqm":
      body = { spans: draft.spans } satisfies MqmBody;
      break;
    case "sqm":
      body = { score: draft.score as number } satisfies SqmBody;
      break;
    case "bws":
      body = {
        best_key: draft.bestKey as string,
        worst_key: draft.worstKey as string,
      } satisfies BwsBody;
      break;
    case "free":
      body = { spans: draft.spans } satisfies FreeBody;
      break;
  }
  const violations = validateSubmission(task, body);
  if (violations.length > 0) {
    throw new Error(`submission invalid: ${violations.join("; ")}`);
  }
  return body;
}
