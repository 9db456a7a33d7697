/**
 * Domain types and client-side validation for annotation submissions.
 *
 * The rules here mirror the server's model exactly: a body this module
 * accepts must be accepted by the service and vice versa (enforced by the
 * shared fixture suite in tests/fixtures/validation_cases.json). All
 * character offsets are Unicode code points, never UTF-16 units.
 */

import { codePointLength } from "./offsets.js";

export type Scheme = "mqm" | "sqm" | "bws" | "free";

export type MajorCategory =
  | "Accuracy"
  | "Fluency"
  | "Style"
  | "Terminology"
  | "LocaleConvention"
  | "NonTranslation"
  | "Others";

export type Severity = "Minor" | "Major" | "NonTranslation";

export type Polarity = "good" | "error";

/** Valid sub-categories per major category; empty means "no sub allowed". */
export const SUBCATEGORIES: Record<MajorCategory, readonly string[]> = {
  Accuracy: [
    "addition",
    "omission",
    "misnomer",
    "mistranslation_general",
    "mistranslation_overly_literal",
    "mistranslation_temporal",
    "untranslated",
  ],
  Fluency: ["punctuation_spelling", "grammar", "inconsistency", "coherence"],
  Style: ["awkwardness", "register", "inconsistent", "unidiomatic"],
  Terminology: ["mistranslation", "inconsistent"],
  LocaleConvention: ["location_format", "number_format"],
  NonTranslation: [],
  Others: [],
};

export const MAJOR_CATEGORIES = Object.keys(SUBCATEGORIES) as MajorCategory[];

export interface ErrorSpanBody {
  start: number;
  end: number;
  category: { major: MajorCategory; sub: string | null };
  severity: Severity;
  comment: string | null;
}

export interface FreeSpanBody {
  start: number;
  end: number;
  polarity: Polarity;
  comment: string;
}

export interface MqmBody {
  spans: ErrorSpanBody[];
}

export interface SqmBody {
  score: number;
}

export interface BwsBody {
  best_key: string;
  worst_key: string;
}

export interface FreeBody {
  spans: FreeSpanBody[];
}

export type SubmissionBody = MqmBody | SqmBody | BwsBody | FreeBody;

export interface TaskCandidate {
  key: string;
  text: string;
  sentence_count: number;
}

/** The blinded task payload as served by /api/tasks/next. */
export interface TaskPayload {
  task_id: string;
  scheme: Scheme;
  source_text: string;
  source_lang: string;
  target_lang: string;
  candidates: TaskCandidate[];
  context_translations?: string[];
}

function spanBoundsViolations(
  index: number,
  start: number,
  end: number,
  textLength: number,
): string[] {
  const violations: string[] = [];
  if (start < 0) violations.push(`span ${index}: negative start`);
  if (start >= end) violations.push(`span ${index}: start must be < end`);
  if (end > textLength) violations.push(`span ${index}: end beyond text`);
  return violations;
}

export function validateMqm(body: MqmBody, text: string): string[] {
  const violations: string[] = [];
  const length = codePointLength(text);
  body.spans.forEach((span, i) => {
    violations.push(...spanBoundsViolations(i, span.start, span.end, length));
    const subs = SUBCATEGORIES[span.category.major];
    if (subs === undefined) {
      violations.push(`span ${i}: unknown category ${span.category.major}`);
      return;
    }
    if (span.category.sub !== null && !subs.includes(span.category.sub)) {
      violations.push(
        `span ${i}: sub-category ${JSON.stringify(span.category.sub)} invalid for ${span.category.major}`,
      );
    }
    const ntCategory = span.category.major === "NonTranslation";
    const ntSeverity = span.severity === "NonTranslation";
    if (ntCategory !== ntSeverity) violations.push(`span ${i}: severity mismatch`);
  });
  return violations;
}

export function validateSqm(body: SqmBody): string[] {
  if (!Number.isInteger(body.score)) return ["score must be an integer"];
  if (body.score < 0 || body.score > 6) {
    return [`score ${body.score} outside [0, 6]`];
  }
  return [];
}

export function validateBws(body: BwsBody, candidates: TaskCandidate[]): string[] {
  const violations: string[] = [];
  const keys = candidates.map((c) => c.key);
  if (!keys.includes(body.best_key)) {
    violations.push(`best_key ${JSON.stringify(body.best_key)} not a member of the tuple`);
  }
  if (!keys.includes(body.worst_key)) {
    violations.push(`worst_key ${JSON.stringify(body.worst_key)} not a member of the tuple`);
  }
  if (body.best_key === body.worst_key) {
    violations.push("best_id must differ from worst_id");
  }
  return violations;
}

export function validateFree(body: FreeBody, text: string): string[] {
  const violations: string[] = [];
  const length = codePointLength(text);
  body.spans.forEach((span, i) => {
    violations.push(...spanBoundsViolations(i, span.start, span.end, length));
  });
  return violations;
}

/** Validate any submission against its task; empty result means acceptable. */
export function validateSubmission(
  task: TaskPayload,
  body: SubmissionBody,
): string[] {
  const candidate = task.candidates[0];
  switch (task.scheme) {
    case "mqm":
      return validateMqm(body as MqmBody, candidate.text);
    case "sqm":
      return validateSqm(body as SqmBody);
    case "bws":
      return validateBws(body as BwsBody, task.candidates);
    case "free":
      return validateFree(body as FreeBody, candidate.text);
  }
}
