/**
 * Validation parity: every shared fixture case must get the same verdict
 * from the client validator as from the service (the Python suite asserts
 * the other side against the same file).
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  SubmissionBody,
  TaskPayload,
  validateSubmission,
} from "../src/model.js";

interface Case {
  name: string;
  scheme: TaskPayload["scheme"];
  segment_text: string;
  sentence_count: number;
  n_candidates: number;
  body: SubmissionBody;
  valid: boolean;
}

const cases: Case[] = JSON.parse(
  readFileSync(
    join(__dirname, "fixtures", "validation_cases.json"),
    "utf-8",
  ),
);

function taskFor(testCase: Case): TaskPayload {
  const keys = "abcde".slice(0, testCase.n_candidates).split("");
  return {
    task_id: "task-x",
    scheme: testCase.scheme,
    source_text: "Quelltext.",
    source_lang: "de",
    target_lang: "en",
    candidates: keys.map((key) => ({
      key,
      text: testCase.segment_text,
      sentence_count: testCase.sentence_count,
    })),
  };
}

describe("shared validation fixtures", () => {
  it("covers all four schemes", () => {
    expect(new Set(cases.map((c) => c.scheme))).toEqual(
      new Set(["mqm", "sqm", "bws", "free"]),
    );
  });

  for (const testCase of cases) {
    it(testCase.name, () => {
      const violations = validateSubmission(taskFor(testCase), testCase.body);
      if (testCase.valid) {
        expect(violations).toEqual([]);
      } else {
        expect(violations.length).toBeGreaterThan(0);
      }
    });
  }
});
