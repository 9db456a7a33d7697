import { describe, expect, it } from "vitest";

import {
  BwsDraft,
  FreeDraft,
  MqmDraft,
  addErrorSpan,
  addFreeSpan,
  addNonTranslationSentence,
  buildBody,
  bwsComplete,
  draftProblems,
  newDraft,
  pickBest,
  pickWorst,
  removeSpan,
  setScore,
} from "../src/drafts.js";
import { TaskPayload } from "../src/model.js";

const TEXT = "Erster Satz hier. Zweiter Satz folgt.";

function task(scheme: TaskPayload["scheme"], nCandidates = 1): TaskPayload {
  return {
    task_id: "t1",
    scheme,
    source_text: "src",
    source_lang: "de",
    target_lang: "en",
    candidates: "abcde"
      .slice(0, nCandidates)
      .split("")
      .map((key) => ({ key, text: TEXT, sentence_count: 2 })),
  };
}

describe("error annotation draft", () => {
  it("maps a selection to a categorized span", () => {
    const draft = newDraft("mqm") as MqmDraft;
    const problem = addErrorSpan(draft, TEXT, 2, 5, "Accuracy", "omission", "Major");
    expect(problem).toBeNull();
    expect(draft.spans[0]).toMatchObject({
      start: 2,
      end: 5,
      category: { major: "Accuracy", sub: "omission" },
      severity: "Major",
    });
  });

  it("rejects zero-length selections inline", () => {
    const draft = newDraft("mqm") as MqmDraft;
    expect(addErrorSpan(draft, TEXT, 4, 4, "Style", "register", "Minor")).toMatch(
      /at least one character/,
    );
    expect(draft.spans).toHaveLength(0);
  });

  it("normalizes inverted selections", () => {
    const draft = newDraft("mqm") as MqmDraft;
    addErrorSpan(draft, TEXT, 9, 3, "Style", "register", "Minor");
    expect(draft.spans[0].start).toBe(3);
    expect(draft.spans[0].end).toBe(9);
  });

  it("covers the whole sentence for the non-translation shortcut", () => {
    const draft = newDraft("mqm") as MqmDraft;
    const problem = addNonTranslationSentence(draft, TEXT, 20);
    expect(problem).toBeNull();
    expect(draft.spans[0]).toMatchObject({
      start: 18,
      end: 37,
      category: { major: "NonTranslation", sub: null },
      severity: "NonTranslation",
    });
  });

  it("builds a valid body and allows the empty annotation", () => {
    const draft = newDraft("mqm") as MqmDraft;
    expect(buildBody(task("mqm"), draft)).toEqual({ spans: [] });
    addErrorSpan(draft, TEXT, 0, 6, "Fluency", "grammar", "Minor", "odd tense");
    const body = buildBody(task("mqm"), draft);
    expect(body).toMatchObject({ spans: [{ comment: "odd tense" }] });
    removeSpan(draft, 0);
    expect(draft.spans).toHaveLength(0);
  });
});

describe("scalar rating draft", () => {
  it("blocks submit until a score is picked", () => {
    const draft = newDraft("sqm") as typeof draft & { kind: "sqm" };
    expect(draftProblems(draft)).toHaveLength(1);
    expect(setScore(draft as never, 5)).toBeNull();
    expect(draftProblems(draft)).toHaveLength(0);
    expect(buildBody(task("sqm"), draft)).toEqual({ score: 5 });
  });

  it("rejects scores outside 0-6", () => {
    const draft = newDraft("sqm");
    expect(setScore(draft as never, 7)).toMatch(/between 0 and 6/);
    expect(setScore(draft as never, -1)).toMatch(/between 0 and 6/);
  });
});

describe("best-worst draft", () => {
  it("keeps submit disabled until best and worst differ", () => {
    const draft = newDraft("bws") as BwsDraft;
    expect(bwsComplete(draft)).toBe(false);
    pickBest(draft, "a");
    pickWorst(draft, "a");
    expect(bwsComplete(draft)).toBe(false);
    expect(draftProblems(draft)).toContain("best and worst must differ");
    pickWorst(draft, "c");
    expect(bwsComplete(draft)).toBe(true);
    expect(buildBody(task("bws", 4), draft)).toEqual({
      best_key: "a",
      worst_key: "c",
    });
  });
});

describe("free highlighting draft", () => {
  it("requires a comment per highlight", () => {
    const draft = newDraft("free") as FreeDraft;
    expect(addFreeSpan(draft, TEXT, 0, 6, "good", "   ")).toMatch(/comment/);
    expect(draft.spans).toHaveLength(0);
    expect(addFreeSpan(draft, TEXT, 0, 6, "good", "nice word")).toBeNull();
    expect(buildBody(task("free"), draft)).toMatchObject({
      spans: [{ polarity: "good", comment: "nice word" }],
    });
  });
});
