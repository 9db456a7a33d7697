/**
 * End-to-end round trip against a live service instance.
 *
 * Five tasks travel through the browser code paths (draft state, shared
 * validation, API client), the service journals them, and the exported
 * judgment files must be byte-identical to directly authored fixtures.
 * Along the way every served payload is checked for the blind-evaluation
 * invariant: no system or segment identifier may appear.
 */

import { ChildProcess, execFileSync, spawn } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import {
  BwsDraft,
  FreeDraft,
  MqmDraft,
  SqmDraft,
  addErrorSpan,
  addFreeSpan,
  addNonTranslationSentence,
  buildBody,
  newDraft,
  pickBest,
  pickWorst,
  setScore,
} from "../src/drafts.js";
import { TaskPayload } from "../src/model.js";

const PYTHON = process.env.PYTHON ?? "python3";
const PORT = 8900 + (process.pid % 90);
const BASE = `http://127.0.0.1:${PORT}`;
const EVALUATOR = "ui-evaluator";

const SYSTEM_IDS = ["human", "gpt4o", "deepl", "google"];
const DE_TEXT = "Der Hafen lag still an jenem Abend. Niemand sprach ein Wort.";
const ZH_TEXT = "这是一个好句子。😀结尾很奇怪。";

const TASKS = [
  {
    task_id: "task-m1",
    scheme: "mqm",
    evaluator_id: EVALUATOR,
    source_text: "The harbor lay quiet that evening. Nobody said a word.",
    source_lang: "en",
    target_lang: "de",
    candidates: [
      { segment_id: "s-p1-deepl", text: DE_TEXT, sentence_count: 2 },
    ],
    context_translations: [],
  },
  {
    task_id: "task-m2",
    scheme: "mqm",
    evaluator_id: EVALUATOR,
    source_text: "This is a good sentence. The ending is strange.",
    source_lang: "en",
    target_lang: "zh",
    candidates: [
      { segment_id: "s-p2-gpt4o", text: ZH_TEXT, sentence_count: 2 },
    ],
    context_translations: [],
  },
  {
    task_id: "task-s1",
    scheme: "sqm",
    evaluator_id: EVALUATOR,
    source_text: "The harbor lay quiet that evening.",
    source_lang: "en",
    target_lang: "de",
    candidates: [
      { segment_id: "s-p1-human-v1", text: "Still lag der Hafen an jenem Abend.", sentence_count: 1 },
    ],
    context_translations: [DE_TEXT, "Der Hafen war ruhig."],
  },
  {
    task_id: "task-b1",
    scheme: "bws",
    evaluator_id: EVALUATOR,
    source_text: "The harbor lay quiet that evening.",
    source_lang: "en",
    target_lang: "de",
    candidates: [
      { segment_id: "s-p1-human-v1", text: "Still lag der Hafen an jenem Abend.", sentence_count: 1 },
      { segment_id: "s-p1-gpt4o", text: "Der Hafen lag an diesem Abend ruhig.", sentence_count: 1 },
      { segment_id: "s-p1-deepl", text: "Der Hafen lag still an jenem Abend.", sentence_count: 1 },
      { segment_id: "s-p1-google", text: "Der Hafen war an jenem Abend still.", sentence_count: 1 },
    ],
    context_translations: [],
  },
  {
    task_id: "task-f1",
    scheme: "free",
    evaluator_id: EVALUATOR,
    source_text: "The harbor lay quiet that evening.",
    source_lang: "en",
    target_lang: "de",
    candidates: [
      { segment_id: "s-p1-google", text: DE_TEXT, sentence_count: 2 },
    ],
    context_translations: [],
  },
];

let workdir: string;
let server: ChildProcess | null = null;

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 20000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/api/progress?evaluator=${EVALUATOR}`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error("service did not become ready");
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "liteval-ui-"));
  const tasksPath = join(workdir, "tasks.jsonl");
  writeFileSync(tasksPath, TASKS.map((t) => JSON.stringify(t)).join("\n") + "\n");
  server = spawn(
    PYTHON,
    ["-m", "liteval", "serve", "--tasks", tasksPath,
     "--journal", join(workdir, "journal.jsonl"), "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForServer();
});

afterAll(() => {
  server?.kill();
});

describe("browser round trip through the live service", () => {
  const api = new ApiClient(BASE);
  const servedPayloads: string[] = [];
  const journal: Array<Record<string, unknown>> = [];

  async function takeTask(scheme: TaskPayload["scheme"]): Promise<TaskPayload> {
    const task = await api.nextTask(EVALUATOR, scheme);
    expect(task).not.toBeNull();
    servedPayloads.push(JSON.stringify(task));
    return task as TaskPayload;
  }

  it("submits five tasks through the draft layer", async () => {
    // guided error annotation on German text
    const m1 = await takeTask("mqm");
    const draft1 = newDraft("mqm") as MqmDraft;
    expect(
      addErrorSpan(draft1, m1.candidates[0].text, 2, 9, "Accuracy", "omission",
                   "Major"),
    ).toBeNull();
    expect(
      addErrorSpan(draft1, m1.candidates[0].text, 10, 16, "Style", "register",
                   "Minor", "stiff"),
    ).toBeNull();
    await api.submit(m1.task_id, buildBody(m1, draft1));

    // guided error annotation on CJK text with an astral emoji
    const m2 = await takeTask("mqm");
    const draft2 = newDraft("mqm") as MqmDraft;
    expect(
      addErrorSpan(draft2, m2.candidates[0].text, 0, 4, "Accuracy",
                   "mistranslation_overly_literal", "Major"),
    ).toBeNull();
    expect(
      addNonTranslationSentence(draft2, m2.candidates[0].text, 9),
    ).toBeNull();
    await api.submit(m2.task_id, buildBody(m2, draft2));

    // scalar rating with sibling scrolling available
    const s1 = await takeTask("sqm");
    expect(s1.context_translations?.length).toBeGreaterThan(0);
    const draft3 = newDraft("sqm") as SqmDraft;
    setScore(draft3, 5);
    await api.submit(s1.task_id, buildBody(s1, draft3));

    // best-worst scaling
    const b1 = await takeTask("bws");
    const draft4 = newDraft("bws") as BwsDraft;
    pickBest(draft4, "a");
    pickWorst(draft4, "c");
    await api.submit(b1.task_id, buildBody(b1, draft4));

    // free highlighting with required comments
    const f1 = await takeTask("free");
    const draft5 = newDraft("free") as FreeDraft;
    expect(
      addFreeSpan(draft5, f1.candidates[0].text, 0, 9, "good", "flows nicely"),
    ).toBeNull();
    expect(
      addFreeSpan(draft5, f1.candidates[0].text, 10, 15, "error", "too literal"),
    ).toBeNull();
    await api.submit(f1.task_id, buildBody(f1, draft5));

    journal.push(
      { task_id: "task-m1", scheme: "mqm", spans: (buildBody(m1, draft1) as { spans: unknown[] }).spans },
      { task_id: "task-m2", scheme: "mqm", spans: (buildBody(m2, draft2) as { spans: unknown[] }).spans },
      { task_id: "task-s1", scheme: "sqm", score: 5 },
      { task_id: "task-b1", scheme: "bws", best_key: "a", worst_key: "c" },
      { task_id: "task-f1", scheme: "free", spans: (buildBody(f1, draft5) as { spans: unknown[] }).spans },
    );

    const progress = await api.progress(EVALUATOR);
    expect(progress.done).toBe(5);
    expect(progress.open).toBe(0);
  });

  it("never serves a system or segment identifier", () => {
    expect(servedPayloads.length).toBe(5);
    for (const blob of servedPayloads) {
      for (const systemId of SYSTEM_IDS) {
        expect(blob).not.toContain(`"${systemId}"`);
        expect(blob).not.toContain(`-${systemId}`);
      }
      for (const task of TASKS) {
        for (const candidate of task.candidates) {
          expect(blob).not.toContain(candidate.segment_id);
        }
      }
    }
  });

  it("exports byte-identical judgment files to directly authored fixtures", () => {
    const exported = join(workdir, "exported");
    execFileSync(PYTHON, [
      "-m", "liteval", "export",
      "--tasks", join(workdir, "tasks.jsonl"),
      "--journal", join(workdir, "journal.jsonl"),
      "--out", exported,
    ]);

    const judgmentsPath = join(workdir, "judgments.json");
    writeFileSync(judgmentsPath, JSON.stringify(journal, null, 1));
    const expected = join(workdir, "expected");
    execFileSync(PYTHON, [
      join(__dirname, "author_expected.py"),
      join(workdir, "tasks.jsonl"), judgmentsPath, expected,
    ]);

    for (const name of ["mqm.jsonl", "sqm.jsonl", "bws.jsonl", "free.jsonl"]) {
      const got = readFileSync(join(exported, name));
      const want = readFileSync(join(expected, name));
      expect(got.equals(want), `${name} differs`).toBe(true);
    }
  });
});
