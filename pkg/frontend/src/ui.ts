/**
 * DOM layer: renders the active task and maps browser selections to code
 * point offsets. All annotation logic lives in drafts.ts; this module only
 * reads selections, paints highlights, and forwards user actions.
 */

import {
  BwsDraft,
  Draft,
  FreeDraft,
  MqmDraft,
  SqmDraft,
  addErrorSpan,
  addFreeSpan,
  addNonTranslationSentence,
  draftProblems,
  pickBest,
  pickWorst,
  removeSpan,
  setScore,
} from "./drafts.js";
import {
  MAJOR_CATEGORIES,
  MajorCategory,
  SUBCATEGORIES,
  Severity,
  TaskPayload,
} from "./model.js";
import { codePointToUtf16, sliceByCodePoint, utf16ToCodePoint } from "./offsets.js";

export interface UiCallbacks {
  onChanged: () => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Current selection inside `container`, as code point offsets of its text. */
export function selectionOffsets(
  container: HTMLElement,
  text: string,
): [number, number] | null {
  const selection = window.getSelection();
  if (!selection || selection.rangeCount === 0 || selection.isCollapsed) return null;
  const range = selection.getRangeAt(0);
  if (!container.contains(range.startContainer) || !container.contains(range.endContainer)) {
    return null;
  }
  const utf16Of = (node: Node, offset: number): number => {
    let total = 0;
    const walker = document.createTreeWalker(container, NodeFilter.SHOW_TEXT);
    let current = walker.nextNode();
    while (current) {
      if (current === node) return total + offset;
      total += (current.textContent ?? "").length;
      current = walker.nextNode();
    }
    return total;
  };
  const startU16 = utf16Of(range.startContainer, range.startOffset);
  const endU16 = utf16Of(range.endContainer, range.endOffset);
  const start = utf16ToCodePoint(text, Math.min(startU16, endU16));
  const end = utf16ToCodePoint(text, Math.max(startU16, endU16));
  return start === end ? null : [start, end];
}

/** Paint the text with <mark> highlights at the given code point spans. */
export function renderHighlighted(
  target: HTMLElement,
  text: string,
  spans: Array<{ start: number; end: number; label: string }>,
): void {
  target.textContent = "";
  const boundaries = new Set<number>([0, codePointLength(text)]);
  for (const span of spans) {
    boundaries.add(span.start);
    boundaries.add(span.end);
  }
  const points = Array.from(boundaries).sort((a, b) => a - b);
  for (let i = 0; i + 1 < points.length; i += 1) {
    const [from, to] = [points[i], points[i + 1]];
    const piece = sliceByCodePoint(text, from, to);
    const covering = spans.filter((s) => s.start <= from && to <= s.end);
    if (covering.length === 0) {
      target.appendChild(document.createTextNode(piece));
    } else {
      const mark = el("mark", `hl hl-${covering[0].label}`);
      mark.textContent = piece;
      mark.title = covering.map((s) => s.label).join(", ");
      target.appendChild(mark);
    }
  }
}

function codePointLength(text: string): number {
  return Array.from(text).length;
}

function categoryPicker(
  onPick: (major: MajorCategory, sub: string | null) => void,
): HTMLSelectElement {
  const select = el("select", "category-picker");
  for (const major of MAJOR_CATEGORIES) {
    const subs = SUBCATEGORIES[major];
    if (subs.length === 0) {
      const option = el("option");
      option.value = JSON.stringify([major, null]);
      option.textContent = major;
      select.appendChild(option);
    } else {
      const group = document.createElement("optgroup");
      group.label = major;
      for (const sub of subs) {
        const option = el("option");
        option.value = JSON.stringify([major, sub]);
        option.textContent = `${major} / ${sub}`;
        group.appendChild(option);
      }
      select.appendChild(group);
    }
  }
  select.addEventListener("change", () => {
    const [major, sub] = JSON.parse(select.value);
    onPick(major, sub);
  });
  return select;
}

function spanList(
  container: HTMLElement,
  draft: MqmDraft | FreeDraft,
  text: string,
  callbacks: UiCallbacks,
): void {
  const list = el("ul", "span-list");
  draft.spans.forEach((span, index) => {
    const item = el("li");
    const quoted = sliceByCodePoint(text, span.start, span.end);
    const label =
      "category" in span
        ? `${span.category.major}${span.category.sub ? "/" + span.category.sub : ""} (${span.severity})`
        : span.polarity;
    item.appendChild(el("span", "span-label", `[${span.start},${span.end}) ${label}: `));
    item.appendChild(el("q", "span-text", quoted));
    const remove = el("button", "remove", "remove");
    remove.addEventListener("click", () => {
      removeSpan(draft, index);
      callbacks.onChanged();
    });
    item.appendChild(remove);
    list.appendChild(item);
  });
  container.appendChild(list);
}

function renderMqm(
  root: HTMLElement,
  task: TaskPayload,
  draft: MqmDraft,
  callbacks: UiCallbacks,
): void {
  const candidate = task.candidates[0];
  const textArea = el("div", "candidate-text");
  renderHighlighted(
    textArea,
    candidate.text,
    draft.spans.map((s) => ({ start: s.start, end: s.end, label: s.severity })),
  );
  root.appendChild(el("h3", undefined, "Translation"));
  root.appendChild(textArea);

  let major: MajorCategory = "Accuracy";
  let sub: string | null = "mistranslation_general";
  let severity: Severity = "Minor";

  const controls = el("div", "controls");
  controls.appendChild(
    categoryPicker((pickedMajor, pickedSub) => {
      major = pickedMajor;
      sub = pickedSub;
    }),
  );
  const severityToggle = el("select");
  for (const value of ["Minor", "Major"] as Severity[]) {
    const option = el("option", undefined, value);
    option.value = value;
    severityToggle.appendChild(option);
  }
  severityToggle.addEventListener("change", () => {
    severity = severityToggle.value as Severity;
  });
  controls.appendChild(severityToggle);

  const comment = el("input") as HTMLInputElement;
  comment.placeholder = "optional comment";
  controls.appendChild(comment);

  const message = el("span", "inline-error");
  const markButton = el("button", undefined, "mark selection");
  markButton.addEventListener("click", () => {
    const offsets = selectionOffsets(textArea, candidate.text);
    if (!offsets) {
      message.textContent = "select at least one character";
      return;
    }
    const effectiveMajor = major === "NonTranslation" ? "Accuracy" : major;
    const problem = addErrorSpan(
      draft, candidate.text, offsets[0], offsets[1],
      effectiveMajor, sub, severity, comment.value || null,
    );
    message.textContent = problem ?? "";
    if (!problem) callbacks.onChanged();
  });
  controls.appendChild(markButton);

  const ntButton = el("button", undefined, "whole sentence is non-translation");
  ntButton.addEventListener("click", () => {
    const offsets = selectionOffsets(textArea, candidate.text);
    const position = offsets ? offsets[0] : 0;
    const problem = addNonTranslationSentence(draft, candidate.text, position);
    message.textContent = problem ?? "";
    if (!problem) callbacks.onChanged();
  });
  controls.appendChild(ntButton);
  controls.appendChild(message);
  root.appendChild(controls);
  spanList(root, draft, candidate.text, callbacks);
}

function renderSqm(
  root: HTMLElement,
  task: TaskPayload,
  draft: SqmDraft,
  callbacks: UiCallbacks,
): void {
  root.appendChild(el("h3", undefined, "Translation"));
  root.appendChild(el("div", "candidate-text", task.candidates[0].text));

  const scale = el("div", "sqm-scale");
  for (let score = 0; score <= 6; score += 1) {
    const button = el("button", draft.score === score ? "picked" : "", String(score));
    button.addEventListener("click", () => {
      setScore(draft, score);
      callbacks.onChanged();
    });
    scale.appendChild(button);
  }
  root.appendChild(scale);

  if (task.context_translations && task.context_translations.length > 0) {
    root.appendChild(el("h4", undefined, "Other translations (for comparison)"));
    const siblings = el("div", "siblings");
    for (const text of task.context_translations) {
      siblings.appendChild(el("div", "sibling", text));
    }
    root.appendChild(siblings);
  }
}

function renderBws(
  root: HTMLElement,
  task: TaskPayload,
  draft: BwsDraft,
  callbacks: UiCallbacks,
): void {
  for (const candidate of task.candidates) {
    const card = el("div", "candidate-card");
    card.appendChild(el("h4", undefined, `Candidate ${candidate.key.toUpperCase()}`));
    card.appendChild(el("div", "candidate-text", candidate.text));
    const best = el("button", draft.bestKey === candidate.key ? "picked" : "", "best");
    best.addEventListener("click", () => {
      pickBest(draft, candidate.key);
      callbacks.onChanged();
    });
    const worst = el("button", draft.worstKey === candidate.key ? "picked" : "", "worst");
    worst.addEventListener("click", () => {
      pickWorst(draft, candidate.key);
      callbacks.onChanged();
    });
    card.appendChild(best);
    card.appendChild(worst);
    root.appendChild(card);
  }
}

function renderFree(
  root: HTMLElement,
  task: TaskPayload,
  draft: FreeDraft,
  callbacks: UiCallbacks,
): void {
  const candidate = task.candidates[0];
  const textArea = el("div", "candidate-text");
  renderHighlighted(
    textArea,
    candidate.text,
    draft.spans.map((s) => ({ start: s.start, end: s.end, label: s.polarity })),
  );
  root.appendChild(el("h3", undefined, "Translation"));
  root.appendChild(textArea);

  const controls = el("div", "controls");
  const comment = el("input") as HTMLInputElement;
  comment.placeholder = "comment (required)";
  controls.appendChild(comment);
  const message = el("span", "inline-error");
  for (const polarity of ["good", "error"] as const) {
    const button = el("button", undefined, `mark ${polarity}`);
    button.addEventListener("click", () => {
      const offsets = selectionOffsets(textArea, candidate.text);
      if (!offsets) {
        message.textContent = "select at least one character";
        return;
      }
      const problem = addFreeSpan(
        draft, candidate.text, offsets[0], offsets[1], polarity, comment.value,
      );
      message.textContent = problem ?? "";
      if (!problem) {
        comment.value = "";
        callbacks.onChanged();
      }
    });
    controls.appendChild(button);
  }
  controls.appendChild(message);
  root.appendChild(controls);
  spanList(root, draft, candidate.text, callbacks);
}

export function renderTask(
  root: HTMLElement,
  task: TaskPayload,
  draft: Draft,
  callbacks: UiCallbacks,
): void {
  root.textContent = "";
  const header = el("div", "task-header");
  header.appendChild(el("h2", undefined, `${task.scheme.toUpperCase()} task`));
  header.appendChild(
    el("p", "langs", `${task.source_lang} → ${task.target_lang}`),
  );
  root.appendChild(header);
  root.appendChild(el("h3", undefined, "Source"));
  root.appendChild(el("div", "source-text", task.source_text));

  switch (draft.kind) {
    case "mqm":
      renderMqm(root, task, draft, callbacks);
      break;
    case "sqm":
      renderSqm(root, task, draft, callbacks);
      break;
    case "bws":
      renderBws(root, task, draft, callbacks);
      break;
    case "free":
      renderFree(root, task, draft, callbacks);
      break;
  }

  const problems = draftProblems(draft);
  if (problems.length > 0) {
    root.appendChild(el("p", "problems", problems.join("; ")));
  }
}
