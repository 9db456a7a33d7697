/** Application bootstrap: evaluator session, task loop, submission. */

import { ApiClient, ApiError } from "./api.js";
import { Draft, buildBody, draftProblems, newDraft } from "./drafts.js";
import { Scheme, TaskPayload } from "./model.js";
import { renderTask } from "./ui.js";

const api = new ApiClient("");

interface Session {
  evaluator: string;
  scheme: Scheme | undefined;
  task: TaskPayload | null;
  draft: Draft | null;
}

const session: Session = {
  evaluator: "",
  scheme: undefined,
  task: null,
  draft: null,
};

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(text: string, isError = false): void {
  const status = byId<HTMLParagraphElement>("status");
  status.textContent = text;
  status.className = isError ? "status error" : "status";
}

function refresh(): void {
  const root = byId<HTMLDivElement>("task-root");
  const submit = byId<HTMLButtonElement>("submit");
  if (!session.task || !session.draft) {
    root.textContent = "";
    submit.disabled = true;
    return;
  }
  renderTask(root, session.task, session.draft, { onChanged: refresh });
  submit.disabled = draftProblems(session.draft).length > 0;
}

async function loadNext(): Promise<void> {
  if (!session.evaluator) {
    setStatus("enter your evaluator id first", true);
    return;
  }
  try {
    const task = await api.nextTask(session.evaluator, session.scheme);
    session.task = task;
    session.draft = task ? newDraft(task.scheme) : null;
    if (!task) {
      setStatus("no open tasks; all done");
    } else {
      const progress = await api.progress(session.evaluator);
      setStatus(`task ${task.task_id} | ${progress.done}/${progress.total} done`);
    }
    refresh();
  } catch (error) {
    setStatus(error instanceof Error ? error.message : String(error), true);
  }
}

async function submit(): Promise<void> {
  if (!session.task || !session.draft) return;
  try {
    const body = buildBody(session.task, session.draft);
    await api.submit(session.task.task_id, body);
    setStatus(`submitted ${session.task.task_id}`);
    await loadNext();
  } catch (error) {
    if (error instanceof ApiError && error.violations.length > 0) {
      setStatus(`rejected: ${error.violations.join("; ")}`, true);
    } else {
      setStatus(error instanceof Error ? error.message : String(error), true);
    }
  }
}

export function start(): void {
  byId<HTMLButtonElement>("load-next").addEventListener("click", () => {
    session.evaluator = byId<HTMLInputElement>("evaluator").value.trim();
    const scheme = byId<HTMLSelectElement>("scheme").value;
    session.scheme = scheme === "any" ? undefined : (scheme as Scheme);
    void loadNext();
  });
  byId<HTMLButtonElement>("submit").addEventListener("click", () => void submit());
  setStatus("enter your evaluator id and load a task");
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  start();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", start);
}
