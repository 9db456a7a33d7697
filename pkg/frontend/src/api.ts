/** Thin client for the review service's JSON API. */

import { Scheme, SubmissionBody, TaskPayload } from "./model.js";

export interface Progress {
  evaluator: string;
  total: number;
  done: number;
  open: number;
}

export interface SubmitAck {
  ok: boolean;
  task_id: string;
  status: string;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
    public readonly violations: string[] = [],
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let message = `request failed with ${response.status}`;
  let violations: string[] = [];
  try {
    const body = await response.json();
    if (typeof body.error === "string") message = body.error;
    if (Array.isArray(body.violations)) violations = body.violations;
  } catch {
    // non-JSON error body; keep the status message
  }
  return new ApiError(response.status, message, violations);
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  async nextTask(evaluator: string, scheme?: Scheme): Promise<TaskPayload | null> {
    const params = new URLSearchParams({ evaluator });
    if (scheme) params.set("scheme", scheme);
    const response = await fetch(`${this.baseUrl}/api/tasks/next?${params}`);
    if (!response.ok) throw await parseError(response);
    const body = await response.json();
    return body.task;
  }

  async submit(taskId: string, body: SubmissionBody): Promise<SubmitAck> {
    const response = await fetch(`${this.baseUrl}/api/submissions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ task_id: taskId, body }),
    });
    if (!response.ok) throw await parseError(response);
    return response.json();
  }

  async progress(evaluator: string): Promise<Progress> {
    const params = new URLSearchParams({ evaluator });
    const response = await fetch(`${this.baseUrl}/api/progress?${params}`);
    if (!response.ok) throw await parseError(response);
    return response.json();
  }
}
