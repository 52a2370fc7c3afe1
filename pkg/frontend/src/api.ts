/**
 * Typed client for the annotation service HTTP contract.
 *
 * Every piece of state the UI renders comes out of these response shapes;
 * the client never computes validity or task status on its own.
 */

export interface Proposal {
  synonym: string;
  annotator_id: string;
  auto_validity: boolean;
}

export interface Review {
  reviewer_id: string;
  verdict: "accept" | "reject";
  note: string;
}

export type TaskStatus =
  | "open"
  | "proposed"
  | "under_review"
  | "accepted"
  | "rejected";

export interface TaskView {
  id: string;
  status: TaskStatus;
  sentence: string;
  word: string;
  span: [number, number];
  aoa: number;
  story_id: string;
  sentence_idx: number;
  proposal: Proposal | null;
  reviews: Review[];
  version: number;
}

export interface ProposeResponse {
  task: TaskView;
  auto_validity: boolean;
  committed: boolean;
  synonym_aoa: number | null;
  original_aoa: number | null;
}

export interface Stats {
  open: number;
  proposed: number;
  under_review: number;
  accepted: number;
  rejected: number;
  total: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let detail = resp.statusText;
  try {
    const body = (await resp.json()) as { detail?: string };
    if (body.detail) detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(resp.status, detail);
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    readonly token?: string,
  ) {}

  private headers(): Record<string, string> {
    const h: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) h["Authorization"] = `Bearer ${this.token}`;
    return h;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(`${this.baseUrl}${path}`, {
      ...init,
      headers: { ...this.headers(), ...(init?.headers ?? {}) },
    });
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  async nextTask(annotator: string): Promise<TaskView | null> {
    try {
      const out = await this.request<{ task: TaskView }>(
        `/tasks/next?annotator=${encodeURIComponent(annotator)}`,
      );
      return out.task;
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) return null;
      throw err;
    }
  }

  async getTask(id: string): Promise<TaskView> {
    const out = await this.request<{ task: TaskView }>(`/tasks/${id}`);
    return out.task;
  }

  /** Live validity check: same endpoint, preview flag, no state change. */
  previewProposal(
    id: string,
    annotator: string,
    synonym: string,
  ): Promise<ProposeResponse> {
    return this.request<ProposeResponse>(`/tasks/${id}/propose`, {
      method: "POST",
      body: JSON.stringify({ annotator, synonym, preview: true }),
    });
  }

  commitProposal(
    id: string,
    annotator: string,
    synonym: string,
    version?: number,
  ): Promise<ProposeResponse> {
    return this.request<ProposeResponse>(`/tasks/${id}/propose`, {
      method: "POST",
      body: JSON.stringify({ annotator, synonym, version }),
    });
  }

  review(
    id: string,
    reviewer: string,
    verdict: "accept" | "reject",
    note = "",
    version?: number,
  ): Promise<{ task: TaskView }> {
    return this.request<{ task: TaskView }>(`/tasks/${id}/review`, {
      method: "POST",
      body: JSON.stringify({ reviewer, verdict, note, version }),
    });
  }

  stats(): Promise<Stats> {
    return this.request<Stats>("/stats");
  }
}
