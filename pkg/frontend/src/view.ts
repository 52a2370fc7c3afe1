/**
 * View-state for the two flows. All state here is a projection of service
 * responses: the session caches the latest TaskView and the latest
 * validity answer, and reloading simply refetches the same projections.
 */

import { ApiClient, ApiError, ProposeResponse, TaskView } from "./api.js";

export interface SentenceParts {
  before: string;
  word: string;
  after: string;
}

/** Split the sentence at the complex-word span for highlighting. */
export function sentenceParts(task: TaskView): SentenceParts {
  const [start, end] = task.span;
  return {
    before: task.sentence.slice(0, start),
    word: task.sentence.slice(start, end),
    after: task.sentence.slice(end),
  };
}

function matchCase(pattern: string, word: string): string {
  if (pattern.length > 1 && pattern === pattern.toUpperCase())
    return word.toUpperCase();
  if (pattern[0] && pattern[0] === pattern[0].toUpperCase())
    return word.charAt(0).toUpperCase() + word.slice(1);
  return word;
}

/** The reviewer's right-hand pane: proposal substituted into the sentence. */
export function substitutedSentence(task: TaskView, synonym: string): string {
  const parts = sentenceParts(task);
  return parts.before + matchCase(parts.word, synonym) + parts.after;
}

export type ValidityBadge =
  | { kind: "none" } // nothing typed yet
  | { kind: "checking" } // request in flight
  | { kind: "valid"; synonymAoa: number | null; originalAoa: number | null }
  | { kind: "invalid"; synonymAoa: number | null; originalAoa: number | null }
  | { kind: "unknown-aoa" }; // service could not rate the synonym

export function badgeFromResponse(resp: ProposeResponse): ValidityBadge {
  if (resp.auto_validity)
    return {
      kind: "valid",
      synonymAoa: resp.synonym_aoa,
      originalAoa: resp.original_aoa,
    };
  if (resp.synonym_aoa === null) return { kind: "unknown-aoa" };
  return {
    kind: "invalid",
    synonymAoa: resp.synonym_aoa,
    originalAoa: resp.original_aoa,
  };
}

export interface SessionEvents {
  onTask?(task: TaskView | null): void;
  onBadge?(badge: ValidityBadge): void;
  onConflict?(message: string): void;
  onOffline?(offline: boolean): void;
}

/**
 * Annotator session: one active task, a typed synonym, and the badge for
 * it. The badge only ever changes when a service response arrives, and a
 * sequence counter drops stale responses from overlapping checks.
 */
export class AnnotationSession {
  task: TaskView | null = null;
  input = "";
  badge: ValidityBadge = { kind: "none" };
  offline = false;

  private checkSeq = 0;

  constructor(
    readonly api: ApiClient,
    readonly annotator: string,
    readonly events: SessionEvents = {},
  ) {}

  async loadNext(): Promise<TaskView | null> {
    this.task = await this.api.nextTask(this.annotator);
    this.input = "";
    this.badge = { kind: "none" };
    this.events.onTask?.(this.task);
    this.events.onBadge?.(this.badge);
    return this.task;
  }

  /** Re-fetch the current task (conflict recovery, page reload). */
  async refresh(): Promise<TaskView | null> {
    if (!this.task) return this.loadNext();
    this.task = await this.api.getTask(this.task.id);
    this.events.onTask?.(this.task);
    return this.task;
  }

  setInput(value: string): void {
    this.input = value;
    if (!value.trim()) {
      this.badge = { kind: "none" };
      this.events.onBadge?.(this.badge);
    }
  }

  get canCommit(): boolean {
    return this.task !== null && this.input.trim().length > 0;
  }

  /** Ask the service whether the typed synonym is valid (no commit). */
  async checkValidity(): Promise<ValidityBadge> {
    if (!this.task || !this.input.trim()) return this.badge;
    const seq = ++this.checkSeq;
    this.badge = { kind: "checking" };
    this.events.onBadge?.(this.badge);
    try {
      const resp = await this.api.previewProposal(
        this.task.id,
        this.annotator,
        this.input.trim(),
      );
      this.setOffline(false);
      if (seq === this.checkSeq) {
        this.badge = badgeFromResponse(resp);
        this.events.onBadge?.(this.badge);
      }
    } catch (err) {
      if (err instanceof ApiError) {
        // e.g. synonym equals original: surface as invalid, not a crash
        if (seq === this.checkSeq) {
          this.badge = { kind: "invalid", synonymAoa: null, originalAoa: null };
          this.events.onBadge?.(this.badge);
        }
      } else {
        this.setOffline(true); // typed input is untouched
      }
    }
    return this.badge;
  }

  /**
   * Commit the proposal. Invalid synonyms do not commit (the task stays
   * open server-side); conflicts trigger a refresh so the view reflects
   * the service again.
   */
  async commit(): Promise<ProposeResponse | null> {
    if (!this.task || !this.canCommit) return null;
    try {
      const resp = await this.api.commitProposal(
        this.task.id,
        this.annotator,
        this.input.trim(),
        this.task.version,
      );
      this.setOffline(false);
      this.task = resp.task;
      this.badge = badgeFromResponse(resp);
      this.events.onTask?.(this.task);
      this.events.onBadge?.(this.badge);
      return resp;
    } catch (err) {
      if (err instanceof ApiError && err.isConflict) {
        this.events.onConflict?.(err.message);
        await this.refresh();
        return null;
      }
      if (err instanceof ApiError) throw err;
      this.setOffline(true);
      return null;
    }
  }

  private setOffline(offline: boolean): void {
    if (this.offline !== offline) {
      this.offline = offline;
      this.events.onOffline?.(offline);
    }
  }
}

/** Reviewer session: verdicts go straight to the service. */
export class ReviewSession {
  task: TaskView | null = null;

  constructor(
    readonly api: ApiClient,
    readonly reviewer: string,
    readonly events: SessionEvents = {},
  ) {}

  async load(taskId: string): Promise<TaskView> {
    this.task = await this.api.getTask(taskId);
    this.events.onTask?.(this.task);
    return this.task;
  }

  panes(): { original: string; substituted: string } | null {
    if (!this.task || !this.task.proposal) return null;
    return {
      original: this.task.sentence,
      substituted: substitutedSentence(this.task, this.task.proposal.synonym),
    };
  }

  async submit(
    verdict: "accept" | "reject",
    note = "",
  ): Promise<TaskView | null> {
    if (!this.task) return null;
    if (verdict === "reject" && !note.trim()) {
      throw new Error("a note is required to reject");
    }
    try {
      const out = await this.api.review(
        this.task.id,
        this.reviewer,
        verdict,
        note,
        this.task.version,
      );
      this.task = out.task;
      this.events.onTask?.(this.task);
      return this.task;
    } catch (err) {
      if (err instanceof ApiError && err.isConflict) {
        this.events.onConflict?.(err.message);
        this.task = await this.api.getTask(this.task.id);
        this.events.onTask?.(this.task);
        return null;
      }
      throw err;
    }
  }
}
