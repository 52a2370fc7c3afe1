/**
 * DOM wiring for the annotation SPA. Two panels (annotate, review) backed
 * by the session classes; everything rendered is a service response.
 * Keyboard: Enter commits, a/r accept/reject in the review panel.
 */

import { ApiClient, TaskView } from "./api.js";
import {
  AnnotationSession,
  ReviewSession,
  sentenceParts,
  ValidityBadge,
} from "./view.js";

const DEBOUNCE_MS = 250;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function renderSentence(target: HTMLElement, task: TaskView): void {
  const parts = sentenceParts(task);
  target.replaceChildren();
  target.append(parts.before);
  const mark = document.createElement("mark");
  mark.className = "complex-word";
  mark.textContent = parts.word;
  target.append(mark);
  target.append(parts.after);
}

function renderBadge(target: HTMLElement, badge: ValidityBadge): void {
  const labels: Record<ValidityBadge["kind"], string> = {
    none: "",
    checking: "checking…",
    valid: "valid",
    invalid: "invalid",
    "unknown-aoa": "unknown AoA",
  };
  target.textContent = labels[badge.kind];
  target.dataset.state = badge.kind;
  if (badge.kind === "valid" || badge.kind === "invalid") {
    const syn = badge.synonymAoa?.toFixed(1) ?? "?";
    const orig = badge.originalAoa?.toFixed(1) ?? "?";
    target.title = `synonym AoA ${syn} vs original ${orig}`;
  } else {
    target.title = "";
  }
}

async function refreshProgress(api: ApiClient): Promise<void> {
  const stats = await api.stats();
  const bar = el<HTMLProgressElement>("progress-bar");
  bar.max = stats.total || 1;
  bar.value = stats.accepted;
  el("progress-text").textContent =
    `${stats.accepted} / ${stats.total} accepted`;
}

function setupAnnotator(api: ApiClient, user: string): AnnotationSession {
  const sentence = el("annotate-sentence");
  const aoaLabel = el("annotate-aoa");
  const input = el<HTMLInputElement>("synonym-input");
  const badge = el("validity-badge");
  const commit = el<HTMLButtonElement>("commit-btn");
  const banner = el("banner");

  const session = new AnnotationSession(api, user, {
    onTask(task) {
      if (!task) {
        sentence.textContent = "No open tasks. All done!";
        aoaLabel.textContent = "";
        commit.disabled = true;
        return;
      }
      renderSentence(sentence, task);
      aoaLabel.textContent = `"${task.word}" has age of acquisition ${task.aoa.toFixed(1)}`;
      input.value = "";
      commit.disabled = true;
      input.focus();
    },
    onBadge(b) {
      renderBadge(badge, b);
      commit.disabled = !session.canCommit;
    },
    onConflict(message) {
      banner.textContent = `Task changed elsewhere (${message}); refreshed.`;
      banner.dataset.kind = "conflict";
    },
    onOffline(offline) {
      banner.textContent = offline
        ? "Offline. Your input is kept; retry when connected."
        : "";
      banner.dataset.kind = offline ? "offline" : "";
    },
  });

  let timer: ReturnType<typeof setTimeout> | undefined;
  input.addEventListener("input", () => {
    session.setInput(input.value);
    commit.disabled = !session.canCommit;
    if (timer) clearTimeout(timer);
    timer = setTimeout(() => void session.checkValidity(), DEBOUNCE_MS);
  });
  input.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter" && !commit.disabled) void doCommit();
  });
  commit.addEventListener("click", () => void doCommit());

  async function doCommit(): Promise<void> {
    const resp = await session.commit();
    if (resp?.committed) {
      banner.textContent = `Committed "${resp.task.proposal?.synonym}".`;
      banner.dataset.kind = "ok";
      await refreshProgress(api);
      await session.loadNext();
    } else if (resp && !resp.auto_validity) {
      banner.textContent = "Synonym is not AoA-valid; try another word.";
      banner.dataset.kind = "invalid";
    }
  }

  return session;
}

function setupReviewer(api: ApiClient, user: string): ReviewSession {
  const original = el("review-original");
  const substituted = el("review-substituted");
  const note = el<HTMLInputElement>("review-note");
  const banner = el("banner");

  const session = new ReviewSession(api, user, {
    onTask(task) {
      if (!task) return;
      const panes = session.panes();
      if (panes) {
        original.textContent = panes.original;
        substituted.textContent = panes.substituted;
      }
      el("review-status").textContent = task.status;
    },
    onConflict(message) {
      banner.textContent = `Review conflict (${message}); refreshed.`;
      banner.dataset.kind = "conflict";
    },
  });

  async function verdict(kind: "accept" | "reject"): Promise<void> {
    try {
      await session.submit(kind, note.value);
      await refreshProgress(api);
    } catch (err) {
      banner.textContent = err instanceof Error ? err.message : String(err);
      banner.dataset.kind = "error";
    }
  }

  el("accept-btn").addEventListener("click", () => void verdict("accept"));
  el("reject-btn").addEventListener("click", () => void verdict("reject"));
  document.addEventListener("keydown", (ev) => {
    if (document.activeElement === note) return;
    if (ev.key === "a") void verdict("accept");
    if (ev.key === "r") void verdict("reject");
  });
  el<HTMLInputElement>("review-task-id").addEventListener("change", (ev) => {
    const id = (ev.target as HTMLInputElement).value.trim();
    if (id) void session.load(id);
  });

  return session;
}

export function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const user = params.get("user") ?? "anonymous";
  const token = params.get("token") ?? undefined;
  const api = new ApiClient("", token);

  const annotator = setupAnnotator(api, user);
  setupReviewer(api, user);
  void refreshProgress(api);
  void annotator.loadNext();

  el("whoami").textContent = user;
  document.querySelectorAll<HTMLButtonElement>("[data-panel]").forEach((btn) =>
    btn.addEventListener("click", () => {
      document
        .querySelectorAll<HTMLElement>(".panel")
        .forEach((p) => (p.hidden = p.id !== btn.dataset.panel));
    }),
  );
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot();
}
