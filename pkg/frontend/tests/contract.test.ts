/**
 * Contract tests against a live annotation service (spawned in
 * globalSetup). Validity verdicts, conflicts, and review rules are all
 * asserted as service behavior; the client only projects responses.
 */

import { beforeAll, describe, expect, inject, test } from "vitest";
import { ApiClient, ApiError, type TaskView } from "../src/api.js";
import {
  AnnotationSession,
  badgeFromResponse,
  ReviewSession,
  sentenceParts,
  substitutedSentence,
} from "../src/view.js";

// AoA values from the fixture lexicon (tests/data/lexicon.csv); used only
// to decide what the service SHOULD answer, never to compute UI state.
const AOA: Record<string, number> = {
  enormous: 9.5, magnificent: 10.2, luminous: 11.0, gargantuan: 12.0,
  melancholy: 11.5, resplendent: 12.5, trudge: 9.4, exquisite: 11.2,
  iridescent: 12.8, sumptuous: 12.2, verdant: 12.9, obsidian: 11.8,
  crystalline: 11.4, gigantic: 9.2, colossal: 10.8, ponderous: 12.4,
  big: 2.9, sad: 2.8, huge: 4.5, walk: 2.5, green: 3.2,
};

const VALID_SYNONYM = "big"; // AoA 2.9, below every complex original

function invalidSynonymFor(word: string): string | null {
  const origAoa = AOA[word];
  if (origAoa === undefined) return null;
  for (const [w, a] of Object.entries(AOA)) {
    if (w !== word && a >= origAoa) return w;
  }
  return null;
}

let baseUrl: string;

beforeAll(() => {
  baseUrl = inject("baseUrl");
});

function client(): ApiClient {
  return new ApiClient(baseUrl);
}

describe("propose with live validity", () => {
  test("preview verdicts come from the service and match the lexicon", async () => {
    const session = new AnnotationSession(client(), "alice");
    const task = await session.loadNext();
    expect(task).not.toBeNull();
    expect(AOA[task!.word]).toBeGreaterThan(6.0);

    session.setInput(VALID_SYNONYM);
    const validBadge = await session.checkValidity();
    expect(validBadge.kind).toBe("valid");

    session.setInput("zzxqj"); // not in the lexicon
    const unknownBadge = await session.checkValidity();
    expect(unknownBadge.kind).toBe("unknown-aoa");

    // previews never move the task
    const fresh = await client().getTask(task!.id);
    expect(fresh.status).toBe("open");
    expect(fresh.version).toBe(task!.version);
  });

  test("known-AoA but not simpler reads invalid; commit is refused", async () => {
    const session = new AnnotationSession(client(), "alice");
    let task = await session.loadNext();
    // Skip originals that no lexicon word can invalidate (max-AoA words).
    while (task && invalidSynonymFor(task.word) === null) {
      session.setInput(VALID_SYNONYM);
      await session.commit();
      task = await session.loadNext();
    }
    expect(task).not.toBeNull();
    const badWord = invalidSynonymFor(task!.word)!;

    session.setInput(badWord);
    const badge = await session.checkValidity();
    expect(badge.kind).toBe("invalid");

    const resp = await session.commit();
    expect(resp).not.toBeNull();
    expect(resp!.committed).toBe(false);
    expect((await client().getTask(task!.id)).status).toBe("open");

    // retry with a valid word commits
    session.setInput(VALID_SYNONYM);
    const retry = await session.commit();
    expect(retry!.committed).toBe(true);
    expect(retry!.task.status).toBe("proposed");
  });
});

describe("conflict refresh", () => {
  test("stale commit gets 409 and the session refreshes to service state", async () => {
    const alice = new AnnotationSession(client(), "alice");
    const conflicts: string[] = [];
    const bob = new AnnotationSession(client(), "bob", {
      onConflict: (m) => conflicts.push(m),
    });

    const taskA = await alice.loadNext();
    const taskB = await bob.loadNext();
    expect(taskA!.id).toBe(taskB!.id); // both grabbed the same open task

    alice.setInput(VALID_SYNONYM);
    const committed = await alice.commit();
    expect(committed!.committed).toBe(true);

    bob.setInput("sad");
    const out = await bob.commit();
    expect(out).toBeNull();
    expect(conflicts.length).toBe(1);
    // after the automatic refresh bob sees alice's proposal, not his own
    expect(bob.task!.status).toBe("proposed");
    expect(bob.task!.proposal!.synonym).toBe(VALID_SYNONYM);
    expect(bob.task!.proposal!.annotator_id).toBe("alice");
  });
});

describe("review flow", () => {
  async function proposedTask(): Promise<TaskView> {
    const session = new AnnotationSession(client(), "annie");
    const task = await session.loadNext();
    session.setInput(VALID_SYNONYM);
    const resp = await session.commit();
    return resp!.task;
  }

  test("self-review is blocked by the service", async () => {
    const task = await proposedTask();
    await expect(
      client().review(task.id, "annie", "accept"),
    ).rejects.toMatchObject({ status: 403 });
  });

  test("reject requires a note client-side", async () => {
    const task = await proposedTask();
    const session = new ReviewSession(client(), "rex");
    await session.load(task.id);
    await expect(session.submit("reject", "")).rejects.toThrow(/note/);
    // with a note the verdict lands
    const after = await session.submit("reject", "meaning changed");
    expect(after!.status).toBe("rejected");
  });

  test("two distinct accepts finish the task; panes render substitution", async () => {
    const task = await proposedTask();
    const session = new ReviewSession(client(), "rex");
    await session.load(task.id);

    const panes = session.panes();
    expect(panes).not.toBeNull();
    expect(panes!.original).toBe(task.sentence);
    expect(panes!.substituted).toBe(substitutedSentence(task, VALID_SYNONYM));
    expect(panes!.substituted).toContain(VALID_SYNONYM);
    expect(panes!.substituted).not.toContain(task.word);

    const afterFirst = await session.submit("accept");
    expect(afterFirst!.status).toBe("under_review");
    const second = new ReviewSession(client(), "ruth");
    await second.load(task.id);
    const done = await second.submit("accept");
    expect(done!.status).toBe("accepted");

    const stats = await client().stats();
    expect(stats.accepted).toBeGreaterThanOrEqual(1);
    expect(
      stats.open + stats.proposed + stats.under_review +
        stats.accepted + stats.rejected,
    ).toBe(stats.total);
  });

  test("double review by the same reviewer maps to a conflict", async () => {
    const task = await proposedTask();
    const session = new ReviewSession(client(), "rex");
    await session.load(task.id);
    await session.submit("accept");
    const conflicts: string[] = [];
    const again = new ReviewSession(client(), "rex", {
      onConflict: (m) => conflicts.push(m),
    });
    await again.load(task.id);
    const out = await again.submit("accept");
    expect(out).toBeNull();
    expect(conflicts.length).toBe(1);
  });
});

describe("no divergent state after reload", () => {
  test("a fresh client sees exactly what the session holds", async () => {
    const session = new AnnotationSession(client(), "paula");
    const task = await session.loadNext();
    session.setInput(VALID_SYNONYM);
    await session.checkValidity();
    await session.commit();

    // "reload": brand new client with no shared objects
    const reloaded = await client().getTask(task!.id);
    expect(JSON.parse(JSON.stringify(reloaded))).toEqual(
      JSON.parse(JSON.stringify(session.task)),
    );
  });
});

describe("pure projections", () => {
  const task: TaskView = {
    id: "t1", status: "open", sentence: "The Enormous cat sat.",
    word: "Enormous", span: [4, 12], aoa: 9.5, story_id: "s",
    sentence_idx: 0, proposal: null, reviews: [], version: 0,
  };

  test("sentence parts split at the span", () => {
    expect(sentenceParts(task)).toEqual({
      before: "The ", word: "Enormous", after: " cat sat.",
    });
  });

  test("substitution preserves capitalization", () => {
    expect(substitutedSentence(task, "big")).toBe("The Big cat sat.");
  });

  test("badge mapping follows the response, not local rules", () => {
    expect(badgeFromResponse({
      task, auto_validity: true, committed: false,
      synonym_aoa: 3.0, original_aoa: 9.5,
    }).kind).toBe("valid");
    expect(badgeFromResponse({
      task, auto_validity: false, committed: false,
      synonym_aoa: 12.0, original_aoa: 9.5,
    }).kind).toBe("invalid");
    expect(badgeFromResponse({
      task, auto_validity: false, committed: false,
      synonym_aoa: null, original_aoa: 9.5,
    }).kind).toBe("unknown-aoa");
  });
});
