"""Annotation task store: state machine plus append-only event log.

Tasks move open -> proposed -> under_review -> accepted, with rejected as
the other terminal state. Acceptance requires two accept verdicts from
distinct reviewers, neither of whom authored the proposal, and only
AoA-valid proposals (synonym acquired earlier than the original) ever
leave the open state, so every exported gold row is valid by construction.

State is rebuilt by replaying the event log, which makes crash recovery
trivial and every annotation decision auditable.
"""

from __future__ import annotations

import json
import random
import threading
from dataclasses import dataclass, field
from pathlib import Path

from ..evalharness import SimplificationInstance
from ..lexicon import Lexicon
from ..simplify import ComplexSpan

OPEN = "open"
PROPOSED = "proposed"
UNDER_REVIEW = "under_review"
ACCEPTED = "accepted"
REJECTED = "rejected"
TERMINAL = (ACCEPTED, REJECTED)


class AnnotationError(Exception):
    """Invalid request (bad input, unknown task)."""


class StateConflictError(AnnotationError):
    """Write rejected: stale version, terminal task, or duplicate action."""


@dataclass
class AnnotationTask:
    id: str
    instance: ComplexSpan
    status: str = OPEN
    proposal: dict | None = None        # synonym, annotator_id, auto_validity
    reviews: list[dict] = field(default_factory=list)
    version: int = 0

    def view(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "sentence": self.instance.sentence,
            "word": self.instance.word,
            "span": list(self.instance.span),
            "aoa": self.instance.aoa,
            "story_id": self.instance.story_id,
            "sentence_idx": self.instance.sentence_idx,
            "proposal": self.proposal,
            "reviews": self.reviews,
            "version": self.version,
        }


def _span_key(span: ComplexSpan) -> tuple:
    return (span.story_id, span.sentence, span.word.lower(), span.span)


class AnnotationStore:
    def __init__(self, lexicon: Lexicon, state_dir: str | Path | None = None,
                 seed: int = 0):
        self.lexicon = lexicon
        self.seed = seed
        self._lock = threading.RLock()
        self.tasks: dict[str, AnnotationTask] = {}
        self.order: list[str] = []          # presentation order
        self._span_keys: set[tuple] = set()
        self._log_path: Path | None = None
        if state_dir is not None:
            state_dir = Path(state_dir)
            state_dir.mkdir(parents=True, exist_ok=True)
            self._log_path = state_dir / "events.jsonl"
            self._replay()

    # -- persistence -------------------------------------------------------

    def _append_event(self, event: dict) -> None:
        if self._log_path is None:
            return
        with open(self._log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False, sort_keys=True) + "\n")

    def _replay(self) -> None:
        if self._log_path is None or not self._log_path.exists():
            return
        with open(self._log_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self._apply(json.loads(line), replay=True)

    def _apply(self, event: dict, replay: bool = False) -> None:
        kind = event["event"]
        if kind == "enqueued":
            spans = [ComplexSpan(sentence=s["sentence"], word=s["word"],
                                 span=(s["start"], s["end"]), aoa=s["aoa"],
                                 norm=s.get("norm", ""),
                                 story_id=s.get("story_id", ""),
                                 sentence_idx=s.get("sentence_idx", 0))
                     for s in event["spans"]]
            self._enqueue(spans, record=False)
        elif kind == "proposed":
            task = self.tasks[event["task_id"]]
            task.proposal = {"synonym": event["synonym"],
                             "annotator_id": event["annotator_id"],
                             "auto_validity": True}
            task.status = PROPOSED
            task.version += 1
        elif kind == "withdrawn":
            task = self.tasks[event["task_id"]]
            task.proposal = None
            task.status = OPEN
            task.version += 1
        elif kind == "reviewed":
            task = self.tasks[event["task_id"]]
            task.reviews.append({"reviewer_id": event["reviewer_id"],
                                 "verdict": event["verdict"],
                                 "note": event.get("note", "")})
            task.status = event["new_status"]
            task.version += 1
        elif kind == "propose_rejected":
            pass        # audit trail only, no state change
        else:
            raise AnnotationError(f"unknown event kind {kind!r}")

    # -- operations --------------------------------------------------------

    def enqueue(self, spans: list[ComplexSpan]) -> list[str]:
        """One open task per deduplicated span; presentation order is a
        seed-fixed shuffle."""
        with self._lock:
            if not spans:
                raise AnnotationError("cannot enqueue an empty span list")
            fresh_keys = set()
            for span in spans:
                key = _span_key(span)
                if key in self._span_keys or key in fresh_keys:
                    raise AnnotationError(
                        f"duplicate span for word {span.word!r}")
                fresh_keys.add(key)
            ids = self._enqueue(spans, record=True)
            return ids

    def _enqueue(self, spans: list[ComplexSpan], record: bool) -> list[str]:
        start = len(self.tasks)
        ids = []
        for i, span in enumerate(spans):
            task_id = f"t{start + i:05d}"
            self.tasks[task_id] = AnnotationTask(id=task_id, instance=span)
            self._span_keys.add(_span_key(span))
            ids.append(task_id)
        # Fixed-seed shuffle of the whole queue keeps presentation random
        # but reproducible across restarts.
        self.order = sorted(self.tasks)
        random.Random(self.seed).shuffle(self.order)
        if record:
            self._append_event({"event": "enqueued",
                                "spans": [s.as_dict() | {"norm": s.norm}
                                          for s in spans]})
        return ids

    def get(self, task_id: str) -> AnnotationTask:
        task = self.tasks.get(task_id)
        if task is None:
            raise AnnotationError(f"unknown task {task_id!r}")
        return task

    def next_open(self, annotator_id: str | None = None) -> AnnotationTask | None:
        with self._lock:
            for task_id in self.order:
                if self.tasks[task_id].status == OPEN:
                    return self.tasks[task_id]
            return None

    def check_validity(self, task: AnnotationTask, synonym: str) -> tuple[bool, dict]:
        """AoA(synonym) < AoA(original); a lexicon miss cannot be certified."""
        syn = self.lexicon.lookup(synonym)
        orig = self.lexicon.lookup(task.instance.word)
        valid = syn is not None and orig is not None and syn[0] < orig[0]
        return valid, {
            "synonym_aoa": syn[0] if syn else None,
            "original_aoa": orig[0] if orig else None,
        }

    def propose(self, task_id: str, annotator_id: str, synonym: str,
                preview: bool = False, expected_version: int | None = None) -> dict:
        with self._lock:
            task = self.get(task_id)
            synonym = synonym.strip().lower()
            if not annotator_id:
                raise AnnotationError("annotator id required")
            if not synonym:
                raise AnnotationError("empty synonym")
            if synonym == task.instance.word.strip().lower():
                raise AnnotationError("synonym equals the original word")
            validity, aoa_info = self.check_validity(task, synonym)
            if preview:
                return {"task": task.view(), "auto_validity": validity,
                        "committed": False, **aoa_info}
            if task.status in TERMINAL:
                raise StateConflictError(f"task {task_id} is {task.status}")
            if task.status != OPEN:
                raise StateConflictError(f"task {task_id} already has a proposal")
            if expected_version is not None and expected_version != task.version:
                raise StateConflictError(
                    f"stale write: version {expected_version} != {task.version}")
            if not validity:
                # Invalid proposals never commit; the task stays open for retry.
                self._append_event({"event": "propose_rejected",
                                    "task_id": task_id,
                                    "annotator_id": annotator_id,
                                    "synonym": synonym})
                return {"task": task.view(), "auto_validity": False,
                        "committed": False, **aoa_info}
            task.proposal = {"synonym": synonym, "annotator_id": annotator_id,
                             "auto_validity": True}
            task.status = PROPOSED
            task.version += 1
            self._append_event({"event": "proposed", "task_id": task_id,
                                "annotator_id": annotator_id, "synonym": synonym})
            return {"task": task.view(), "auto_validity": True,
                    "committed": True, **aoa_info}

    def withdraw(self, task_id: str, annotator_id: str) -> dict:
        with self._lock:
            task = self.get(task_id)
            if task.status != PROPOSED:
                raise StateConflictError(
                    f"task {task_id} has no withdrawable proposal")
            if task.proposal["annotator_id"] != annotator_id:
                raise AnnotationError("only the proposer may withdraw")
            task.proposal = None
            task.status = OPEN
            task.version += 1
            self._append_event({"event": "withdrawn", "task_id": task_id,
                                "annotator_id": annotator_id})
            return {"task": task.view()}

    def review(self, task_id: str, reviewer_id: str, verdict: str,
               note: str = "", expected_version: int | None = None) -> dict:
        with self._lock:
            task = self.get(task_id)
            if verdict not in ("accept", "reject"):
                raise AnnotationError("verdict must be accept or reject")
            if not reviewer_id:
                raise AnnotationError("reviewer id required")
            if task.status in TERMINAL:
                raise StateConflictError(f"task {task_id} is {task.status}")
            if task.status not in (PROPOSED, UNDER_REVIEW):
                raise StateConflictError(f"task {task_id} has no proposal to review")
            if expected_version is not None and expected_version != task.version:
                raise StateConflictError(
                    f"stale write: version {expected_version} != {task.version}")
            if reviewer_id == task.proposal["annotator_id"]:
                raise AnnotationError("annotators cannot review their own proposal")
            if any(r["reviewer_id"] == reviewer_id for r in task.reviews):
                raise StateConflictError(f"{reviewer_id} already reviewed {task_id}")

            if verdict == "reject":
                new_status = REJECTED
            else:
                accepts = sum(r["verdict"] == "accept" for r in task.reviews) + 1
                new_status = ACCEPTED if accepts >= 2 else UNDER_REVIEW
            task.reviews.append({"reviewer_id": reviewer_id, "verdict": verdict,
                                 "note": note})
            task.status = new_status
            task.version += 1
            self._append_event({"event": "reviewed", "task_id": task_id,
                                "reviewer_id": reviewer_id, "verdict": verdict,
                                "note": note, "new_status": new_status})
            return {"task": task.view()}

    def export_cds(self) -> list[SimplificationInstance]:
        """Accepted tasks in deterministic (story id, span offset) order."""
        with self._lock:
            accepted = [t for t in self.tasks.values() if t.status == ACCEPTED]
            if not accepted:
                raise AnnotationError("zero accepted tasks; nothing to export")
            accepted.sort(key=lambda t: (t.instance.story_id,
                                         t.instance.sentence_idx,
                                         t.instance.span, t.id))
            return [SimplificationInstance(
                id=t.id,
                sentence=t.instance.sentence,
                complex_word=t.instance.word,
                gold=(t.proposal["synonym"],),
                story_id=t.instance.story_id,
            ) for t in accepted]

    def stats(self) -> dict:
        with self._lock:
            counts = {s: 0 for s in (OPEN, PROPOSED, UNDER_REVIEW, ACCEPTED, REJECTED)}
            for task in self.tasks.values():
                counts[task.status] += 1
            counts["total"] = len(self.tasks)
            return counts
