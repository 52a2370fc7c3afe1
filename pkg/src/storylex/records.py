"""StoryRecord plus line-delimited record IO shared across the pipeline."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator


@dataclass
class StoryRecord:
    id: str
    model: str
    prompt_id: str
    target_words: list[str]
    text: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.target_words) != 5:
            raise ValueError(
                f"story {self.id!r} needs exactly 5 target words, got {len(self.target_words)}")

    def to_json(self) -> str:
        return json.dumps({
            "id": self.id, "model": self.model, "prompt_id": self.prompt_id,
            "target_words": self.target_words, "text": self.text, "meta": self.meta,
        }, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "StoryRecord":
        raw = json.loads(line)
        return cls(id=raw["id"], model=raw["model"], prompt_id=raw["prompt_id"],
                   target_words=list(raw["target_words"]), text=raw["text"],
                   meta=raw.get("meta", {}))


def read_story_records(path: str | Path) -> list[StoryRecord]:
    records = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = StoryRecord.from_json(line)
            except (json.JSONDecodeError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: bad story record: {exc}") from exc
            if rec.id in seen:
                raise ValueError(f"{path}:{lineno}: duplicate story id {rec.id!r}")
            seen.add(rec.id)
            records.append(rec)
    return records


def write_story_records(records: Iterable[StoryRecord], out: IO[str] | str | Path) -> int:
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8") as fh:
            return write_story_records(records, fh)
    n = 0
    for rec in records:
        out.write(rec.to_json() + "\n")
        n += 1
    return n


def read_jsonl(path: str | Path) -> Iterator[dict]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)


def write_jsonl(rows: Iterable[dict], out: IO[str] | str | Path) -> int:
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8") as fh:
            return write_jsonl(rows, fh)
    n = 0
    for row in rows:
        out.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")
        n += 1
    return n
