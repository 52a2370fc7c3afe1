"""Prompt construction and story generation against pluggable backends.

One wire protocol covers every hosted model: a chat-completion HTTP
endpoint with a configurable base URL, model id, and bearer token taken
from an environment variable (the token never touches disk or logs).
A mock backend replays canned stories keyed by (template, target words)
so the whole generation pipeline runs offline and bit-stable.
"""

from __future__ import annotations

import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Callable, Sequence

import requests

from .records import StoryRecord, read_story_records


class GenerationError(Exception):
    pass


class AuthError(GenerationError):
    pass


class RateLimitError(GenerationError):
    pass


class MalformedResponseError(GenerationError):
    pass


@dataclass(frozen=True)
class PromptTemplate:
    id: str
    pattern: str    # contains one {words} slot

    def render(self, targets: Sequence[str]) -> str:
        if len(targets) != 5:
            raise ValueError(f"need exactly 5 target words, got {len(targets)}")
        return self.pattern.format(words=", ".join(targets))


PROMPT_TEMPLATES = {
    "preschool": PromptTemplate(
        "preschool",
        "Write a story for a preschooler containing the following words: {words}"),
    "3yo": PromptTemplate(
        "3yo",
        "Write a story for a 3-year-old containing the following words: {words}"),
    "4yo": PromptTemplate(
        "4yo",
        "Write a story for a 4-year-old containing the following words: {words}"),
    "5yo": PromptTemplate(
        "5yo",
        "Write a story for a 5-year-old containing the following words: {words}"),
    "child": PromptTemplate(
        "child",
        "Write a children's story containing the following words: {words}"),
}


def render_prompt(template: PromptTemplate | str, targets: Sequence[str]) -> str:
    if isinstance(template, str):
        template = PROMPT_TEMPLATES[template]
    return template.render(targets)


class HttpChatBackend:
    """Chat-completion client: POST {endpoint}/chat/completions."""

    def __init__(self, name: str, endpoint: str, model: str,
                 auth_env: str | None = None, params: dict | None = None,
                 timeout: float = 60.0, session: requests.Session | None = None):
        if "://" not in endpoint:
            raise GenerationError(f"backend endpoint is not a URL: {endpoint!r}")
        self.name = name
        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self.auth_env = auth_env
        self.params = {"temperature": 1.0, "max_tokens": 1024, **(params or {})}
        self.timeout = timeout
        self.session = session or requests.Session()

    def describe(self) -> dict:
        return {"backend": self.name, "model": self.model, **self.params}

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        if self.auth_env:
            token = os.environ.get(self.auth_env)
            if not token:
                raise AuthError(f"environment variable {self.auth_env} is not set")
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def complete(self, prompt: str) -> str:
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            **self.params,
        }
        try:
            resp = self.session.post(f"{self.endpoint}/chat/completions",
                                     json=body, headers=self._headers(),
                                     timeout=self.timeout)
        except requests.RequestException as exc:
            raise RateLimitError(f"transport failure: {exc}") from exc
        if resp.status_code in (401, 403):
            raise AuthError(f"auth rejected by {self.name} ({resp.status_code})")
        if resp.status_code == 429 or resp.status_code >= 500:
            raise RateLimitError(f"{self.name} returned {resp.status_code}")
        if resp.status_code != 200:
            raise MalformedResponseError(f"{self.name} returned {resp.status_code}")
        try:
            text = resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise MalformedResponseError(f"unparseable response from {self.name}") from exc
        if not isinstance(text, str) or not text.strip():
            raise MalformedResponseError(f"empty completion from {self.name}")
        return text


class MockBackend:
    """Replays a canned corpus, keyed by (prompt_id, target words)."""

    def __init__(self, corpus: Sequence[StoryRecord], name: str = "mock"):
        self.name = name
        self._by_key: dict[tuple[str, tuple[str, ...]], list[str]] = {}
        self._cursor: dict[tuple[str, tuple[str, ...]], int] = {}
        self._lock = threading.Lock()
        for rec in corpus:
            key = (rec.prompt_id, tuple(rec.target_words))
            self._by_key.setdefault(key, []).append(rec.text)

    @classmethod
    def from_file(cls, path: str | Path, name: str = "mock") -> "MockBackend":
        return cls(read_story_records(path), name=name)

    def describe(self) -> dict:
        return {"backend": self.name}

    def replay(self, prompt_id: str, targets: Sequence[str]) -> str:
        key = (prompt_id, tuple(targets))
        texts = self._by_key.get(key)
        if not texts:
            raise GenerationError(f"mock backend has no story for {key!r}")
        with self._lock:
            i = self._cursor.get(key, 0)
            self._cursor[key] = i + 1
        return texts[i % len(texts)]


def mock_backend(corpus: Sequence[StoryRecord]) -> MockBackend:
    return MockBackend(corpus)


@dataclass
class GenerationFailure:
    prompt_id: str
    targets: list[str]
    error: str
    retries: int


@dataclass
class BatchResult:
    records: list[StoryRecord]
    failures: list[GenerationFailure] = field(default_factory=list)


def _call_with_retries(fn: Callable[[], str], max_retries: int,
                       sleep: Callable[[float], None]) -> tuple[str, int]:
    retries = 0
    while True:
        try:
            return fn(), retries
        except RateLimitError:
            if retries >= max_retries:
                raise
            sleep(min(0.5 * 2 ** retries, 8.0))
            retries += 1


def generate_batch(backend, template: PromptTemplate | str,
                   target_sets: Sequence[Sequence[str]], n_per_set: int = 1,
                   out: IO[str] | None = None, max_retries: int = 3,
                   concurrency: int = 4,
                   sleep: Callable[[float], None] = time.sleep) -> BatchResult:
    """One StoryRecord per completed call; failures are recorded, auth
    failures abort. Records are persisted to `out` incrementally in request
    order, which keeps mock runs byte-stable."""
    if isinstance(template, str):
        template = PROMPT_TEMPLATES[template]
    jobs = []
    for set_idx, targets in enumerate(target_sets):
        targets = list(targets)
        prompt = template.render(targets)   # validates the 5-word shape
        for rep in range(n_per_set):
            jobs.append((set_idx, rep, targets, prompt))

    is_mock = isinstance(backend, MockBackend)
    write_lock = threading.Lock()

    def run(job):
        set_idx, rep, targets, prompt = job
        if is_mock:
            call = lambda: backend.replay(template.id, targets)
        else:
            call = lambda: backend.complete(prompt)
        text, retries = _call_with_retries(call, max_retries, sleep)
        if not text.strip():
            raise MalformedResponseError("backend returned empty text")
        meta = dict(backend.describe())
        if retries:
            meta["retries"] = retries
        if not is_mock:
            meta["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        return StoryRecord(
            id=f"{backend.name}-{template.id}-{set_idx:03d}-{rep:02d}",
            model=backend.name, prompt_id=template.id,
            target_words=targets, text=text, meta=meta)

    result = BatchResult(records=[])
    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        futures = [(job, pool.submit(run, job)) for job in jobs]
        for job, fut in futures:
            set_idx, rep, targets, _ = job
            try:
                rec = fut.result()
            except AuthError:
                raise
            except GenerationError as exc:
                result.failures.append(GenerationFailure(
                    prompt_id=template.id, targets=targets,
                    error=str(exc), retries=max_retries))
                continue
            result.records.append(rec)
            if out is not None:
                with write_lock:
                    out.write(rec.to_json() + "\n")
                    out.flush()
    return result


def load_backend_config(path: str | Path):
    """Backend from a JSON config: {"type": "http"|"mock", ...}."""
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    return backend_from_config(cfg, base_dir=Path(path).parent)


def backend_from_config(cfg: dict, base_dir: Path | None = None):
    kind = cfg.get("type", "http")
    if kind == "mock":
        corpus_path = Path(cfg["corpus"])
        if base_dir is not None and not corpus_path.is_absolute():
            corpus_path = base_dir / corpus_path
        return MockBackend.from_file(corpus_path, name=cfg.get("name", "mock"))
    if kind == "http":
        return HttpChatBackend(
            name=cfg.get("name", "backend"),
            endpoint=cfg["endpoint"],
            model=cfg.get("model", ""),
            auth_env=cfg.get("auth_env"),
            params=cfg.get("params"),
        )
    raise GenerationError(f"unknown backend type {kind!r}")
