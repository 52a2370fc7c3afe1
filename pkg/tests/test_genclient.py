import io

import pytest

from storylex.genclient import (
    AuthError,
    GenerationError,
    HttpChatBackend,
    MalformedResponseError,
    MockBackend,
    PROMPT_TEMPLATES,
    RateLimitError,
    generate_batch,
    render_prompt,
)
from storylex.records import StoryRecord

WORDS = ["cat", "dog", "sun", "hat", "mat"]


class TestPrompts:
    def test_preschool_exact_string(self):
        assert render_prompt("preschool", WORDS) == (
            "Write a story for a preschooler containing the following words: "
            "cat, dog, sun, hat, mat")

    def test_child_exact_string(self):
        assert render_prompt("child", WORDS) == (
            "Write a children's story containing the following words: "
            "cat, dog, sun, hat, mat")

    @pytest.mark.parametrize("tid,age", [("3yo", "3-year-old"),
                                         ("4yo", "4-year-old"),
                                         ("5yo", "5-year-old")])
    def test_age_templates(self, tid, age):
        assert render_prompt(tid, WORDS) == (
            f"Write a story for a {age} containing the following words: "
            "cat, dog, sun, hat, mat")

    def test_wrong_word_count_rejected(self):
        with pytest.raises(ValueError):
            render_prompt("preschool", WORDS[:4])

    def test_all_five_templates_exist(self):
        assert set(PROMPT_TEMPLATES) == {"preschool", "3yo", "4yo", "5yo", "child"}


def canned(n=3, prompt="preschool", targets=WORDS):
    return [StoryRecord(id=f"c{i}", model="canned", prompt_id=prompt,
                        target_words=list(targets), text=f"Story number {i}. The end.")
            for i in range(n)]


class TestMockBackend:
    def test_replays_fixture_byte_identical(self):
        mock = MockBackend(canned())
        assert mock.replay("preschool", WORDS) == "Story number 0. The end."

    def test_key_miss_is_error(self):
        mock = MockBackend(canned())
        with pytest.raises(GenerationError, match="no story"):
            mock.replay("child", WORDS)

    def test_two_full_replays_identical(self):
        runs = []
        for _ in range(2):
            mock = MockBackend(canned())
            runs.append([mock.replay("preschool", WORDS) for _ in range(3)])
        assert runs[0] == runs[1]


class FlakyBackend:
    """Fails with rate limits N times, then succeeds."""

    def __init__(self, failures, text="A fine story."):
        self.name = "flaky"
        self.remaining = failures
        self.text = text
        self.calls = 0

    def describe(self):
        return {"backend": self.name}

    def complete(self, prompt):
        self.calls += 1
        if self.remaining > 0:
            self.remaining -= 1
            raise RateLimitError("429")
        return self.text


class TestGenerateBatch:
    def test_bookkeeping_and_targets_roundtrip(self):
        mock = MockBackend(canned(1))
        result = generate_batch(mock, "preschool", [WORDS], n_per_set=10)
        assert len(result.records) == 10
        for rec in result.records:
            assert rec.target_words == WORDS
            assert rec.prompt_id == "preschool"

    def test_incremental_persistence(self):
        buf = io.StringIO()
        mock = MockBackend(canned(2))
        generate_batch(mock, "preschool", [WORDS], n_per_set=2, out=buf)
        lines = [l for l in buf.getvalue().splitlines() if l]
        assert len(lines) == 2

    def test_retry_then_success(self):
        backend = FlakyBackend(failures=2)
        slept = []
        result = generate_batch(backend, "preschool", [WORDS], n_per_set=1,
                                sleep=slept.append)
        assert len(result.records) == 1
        assert backend.calls == 3
        assert result.records[0].meta.get("retries") == 2
        assert slept == [0.5, 1.0]

    def test_retries_exhausted_becomes_failure(self):
        backend = FlakyBackend(failures=99)
        result = generate_batch(backend, "preschool", [WORDS], n_per_set=1,
                                max_retries=3, sleep=lambda s: None)
        assert result.records == []
        assert len(result.failures) == 1
        assert result.failures[0].retries == 3

    def test_empty_text_skipped_and_counted(self):
        backend = FlakyBackend(failures=0, text="   ")
        result = generate_batch(backend, "preschool", [WORDS], n_per_set=1,
                                sleep=lambda s: None)
        assert result.records == []
        assert len(result.failures) == 1

    def test_auth_failure_is_fatal(self):
        class Denied(FlakyBackend):
            def complete(self, prompt):
                raise AuthError("401")
        with pytest.raises(AuthError):
            generate_batch(Denied(0), "preschool", [WORDS], n_per_set=1,
                           sleep=lambda s: None)

    def test_mock_batch_deterministic_across_runs(self):
        outs = []
        for _ in range(2):
            buf = io.StringIO()
            mock = MockBackend(canned(3))
            generate_batch(mock, "preschool", [WORDS], n_per_set=3, out=buf)
            outs.append(buf.getvalue())
        assert outs[0] == outs[1]


class TestHttpBackend:
    def test_rejects_non_url_endpoint(self):
        with pytest.raises(GenerationError, match="not a URL"):
            HttpChatBackend("b", "not-a-url", "m")

    def test_missing_token_env_is_auth_error(self, monkeypatch):
        monkeypatch.delenv("STORYLEX_TEST_TOKEN", raising=False)
        backend = HttpChatBackend("b", "http://localhost:1", "m",
                                  auth_env="STORYLEX_TEST_TOKEN")
        with pytest.raises(AuthError):
            backend.complete("hi")

    def test_status_code_mapping(self):
        class FakeResponse:
            def __init__(self, status, payload=None):
                self.status_code = status
                self._payload = payload
            def json(self):
                if self._payload is None:
                    raise ValueError("no json")
                return self._payload

        class FakeSession:
            def __init__(self, response):
                self._response = response
            def post(self, *a, **kw):
                return self._response

        def build(status, payload=None):
            return HttpChatBackend("b", "http://x", "m",
                                   session=FakeSession(FakeResponse(status, payload)))

        with pytest.raises(AuthError):
            build(401).complete("p")
        with pytest.raises(RateLimitError):
            build(429).complete("p")
        with pytest.raises(RateLimitError):
            build(503).complete("p")
        with pytest.raises(MalformedResponseError):
            build(200, {"nope": 1}).complete("p")
        ok = build(200, {"choices": [{"message": {"content": "hello"}}]})
        assert ok.complete("p") == "hello"
