"""Access to a generative-text backend, with record/replay fixtures.

All backends sit behind CompletionClient, which owns stop-sequence
truncation, the request timeout, and prompt cancellation. A fixture
store keyed by (prompt digest, attempt tag) makes every test and demo
fully deterministic without a live model.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import httpx

from .errors import BackendUnavailable, MissingFixture, RecordingDisabled

FINISH_STOP = "stop_sequence"
FINISH_LENGTH = "length"
FINISH_CANCELLED = "cancelled"
FINISH_ERROR = "error"

DEFAULT_TIMEOUT_S = 30.0
DEFAULT_POLL_INTERVAL_S = 0.05


@dataclass(frozen=True)
class GenerationRequest:
    prompt_text: str
    max_tokens: int = 64
    temperature: float = 0.7
    stop_sequences: tuple[str, ...] = ()
    # Varies across regeneration attempts so fixtures can return different
    # completions for the same rendered prompt.
    attempt_tag: str = "0"

    def __post_init__(self):
        if not self.prompt_text:
            raise ValueError("prompt_text must not be empty")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be at least 1")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be in [0, 2]")


@dataclass(frozen=True)
class Completion:
    text: str
    latency_s: float
    backend_id: str
    finish_reason: str
    error: str | None = None


class CancellationToken:
    """Thread-safe flag a caller sets to abandon an in-flight generation."""

    def __init__(self):
        self._event = threading.Event()

    def cancel(self):
        self._event.set()

    def cancelled(self) -> bool:
        return self._event.is_set()


def normalize_prompt(text: str) -> str:
    """Normalize newlines (CRLF to LF) and strip trailing spaces per line."""
    lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
    return "\n".join(line.rstrip(" \t") for line in lines)


def prompt_digest(text: str) -> str:
    """Platform-stable digest of the normalized prompt text."""
    return hashlib.sha256(normalize_prompt(text).encode("utf-8")).hexdigest()


def truncate_at_stops(text: str, stops: tuple[str, ...]) -> tuple[str, bool]:
    cut = len(text)
    for stop in stops:
        pos = text.find(stop)
        if pos != -1:
            cut = min(cut, pos)
    return text[:cut], cut < len(text)


class Backend(Protocol):
    backend_id: str

    def complete(self, request: GenerationRequest) -> tuple[str, str]:
        """Return (raw completion text, finish reason)."""
        ...


@dataclass
class FixtureStore:
    """Map of "digest:attempt_tag" to completion text.

    Replay is total for recorded keys; a lookup miss while not recording
    raises MissingFixture rather than inventing output.
    """

    entries: dict[str, str] = field(default_factory=dict)
    recording: bool = False

    @staticmethod
    def key(digest: str, attempt_tag: str) -> str:
        return f"{digest}:{attempt_tag}"

    @classmethod
    def load(cls, path: str | Path, recording: bool = False) -> "FixtureStore":
        try:
            raw = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise MissingFixture(f"Could not read fixture file {path}: {exc}") from exc
        entries = json.loads(raw)
        if not isinstance(entries, dict):
            raise MissingFixture(f"Fixture file {path} is not a JSON object.")
        return cls(entries=entries, recording=recording)

    def save(self, path: str | Path):
        """Write the store atomically as UTF-8 JSON with LF newlines."""
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps(self.entries, ensure_ascii=False, indent=2, sort_keys=True)
        tmp = target.with_name(target.name + ".tmp")
        with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(payload + "\n")
        os.replace(tmp, target)

    def get(self, prompt_text: str, attempt_tag: str) -> str:
        key = self.key(prompt_digest(prompt_text), attempt_tag)
        if key not in self.entries:
            raise MissingFixture(
                f"No recorded completion for attempt '{attempt_tag}' of this prompt."
            )
        return self.entries[key]

    def put(self, prompt_text: str, attempt_tag: str, completion_text: str):
        self.entries[self.key(prompt_digest(prompt_text), attempt_tag)] = completion_text

    def __len__(self) -> int:
        return len(self.entries)


class FixtureBackend:
    """Deterministic replay backend serving recorded completions."""

    def __init__(self, store: FixtureStore):
        self.store = store
        self.backend_id = "fixture"

    def complete(self, request: GenerationRequest) -> tuple[str, str]:
        return self.store.get(request.prompt_text, request.attempt_tag), FINISH_STOP


class HTTPBackend:
    """Minimal JSON completion protocol over HTTP.

    POST {prompt, max_tokens, temperature, stop} to the endpoint; expects
    {"text": ..., "finish_reason": ...} back. Subclass and override
    build_payload/extract to adapt other wire formats.
    """

    def __init__(self, url: str, token: str | None = None, connect_timeout_s: float = 10.0):
        self.url = url
        self.token = token
        self.connect_timeout_s = connect_timeout_s
        self.backend_id = f"http:{url}"

    def build_payload(self, request: GenerationRequest) -> dict:
        return {
            "prompt": request.prompt_text,
            "max_tokens": request.max_tokens,
            "temperature": request.temperature,
            "stop": list(request.stop_sequences),
        }

    def extract(self, payload: dict) -> tuple[str, str]:
        return str(payload.get("text", "")), str(payload.get("finish_reason", FINISH_STOP))

    def complete(self, request: GenerationRequest) -> tuple[str, str]:
        headers = {}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        try:
            response = httpx.post(
                self.url,
                json=self.build_payload(request),
                headers=headers,
                timeout=self.connect_timeout_s,
            )
            response.raise_for_status()
            return self.extract(response.json())
        except httpx.HTTPError as exc:
            raise BackendUnavailable(
                "The suggestion backend could not be reached."
            ) from exc
        except (json.JSONDecodeError, ValueError) as exc:
            raise BackendUnavailable(
                "The suggestion backend sent a reply that could not be understood."
            ) from exc


class RecordingBackend:
    """Forwards to a live backend and records each completion."""

    def __init__(self, live: Backend, store: FixtureStore):
        self.live = live
        self.store = store
        self.backend_id = f"record:{live.backend_id}"

    def complete(self, request: GenerationRequest) -> tuple[str, str]:
        if not self.store.recording:
            raise RecordingDisabled("The fixture store is not in recording mode.")
        text, finish_reason = self.live.complete(request)
        self.store.put(request.prompt_text, request.attempt_tag, text)
        return text, finish_reason


def record(request: GenerationRequest, live: Backend, store: FixtureStore) -> Completion:
    """Record one completion into the store and return it."""
    client = CompletionClient(RecordingBackend(live, store))
    return client.generate(request)


class CompletionClient:
    """Runs backend calls with cancellation and timeout guarantees.

    The backend call runs on a worker thread while the caller's thread
    polls the cancellation token, so a cancel is honored within one poll
    interval regardless of how slow the backend is. Once cancelled, the
    backend's eventual result is discarded.
    """

    def __init__(
        self,
        backend: Backend,
        timeout_s: float = DEFAULT_TIMEOUT_S,
        poll_interval_s: float = DEFAULT_POLL_INTERVAL_S,
    ):
        self.backend = backend
        self.timeout_s = timeout_s
        self.poll_interval_s = poll_interval_s

    def generate(
        self, request: GenerationRequest, cancel: CancellationToken | None = None
    ) -> Completion:
        started = time.monotonic()
        if cancel is not None and cancel.cancelled():
            return Completion("", 0.0, self.backend.backend_id, FINISH_CANCELLED)

        box: list = []
        done = threading.Event()

        def run():
            try:
                box.append(("ok", self.backend.complete(request)))
            except Exception as exc:  # re-raised on the caller's thread
                box.append(("err", exc))
            finally:
                done.set()

        worker = threading.Thread(target=run, daemon=True)
        worker.start()

        deadline = started + self.timeout_s
        while not done.wait(self.poll_interval_s):
            if cancel is not None and cancel.cancelled():
                return Completion(
                    "", time.monotonic() - started, self.backend.backend_id, FINISH_CANCELLED
                )
            if time.monotonic() > deadline:
                return Completion(
                    "",
                    time.monotonic() - started,
                    self.backend.backend_id,
                    FINISH_ERROR,
                    error="timeout",
                )
        if cancel is not None and cancel.cancelled():
            return Completion(
                "", time.monotonic() - started, self.backend.backend_id, FINISH_CANCELLED
            )

        outcome, value = box[0]
        if outcome == "err":
            raise value
        text, finish_reason = value
        truncated, stopped = truncate_at_stops(text, request.stop_sequences)
        if stopped:
            finish_reason = FINISH_STOP
        return Completion(
            truncated, time.monotonic() - started, self.backend.backend_id, finish_reason
        )
