import time

import pytest

from promptsmith import templates as tpl
from promptsmith.llm import (
    FINISH_STOP,
    CompletionClient,
    FixtureBackend,
    FixtureStore,
    GenerationRequest,
)
from promptsmith.suggestions import SuggestionConfig, SuggestionService

from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
DEMO_FIXTURES = REPO_ROOT / "fixtures" / "demo.json"
PACK_DIR = REPO_ROOT / "src" / "promptsmith" / "packs" / "builtin"
DEMO_SCRIPT = REPO_ROOT / "demo" / "park_walkthrough.script"
SCHEMA_DIR = REPO_ROOT / "docs"

GOLDEN_PROMPT = (
    "A young man is sitting on a bench near a small tree. "
    "He is wearing a green pullover, oil painting"
)
GOLDEN_SCENE = (
    "A young man is sitting on a bench near a small tree. "
    "He is wearing a green pullover"
)


def load_demo_store() -> FixtureStore:
    return FixtureStore.load(DEMO_FIXTURES)


def demo_client() -> CompletionClient:
    return CompletionClient(FixtureBackend(load_demo_store()))


def demo_service(config: SuggestionConfig | None = None) -> SuggestionService:
    return SuggestionService(demo_client(), config)


def store_from(entries: dict[tuple[str, tuple[str, ...]], dict[str, str]]) -> FixtureStore:
    """Build a fixture store from {(template_id, inputs): {tag: raw}}."""
    store = FixtureStore(recording=True)
    for (template_id, inputs), completions in entries.items():
        template = tpl.get_template(template_id)
        rendered = tpl.render(template, list(inputs))
        for tag, raw in completions.items():
            store.put(rendered.text, tag, raw)
    store.recording = False
    return store


def service_from(entries, config: SuggestionConfig | None = None) -> SuggestionService:
    client = CompletionClient(FixtureBackend(store_from(entries)))
    return SuggestionService(client, config)


class StaticBackend:
    """Returns the same completion for every request."""

    def __init__(self, text: str, finish_reason: str = FINISH_STOP):
        self.text = text
        self.finish_reason = finish_reason
        self.backend_id = "static"
        self.requests: list[GenerationRequest] = []

    def complete(self, request: GenerationRequest):
        self.requests.append(request)
        return self.text, self.finish_reason


class SlowBackend:
    """Blocks for a fixed delay before answering; for cancellation tests."""

    def __init__(self, delay_s: float, text: str = " slow reply"):
        self.delay_s = delay_s
        self.text = text
        self.backend_id = "slow"
        self.calls = 0

    def complete(self, request: GenerationRequest):
        self.calls += 1
        time.sleep(self.delay_s)
        return self.text, FINISH_STOP


class FailingBackend:
    """Raises the given exception on every call."""

    def __init__(self, exc: Exception):
        self.exc = exc
        self.backend_id = "failing"

    def complete(self, request: GenerationRequest):
        raise self.exc


@pytest.fixture
def demo_store() -> FixtureStore:
    return load_demo_store()
