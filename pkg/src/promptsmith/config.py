"""Runtime configuration and wiring.

Settings come from an optional JSON config file and PROMPTSMITH_*
environment variables (environment wins). The same settings drive the
CLI and the HTTP service.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Mapping

from .errors import BackendUnavailable
from .llm import (
    CompletionClient,
    FixtureBackend,
    FixtureStore,
    HTTPBackend,
    RecordingBackend,
)
from .suggestions import SuggestionConfig, SuggestionService

MODE_FIXTURE = "fixture"
MODE_LIVE = "live"
MODE_RECORD = "record"
BACKEND_MODES = (MODE_FIXTURE, MODE_LIVE, MODE_RECORD)

ENV_PREFIX = "PROMPTSMITH_"


@dataclass
class Settings:
    backend_mode: str = MODE_FIXTURE
    fixture_path: str | None = None
    backend_url: str | None = None
    backend_token: str | None = None
    timeout_s: float = 30.0
    poll_interval_s: float = 0.05
    temperature: float = 0.7
    max_tokens_list: int = 64
    max_tokens_scene: int = 128
    attempt_budget: int = 3
    min_count: int = 10
    scene_min_count: int = 3
    store_dir: str = "./sessions"
    listen_host: str = "127.0.0.1"
    listen_port: int = 8000
    cors_origins: tuple[str, ...] = ("*",)

    def suggestion_config(self) -> SuggestionConfig:
        return SuggestionConfig(
            attempt_budget=self.attempt_budget,
            min_count=self.min_count,
            scene_min_count=self.scene_min_count,
            temperature=self.temperature,
            max_tokens_list=self.max_tokens_list,
            max_tokens_scene=self.max_tokens_scene,
        )


def _coerce(value: str, target_type: type):
    if target_type is bool:
        return value.strip().lower() in ("1", "true", "yes", "on")
    if target_type is int:
        return int(value)
    if target_type is float:
        return float(value)
    return value


def load_settings(
    config_path: str | Path | None = None,
    env: Mapping[str, str] | None = None,
) -> Settings:
    """Settings from defaults, then a JSON file, then the environment."""
    settings = Settings()
    if config_path is not None:
        data = json.loads(Path(config_path).read_text(encoding="utf-8"))
        for key, value in data.items():
            if hasattr(settings, key):
                if key == "cors_origins":
                    value = tuple(value)
                setattr(settings, key, value)

    environ = os.environ if env is None else env
    for spec in fields(Settings):
        raw = environ.get(ENV_PREFIX + spec.name.upper())
        if raw is None:
            continue
        if spec.name == "cors_origins":
            setattr(settings, spec.name, tuple(part.strip() for part in raw.split(",")))
        elif spec.name in ("fixture_path", "backend_url", "backend_token"):
            setattr(settings, spec.name, raw)
        else:
            setattr(settings, spec.name, _coerce(raw, type(getattr(settings, spec.name))))
    return settings


def build_client(settings: Settings, store: FixtureStore | None = None) -> CompletionClient:
    """Completion client for the configured backend mode."""
    if settings.backend_mode == MODE_FIXTURE:
        if store is None:
            if not settings.fixture_path:
                raise BackendUnavailable(
                    "Fixture mode needs a fixture file; set fixture_path."
                )
            store = FixtureStore.load(settings.fixture_path)
        backend = FixtureBackend(store)
    elif settings.backend_mode == MODE_LIVE:
        if not settings.backend_url:
            raise BackendUnavailable("Live mode needs a backend URL.")
        backend = HTTPBackend(settings.backend_url, settings.backend_token)
    elif settings.backend_mode == MODE_RECORD:
        if not settings.backend_url:
            raise BackendUnavailable("Record mode needs a backend URL.")
        if store is None:
            store = FixtureStore(recording=True)
        backend = RecordingBackend(HTTPBackend(settings.backend_url, settings.backend_token), store)
    else:
        raise BackendUnavailable(f"Unknown backend mode '{settings.backend_mode}'.")
    return CompletionClient(
        backend, timeout_s=settings.timeout_s, poll_interval_s=settings.poll_interval_s
    )


def build_service(settings: Settings, client: CompletionClient | None = None) -> SuggestionService:
    client = client or build_client(settings)
    return SuggestionService(client, settings.suggestion_config())
