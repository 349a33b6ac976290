"""REST surface for the wizard and the suggestion engine.

Every error becomes a stable machine code plus a human-readable
sentence. Suggestion calls are synchronous HTTP, but a client that
disconnects mid-call cancels the backend generation.
"""

from __future__ import annotations

import asyncio
import threading
from functools import partial

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import wizard
from .config import MODE_LIVE, Settings, build_client
from .errors import EmptyInput, MissingFixture, PromptsmithError
from .llm import CancellationToken, CompletionClient
from .storage import SessionStore
from .suggestions import SuggestionQuery, SuggestionService

_STATUS_FOR_CODE = {
    "not_found": 404,
    "no_scene": 404,
    "word_not_found": 404,
    "wrong_step": 409,
    "skip_not_allowed": 409,
    "empty_payload": 400,
    "empty_input": 400,
    "arity_mismatch": 400,
    "backend_unavailable": 503,
    "missing_fixture": 503,
    "timeout": 504,
    "no_suggestions": 502,
    "cancelled": 499,
    "recording_disabled": 409,
    "schema_mismatch": 500,
    "corrupt_record": 500,
    "storage_full": 507,
    "serialization_failure": 500,
}

_GENERIC_MESSAGE = "Something went wrong on our side. Please try again."


def error_payload(code: str, message: str, retriable: bool) -> dict:
    return {"error": {"code": code, "message": message, "retriable": retriable}}


def map_error(exc: Exception, production: bool) -> tuple[int, dict]:
    """Total mapping from internal errors to (HTTP status, error body)."""
    if isinstance(exc, MissingFixture) and production:
        return 503, error_payload("backend_unavailable", exc.message, True)
    if isinstance(exc, PromptsmithError):
        status = _STATUS_FOR_CODE.get(exc.code, 500)
        return status, error_payload(exc.code, exc.message, exc.retriable)
    return 500, error_payload("internal_error", _GENERIC_MESSAGE, False)


class ActionBody(BaseModel):
    kind: str
    text: str = ""
    replacement: str = ""
    keystrokes: int | None = None
    advance: bool = True
    step: str | None = None


class SuggestBody(BaseModel):
    step: str
    inputs: list[str] | None = None
    min_count: int | None = Field(default=None, ge=1)
    exclude: list[str] = []


class SessionManager:
    """Owns sessions, their locks, and their per-session suggestion caches."""

    def __init__(
        self,
        store: SessionStore,
        client: CompletionClient,
        settings: Settings,
        id_factory=None,
        clock=None,
    ):
        self.store = store
        self.client = client
        self.settings = settings
        self.id_factory = id_factory
        self.clock = clock
        self._sessions: dict[str, wizard.Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._services: dict[str, SuggestionService] = {}
        self._registry_lock = threading.Lock()

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def service_for(self, session_id: str) -> SuggestionService:
        with self._registry_lock:
            service = self._services.get(session_id)
            if service is None:
                service = SuggestionService(self.client, self.settings.suggestion_config())
                self._services[session_id] = service
            return service

    def create(self) -> wizard.Session:
        session = wizard.create_session(self.id_factory, self.clock)
        with self._registry_lock:
            self._sessions[session.id] = session
        self.store.save(session, meta=self._meta())
        return session

    def get(self, session_id: str) -> wizard.Session:
        with self._registry_lock:
            if session_id in self._sessions:
                return self._sessions[session_id]
        session = self.store.load(session_id)
        with self._registry_lock:
            return self._sessions.setdefault(session_id, session)

    def apply(self, session_id: str, action: wizard.ActionRequest) -> wizard.Session:
        with self._lock_for(session_id):
            session = self.get(session_id)
            wizard.apply(session, action, self.clock)
            self.store.save(session, meta=self._meta())
            return session

    def assemble(self, session_id: str) -> tuple[wizard.Session, wizard.AssembledPrompt]:
        with self._lock_for(session_id):
            session = self.get(session_id)
            prompt = wizard.assemble(session, self.clock)
            self.store.save(session, meta=self._meta())
            return session, prompt

    def suggest(self, session_id: str, body: SuggestBody, cancel: CancellationToken):
        session = self.get(session_id)
        inputs = body.inputs
        if inputs is None:
            inputs = self._derive_inputs(session, body.step)
        query = SuggestionQuery(
            step=body.step,
            inputs=tuple(inputs),
            min_count=body.min_count,
            exclude=tuple(body.exclude),
        )
        return self.service_for(session_id).suggest(query, cancel)

    def _derive_inputs(self, session: wizard.Session, step: str) -> list[str]:
        if step == "environment":
            return []
        if step == "subjects":
            if not session.environment:
                raise EmptyInput("Choose or type an environment before asking for subjects.")
            return [session.environment]
        if step == "actions":
            if not session.subjects:
                raise EmptyInput("Pick at least one subject before asking for actions.")
            return list(session.subjects)
        if step == "scene":
            words = wizard.scene_words(session)
            if not words:
                raise EmptyInput(
                    "Pick subjects or an environment first, or type your own scene."
                )
            return words
        if step == "synonyms":
            raise EmptyInput("Synonym suggestions need the word to replace.")
        raise EmptyInput(f"Unknown suggestion step '{step}'.")

    def _meta(self) -> dict:
        return {
            "backend_mode": self.settings.backend_mode,
            "backend_id": self.client.backend.backend_id,
        }


def create_app(
    settings: Settings | None = None,
    client: CompletionClient | None = None,
    id_factory=None,
    clock=None,
) -> FastAPI:
    settings = settings or Settings()
    client = client or build_client(settings)
    store = SessionStore(settings.store_dir)
    manager = SessionManager(store, client, settings, id_factory, clock)
    production = settings.backend_mode == MODE_LIVE

    app = FastAPI(title="promptsmith", version="0.1.0")
    app.state.manager = manager
    app.state.settings = settings
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(settings.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(PromptsmithError)
    async def on_engine_error(_request: Request, exc: PromptsmithError):
        status, payload = map_error(exc, production)
        return JSONResponse(payload, status_code=status)

    @app.exception_handler(RequestValidationError)
    async def on_invalid_request(_request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(part) for part in first.get("loc", ()) if part != "body")
        message = f"The request body is invalid at '{where}': {first.get('msg', 'error')}."
        return JSONResponse(error_payload("invalid_request", message, False), status_code=400)

    @app.exception_handler(Exception)
    async def on_unexpected_error(_request: Request, exc: Exception):
        status, payload = map_error(exc, production)
        return JSONResponse(payload, status_code=status)

    @app.post("/sessions", status_code=201)
    def create_session():
        return wizard.snapshot(manager.create())

    @app.get("/sessions")
    def list_sessions():
        return {
            "sessions": [
                {"id": item.id, "updated": item.updated, "prompt_preview": item.prompt_preview}
                for item in manager.store.list_sessions()
            ]
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return wizard.snapshot(manager.get(session_id))

    @app.post("/sessions/{session_id}/action")
    def post_action(session_id: str, body: ActionBody):
        action = wizard.ActionRequest(
            kind=body.kind,
            text=body.text,
            replacement=body.replacement,
            keystrokes=body.keystrokes,
            advance=body.advance,
            expected_step=body.step,
        )
        return wizard.snapshot(manager.apply(session_id, action))

    @app.post("/sessions/{session_id}/suggest")
    async def post_suggest(session_id: str, body: SuggestBody, request: Request):
        manager.get(session_id)  # 404 before any backend work
        token = CancellationToken()
        loop = asyncio.get_running_loop()
        work = loop.run_in_executor(None, partial(manager.suggest, session_id, body, token))
        # Poll for client disconnects so an abandoned request cancels the
        # backend generation instead of running to completion.
        while True:
            done, _ = await asyncio.wait({work}, timeout=settings.poll_interval_s)
            if done:
                break
            if await request.is_disconnected():
                token.cancel()
        result = work.result()
        body_out = {
            "items": list(result.items),
            "exhausted": result.exhausted,
            "attempts_used": result.attempts_used,
        }
        if result.exhausted:
            message = (
                "Only "
                + str(len(result.items))
                + " suggestion(s) could be found; try again for more or type your own."
            )
            body_out.update(error_payload("exhausted_suggestions", message, True))
        return JSONResponse(body_out, status_code=200)

    @app.get("/sessions/{session_id}/prompt")
    def get_prompt(session_id: str):
        _session, prompt = manager.assemble(session_id)
        return {
            "text": prompt.text,
            "char_count": prompt.char_count,
            "effort": {
                "typed_keystrokes": prompt.effort.typed_keystrokes,
                "pointer_actions": prompt.effort.pointer_actions,
                "prompt_chars": prompt.effort.prompt_chars,
                "savings_ratio": prompt.effort.savings_ratio,
            },
        }

    @app.get("/healthz")
    def healthz():
        backend = manager.client.backend
        return {
            "status": "ok",
            "backend_mode": settings.backend_mode,
            "backend_id": backend.backend_id,
        }

    return app
