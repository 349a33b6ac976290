"""The five-step prompt-building session and its event log.

A session walks environment, subjects, actions, scene, style. Every user
action appends an InteractionEvent carrying effort counters (keystrokes
typed, pointer actions), and replaying the event log from an empty
session reconstructs the exact field state. The event log is therefore
the source of truth for both persistence and effort reporting.
"""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable

from .errors import (
    EmptyPayload,
    EmptyPrompt,
    NoScene,
    SkipNotAllowed,
    WordNotFound,
    WrongStep,
)
from .parsing import normalize_for_comparison

STEP_ENVIRONMENT = "environment"
STEP_SUBJECTS = "subjects"
STEP_ACTIONS = "actions"
STEP_SCENE = "scene"
STEP_STYLE = "style"
STEP_DONE = "done"
STEP_ORDER = (STEP_ENVIRONMENT, STEP_SUBJECTS, STEP_ACTIONS, STEP_SCENE, STEP_STYLE, STEP_DONE)

# Steps where repeated selections accumulate instead of overwriting.
MULTI_SELECT_STEPS = (STEP_SUBJECTS, STEP_ACTIONS)

ACTION_TYPE = "type"
ACTION_ACCEPT = "accept"
ACTION_EDIT = "edit"
ACTION_SKIP = "skip"
ACTION_BACK = "back"
ACTION_RESTART = "restart"
ACTION_REPLACE_WORD = "replace_word"
ACTION_KINDS = (
    ACTION_TYPE,
    ACTION_ACCEPT,
    ACTION_EDIT,
    ACTION_SKIP,
    ACTION_BACK,
    ACTION_RESTART,
    ACTION_REPLACE_WORD,
)

EVENT_TYPED = "typed"
EVENT_ACCEPTED = "accepted_suggestion"
EVENT_EDITED = "edited_suggestion"
EVENT_SKIPPED = "skipped"
EVENT_WENT_BACK = "went_back"
EVENT_RESTARTED = "restarted"
EVENT_REPLACED_WORD = "replaced_word"
EVENT_ASSEMBLED = "assembled"

_EVENT_FOR_ACTION = {
    ACTION_TYPE: EVENT_TYPED,
    ACTION_ACCEPT: EVENT_ACCEPTED,
    ACTION_EDIT: EVENT_EDITED,
    ACTION_SKIP: EVENT_SKIPPED,
    ACTION_BACK: EVENT_WENT_BACK,
    ACTION_RESTART: EVENT_RESTARTED,
    ACTION_REPLACE_WORD: EVENT_REPLACED_WORD,
}

Clock = Callable[[], str]
IdFactory = Callable[[], str]


def utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def new_session_id() -> str:
    return uuid.uuid4().hex


@dataclass(frozen=True)
class InteractionEvent:
    kind: str
    step: str
    payload: str = ""
    replacement: str = ""
    keystroke_count: int = 0
    pointer_actions: int = 0
    # Whether this event moved the wizard to the next step; replay needs
    # it because multi-select steps can take several events in place.
    advanced: bool = False


@dataclass
class Session:
    id: str
    step: str = STEP_ENVIRONMENT
    environment: str | None = None
    subjects: list[str] = field(default_factory=list)
    actions: list[str] = field(default_factory=list)
    scene: str | None = None
    style: str | None = None
    events: list[InteractionEvent] = field(default_factory=list)
    created: str = ""
    updated: str = ""


@dataclass(frozen=True)
class ActionRequest:
    """One user action, as received from the UI or a script.

    `advance` lets multi-select steps stay put while the user keeps
    adding items; skip always advances. `expected_step` guards against a
    stale client acting on the wrong step.
    """

    kind: str
    text: str = ""
    replacement: str = ""
    keystrokes: int | None = None
    advance: bool = True
    expected_step: str | None = None


@dataclass(frozen=True)
class EffortReport:
    typed_keystrokes: int
    pointer_actions: int
    prompt_chars: int
    savings_ratio: float


@dataclass(frozen=True)
class AssembledPrompt:
    text: str
    char_count: int
    effort: EffortReport


def create_session(
    id_factory: IdFactory | None = None, clock: Clock | None = None
) -> Session:
    """Fresh session at the environment step with an empty event log."""
    make_id = id_factory or new_session_id
    now = (clock or utc_now)()
    return Session(id=make_id(), created=now, updated=now)


def _next_step(step: str) -> str:
    index = STEP_ORDER.index(step)
    return STEP_ORDER[min(index + 1, len(STEP_ORDER) - 1)]


def _prev_step(step: str) -> str:
    index = STEP_ORDER.index(step)
    return STEP_ORDER[max(index - 1, 0)]


def apply(session: Session, action: ActionRequest, clock: Clock | None = None) -> Session:
    """Validate an action, apply its effect, and append its event.

    Illegal actions raise before any mutation, so a failed call leaves
    the session untouched.
    """
    event = _validate(session, action)
    _apply_effect(session, event)
    session.events.append(event)
    session.updated = (clock or utc_now)()
    return session


def _validate(session: Session, action: ActionRequest) -> InteractionEvent:
    if action.kind not in ACTION_KINDS:
        raise WrongStep(f"'{action.kind}' is not an action this wizard understands.")

    if action.kind == ACTION_BACK:
        return InteractionEvent(EVENT_WENT_BACK, session.step, pointer_actions=1)
    if action.kind == ACTION_RESTART:
        return InteractionEvent(EVENT_RESTARTED, session.step, pointer_actions=1)
    if action.kind == ACTION_REPLACE_WORD:
        return _validate_replace(session, action)

    if action.expected_step is not None and action.expected_step != session.step:
        raise WrongStep(
            f"That action was meant for the {action.expected_step} step, but the "
            f"session is on the {session.step} step."
        )
    if session.step == STEP_DONE:
        raise WrongStep("The wizard is finished; go back to change a step.")

    if action.kind == ACTION_SKIP:
        if session.step == STEP_SCENE:
            raise SkipNotAllowed(
                "A prompt needs a scene. Pick a suggestion or type your own."
            )
        return InteractionEvent(
            EVENT_SKIPPED, session.step, pointer_actions=1, advanced=True
        )

    # type / accept / edit
    if not action.text.strip():
        raise EmptyPayload("Nothing was entered for this step.")
    if action.kind == ACTION_TYPE:
        return InteractionEvent(
            EVENT_TYPED,
            session.step,
            payload=action.text,
            keystroke_count=len(action.text),
            advanced=action.advance,
        )
    if action.kind == ACTION_ACCEPT:
        return InteractionEvent(
            EVENT_ACCEPTED,
            session.step,
            payload=action.text,
            pointer_actions=1,
            advanced=action.advance,
        )
    keystrokes = action.keystrokes if action.keystrokes is not None else len(action.text)
    return InteractionEvent(
        EVENT_EDITED,
        session.step,
        payload=action.text,
        keystroke_count=keystrokes,
        pointer_actions=1,
        advanced=action.advance,
    )


def _validate_replace(session: Session, action: ActionRequest) -> InteractionEvent:
    target = action.text.strip()
    replacement = action.replacement.strip()
    if not target or not replacement:
        raise EmptyPayload("Word replacement needs a word and its replacement.")
    if session.scene is None:
        raise NoScene("There is no scene to edit yet.")
    if not _word_pattern(target).search(session.scene):
        raise WordNotFound(f'The scene does not contain the word "{target}".')
    return InteractionEvent(
        EVENT_REPLACED_WORD,
        session.step,
        payload=target,
        replacement=replacement,
        pointer_actions=2,
    )


def _word_pattern(word: str) -> re.Pattern:
    return re.compile(rf"\b{re.escape(word)}\b")


def _apply_effect(session: Session, event: InteractionEvent):
    """Mutate session fields for one event. Shared with replay."""
    kind = event.kind
    if kind == EVENT_WENT_BACK:
        session.step = _prev_step(event.step)
        return
    if kind == EVENT_RESTARTED:
        session.step = STEP_ENVIRONMENT
        session.environment = None
        session.subjects = []
        session.actions = []
        session.scene = None
        session.style = None
        return
    if kind == EVENT_REPLACED_WORD:
        assert session.scene is not None
        session.scene = _word_pattern(event.payload).sub(
            event.replacement, session.scene, count=1
        )
        return
    if kind == EVENT_ASSEMBLED:
        return

    if kind in (EVENT_TYPED, EVENT_ACCEPTED, EVENT_EDITED):
        value = event.payload.strip()
        step = event.step
        if step == STEP_ENVIRONMENT:
            session.environment = value
        elif step == STEP_SUBJECTS:
            session.subjects.append(value)
        elif step == STEP_ACTIONS:
            session.actions.append(value)
        elif step == STEP_SCENE:
            session.scene = value
        elif step == STEP_STYLE:
            session.style = value
    if event.advanced:
        session.step = _next_step(event.step)


def replay(
    events: list[InteractionEvent],
    session_id: str = "",
    created: str = "",
    updated: str = "",
) -> Session:
    """Reconstruct a session purely from its event log."""
    session = Session(id=session_id, created=created, updated=updated)
    for event in events:
        _apply_effect(session, event)
    session.events = list(events)
    return session


def replace_word(
    session: Session, target_word: str, replacement: str, clock: Clock | None = None
) -> Session:
    """Replace the first whole-word occurrence of target_word in the scene."""
    return apply(
        session,
        ActionRequest(ACTION_REPLACE_WORD, text=target_word, replacement=replacement),
        clock,
    )


def scene_words(session: Session) -> list[str]:
    """Words that seed scene suggestions: subjects plus actions.

    Falls back to the environment name when nothing else was chosen;
    empty means scene suggestions cannot be offered and the user should
    type a scene instead.
    """
    words: list[str] = []
    seen: set[str] = set()
    for word in [*session.subjects, *session.actions]:
        key = normalize_for_comparison(word)
        if key and key not in seen:
            seen.add(key)
            words.append(word)
    if not words and session.environment:
        words.append(session.environment)
    return words


def _strip_tail(text: str) -> str:
    return text.strip().rstrip(" \t,").rstrip()


def compose_prompt_text(session: Session) -> str | None:
    """Current prompt text without recording anything; None when no scene."""
    if session.scene is None or not session.scene.strip():
        return None
    text = _strip_tail(session.scene)
    if session.style is not None and session.style.strip():
        text = f"{text}, {_strip_tail(session.style)}"
    # One space after each comma, even if a typed scene had more.
    text = re.sub(r",[ \t\r\n]+", ", ", text)
    return text.strip()


def effort_report(session: Session, prompt_chars: int | None = None) -> EffortReport:
    """Totals over the event log; valid mid-session."""
    typed = sum(event.keystroke_count for event in session.events)
    pointer = sum(event.pointer_actions for event in session.events)
    if prompt_chars is None:
        text = compose_prompt_text(session)
        prompt_chars = len(text) if text is not None else 0
    if prompt_chars > 0:
        ratio = max(0.0, min(1.0, (prompt_chars - typed) / prompt_chars))
    else:
        ratio = 0.0
    return EffortReport(typed, pointer, prompt_chars, ratio)


def assemble(session: Session, clock: Clock | None = None) -> AssembledPrompt:
    """Build the final prompt from scene and optional style.

    Records an `assembled` event so the effort report and session history
    show when the prompt was produced.
    """
    text = compose_prompt_text(session)
    if text is None:
        raise EmptyPrompt("Your prompt needs a scene before it can be finished.")
    effort = effort_report(session, prompt_chars=len(text))
    session.events.append(InteractionEvent(EVENT_ASSEMBLED, session.step, payload=text))
    session.updated = (clock or utc_now)()
    return AssembledPrompt(text=text, char_count=len(text), effort=effort)


def check_invariants(session: Session):
    """Raise AssertionError if a structural session invariant is broken."""
    assert session.step in STEP_ORDER, f"unknown step {session.step}"
    if session.step == STEP_DONE:
        assert session.scene, "a finished session must have a scene"
    replayed = replay(session.events, session.id, session.created, session.updated)
    assert replayed.step == session.step
    assert replayed.environment == session.environment
    assert replayed.subjects == session.subjects
    assert replayed.actions == session.actions
    assert replayed.scene == session.scene
    assert replayed.style == session.style


def snapshot(session: Session) -> dict:
    """Plain-dict view of a session (events included), JSON-ready."""
    return {
        "id": session.id,
        "step": session.step,
        "environment": session.environment,
        "subjects": list(session.subjects),
        "actions": list(session.actions),
        "scene": session.scene,
        "style": session.style,
        "created": session.created,
        "updated": session.updated,
        "events": [
            {
                "kind": event.kind,
                "step": event.step,
                "payload": event.payload,
                "replacement": event.replacement,
                "keystroke_count": event.keystroke_count,
                "pointer_actions": event.pointer_actions,
                "advanced": event.advanced,
            }
            for event in session.events
        ],
    }


def event_from_dict(data: dict) -> InteractionEvent:
    return InteractionEvent(
        kind=data["kind"],
        step=data["step"],
        payload=data.get("payload", ""),
        replacement=data.get("replacement", ""),
        keystroke_count=int(data.get("keystroke_count", 0)),
        pointer_actions=int(data.get("pointer_actions", 0)),
        advanced=bool(data.get("advanced", False)),
    )
