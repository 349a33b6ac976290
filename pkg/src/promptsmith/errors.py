"""Error hierarchy shared across the engine.

Every error carries a stable machine code (used by the HTTP layer and the
CLI) and a human-readable message that is safe to show to end users.
"""

from __future__ import annotations


class PromptsmithError(Exception):
    """Base class for all engine errors."""

    code = "internal_error"
    retriable = False

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


# --- template errors ---------------------------------------------------


class ArityMismatch(PromptsmithError):
    code = "arity_mismatch"


class EmptyInput(PromptsmithError):
    code = "empty_input"


class EmptyList(PromptsmithError):
    code = "empty_input"


class TemplatePackError(PromptsmithError):
    code = "template_pack_invalid"


# --- parsing / generation errors ----------------------------------------


class NoSuggestions(PromptsmithError):
    """The completion contained nothing usable; the caller may regenerate."""

    code = "no_suggestions"
    retriable = True


class BackendUnavailable(PromptsmithError):
    code = "backend_unavailable"
    retriable = True


class Timeout(BackendUnavailable):
    code = "timeout"
    retriable = True


class Cancelled(PromptsmithError):
    code = "cancelled"
    retriable = True


class MissingFixture(PromptsmithError):
    """A replay-only fixture store had no entry for the requested prompt."""

    code = "missing_fixture"


class RecordingDisabled(PromptsmithError):
    code = "recording_disabled"


# --- wizard errors -------------------------------------------------------


class WrongStep(PromptsmithError):
    code = "wrong_step"


class SkipNotAllowed(PromptsmithError):
    code = "skip_not_allowed"


class EmptyPayload(PromptsmithError):
    code = "empty_payload"


class NoScene(PromptsmithError):
    code = "no_scene"


class WordNotFound(PromptsmithError):
    code = "word_not_found"


class EmptyPrompt(PromptsmithError):
    """Assembly was requested before the session has a scene."""

    code = "no_scene"


# --- storage errors ------------------------------------------------------


class NotFound(PromptsmithError):
    code = "not_found"


class SchemaMismatch(PromptsmithError):
    code = "schema_mismatch"


class CorruptRecord(PromptsmithError):
    code = "corrupt_record"


class StorageFull(PromptsmithError):
    code = "storage_full"


class SerializationFailure(PromptsmithError):
    code = "serialization_failure"
