"""Wizard-style prompt building for text-to-image models.

The package turns a handful of accepted suggestions into a full image
prompt: pick an environment, pick subjects and actions, pick a scene
sentence, pick a style. Suggestions come from few-shot templates sent
to a completion backend, with a record/replay fixture layer so every
flow can run deterministically offline.
"""

from .errors import PromptsmithError
from .llm import (
    CancellationToken,
    Completion,
    CompletionClient,
    FixtureBackend,
    FixtureStore,
    GenerationRequest,
    HTTPBackend,
    RecordingBackend,
)
from .parsing import parse_comma_list, parse_scene, parse_single_value
from .suggestions import SuggestionQuery, SuggestionService, SuggestionSet
from .templates import Template, builtin_templates, get_template, render
from .wizard import (
    ActionRequest,
    AssembledPrompt,
    EffortReport,
    Session,
    apply,
    assemble,
    compose_prompt_text,
    create_session,
    effort_report,
    replay,
)

__version__ = "0.1.0"

__all__ = [
    "ActionRequest",
    "AssembledPrompt",
    "CancellationToken",
    "Completion",
    "CompletionClient",
    "EffortReport",
    "FixtureBackend",
    "FixtureStore",
    "GenerationRequest",
    "HTTPBackend",
    "PromptsmithError",
    "RecordingBackend",
    "Session",
    "SuggestionQuery",
    "SuggestionService",
    "SuggestionSet",
    "Template",
    "apply",
    "assemble",
    "builtin_templates",
    "compose_prompt_text",
    "create_session",
    "effort_report",
    "get_template",
    "parse_comma_list",
    "parse_scene",
    "parse_single_value",
    "render",
    "replay",
    "__version__",
]
