"""Produce deduplicated suggestion sets for each wizard step.

A suggest call renders the step's template, asks the backend for
completions (up to a small attempt budget, to bound latency), parses
them per the template's grammar, and accumulates unique items that the
caller has not already seen. Attempt tags continue across calls within
a session so "more suggestions" reaches fresh fixture entries instead
of replaying the ones already shown.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import templates as tpl
from .errors import BackendUnavailable, Cancelled, EmptyInput, NoSuggestions, Timeout
from .llm import (
    FINISH_CANCELLED,
    FINISH_ERROR,
    CancellationToken,
    CompletionClient,
    GenerationRequest,
    prompt_digest,
)
from .parsing import normalize_for_comparison, parse_comma_list, parse_scene, parse_single_value

STEP_ENVIRONMENT = "environment"
STEP_SUBJECTS = "subjects"
STEP_ACTIONS = "actions"
STEP_SCENE = "scene"
STEP_SYNONYMS = "synonyms"
SUGGESTION_STEPS = (STEP_ENVIRONMENT, STEP_SUBJECTS, STEP_ACTIONS, STEP_SCENE, STEP_SYNONYMS)

DEFAULT_MIN_COUNT = 10
DEFAULT_SCENE_MIN_COUNT = 3
DEFAULT_ATTEMPT_BUDGET = 3


@dataclass(frozen=True)
class SuggestionConfig:
    attempt_budget: int = DEFAULT_ATTEMPT_BUDGET
    min_count: int = DEFAULT_MIN_COUNT
    scene_min_count: int = DEFAULT_SCENE_MIN_COUNT
    temperature: float = 0.7
    max_tokens_list: int = 64
    max_tokens_scene: int = 128
    # Upper bound on items taken from one completion; generous compared to
    # the 7-13 item lines the templates model.
    max_items_per_completion: int = 50


@dataclass(frozen=True)
class SuggestionQuery:
    step: str
    inputs: tuple[str, ...] = ()
    min_count: int | None = None
    exclude: tuple[str, ...] = ()

    def __post_init__(self):
        if self.min_count is not None and self.min_count < 1:
            raise ValueError("min_count must be at least 1")


@dataclass(frozen=True)
class SuggestionSet:
    items: tuple[str, ...]
    exhausted: bool
    attempts_used: int


def _cache_key(query: SuggestionQuery, min_count: int) -> tuple:
    excluded = tuple(sorted({normalize_for_comparison(item) for item in query.exclude}))
    return (query.step, query.inputs, min_count, excluded)


def _interleave(lists: list[list[str]]) -> list[str]:
    merged: list[str] = []
    width = max((len(chunk) for chunk in lists), default=0)
    for index in range(width):
        for chunk in lists:
            if index < len(chunk):
                merged.append(chunk[index])
    return merged


@dataclass
class _PromptSource:
    prompt_text: str
    grammar: str
    max_tokens: int
    stops: tuple[str, ...]


class SuggestionService:
    """Session-scoped suggestion engine over one completion client."""

    def __init__(self, client: CompletionClient, config: SuggestionConfig | None = None):
        self.client = client
        self.config = config or SuggestionConfig()
        self._cache: dict[tuple, SuggestionSet] = {}
        # Per-prompt attempt counters; monotone within the session so
        # later calls draw completions the earlier ones have not used.
        self._attempt_counters: dict[str, int] = {}

    # -- public surface ---------------------------------------------------

    def suggest(
        self, query: SuggestionQuery, cancel: CancellationToken | None = None
    ) -> SuggestionSet:
        if query.step == STEP_SCENE:
            return self.suggest_scenes(
                list(query.inputs), query.min_count, query.exclude, cancel
            )
        sources = self._sources_for(query)
        min_count = query.min_count if query.min_count is not None else self.config.min_count
        return self._run(query, sources, min_count, cancel)

    def suggest_scenes(
        self,
        words: list[str],
        min_count: int | None = None,
        exclude: tuple[str, ...] = (),
        cancel: CancellationToken | None = None,
    ) -> SuggestionSet:
        if not words:
            raise EmptyInput("Scene suggestions need at least one word.")
        query = SuggestionQuery(
            STEP_SCENE, tuple(words), min_count, tuple(exclude)
        )
        template = tpl.get_template(tpl.SCENE_FROM_WORDS)
        rendered = tpl.render(template, [tpl.join_words(words)])
        sources = [
            _PromptSource(
                rendered.text,
                template.output_grammar,
                self.config.max_tokens_scene,
                template.stop_sequences,
            )
        ]
        resolved = min_count if min_count is not None else self.config.scene_min_count
        return self._run(query, sources, resolved, cancel)

    def cached(self, query: SuggestionQuery) -> SuggestionSet | None:
        """Return the set already served for an identical query, if any."""
        min_count = query.min_count
        if min_count is None:
            min_count = (
                self.config.scene_min_count
                if query.step == STEP_SCENE
                else self.config.min_count
            )
        return self._cache.get(_cache_key(query, min_count))

    # -- internals ---------------------------------------------------------

    def _sources_for(self, query: SuggestionQuery) -> list[_PromptSource]:
        step = query.step
        inputs = [value.strip() for value in query.inputs]
        if any(not value for value in inputs):
            raise EmptyInput("Suggestion inputs must not be blank.")

        if step == STEP_ENVIRONMENT:
            if inputs:
                raise EmptyInput("Environment suggestions take no inputs.")
            template = tpl.get_template(tpl.ENVIRONMENT_SUGGEST)
            rendered = tpl.render(template, [])
            return [self._source(rendered.text, template)]
        if step == STEP_SUBJECTS:
            if len(inputs) != 1:
                raise EmptyInput("Subject suggestions need exactly one environment name.")
            template = tpl.get_template(tpl.SUBJECTS_FOR_ENVIRONMENT)
            return [self._source(tpl.render(template, inputs).text, template)]
        if step == STEP_ACTIONS:
            if not inputs:
                raise EmptyInput("Action suggestions need at least one subject.")
            # One prompt per subject; results interleave round-robin.
            template = tpl.get_template(tpl.ACTIONS_FOR_SUBJECTS)
            return [
                self._source(tpl.render(template, [subject]).text, template)
                for subject in inputs
            ]
        if step == STEP_SYNONYMS:
            if len(inputs) != 1:
                raise EmptyInput("Synonym suggestions need exactly one word.")
            template = tpl.get_template(tpl.SYNONYMS_FOR_WORD)
            return [self._source(tpl.render(template, inputs).text, template)]
        raise EmptyInput(f"Unknown suggestion step '{step}'.")

    def _source(self, prompt_text: str, template: tpl.Template) -> _PromptSource:
        return _PromptSource(
            prompt_text,
            template.output_grammar,
            self.config.max_tokens_list,
            template.stop_sequences,
        )

    def _next_tag(self, prompt_text: str) -> str:
        digest = prompt_digest(prompt_text)
        count = self._attempt_counters.get(digest, 0)
        self._attempt_counters[digest] = count + 1
        return str(count)

    def _generate(
        self, source: _PromptSource, cancel: CancellationToken | None
    ) -> str | None:
        """One backend call; returns raw text, or None if it parsed empty."""
        request = GenerationRequest(
            prompt_text=source.prompt_text,
            max_tokens=source.max_tokens,
            temperature=self.config.temperature,
            stop_sequences=source.stops,
            attempt_tag=self._next_tag(source.prompt_text),
        )
        completion = self.client.generate(request, cancel)
        if completion.finish_reason == FINISH_CANCELLED:
            raise Cancelled("The suggestion request was cancelled.")
        if completion.finish_reason == FINISH_ERROR:
            if completion.error == "timeout":
                raise Timeout("The suggestion backend took too long to reply.")
            raise BackendUnavailable("The suggestion backend reported an error.")
        return completion.text

    def _run(
        self,
        query: SuggestionQuery,
        sources: list[_PromptSource],
        min_count: int,
        cancel: CancellationToken | None,
    ) -> SuggestionSet:
        key = _cache_key(query, min_count)
        hit = self._cache.get(key)
        if hit is not None:
            return hit

        excluded = {normalize_for_comparison(item) for item in query.exclude}
        items: list[str] = []
        seen = set(excluded)
        attempts = 0
        parsed_anything = False
        budget = self.config.attempt_budget

        while attempts < budget and len(items) < min_count:
            round_lists: list[list[str]] = []
            for source in sources:
                if attempts == budget:
                    break
                raw = self._generate(source, cancel)
                attempts += 1
                try:
                    round_lists.append(self._parse(raw, source.grammar))
                    parsed_anything = True
                except NoSuggestions:
                    continue
            for candidate in _interleave(round_lists):
                candidate_key = normalize_for_comparison(candidate)
                if candidate_key in seen:
                    continue
                seen.add(candidate_key)
                items.append(candidate)

        if not parsed_anything:
            raise NoSuggestions(
                "The model produced no usable suggestions. Try again or type your own."
            )
        result = SuggestionSet(
            items=tuple(items),
            exhausted=len(items) < min_count,
            attempts_used=attempts,
        )
        self._cache[key] = result
        return result

    def _parse(self, raw: str, grammar: str) -> list[str]:
        if grammar == tpl.GRAMMAR_SINGLE_VALUE:
            return [parse_single_value(raw)]
        if grammar == tpl.GRAMMAR_COMMA_LIST:
            return list(parse_comma_list(raw, self.config.max_items_per_completion).items)
        return [parse_scene(raw).text]


def with_more_excluded(query: SuggestionQuery, shown: tuple[str, ...]) -> SuggestionQuery:
    """Extend a query's exclusion list with everything already shown."""
    merged = tuple(dict.fromkeys(query.exclude + shown))
    return replace(query, exclude=merged)
