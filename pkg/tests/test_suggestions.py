import pytest

from promptsmith.errors import (
    BackendUnavailable,
    Cancelled,
    EmptyInput,
    NoSuggestions,
    Timeout,
)
from promptsmith.llm import FINISH_ERROR, CancellationToken, CompletionClient
from promptsmith.suggestions import (
    SuggestionConfig,
    SuggestionQuery,
    SuggestionService,
    with_more_excluded,
)

from conftest import GOLDEN_SCENE, SlowBackend, StaticBackend, demo_service


def service_over(backend, **config_kwargs) -> SuggestionService:
    return SuggestionService(CompletionClient(backend), SuggestionConfig(**config_kwargs))


def test_subjects_accumulate_across_attempts_until_min_count():
    result = demo_service().suggest(SuggestionQuery("subjects", ("park",)))
    assert result.items == (
        "tree",
        "bench",
        "fountain",
        "dog",
        "grass",
        "path",
        "pond",
        "flower",
        "bird",
        "kite",
        "squirrel",
    )
    assert result.attempts_used == 2
    assert not result.exhausted


def test_environment_yields_one_value_per_attempt():
    result = demo_service().suggest(SuggestionQuery("environment", min_count=1))
    assert result.items == ("park",)
    assert result.attempts_used == 1
    assert not result.exhausted


def test_environment_exhausts_at_default_min_count():
    # A single-value template can never reach ten items in three attempts.
    result = demo_service().suggest(SuggestionQuery("environment"))
    assert result.items == ("park", "beach", "forest")
    assert result.attempts_used == 3
    assert result.exhausted


def test_synonyms_for_blue_not_exhausted_at_seven():
    result = demo_service().suggest(SuggestionQuery("synonyms", ("blue",), min_count=7))
    assert result.items == ("red", "pink", "orange", "yellow", "purple", "green", "brown")
    assert result.attempts_used == 1
    assert not result.exhausted


def test_synonyms_for_blue_exhaust_when_model_repeats_itself():
    result = demo_service().suggest(SuggestionQuery("synonyms", ("blue",)))
    assert len(result.items) == 7
    assert result.attempts_used == 3
    assert result.exhausted


def test_actions_interleave_across_subjects():
    result = demo_service().suggest(SuggestionQuery("actions", ("tree", "bench")))
    assert result.items[:6] == ("climb", "sit", "water", "paint", "plant", "repair")
    assert len(result.items) == 12
    assert result.attempts_used == 2
    assert not result.exhausted


def test_scene_suggestions_use_scene_min_count():
    result = demo_service().suggest(SuggestionQuery("scene", ("tree", "bench")))
    assert result.items[0] == GOLDEN_SCENE
    assert len(result.items) == 3
    assert result.attempts_used == 3
    assert not result.exhausted


def test_suggest_scenes_matches_scene_query():
    service = demo_service()
    by_step = service.suggest(SuggestionQuery("scene", ("tree", "bench")))
    assert demo_service().suggest_scenes(["tree", "bench"]).items == by_step.items


def test_exclude_filters_case_insensitively():
    result = demo_service().suggest(
        SuggestionQuery("subjects", ("park",), min_count=3, exclude=("TREE", " Bench "))
    )
    assert "tree" not in result.items
    assert "bench" not in result.items
    assert result.items[:3] == ("fountain", "dog", "grass")


def test_more_suggestions_continue_from_fresh_attempts():
    service = demo_service()
    first = service.suggest(SuggestionQuery("subjects", ("park",)))
    follow_up = with_more_excluded(
        SuggestionQuery("subjects", ("park",)), first.items
    )
    more = service.suggest(follow_up)
    assert set(more.items).isdisjoint(set(first.items))
    assert more.items[:3] == ("lamp post", "bush", "trash can")
    assert len(more.items) >= 10
    assert not more.exhausted


def test_identical_queries_are_served_from_cache():
    backend = StaticBackend(" a, b, c\nEnvironment: x")
    service = service_over(backend, min_count=3)
    query = SuggestionQuery("subjects", ("park",))
    first = service.suggest(query)
    calls = len(backend.requests)
    second = service.suggest(SuggestionQuery("subjects", ("park",)))
    assert second == first
    assert len(backend.requests) == calls


def test_cached_lookup_is_exposed():
    service = demo_service()
    query = SuggestionQuery("subjects", ("park",))
    assert service.cached(query) is None
    result = service.suggest(query)
    assert service.cached(query) == result


def test_min_count_changes_bypass_the_cache():
    backend = StaticBackend(" a, b, c\nEnvironment: x")
    service = service_over(backend)
    low = service.suggest(SuggestionQuery("subjects", ("park",), min_count=2))
    assert not low.exhausted
    high = service.suggest(SuggestionQuery("subjects", ("park",), min_count=10))
    assert high.exhausted


def test_attempt_budget_bounds_backend_calls():
    backend = StaticBackend(" a, b, c\nEnvironment: x")
    service = service_over(backend)
    result = service.suggest(SuggestionQuery("subjects", ("park",)))
    assert result.items == ("a", "b", "c")
    assert result.attempts_used == 3
    assert result.exhausted
    assert len(backend.requests) == 3


def test_attempt_tags_are_monotone_per_prompt():
    backend = StaticBackend(" a, b, c\nEnvironment: x")
    service = service_over(backend)
    service.suggest(SuggestionQuery("subjects", ("park",)))
    service.suggest(SuggestionQuery("subjects", ("park",), exclude=("a",)))
    tags = [request.attempt_tag for request in backend.requests]
    assert tags == ["0", "1", "2", "3", "4", "5"]


def test_duplicate_scene_completions_collapse():
    backend = StaticBackend(" A cat on a tree\nwords: dog")
    service = service_over(backend)
    result = service.suggest_scenes(["cat", "tree"])
    assert result.items == ("A cat on a tree",)
    assert result.attempts_used == 3
    assert result.exhausted


def test_unparseable_replies_raise_no_suggestions():
    backend = StaticBackend(" ,,,\nEnvironment: x")
    service = service_over(backend)
    with pytest.raises(NoSuggestions):
        service.suggest(SuggestionQuery("subjects", ("park",)))


def test_backend_error_reason_maps_to_backend_unavailable():
    backend = StaticBackend(" whatever", finish_reason=FINISH_ERROR)
    service = service_over(backend)
    with pytest.raises(BackendUnavailable):
        service.suggest(SuggestionQuery("subjects", ("park",)))


def test_cancelled_generation_raises_cancelled():
    token = CancellationToken()
    token.cancel()
    service = demo_service()
    with pytest.raises(Cancelled):
        service.suggest(SuggestionQuery("subjects", ("park",)), cancel=token)


def test_slow_backend_times_out():
    backend = SlowBackend(delay_s=5.0)
    client = CompletionClient(backend, timeout_s=0.05, poll_interval_s=0.01)
    service = SuggestionService(client)
    with pytest.raises(Timeout):
        service.suggest(SuggestionQuery("subjects", ("park",)))


def test_input_arity_is_validated():
    service = demo_service()
    with pytest.raises(EmptyInput):
        service.suggest(SuggestionQuery("environment", ("park",)))
    with pytest.raises(EmptyInput):
        service.suggest(SuggestionQuery("subjects", ()))
    with pytest.raises(EmptyInput):
        service.suggest(SuggestionQuery("subjects", ("a", "b")))
    with pytest.raises(EmptyInput):
        service.suggest(SuggestionQuery("actions", ()))
    with pytest.raises(EmptyInput):
        service.suggest(SuggestionQuery("synonyms", ()))
    with pytest.raises(EmptyInput):
        service.suggest(SuggestionQuery("subjects", ("  ",)))
    with pytest.raises(EmptyInput):
        service.suggest(SuggestionQuery("nonsense", ()))
    with pytest.raises(EmptyInput):
        service.suggest_scenes([])


def test_min_count_must_be_positive():
    with pytest.raises(ValueError):
        SuggestionQuery("subjects", ("park",), min_count=0)
