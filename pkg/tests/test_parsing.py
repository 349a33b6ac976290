import pytest

from promptsmith.errors import NoSuggestions
from promptsmith.parsing import (
    normalize_for_comparison,
    parse_comma_list,
    parse_scene,
    parse_single_value,
)

SCHOOL_LINE = (
    "blackboard, teacher, chair, book, student, class, eraser, whiteboard, "
    "notebook, pen, pencil, eraser, paper"
)
BLUE_LINE = "red, pink, orange, yellow, purple, green, brown"


def test_school_line_parses_to_twelve_unique_items():
    parsed = parse_comma_list(SCHOOL_LINE, max_items=50)
    assert len(parsed.items) == 12
    assert parsed.items == (
        "blackboard",
        "teacher",
        "chair",
        "book",
        "student",
        "class",
        "eraser",
        "whiteboard",
        "notebook",
        "pen",
        "pencil",
        "paper",
    )
    assert not parsed.truncated


def test_blue_line_parses_to_seven_replacements():
    parsed = parse_comma_list(BLUE_LINE, max_items=50)
    assert parsed.items == ("red", "pink", "orange", "yellow", "purple", "green", "brown")


def test_comma_list_ignores_lines_after_the_first():
    parsed = parse_comma_list(" tree, bench\nEnvironment: zoo\nSuggestions: lion", 50)
    assert parsed.items == ("tree", "bench")


def test_comma_list_dedup_is_case_insensitive_and_keeps_first_casing():
    parsed = parse_comma_list("Tree, tree, TREE, bench", 50)
    assert parsed.items == ("Tree", "bench")


def test_comma_list_skips_empty_pieces():
    parsed = parse_comma_list("tree,, ,bench,", 50)
    assert parsed.items == ("tree", "bench")


def test_comma_list_preserves_multiword_items():
    parsed = parse_comma_list("lamp post, trash can, picnic table", 50)
    assert parsed.items == ("lamp post", "trash can", "picnic table")


def test_comma_list_capacity_marks_truncated():
    parsed = parse_comma_list("a, b, c, d", 2)
    assert parsed.items == ("a", "b")
    assert parsed.truncated


def test_comma_list_duplicates_beyond_capacity_do_not_mark_truncated():
    # Capacity cuts nothing real here: the tail repeats what was kept.
    parsed = parse_comma_list("a, b, a, B", 2)
    assert parsed.items == ("a", "b")
    assert not parsed.truncated


def test_comma_list_rejects_empty_reply():
    with pytest.raises(NoSuggestions):
        parse_comma_list("   \nEnvironment: zoo", 50)
    with pytest.raises(NoSuggestions):
        parse_comma_list(",,,", 50)


def test_comma_list_rejects_bad_capacity():
    with pytest.raises(ValueError):
        parse_comma_list("a", 0)


def test_single_value_takes_first_line():
    assert parse_single_value(" park\nName: environment") == "park"


def test_single_value_strips_echoed_label():
    assert parse_single_value("Suggestion: beach") == "beach"
    assert parse_single_value("suggestion:  beach ") == "beach"
    assert parse_single_value("Name: ocean") == "ocean"


def test_single_value_keeps_inner_colons():
    assert parse_single_value("museum: modern wing") == "museum: modern wing"


def test_single_value_rejects_empty():
    with pytest.raises(NoSuggestions):
        parse_single_value("\nName: environment")
    with pytest.raises(NoSuggestions):
        parse_single_value("Suggestion:   ")


def test_scene_cuts_at_next_example_block():
    raw = " A cat on a tree\nwords: dog\nscene: A dog"
    assert parse_scene(raw).text == "A cat on a tree"


def test_scene_cuts_at_blank_line():
    raw = " A cat on a tree\n\nwords: dog"
    assert parse_scene(raw).text == "A cat on a tree"


def test_scene_takes_earliest_break():
    raw = "A cat\n\nfiller\nwords: dog"
    assert parse_scene(raw).text == "A cat"


def test_scene_folds_hard_wrapped_lines():
    raw = "A black and white space ship\n   flying through space"
    assert parse_scene(raw).text == "A black and white space ship flying through space"


def test_scene_strips_trailing_comma_artifact():
    assert parse_scene("A man sleeping on the sofa,").text == "A man sleeping on the sofa"
    assert parse_scene("wine next to the tower., ").text == "wine next to the tower."


def test_scene_keeps_internal_punctuation():
    raw = "A doctor taking blood. The tube is small"
    assert parse_scene(raw).text == raw


def test_scene_rejects_empty():
    with pytest.raises(NoSuggestions):
        parse_scene("  \n\nwords: dog")


def test_normalize_for_comparison():
    assert normalize_for_comparison("  Tree ") == "tree"
    # Full casefold, not just lowercasing.
    assert normalize_for_comparison("straße") == normalize_for_comparison("STRASSE")
