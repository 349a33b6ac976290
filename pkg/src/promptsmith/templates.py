"""Few-shot prompt templates and their rendering.

The five built-in templates are stored verbatim, including their quirks
(the synonyms template labels its lists "replacements" without a colon,
some scene lines end with a stray comma). The model completes the pattern
that was actually tested, so the bytes matter.

Whitespace convention: exactly one newline between lines, no trailing
newline after the final label. Lines that were hard-wrapped for page
width in the source material are stored as single logical lines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ArityMismatch, EmptyInput, EmptyList, TemplatePackError

INPUT_MARK = "<input>"
OUTPUT_MARK = "<output>"

GRAMMAR_SINGLE_VALUE = "single_value"
GRAMMAR_COMMA_LIST = "comma_list"
GRAMMAR_SCENE_TEXT = "scene_text"
GRAMMARS = (GRAMMAR_SINGLE_VALUE, GRAMMAR_COMMA_LIST, GRAMMAR_SCENE_TEXT)

# One labeled line per list; generation must stop before the model
# continues the few-shot pattern on the next line.
LIST_STOPS = ("\n",)
# Scenes may span sentences but must not run into the next example block.
SCENE_STOPS = ("\nwords:", "\n\n")


@dataclass(frozen=True)
class Template:
    """A few-shot prompt body with input slots and an output grammar."""

    id: str
    body: str
    input_arity: int
    output_grammar: str
    stop_sequences: tuple[str, ...]

    def __post_init__(self):
        if self.output_grammar not in GRAMMARS:
            raise TemplatePackError(f"Unknown output grammar '{self.output_grammar}'.")
        if not self.stop_sequences:
            raise TemplatePackError(f"Template '{self.id}' has no stop sequences.")
        if self.body.count(INPUT_MARK) != self.input_arity:
            raise TemplatePackError(
                f"Template '{self.id}' body has {self.body.count(INPUT_MARK)} input "
                f"slots but declares arity {self.input_arity}."
            )
        if self.body.count(OUTPUT_MARK) != 1 or not self.body.rstrip().endswith(OUTPUT_MARK):
            raise TemplatePackError(
                f"Template '{self.id}' must end with exactly one output slot."
            )


@dataclass(frozen=True)
class RenderedPrompt:
    template_id: str
    text: str
    inputs: tuple[str, ...]


ENVIRONMENT_SUGGEST = "environment_suggest"
SUBJECTS_FOR_ENVIRONMENT = "subjects_for_environment"
ACTIONS_FOR_SUBJECTS = "actions_for_subjects"
SCENE_FROM_WORDS = "scene_from_words"
SYNONYMS_FOR_WORD = "synonyms_for_word"

_ENVIRONMENT_BODY = "\n".join([
    "Name: environment",
    "Suggestion: university",
    "Name: environment",
    "Suggestion: ocean",
    "Name: environment",
    "Suggestion: hospital",
    "Name: environment",
    "Suggestion: <output>",
])

_SUBJECTS_BODY = "\n".join([
    "Environment: school",
    "Suggestions: blackboard, teacher, chair, book, student, class, eraser, whiteboard, notebook, pen, pencil, eraser, paper",
    "Environment: work office",
    "Suggestions: desk, computer, pen, paper sheet, folder, fax, phone, pencil, paper shredder, light",
    "Environment: forest",
    "Suggestions: tree, animal, bird, monkey, lion, fox, eagle, plant, flower, insect, tiger, horse, wolf",
    "Environment: home",
    "Suggestions: TV, bed, table, sofa, couch, light, console table, remote control, carpet, rug, room, kitchen",
    "Environment: sea",
    "Suggestions: fish, jelly fish, star fish, shark, dolphin, whale, island, boat, ship, coral, crab",
    "Environment: <input>",
    "Suggestions: <output>",
])

_ACTIONS_BODY = "\n".join([
    "word: tv",
    "verbs: watch, work, fix, turn on, turn off, turn up, turn down, put, pick up",
    "word: cat",
    "verbs: play, eat, sit, run jump, scratch, pet, sleep, feed, jump, meow, brush, groom, bathe, cuddle, love",
    "word: pool",
    "verbs: fill, swim, drawn, go down, dive, jump, splash, play, go down, drink, eat, throw, throw up, spit, pee, pee in",
    "word: paper",
    "verbs: write, read, draw, cut, tear, color, crumple, make, throw, pick up, put down, fold, take, give, put away, color, spin",
    "word: <input>",
    "verbs: <output>",
])

_SCENE_BODY = "\n".join([
    "words: dog",
    "scene: A small dachshund doing a kickflip on a skateboard",
    "words: cat, tree",
    "scene: A young DSH cat sitting on a small tree branch with leaves in a garden",
    "words: space, rocket",
    "scene: A black and white space ship with a rocket attached to the engine. There is a trail of smoke following the rocket flying through the space full of planets and stars",
    "words: chair, cup, parrot",
    "scene: A parrot with a blue feather and a black/grey beak sitting on a high-backed chair. There is a small table next to the chair and a red cup of tea on the table",
    "words: fish, waves",
    "scene: A red snapper fish with a white body and black eyes and mouth is swimming through the waves at the ocean",
    "words: flying car, fly, bird",
    "scene: a flying car is driving in the sky and a bird is flying next to the car",
    "words: paper sheet, fold, folder",
    "scene: a paper sheet is being folded on a blue folder with a white paperclip on it",
    "words: sofa, sleep",
    "scene: A man is sleeping on the sofa. He has a red t-shirt, blue shorts and brown hair,",
    "words: monkey, swing, tree",
    "scene: A small monkey is swinging on a tree branch. There is a red banana next to the branch",
    "words: take blood from",
    "scene: A doctor is taking blood from a syringe and putting it in a small tube,",
    "words: eiffel tower, old man, old woman",
    "scene: An old man and an old woman are drinking wine next to the eiffel tower.,",
    "words: cat, mouse",
    "scene: An outdoor cat patiently waiting by a mouse hole for its next meal.",
    "words: <input>",
    "scene: <output>",
])

# "replacements" has no colon in the tested pattern; kept verbatim.
_SYNONYMS_BODY = "\n".join([
    "word: blue",
    "replacements red, pink, orange, yellow, purple, green, brown",
    "word: small",
    "replacements big, tiny, giant, medium, large, huge, miniature",
    "word: young",
    "replacements old, adult, child, teenager, infant, baby, middle-aged",
    "word: <input>",
    "replacements <output>",
])

_BUILTINS = (
    Template(ENVIRONMENT_SUGGEST, _ENVIRONMENT_BODY, 0, GRAMMAR_SINGLE_VALUE, LIST_STOPS),
    Template(SUBJECTS_FOR_ENVIRONMENT, _SUBJECTS_BODY, 1, GRAMMAR_COMMA_LIST, LIST_STOPS),
    Template(ACTIONS_FOR_SUBJECTS, _ACTIONS_BODY, 1, GRAMMAR_COMMA_LIST, LIST_STOPS),
    Template(SCENE_FROM_WORDS, _SCENE_BODY, 1, GRAMMAR_SCENE_TEXT, SCENE_STOPS),
    Template(SYNONYMS_FOR_WORD, _SYNONYMS_BODY, 1, GRAMMAR_COMMA_LIST, LIST_STOPS),
)


def builtin_templates() -> list[Template]:
    """Return the five built-in templates in their canonical order."""
    return list(_BUILTINS)


def get_template(template_id: str) -> Template:
    for template in _BUILTINS:
        if template.id == template_id:
            return template
    raise TemplatePackError(f"No template named '{template_id}'.")


def render(template: Template, inputs: list[str] | tuple[str, ...]) -> RenderedPrompt:
    """Substitute inputs into the template and drop the output slot.

    The rendered text ends at the label that preceded the output slot
    (for example "Suggestions:"), which is where the model picks up.
    """
    if len(inputs) != template.input_arity:
        raise ArityMismatch(
            f"Template '{template.id}' takes {template.input_arity} input(s), "
            f"got {len(inputs)}."
        )
    cleaned = []
    for value in inputs:
        trimmed = value.strip()
        if not trimmed:
            raise EmptyInput(f"Template '{template.id}' received a blank input.")
        cleaned.append(trimmed)

    text = template.body
    for value in cleaned:
        text = text.replace(INPUT_MARK, value, 1)
    head, _, _ = text.rpartition(OUTPUT_MARK)
    text = head.rstrip(" \t")
    return RenderedPrompt(template.id, text, tuple(cleaned))


def join_words(words: list[str] | tuple[str, ...]) -> str:
    """Join words with ", " for insertion into the scene template."""
    if not words:
        raise EmptyList("At least one word is needed.")
    cleaned = []
    for word in words:
        trimmed = word.strip()
        if not trimmed:
            raise EmptyList("Words must not be blank.")
        cleaned.append(trimmed)
    return ", ".join(cleaned)


# --- template packs -------------------------------------------------------
#
# A pack is a directory with a manifest.json plus one text file per
# template, so deployments can revise the few-shot examples without
# touching code. Template files end with a single trailing newline that
# is not part of the body.

MANIFEST_NAME = "manifest.json"


def load_template_pack(directory: str | Path) -> list[Template]:
    root = Path(directory)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise TemplatePackError(f"Template pack '{root}' has no {MANIFEST_NAME}.")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise TemplatePackError(f"Could not read {manifest_path}: {exc}") from exc

    entries = manifest.get("templates")
    if not isinstance(entries, list) or not entries:
        raise TemplatePackError(f"{manifest_path} lists no templates.")

    templates = []
    for entry in entries:
        try:
            body_path = root / entry["file"]
            body = body_path.read_text(encoding="utf-8")
            if body.endswith("\n"):
                body = body[:-1]
            templates.append(
                Template(
                    id=entry["id"],
                    body=body,
                    input_arity=int(entry["input_arity"]),
                    output_grammar=entry["output_grammar"],
                    stop_sequences=tuple(entry["stop_sequences"]),
                )
            )
        except KeyError as exc:
            raise TemplatePackError(f"Manifest entry is missing {exc}.") from exc
        except OSError as exc:
            raise TemplatePackError(f"Could not read template file: {exc}") from exc
    return templates
