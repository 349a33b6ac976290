"""Regenerate the committed template pack and the demo fixture file.

Run from the repository root:

    python scripts/regenerate_data.py [output_root]

Both outputs are deterministic, so re-running on a clean tree is a
no-op. The demo fixtures contain raw completions the way a live model
would return them: a leading space after the open label, then the
model continuing the few-shot pattern past the stop sequence.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO_ROOT / "src"))

from promptsmith import templates as tpl  # noqa: E402
from promptsmith.llm import FixtureStore  # noqa: E402

PACK_DIR = Path("src/promptsmith/packs/builtin")
FIXTURE_PATH = Path("fixtures/demo.json")

# (template id, inputs, {attempt tag: raw completion})
RAW_COMPLETIONS = [
    (
        tpl.ENVIRONMENT_SUGGEST,
        [],
        {
            "0": " park\nName: environment\nSuggestion: beach",
            "1": " beach\nName: environment\nSuggestion: forest",
            "2": " forest\nName: environment\nSuggestion: garden",
            # retry attempts keep repeating the same places
            "3": " park\nName: environment\nSuggestion: beach",
            "4": " beach\nName: environment\nSuggestion: park",
            "5": " forest\nName: environment\nSuggestion: park",
        },
    ),
    (
        tpl.SUBJECTS_FOR_ENVIRONMENT,
        ["park"],
        {
            "0": " tree, bench, fountain, dog, grass, path\nEnvironment: beach",
            "1": " pond, flower, bird, kite, squirrel\nEnvironment: zoo",
            "2": " lamp post, bush, trash can, gate, swing, slide\nEnvironment: farm",
            "3": " statue, picnic table, jogger, duck\nEnvironment: lake",
            "4": " bicycle, stroller\nEnvironment: city",
        },
    ),
    (
        tpl.SUBJECTS_FOR_ENVIRONMENT,
        ["school"],
        {
            "0": (
                " blackboard, teacher, chair, book, student, class, eraser, whiteboard,"
                " notebook, pen, pencil, eraser, paper\nEnvironment: gym"
            ),
        },
    ),
    (
        tpl.ACTIONS_FOR_SUBJECTS,
        ["tree"],
        {
            "0": " climb, water, plant, prune, decorate, shake\nword: rock",
            "1": " trim, hug, photograph, lean against\nword: wall",
        },
    ),
    (
        tpl.ACTIONS_FOR_SUBJECTS,
        ["bench"],
        {
            "0": " sit, paint, repair, move, build, carry\nword: door",
            "1": " clean, varnish, flip\nword: fence",
        },
    ),
    (
        tpl.SCENE_FROM_WORDS,
        ["tree, bench"],
        {
            "0": (
                " A young man is sitting on a bench near a small tree."
                " He is wearing a green pullover\nwords: dog, ball\nscene: A dog"
            ),
            "1": " An empty wooden bench under a tall oak tree in autumn\nwords: sun",
            "2": (
                " A painter sitting on a park bench sketching a small tree at sunrise"
                "\n\nwords: boat"
            ),
        },
    ),
    (
        tpl.SCENE_FROM_WORDS,
        ["cat, tree"],
        {
            "0": (
                " A young DSH cat sitting on a small tree branch with leaves in a garden"
                "\nwords: dog, bone\nscene: A dog"
            ),
            "1": " A ginger cat climbing down a tree trunk toward a food bowl\nwords: owl",
            "2": " A cat napping in the shade of a small tree\nwords: bee",
        },
    ),
    (
        tpl.SYNONYMS_FOR_WORD,
        ["blue"],
        {
            "0": " red, pink, orange, yellow, purple, green, brown\nword: fast",
            "1": " red, pink, orange, yellow, purple, green, brown\nword: slow",
            "2": " red, pink, orange, yellow, purple, green, brown\nword: tall",
        },
    ),
    (
        tpl.SYNONYMS_FOR_WORD,
        ["green"],
        {
            "0": " olive, teal, lime, mint, emerald, jade, sage\nword: soft",
        },
    ),
]


def write_pack(root: Path):
    pack = root / PACK_DIR
    pack.mkdir(parents=True, exist_ok=True)
    entries = []
    for template in tpl.builtin_templates():
        filename = f"{template.id}.txt"
        with open(pack / filename, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(template.body + "\n")
        entries.append(
            {
                "id": template.id,
                "file": filename,
                "input_arity": template.input_arity,
                "output_grammar": template.output_grammar,
                "stop_sequences": list(template.stop_sequences),
            }
        )
    manifest = json.dumps({"templates": entries}, ensure_ascii=False, indent=2)
    with open(pack / tpl.MANIFEST_NAME, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(manifest + "\n")


def build_store() -> FixtureStore:
    store = FixtureStore(recording=True)
    for template_id, inputs, completions in RAW_COMPLETIONS:
        template = tpl.get_template(template_id)
        rendered = tpl.render(template, inputs)
        for tag, raw in completions.items():
            store.put(rendered.text, tag, raw)
    return store


def main(argv: list[str]) -> int:
    root = Path(argv[1]) if len(argv) > 1 else REPO_ROOT
    write_pack(root)
    fixture_path = root / FIXTURE_PATH
    fixture_path.parent.mkdir(parents=True, exist_ok=True)
    store = build_store()
    store.save(fixture_path)
    print(f"wrote {root / PACK_DIR} and {fixture_path} ({len(store)} completions)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv))
