"""Command-line front end.

Four subcommands: `suggest` asks the engine for one batch of
suggestions, `wizard` drives a whole session from a script file,
`record` captures live backend completions into a fixture file, and
`serve` starts the HTTP API.

Exit codes: 0 success, 2 usage or script error, 3 suggestions
exhausted (partial results were printed), 4 backend failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import wizard
from .config import MODE_FIXTURE, MODE_RECORD, load_settings, build_client, build_service
from .errors import (
    BackendUnavailable,
    MissingFixture,
    NoSuggestions,
    PromptsmithError,
)
from .llm import FixtureStore
from .parsing import normalize_for_comparison
from .storage import SessionStore
from .suggestions import (
    STEP_ACTIONS,
    STEP_ENVIRONMENT,
    STEP_SCENE,
    STEP_SUBJECTS,
    STEP_SYNONYMS,
    SuggestionQuery,
    with_more_excluded,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_EXHAUSTED = 3
EXIT_BACKEND = 4

_SUGGESTION_STEPS = (STEP_ENVIRONMENT, STEP_SUBJECTS, STEP_ACTIONS, STEP_SCENE, STEP_SYNONYMS)


def sequential_ids(prefix: str = "session"):
    counter = itertools.count(1)

    def make() -> str:
        return f"{prefix}-{next(counter):04d}"

    return make


def counting_clock(start: str = "2024-01-01T00:00:00"):
    """Clock that ticks one second per call; keeps records reproducible."""
    counter = itertools.count(0)

    def now() -> str:
        return f"{start}.{next(counter):06d}Z"

    return now


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="promptsmith")
    parser.add_argument("--config", help="path to a JSON settings file")
    sub = parser.add_subparsers(dest="command", required=True)

    suggest = sub.add_parser("suggest", help="fetch one batch of suggestions")
    suggest.add_argument("step", choices=_SUGGESTION_STEPS)
    suggest.add_argument("inputs", nargs="*", help="step inputs, e.g. the environment")
    suggest.add_argument("--min-count", type=int, default=None)
    suggest.add_argument("--exclude", default="", help="comma-separated words to omit")
    suggest.add_argument("--fixtures", help="fixture file for replay mode")
    suggest.add_argument("--json", action="store_true", dest="as_json")

    wiz = sub.add_parser("wizard", help="run a scripted wizard session")
    wiz.add_argument("--script", required=True, help="script file, or - for stdin")
    wiz.add_argument("--fixtures", help="fixture file for replay mode")
    wiz.add_argument("--store-dir", help="directory for session records")
    wiz.add_argument(
        "--deterministic",
        action="store_true",
        help="sequential ids and a fixed clock, for reproducible records",
    )
    wiz.add_argument("--json", action="store_true", dest="as_json")

    rec = sub.add_parser("record", help="capture live completions into a fixture file")
    rec.add_argument("--queries", required=True, help="JSONL file of suggestion queries")
    rec.add_argument("--fixtures", required=True, help="fixture file to write")
    rec.add_argument("--backend-url", help="live backend endpoint")

    serve = sub.add_parser("serve", help="start the HTTP API")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--fixtures", help="fixture file for replay mode")
    serve.add_argument("--store-dir", help="directory for session records")

    return parser


def _settings_for(args: argparse.Namespace):
    settings = load_settings(getattr(args, "config", None), os.environ)
    fixtures = getattr(args, "fixtures", None)
    if fixtures:
        settings = replace(settings, fixture_path=fixtures, backend_mode=MODE_FIXTURE)
    store_dir = getattr(args, "store_dir", None)
    if store_dir:
        settings = replace(settings, store_dir=store_dir)
    return settings


def _print_items(items, exhausted: bool, attempts_used: int, as_json: bool) -> int:
    if as_json:
        print(
            json.dumps(
                {"items": list(items), "exhausted": exhausted, "attempts_used": attempts_used},
                ensure_ascii=False,
            )
        )
    else:
        for item in items:
            print(item)
    if exhausted:
        print(
            f"only {len(items)} suggestion(s) were available after "
            f"{attempts_used} attempt(s)",
            file=sys.stderr,
        )
        return EXIT_EXHAUSTED
    return EXIT_OK


def cmd_suggest(args: argparse.Namespace) -> int:
    settings = _settings_for(args)
    service = build_service(settings)
    exclude = tuple(w.strip() for w in args.exclude.split(",") if w.strip())
    query = SuggestionQuery(
        step=args.step,
        inputs=tuple(args.inputs),
        min_count=args.min_count,
        exclude=exclude,
    )
    result = service.suggest(query)
    return _print_items(result.items, result.exhausted, result.attempts_used, args.as_json)


class ScriptError(Exception):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"script line {line_no}: {message}")


def parse_script(text: str) -> list[tuple[int, str, list[str]]]:
    """Parse the wizard mini-language into (line number, verb, args) rows."""
    rows = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        verb, _, rest = line.partition(" ")
        rows.append((line_no, verb, rest.split(" ") if rest else []))
    return rows


def _script_action(line_no: int, verb: str, parts: list[str]) -> wizard.ActionRequest:
    advance = not verb.endswith("+")
    base = verb.rstrip("+")
    rest = " ".join(parts)
    if base in ("accept", "type"):
        if not rest:
            raise ScriptError(line_no, f"'{verb}' needs text")
        kind = wizard.ACTION_ACCEPT if base == "accept" else wizard.ACTION_TYPE
        return wizard.ActionRequest(kind=kind, text=rest, advance=advance)
    if base == "edit":
        if len(parts) < 2:
            raise ScriptError(line_no, "'edit' needs a keystroke count and text")
        try:
            keystrokes = int(parts[0])
        except ValueError:
            raise ScriptError(line_no, f"'{parts[0]}' is not a keystroke count") from None
        return wizard.ActionRequest(
            kind=wizard.ACTION_EDIT,
            text=" ".join(parts[1:]),
            keystrokes=keystrokes,
            advance=advance,
        )
    if base == "skip":
        return wizard.ActionRequest(kind=wizard.ACTION_SKIP)
    if base == "back":
        return wizard.ActionRequest(kind=wizard.ACTION_BACK)
    if base == "restart":
        return wizard.ActionRequest(kind=wizard.ACTION_RESTART)
    if base == "replace":
        if len(parts) < 2:
            raise ScriptError(line_no, "'replace' needs a target word and a replacement")
        return wizard.ActionRequest(
            kind=wizard.ACTION_REPLACE_WORD,
            text=parts[0],
            replacement=" ".join(parts[1:]),
        )
    raise ScriptError(line_no, f"unknown verb '{verb}'")


def _suggestions_for_step(service, session: wizard.Session):
    """Fetch the batch a user would see at the session's current step."""
    step = session.step
    if step == wizard.STEP_ENVIRONMENT:
        query = SuggestionQuery(step=STEP_ENVIRONMENT)
    elif step == wizard.STEP_SUBJECTS:
        query = SuggestionQuery(step=STEP_SUBJECTS, inputs=(session.environment,))
    elif step == wizard.STEP_ACTIONS:
        query = SuggestionQuery(step=STEP_ACTIONS, inputs=tuple(session.subjects))
    elif step == wizard.STEP_SCENE:
        query = SuggestionQuery(step=STEP_SCENE, inputs=tuple(wizard.scene_words(session)))
    else:
        return None
    return service.suggest(query)


def run_script(
    rows,
    session: wizard.Session,
    service,
    clock,
) -> None:
    for line_no, verb, parts in rows:
        action = _script_action(line_no, verb, parts)
        if action.kind == wizard.ACTION_ACCEPT:
            batch = _suggestions_for_step(service, session)
            if batch is not None:
                wanted = normalize_for_comparison(action.text)
                shown = {normalize_for_comparison(item) for item in batch.items}
                if wanted not in shown:
                    raise ScriptError(
                        line_no, f"'{action.text}' is not among the current suggestions"
                    )
        wizard.apply(session, action, clock)


def cmd_wizard(args: argparse.Namespace) -> int:
    settings = _settings_for(args)
    service = build_service(settings)
    if args.script == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(args.script).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"could not read script: {exc}", file=sys.stderr)
            return EXIT_USAGE

    id_factory = sequential_ids() if args.deterministic else None
    clock = counting_clock() if args.deterministic else None
    session = wizard.create_session(id_factory, clock)

    try:
        run_script(parse_script(text), session, service, clock)
    except ScriptError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE

    if not session.scene:
        print("the script ended without a scene, so there is no prompt", file=sys.stderr)
        return EXIT_USAGE
    prompt = wizard.assemble(session, clock)
    SessionStore(settings.store_dir).save(session)

    if args.as_json:
        print(
            json.dumps(
                {
                    "session_id": session.id,
                    "prompt": prompt.text,
                    "char_count": prompt.char_count,
                    "effort": {
                        "typed_keystrokes": prompt.effort.typed_keystrokes,
                        "pointer_actions": prompt.effort.pointer_actions,
                        "prompt_chars": prompt.effort.prompt_chars,
                        "savings_ratio": prompt.effort.savings_ratio,
                    },
                },
                ensure_ascii=False,
            )
        )
    else:
        effort = prompt.effort
        print(f"typed keystrokes: {effort.typed_keystrokes}", file=sys.stderr)
        print(f"pointer actions: {effort.pointer_actions}", file=sys.stderr)
        print(f"prompt characters: {effort.prompt_chars}", file=sys.stderr)
        print(f"effort saved: {effort.savings_ratio:.1%}", file=sys.stderr)
        print(prompt.text)
    return EXIT_OK


def cmd_record(args: argparse.Namespace) -> int:
    settings = _settings_for(args)
    if args.backend_url:
        settings = replace(settings, backend_url=args.backend_url)
    settings = replace(settings, backend_mode=MODE_RECORD, fixture_path=args.fixtures)

    fixture_path = Path(args.fixtures)
    if fixture_path.exists():
        store = FixtureStore.load(fixture_path, recording=True)
    else:
        store = FixtureStore(recording=True)
    client = build_client(settings, store=store)
    service = build_service(settings, client=client)

    try:
        lines = Path(args.queries).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        print(f"could not read queries: {exc}", file=sys.stderr)
        return EXIT_USAGE

    ran = 0
    for line_no, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            spec = json.loads(line)
        except json.JSONDecodeError as exc:
            print(f"queries line {line_no}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        query = SuggestionQuery(
            step=spec["step"],
            inputs=tuple(spec.get("inputs", ())),
            min_count=spec.get("min_count"),
            exclude=tuple(spec.get("exclude", ())),
        )
        repeat = int(spec.get("repeat", 1))
        for _ in range(repeat):
            result = service.suggest(query)
            query = with_more_excluded(query, result.items)
            ran += 1
    store.save(fixture_path)
    print(f"recorded {len(store)} completion(s) across {ran} quer(y/ies) to {args.fixtures}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    settings = _settings_for(args)
    if args.host:
        settings = replace(settings, listen_host=args.host)
    if args.port:
        settings = replace(settings, listen_port=args.port)
    uvicorn.run(create_app(settings), host=settings.listen_host, port=settings.listen_port)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "suggest": cmd_suggest,
        "wizard": cmd_wizard,
        "record": cmd_record,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except NoSuggestions as exc:
        print(exc.message, file=sys.stderr)
        return EXIT_EXHAUSTED
    except (BackendUnavailable, MissingFixture) as exc:
        print(exc.message, file=sys.stderr)
        return EXIT_BACKEND
    except PromptsmithError as exc:
        print(exc.message, file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE


def run():
    sys.exit(main())
