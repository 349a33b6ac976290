import json

import pytest

from promptsmith import wizard as wz
from promptsmith.errors import CorruptRecord, NotFound, SchemaMismatch
from promptsmith.storage import SCHEMA_VERSION, SessionStore


def build_session(session_id="abc123") -> wz.Session:
    session = wz.create_session(lambda: session_id, lambda: "2024-01-01T00:00:00.000000Z")
    clock = lambda: "2024-01-01T00:00:01.000000Z"  # noqa: E731
    wz.apply(session, wz.ActionRequest(wz.ACTION_ACCEPT, text="park"), clock)
    wz.apply(session, wz.ActionRequest(wz.ACTION_ACCEPT, text="tree"), clock)
    wz.apply(session, wz.ActionRequest(wz.ACTION_SKIP), clock)
    wz.apply(session, wz.ActionRequest(wz.ACTION_TYPE, text="A tree in a park"), clock)
    return session


def test_save_then_load_round_trips_state(tmp_path):
    store = SessionStore(tmp_path)
    session = build_session()
    path = store.save(session, meta={"backend_mode": "fixture"})
    assert path.name == "abc123.json"

    loaded = store.load("abc123")
    assert wz.snapshot(loaded) == wz.snapshot(session)


def test_record_file_shape(tmp_path):
    store = SessionStore(tmp_path)
    path = store.save(build_session())
    raw = path.read_bytes().decode("utf-8")
    assert raw.endswith("\n")
    record = json.loads(raw)
    assert record["schema_version"] == SCHEMA_VERSION
    assert record["session"]["id"] == "abc123"
    assert isinstance(record["session"]["events"], list)
    assert record["meta"] == {}


def test_save_leaves_no_temp_files(tmp_path):
    store = SessionStore(tmp_path)
    store.save(build_session())
    assert [p.name for p in tmp_path.iterdir()] == ["abc123.json"]


def test_save_is_deterministic_for_equal_sessions(tmp_path):
    store = SessionStore(tmp_path)
    first = store.save(build_session()).read_bytes()
    second = store.save(build_session()).read_bytes()
    assert first == second


def test_load_unknown_session(tmp_path):
    with pytest.raises(NotFound):
        SessionStore(tmp_path).load("missing")


def test_load_rejects_path_traversal_ids(tmp_path):
    with pytest.raises(NotFound):
        SessionStore(tmp_path).load("../etc/passwd")


def test_load_rejects_invalid_json(tmp_path):
    store = SessionStore(tmp_path)
    (tmp_path / "bad.json").write_text("{not json", encoding="utf-8")
    with pytest.raises(CorruptRecord):
        store.load("bad")


def test_load_rejects_future_schema(tmp_path):
    store = SessionStore(tmp_path)
    path = store.save(build_session())
    record = json.loads(path.read_text(encoding="utf-8"))
    record["schema_version"] = SCHEMA_VERSION + 1
    path.write_text(json.dumps(record), encoding="utf-8")
    with pytest.raises(SchemaMismatch):
        store.load("abc123")


def test_load_rejects_snapshot_event_log_disagreement(tmp_path):
    store = SessionStore(tmp_path)
    path = store.save(build_session())
    record = json.loads(path.read_text(encoding="utf-8"))
    record["session"]["scene"] = "something else entirely"
    path.write_text(json.dumps(record), encoding="utf-8")
    with pytest.raises(CorruptRecord):
        store.load("abc123")


def test_load_rejects_missing_fields(tmp_path):
    store = SessionStore(tmp_path)
    (tmp_path / "halfrecord.json").write_text(
        json.dumps({"schema_version": SCHEMA_VERSION, "session": {"id": "halfrecord"}}),
        encoding="utf-8",
    )
    with pytest.raises(CorruptRecord):
        store.load("halfrecord")


def test_list_sessions_newest_first(tmp_path):
    store = SessionStore(tmp_path)
    old = wz.create_session(lambda: "older", lambda: "2024-01-01T00:00:00.000000Z")
    new = wz.create_session(lambda: "newer", lambda: "2024-06-01T00:00:00.000000Z")
    store.save(old)
    store.save(new)
    summaries = store.list_sessions()
    assert [item.id for item in summaries] == ["newer", "older"]


def test_list_sessions_includes_prompt_preview(tmp_path):
    store = SessionStore(tmp_path)
    store.save(build_session())
    summary = store.list_sessions()[0]
    assert summary.prompt_preview == "A tree in a park"


def test_list_sessions_skips_unreadable_files(tmp_path):
    store = SessionStore(tmp_path)
    store.save(build_session())
    (tmp_path / "junk.json").write_text("{oops", encoding="utf-8")
    summaries = store.list_sessions()
    assert [item.id for item in summaries] == ["abc123"]


def test_store_creates_root_directory(tmp_path):
    root = tmp_path / "nested" / "sessions"
    SessionStore(root)
    assert root.is_dir()
