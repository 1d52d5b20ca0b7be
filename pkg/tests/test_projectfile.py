"""Saving and loading project files: canonical bytes, checksums, and
recovery behaviour."""

import json
import random

import pytest

from gcr.components import load_library
from gcr.errors import ChecksumMismatch, IoError, LibraryLoadError, VersionUnsupported
from gcr.model import state_fingerprint
from gcr.projectfile import load_project, save_project
from gcr.session import ProjectSession
from gcr.timeline import SNAPSHOT_EVERY

from conftest import LIBRARIES, make_session, random_op


def small_project(cpp_library, tmp_path):
    session = make_session(cpp_library)
    session.interact("print-text-console", {"Page1_Text1": '"saved"'})
    session.add_comment(session.state.goals[0].root.step_id, "tail note")
    return session, tmp_path / "proj.gcrp"


def test_save_load_round_trip(cpp_library, tmp_path):
    session, path = small_project(cpp_library, tmp_path)
    save_project(session, path)
    assert session.path == str(path)
    loaded = load_project(path, cpp_library)
    assert state_fingerprint(loaded.state) == state_fingerprint(session.state)
    assert [e.to_dict() for e in loaded.events] == [e.to_dict() for e in session.events]
    assert loaded.head == session.head


def test_save_is_canonical_and_stable(cpp_library, tmp_path):
    session, path = small_project(cpp_library, tmp_path)
    save_project(session, path)
    first = path.read_bytes()
    save_project(session, path)
    assert path.read_bytes() == first
    # loading and saving again must not change a byte either
    loaded = load_project(path, cpp_library)
    other = tmp_path / "copy.gcrp"
    save_project(loaded, other)
    assert other.read_bytes() == first


def test_save_persists_a_rewound_head(cpp_library, tmp_path):
    session, path = small_project(cpp_library, tmp_path)
    session.seek(1)
    save_project(session, path)
    loaded = load_project(path, cpp_library)
    assert loaded.head == 1
    assert len(loaded.events) == 3
    assert [s.label for s in loaded.state.iter_steps()] == ["The First Step"]


def test_save_requires_a_path(cpp_library):
    session = make_session(cpp_library)
    with pytest.raises(IoError):
        save_project(session)


def test_failed_save_leaves_no_temp_file(cpp_library, tmp_path):
    # target is a directory, so the final rename must fail
    session = make_session(cpp_library)
    target = tmp_path / "taken.gcrp"
    target.mkdir()
    with pytest.raises(IoError):
        save_project(session, target)
    assert list(tmp_path.glob("*.tmp")) == []


def test_load_missing_or_corrupt_file(tmp_path, cpp_library):
    with pytest.raises(IoError):
        load_project(tmp_path / "nope.gcrp", cpp_library)
    bad = tmp_path / "bad.gcrp"
    bad.write_text('{"format": 1, "truncated...')
    with pytest.raises(IoError):
        load_project(bad, cpp_library)


def test_load_rejects_unknown_format(cpp_library, tmp_path):
    session, path = small_project(cpp_library, tmp_path)
    save_project(session, path)
    data = json.loads(path.read_text())
    data["format"] = 99
    path.write_text(json.dumps(data))
    with pytest.raises(VersionUnsupported):
        load_project(path, cpp_library)


def test_load_rejects_wrong_library(cpp_library, py_library, tmp_path):
    session, path = small_project(cpp_library, tmp_path)
    save_project(session, path)
    with pytest.raises(LibraryLoadError):
        load_project(path, py_library)


def test_tampered_event_fails_the_checksum(cpp_library, tmp_path):
    session, path = small_project(cpp_library, tmp_path)
    save_project(session, path)
    data = json.loads(path.read_text())
    target = next(e for e in data["events"] if e["kind"] == "addComment"
                  and e["payload"]["label"] == "tail note")
    target["payload"]["label"] = "forged note"
    path.write_text(json.dumps(data))
    with pytest.raises(ChecksumMismatch):
        load_project(path, cpp_library)


def test_tampered_checksum_field_is_caught(cpp_library, tmp_path):
    session, path = small_project(cpp_library, tmp_path)
    save_project(session, path)
    data = json.loads(path.read_text())
    data["checksum"] = "sha256:" + "0" * 64
    path.write_text(json.dumps(data))
    with pytest.raises(ChecksumMismatch):
        load_project(path, cpp_library)


def _long_session(cpp_library, seed=3):
    rng = random.Random(seed)
    session = make_session(cpp_library)
    while len(session.events) < SNAPSHOT_EVERY + 4:
        random_op(session, rng)
    return session


def test_snapshots_are_persisted_on_schedule(cpp_library, tmp_path):
    session = _long_session(cpp_library)
    path = tmp_path / "long.gcrp"
    save_project(session, path)
    data = json.loads(path.read_text())
    assert str(SNAPSHOT_EVERY) in data["snapshots"]
    short = make_session(cpp_library)
    short_path = tmp_path / "short.gcrp"
    save_project(short, short_path)
    assert json.loads(short_path.read_text())["snapshots"] == {}


def test_poisoned_snapshot_falls_back_to_the_log(cpp_library, tmp_path):
    session = _long_session(cpp_library)
    path = tmp_path / "long.gcrp"
    save_project(session, path)
    reference = state_fingerprint(session.state)

    data = json.loads(path.read_text())
    key = str(max(int(k) for k in data["snapshots"]))
    data["snapshots"][key]["nextStep"] = 999999  # replay from here detonates
    path.write_text(json.dumps(data))
    loaded = load_project(path, cpp_library)
    assert state_fingerprint(loaded.state) == reference

    data = json.loads(path.read_text())
    data["snapshots"][key]["projectId"] = "someone-else"  # silently wrong
    path.write_text(json.dumps(data))
    loaded = load_project(path, cpp_library)
    assert state_fingerprint(loaded.state) == reference


def test_head_is_clamped_to_the_log(cpp_library, tmp_path):
    session, path = small_project(cpp_library, tmp_path)
    save_project(session, path)
    data = json.loads(path.read_text())
    data["head"] = 999
    path.write_text(json.dumps(data))
    assert load_project(path, cpp_library).head == 3
    data["head"] = -5
    path.write_text(json.dumps(data))
    assert load_project(path, cpp_library).head == 0


def test_load_resolves_library_from_disk(cpp_library, tmp_path):
    session, path = small_project(cpp_library, tmp_path)
    save_project(session, path)
    loaded = load_project(path)  # no library object passed in
    assert loaded.library.library_id == "cpp-console-sample"
    assert state_fingerprint(loaded.state) == state_fingerprint(session.state)


def test_load_resolves_relative_library_paths(tmp_path):
    import shutil

    shutil.copytree(LIBRARIES / "cpp-console", tmp_path / "bundled-lib")
    library = load_library(tmp_path / "bundled-lib")
    session = ProjectSession.create("rel", library, "bundled-lib")
    session.interact("print-blank-line", {})
    path = tmp_path / "rel.gcrp"
    save_project(session, path)
    loaded = load_project(path)
    assert loaded.library.library_id == "cpp-console-sample"
    assert state_fingerprint(loaded.state) == state_fingerprint(session.state)


def test_random_histories_round_trip(cpp_library, tmp_path):
    for seed in range(5):
        rng = random.Random(seed + 500)
        session = make_session(cpp_library)
        while len(session.events) < rng.randrange(5, 40):
            random_op(session, rng)
        path = tmp_path / f"r{seed}.gcrp"
        save_project(session, path)
        loaded = load_project(path, cpp_library)
        assert state_fingerprint(loaded.state) == state_fingerprint(session.state)
        again = tmp_path / f"r{seed}b.gcrp"
        save_project(loaded, again)
        assert again.read_bytes() == path.read_bytes()


def test_multi_record_clone_paste_survives_a_reload(cpp_library, tmp_path):
    """Pasted clones of several interactions must replay from disk in
    the same order they were minted live.  The canonical writer sorts
    JSON keys, so this breaks if the paste apply walks its record map
    in dict order once ids reach two digits ("i10" sorts before "i2")."""
    session = make_session(cpp_library)
    minted = [
        session.interact("print-text-console", {"Page1_Text1": f'"{n}"'})
        for n in range(11)
    ]
    early = minted[1]["stepIds"][0]    # belongs to i2
    late = minted[9]["stepIds"][0]     # belongs to i10
    session.copy([late, early])
    session.paste(session.state.goals[0].root.step_id)

    path = tmp_path / "clones.gcrp"
    save_project(session, path)
    loaded = load_project(path, cpp_library)
    assert state_fingerprint(loaded.state) == state_fingerprint(session.state)
    again = tmp_path / "clones-b.gcrp"
    save_project(loaded, again)
    assert again.read_bytes() == path.read_bytes()
