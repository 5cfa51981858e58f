import io
import json
import os

import pytest

from helpers import events_from
from reference_trace import build_state
from test_induction import (
    MURDER_LEX,
    MURDER_ROLES,
    make_template,
    murder_tuples,
    t5,
)
from ternex.bootstrap import initialize_instances
from ternex.induction import induce_candidates
from ternex.store import (
    CurationError,
    IntegrityError,
    ProjectState,
    StoreError,
    UnknownTemplateError,
    VersionError,
    export_instances_tsv,
    export_templates_tsv,
    load,
    precision,
    record_judgment,
    sample_for_review,
    save,
    serialize,
    set_role_labels,
    set_status,
    stats_report,
    validate_state,
)


def murder_state(curated: bool = True) -> ProjectState:
    tuples = murder_tuples() + [
        t5("bob", "stab", "alice", "with", "knife"),
        t5("carl", "stab", "dan", "with", "axe"),
        t5("eve", "stab", "frank", "with", "sword"),
    ]
    templates = induce_candidates(tuples, MURDER_LEX)
    state = ProjectState(
        event_specs=events_from(("MurderEvent", ["kill", "stab"])),
        templates=templates,
    )
    if curated:
        kill = next(t for t in templates if t.key.verb_lemma == "kill")
        stab = next(t for t in templates if t.key.verb_lemma == "stab")
        set_role_labels(state, kill.id, MURDER_ROLES)
        set_status(state, kill.id, "accepted")
        set_status(state, stab.id, "rejected")
        initialize_instances(state, MURDER_LEX)
    return state


# ---------------------------------------------------------------------------
# persistence

def test_empty_project_round_trip():
    state = ProjectState()
    assert serialize(load(io.StringIO(serialize(state)))) == serialize(state)


def test_populated_round_trip(tmp_path):
    state = murder_state()
    record_judgment(state, state.templates[0].id, "correct", 0)
    path = tmp_path / "proj.json"
    save(state, path)
    assert serialize(load(path)) == serialize(state)


def test_reference_scale_round_trip(tmp_path):
    state = build_state(upto_iteration=0)
    assert len(state.templates) == 186
    assert len(state.instances) == 31_161
    path = tmp_path / "big.json"
    save(state, path)
    assert serialize(load(path)) == serialize(state)


def test_serialization_ends_with_newline_and_sorts_keys():
    text = serialize(ProjectState())
    assert text.endswith("\n")
    doc = json.loads(text)
    assert list(doc) == sorted(doc)
    assert doc["version"] == 1


def test_truncated_file_loads_nothing(tmp_path):
    state = murder_state()
    path = tmp_path / "proj.json"
    save(state, path)
    data = path.read_text()
    path.write_text(data[: len(data) // 2])
    with pytest.raises(StoreError):
        load(path)


def test_version_mismatch_names_both_versions(tmp_path):
    doc = json.loads(serialize(ProjectState()))
    doc["version"] = 99
    path = tmp_path / "proj.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(VersionError) as err:
        load(path)
    assert "99" in str(err.value) and "1" in str(err.value)


def test_load_rejects_dangling_instance_id(tmp_path):
    state = murder_state()
    state.instances[0] = type(state.instances[0])(
        **{**state.instances[0].__dict__, "template_id": "deadbeef0000"}
    )
    path = tmp_path / "proj.json"
    save(state, path)
    with pytest.raises(IntegrityError, match="deadbeef0000"):
        load(path)


def test_save_failure_leaves_previous_file_intact(tmp_path, monkeypatch):
    path = tmp_path / "proj.json"
    save(ProjectState(), path)
    before = path.read_text()

    def boom(src, dst):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", boom)
    with pytest.raises(OSError):
        save(murder_state(), path)
    monkeypatch.undo()
    assert path.read_text() == before
    assert [p for p in os.listdir(tmp_path) if p.endswith(".tmp")] == []


def test_validate_state_reports_each_issue_kind():
    state = murder_state(curated=False)
    state.templates.append(state.templates[0])  # duplicate id
    accepted = make_template("MurderEvent", "poison", None)
    state.templates.append(accepted)  # accepted without labels
    from ternex.induction import Instance

    state.instances.append(
        Instance("MurderEvent", MURDER_ROLES, ("a", "b", "c"), ("a", "b", "c"),
                 "nosuchid0000", "d1", 0)
    )
    issues = validate_state(state)
    assert any("duplicate" in i for i in issues)
    assert any("role labels" in i for i in issues)
    assert any("nosuchid0000" in i for i in issues)


# ---------------------------------------------------------------------------
# curation

def test_accept_requires_labels_first():
    state = murder_state(curated=False)
    tid = state.templates[0].id
    with pytest.raises(CurationError, match="role labels"):
        set_status(state, tid, "accepted")
    set_role_labels(state, tid, MURDER_ROLES)
    assert set_status(state, tid, "accepted").status == "accepted"


def test_reject_keeps_template_for_audit():
    state = murder_state(curated=False)
    tid = state.templates[0].id
    set_status(state, tid, "rejected")
    assert state.template_by_id(tid).status == "rejected"


def test_set_status_validates_inputs():
    state = murder_state(curated=False)
    with pytest.raises(UnknownTemplateError):
        set_status(state, "missing00000", "accepted")
    with pytest.raises(CurationError):
        set_status(state, state.templates[0].id, "maybe")


def test_role_labels_upsert_relation_once():
    state = murder_state(curated=False)
    a, b = state.templates[0].id, state.templates[1].id
    set_role_labels(state, a, MURDER_ROLES)
    assert len(state.relations) == 1
    set_role_labels(state, b, MURDER_ROLES)
    assert len(state.relations) == 1


def test_role_labels_validation():
    state = murder_state(curated=False)
    tid = state.templates[0].id
    with pytest.raises(CurationError):
        set_role_labels(state, tid, ("MurderEventA", "MurderEventA", "MurderEventB"))
    with pytest.raises(CurationError):
        set_role_labels(state, tid, ("MurderEventA", "MurderEventB"))
    with pytest.raises(CurationError, match="prefixed"):
        set_role_labels(state, tid, ("OtherA", "OtherB", "OtherC"))


def test_mutations_bump_the_version_counter():
    state = murder_state(curated=False)
    tid = state.templates[0].id
    base = state.mutation_counter
    set_role_labels(state, tid, MURDER_ROLES)
    set_status(state, tid, "accepted")
    record_judgment(state, tid, "correct", 0)
    assert state.mutation_counter == base + 3


# ---------------------------------------------------------------------------
# sampling and judgments

def big_iteration_state(count=174, iteration=1):
    templates = [make_template("AEvent", f"v{i}", ("AEventX", "AEventY", "AEventZ"))
                 for i in range(count)]
    for t in templates:
        t.iteration_discovered = iteration
    return ProjectState(templates=templates)


def test_sample_of_large_iteration_is_exactly_n():
    state = big_iteration_state()
    sample = sample_for_review(state, 1, n=100, seed=3)
    assert len(sample) == 100
    assert len({t.id for t in sample}) == 100
    assert all(t.iteration_discovered == 1 for t in sample)


def test_sample_returns_whole_small_population_sorted():
    state = big_iteration_state(count=7)
    sample = sample_for_review(state, 1, n=100, seed=3)
    assert [t.id for t in sample] == sorted(t.id for t in state.templates)


def test_sample_is_deterministic_under_a_seed():
    state = big_iteration_state()
    a = sample_for_review(state, 1, n=100, seed=5)
    b = sample_for_review(state, 1, n=100, seed=5)
    assert [t.id for t in a] == [t.id for t in b]
    c = sample_for_review(state, 1, n=100, seed=6)
    assert [t.id for t in a] != [t.id for t in c]


def test_sample_of_empty_iteration_is_empty():
    assert sample_for_review(big_iteration_state(), 9) == []


def test_sample_rejects_nonpositive_n():
    with pytest.raises(ValueError):
        sample_for_review(ProjectState(), 0, n=0)


def test_precision_ninety_five_of_one_hundred():
    state = big_iteration_state()
    sample = sample_for_review(state, 1, n=100, seed=0)
    for pos, t in enumerate(sample):
        record_judgment(state, t.id, "wrong" if pos < 5 else "correct", 1)
    p = precision(state, 1)
    assert p == 0.95
    assert p * 100 == 95  # no reporting drift


def test_precision_absent_without_judgments():
    assert precision(big_iteration_state(), 1) is None


def test_precision_three_of_three():
    state = big_iteration_state(count=3)
    for t in state.templates:
        record_judgment(state, t.id, "correct", 1)
    assert precision(state, 1) == 1.0


def test_rejudging_replaces_the_earlier_verdict():
    state = big_iteration_state(count=3)
    tid = state.templates[0].id
    record_judgment(state, tid, "wrong", 1)
    record_judgment(state, tid, "correct", 1, note="second look")
    assert len(state.judgments) == 1
    assert state.judgments[0].verdict == "correct"
    assert state.judgments[0].note == "second look"


def test_judgment_iteration_must_match_discovery():
    state = big_iteration_state(count=3)
    with pytest.raises(CurationError, match="iteration"):
        record_judgment(state, state.templates[0].id, "correct", 2)


def test_judgment_rejects_unknown_verdict():
    state = big_iteration_state(count=3)
    with pytest.raises(CurationError):
        record_judgment(state, state.templates[0].id, "plausible", 1)


# ---------------------------------------------------------------------------
# exports and stats

def test_export_instances_tsv_rows():
    state = murder_state()
    out = io.StringIO()
    assert export_instances_tsv(state, out) == 3
    lines = out.getvalue().splitlines()
    assert lines[0].split("\t") == [
        ",".join(MURDER_ROLES), "bob", "alice", "knife", "d1",
        lines[0].split("\t")[5],
    ]
    assert len(lines) == 3
    assert lines == sorted(lines)


def test_export_templates_tsv_rows():
    state = murder_state()
    out = io.StringIO()
    assert export_templates_tsv(state, out) == 2
    rows = [line.split("\t") for line in out.getvalue().splitlines()]
    by_verb = {r[3]: r for r in rows}
    assert by_verb["kill"][1:] == [
        "MurderEvent", "NEL_person", "kill", "NEL_person", "with", "WDN_weapon",
        "accepted", ",".join(MURDER_ROLES),
    ]
    assert by_verb["stab"][7] == "rejected"
    assert by_verb["stab"][8] == ""  # no labels


def test_stats_report_derives_live_row_for_fresh_project():
    state = murder_state()
    state.iteration_reports = []
    report = stats_report(state)
    assert len(report["iterations"]) == 1
    row = report["iterations"][0]
    assert row["iteration"] == 0
    assert row["new_templates"] == 1  # one accepted
    assert row["new_instances"] == len(state.instances)
    assert report["template_status_counts"] == {
        "candidate": 0, "accepted": 1, "rejected": 1,
    }
    assert report["relation_count"] == 1
    assert report["event_type_count"] == 1


def test_stats_report_follows_iteration_reports_and_precision():
    state = build_state()
    report = stats_report(state)
    rows = report["iterations"]
    assert [r["cumulative_templates"] for r in rows] == [186, 360, 460, 502]
    assert [r["cumulative_instances"] for r in rows] == [31_161, 45_000, 55_000, 61_380]
    assert [r["precision"] for r in rows] == [1.0, 1.0, 0.95, 1.0]
    assert [r["judged"] for r in rows] == [100, 100, 100, 42]
    assert report["instance_count"] == 61_380
    assert report["relation_count"] == 50
    assert report["event_type_count"] == 18
