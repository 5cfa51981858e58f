"""Project state persistence and curation operations.

All pipeline state lives in one JSON project file with a format version;
saves are atomic (write to a temp file, then rename) and loads validate
referential integrity before returning. Curation (status changes, role
labeling, review sampling, precision judgments) goes through the functions
here so every mutation leaves the state consistent.
"""

from __future__ import annotations

import json
import os
import random
import tempfile
from dataclasses import dataclass, field
from typing import IO, Iterable

from .bootstrap import IterationReport
from .extraction import EventSpec, Tuple5
from .induction import (
    STATUS_ACCEPTED,
    STATUS_CANDIDATE,
    STATUS_REJECTED,
    Instance,
    Template,
    TemplateKey,
    TernaryRelation,
    relation_inventory,
)
from .lexicon import TypeName

FORMAT_VERSION = 1


class StoreError(Exception):
    """Base for store failures."""


class VersionError(StoreError):
    """Project file format version does not match this code."""


class IntegrityError(StoreError):
    """Referential integrity violated."""


class UnknownTemplateError(StoreError):
    pass


class CurationError(StoreError):
    """Invalid curation transition (e.g. accepting an unlabeled template)."""


@dataclass
class Judgment:
    template_id: str
    verdict: str  # "correct" | "wrong"
    iteration: int
    note: str = ""


@dataclass
class ProjectState:
    version: int = FORMAT_VERSION
    event_specs: list[EventSpec] = field(default_factory=list)
    templates: list[Template] = field(default_factory=list)
    relations: list[TernaryRelation] = field(default_factory=list)
    instances: list[Instance] = field(default_factory=list)
    iteration_reports: list[IterationReport] = field(default_factory=list)
    judgments: list[Judgment] = field(default_factory=list)
    mutation_counter: int = 0

    def template_by_id(self, template_id: str) -> Template:
        for t in self.templates:
            if t.id == template_id:
                return t
        raise UnknownTemplateError(f"unknown template id: {template_id}")


# ---------------------------------------------------------------------------
# serialization

def _tuple5_to_json(t: Tuple5) -> dict:
    return {
        "doc_id": t.doc_id,
        "sent_index": t.sent_index,
        "chunk_indices": list(t.chunk_indices),
        "n1": t.n1,
        "n2": t.n2,
        "n3": t.n3,
        "raw_n1": t.raw_n1,
        "raw_n2": t.raw_n2,
        "raw_n3": t.raw_n3,
        "verb_lemma": t.verb_lemma,
        "verb_surface": t.verb_surface,
        "connector": list(t.connector),
        "mode": t.mode,
        "event_type": t.event_type,
    }


def _tuple5_from_json(d: dict) -> Tuple5:
    return Tuple5(
        doc_id=d["doc_id"],
        sent_index=d["sent_index"],
        chunk_indices=tuple(d["chunk_indices"]),
        n1=d["n1"],
        n2=d["n2"],
        n3=d["n3"],
        raw_n1=d["raw_n1"],
        raw_n2=d["raw_n2"],
        raw_n3=d["raw_n3"],
        verb_lemma=d["verb_lemma"],
        verb_surface=d["verb_surface"],
        connector=tuple(d["connector"]),
        mode=d["mode"],
        event_type=d["event_type"],
    )


def _template_to_json(t: Template) -> dict:
    return {
        "id": t.id,
        "event_type": t.event_type,
        "key": {
            "type1": t.key.type1.render(),
            "verb_lemma": t.key.verb_lemma,
            "type2": t.key.type2.render(),
            "connector": list(t.key.connector),
            "type3": t.key.type3.render(),
        },
        "status": t.status,
        "role_labels": list(t.role_labels) if t.role_labels else None,
        "support": sorted(list(triple) for triple in t.support),
        "support_tuples": [_tuple5_to_json(x) for x in t.support_tuples],
        "iteration_discovered": t.iteration_discovered,
        "parent_template_id": t.parent_template_id,
    }


def _template_from_json(d: dict) -> Template:
    key = TemplateKey(
        type1=TypeName.parse(d["key"]["type1"]),
        verb_lemma=d["key"]["verb_lemma"],
        type2=TypeName.parse(d["key"]["type2"]),
        connector=tuple(d["key"]["connector"]),
        type3=TypeName.parse(d["key"]["type3"]),
    )
    return Template(
        id=d["id"],
        key=key,
        event_type=d["event_type"],
        status=d["status"],
        role_labels=tuple(d["role_labels"]) if d["role_labels"] else None,
        support={tuple(triple) for triple in d["support"]},
        support_tuples=[_tuple5_from_json(x) for x in d["support_tuples"]],
        iteration_discovered=d["iteration_discovered"],
        parent_template_id=d["parent_template_id"],
    )


def state_to_json(state: ProjectState) -> dict:
    return {
        "version": state.version,
        "event_specs": [
            {"event_type": s.event_type, "triggers": dict(sorted(s.triggers.items()))}
            for s in state.event_specs
        ],
        "templates": [_template_to_json(t) for t in state.templates],
        "relations": [
            {"event_type": r.event_type, "roles": list(r.roles)} for r in state.relations
        ],
        "instances": [
            {
                "event_type": i.event_type,
                "roles": list(i.roles),
                "args": list(i.args),
                "raw_args": list(i.raw_args),
                "template_id": i.template_id,
                "doc_id": i.doc_id,
                "sent_index": i.sent_index,
            }
            for i in state.instances
        ],
        "iteration_reports": [
            {
                "iteration": r.iteration,
                "new_templates": r.new_templates,
                "cumulative_templates": r.cumulative_templates,
                "new_instances": r.new_instances,
                "cumulative_instances": r.cumulative_instances,
                "new_trigger_verbs": {k: list(v) for k, v in sorted(r.new_trigger_verbs.items())},
                "relation_count": r.relation_count,
            }
            for r in state.iteration_reports
        ],
        "judgments": [
            {
                "template_id": j.template_id,
                "verdict": j.verdict,
                "iteration": j.iteration,
                "note": j.note,
            }
            for j in state.judgments
        ],
        "mutation_counter": state.mutation_counter,
    }


def state_from_json(doc: dict) -> ProjectState:
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise VersionError(f"project file version {version!r}, this build reads {FORMAT_VERSION}")
    state = ProjectState(
        version=version,
        event_specs=[
            EventSpec(s["event_type"], dict(s["triggers"])) for s in doc["event_specs"]
        ],
        templates=[_template_from_json(t) for t in doc["templates"]],
        relations=[
            TernaryRelation(r["event_type"], tuple(r["roles"])) for r in doc["relations"]
        ],
        instances=[
            Instance(
                event_type=i["event_type"],
                roles=tuple(i["roles"]),
                args=tuple(i["args"]),
                raw_args=tuple(i["raw_args"]),
                template_id=i["template_id"],
                doc_id=i["doc_id"],
                sent_index=i["sent_index"],
            )
            for i in doc["instances"]
        ],
        iteration_reports=[
            IterationReport(
                iteration=r["iteration"],
                new_templates=r["new_templates"],
                cumulative_templates=r["cumulative_templates"],
                new_instances=r["new_instances"],
                cumulative_instances=r["cumulative_instances"],
                new_trigger_verbs={k: list(v) for k, v in r["new_trigger_verbs"].items()},
                relation_count=r["relation_count"],
            )
            for r in doc["iteration_reports"]
        ],
        judgments=[
            Judgment(j["template_id"], j["verdict"], j["iteration"], j.get("note", ""))
            for j in doc["judgments"]
        ],
        mutation_counter=doc.get("mutation_counter", 0),
    )
    return state


def serialize(state: ProjectState) -> str:
    return json.dumps(state_to_json(state), ensure_ascii=False, sort_keys=True, indent=1) + "\n"


def save(state: ProjectState, path: str | os.PathLike) -> None:
    """Atomic save: the target file is replaced only after the full document
    has been written, so a crash never leaves a loadable half-state."""
    path = os.fspath(path)
    data = serialize(state)
    directory = os.path.dirname(path) or "."
    fd, tmp_path = tempfile.mkstemp(prefix=".ternex-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(data)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def validate_state(state: ProjectState) -> list[str]:
    """Referential-integrity issues, empty when consistent."""
    issues: list[str] = []
    ids = {t.id for t in state.templates}
    if len(ids) != len(state.templates):
        issues.append("duplicate template ids")
    relations = set(state.relations)
    for t in state.templates:
        if t.status == STATUS_ACCEPTED:
            if t.role_labels is None:
                issues.append(f"accepted template {t.id} has no role labels")
            elif TernaryRelation(t.event_type, t.role_labels) not in relations:
                issues.append(f"accepted template {t.id} has an unregistered relation")
    for inst in state.instances:
        if inst.template_id not in ids:
            issues.append(f"instance refers to dangling template id {inst.template_id}")
    for j in state.judgments:
        if j.template_id not in ids:
            issues.append(f"judgment refers to dangling template id {j.template_id}")
    return issues


def load(source: str | os.PathLike | IO) -> ProjectState:
    """Load a project file written by :func:`save`. Truncated or otherwise
    unparseable files raise StoreError without partial state; integrity
    violations raise IntegrityError naming the dangling id."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as f:
            text = f.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise StoreError(f"unreadable project file: {e}") from e
    if not isinstance(doc, dict):
        raise StoreError("unreadable project file: not an object")
    state = state_from_json(doc)
    issues = validate_state(state)
    if issues:
        raise IntegrityError("; ".join(issues))
    return state


# ---------------------------------------------------------------------------
# curation operations

def set_status(state: ProjectState, template_id: str, status: str) -> Template:
    """Accept or reject a template. Accepting requires role labels; rejected
    templates are kept for audit but excluded from materialization and
    bootstrapping."""
    if status not in (STATUS_ACCEPTED, STATUS_REJECTED):
        raise CurationError(f"status must be accepted or rejected, got {status!r}")
    template = state.template_by_id(template_id)
    if status == STATUS_ACCEPTED and template.role_labels is None:
        raise CurationError(f"template {template_id}: role labels must be set before accepting")
    template.status = status
    state.mutation_counter += 1
    return template


def set_role_labels(state: ProjectState, template_id: str, roles: Iterable[str]) -> Template:
    """Label a template's three argument placeholders. The triple must be
    distinct and each label prefixed with the template's event type; the
    corresponding relation is created on first use."""
    template = state.template_by_id(template_id)
    triple = tuple(roles)
    if len(triple) != 3:
        raise CurationError("role labels must be a triple")
    if len(set(triple)) != 3:
        raise CurationError(f"duplicate role labels: {triple}")
    for role in triple:
        if not role.startswith(template.event_type):
            raise CurationError(
                f"role {role!r} must be prefixed with the event type {template.event_type!r}"
            )
    template.role_labels = triple
    relation = TernaryRelation(template.event_type, triple)
    if relation not in state.relations:
        state.relations.append(relation)
    state.mutation_counter += 1
    return template


def sample_for_review(
    state: ProjectState, iteration: int, n: int = 100, seed: int = 0
) -> list[Template]:
    """Uniform sample without replacement of the templates discovered at an
    iteration (all of them if fewer than n); deterministic under a fixed
    seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    population = sorted(
        (t for t in state.templates if t.iteration_discovered == iteration),
        key=lambda t: t.id,
    )
    if len(population) <= n:
        return population
    return random.Random(seed).sample(population, n)


def record_judgment(
    state: ProjectState, template_id: str, verdict: str, iteration: int, note: str = ""
) -> Judgment:
    """Record a correct/wrong verdict for a template of the given iteration.
    Re-judging a template replaces the earlier verdict."""
    if verdict not in ("correct", "wrong"):
        raise CurationError(f"verdict must be correct or wrong, got {verdict!r}")
    template = state.template_by_id(template_id)
    if template.iteration_discovered != iteration:
        raise CurationError(
            f"template {template_id} was discovered at iteration "
            f"{template.iteration_discovered}, not {iteration}"
        )
    judgment = Judgment(template_id, verdict, iteration, note)
    for i, existing in enumerate(state.judgments):
        if existing.template_id == template_id:
            state.judgments[i] = judgment
            break
    else:
        state.judgments.append(judgment)
    state.mutation_counter += 1
    return judgment


def precision(state: ProjectState, iteration: int) -> float | None:
    """correct / judged for one iteration; None when nothing was judged."""
    judged = [j for j in state.judgments if j.iteration == iteration]
    if not judged:
        return None
    correct = sum(1 for j in judged if j.verdict == "correct")
    return correct / len(judged)


# ---------------------------------------------------------------------------
# exports and stats

def export_instances_tsv(state: ProjectState, out: IO[str]) -> int:
    """Flat instance export: relation, the three arguments, provenance."""
    rows = sorted(
        (",".join(i.roles), i.args[0], i.args[1], i.args[2], i.doc_id, str(i.sent_index))
        for i in state.instances
    )
    for row in rows:
        out.write("\t".join(row) + "\n")
    return len(rows)


def export_templates_tsv(state: ProjectState, out: IO[str]) -> int:
    rows = []
    for t in sorted(state.templates, key=lambda t: (t.event_type, t.key.sort_key(), t.id)):
        rows.append(
            (
                t.id,
                t.event_type,
                t.key.type1.render(),
                t.key.verb_lemma,
                t.key.type2.render(),
                " ".join(t.key.connector),
                t.key.type3.render(),
                t.status,
                ",".join(t.role_labels) if t.role_labels else "",
            )
        )
    for row in rows:
        out.write("\t".join(row) + "\n")
    return len(rows)


def stats_report(state: ProjectState) -> dict:
    """Per-iteration statistics plus current totals; the numbers the CLI
    prints and the dashboard renders. When no iteration report exists yet
    (a freshly induced project) a single live iteration-0 row is derived
    from the current state."""
    accepted = [t for t in state.templates if t.status == STATUS_ACCEPTED]
    rows = []
    if state.iteration_reports:
        for r in state.iteration_reports:
            rows.append(
                {
                    "iteration": r.iteration,
                    "new_templates": r.new_templates,
                    "cumulative_templates": r.cumulative_templates,
                    "new_instances": r.new_instances,
                    "cumulative_instances": r.cumulative_instances,
                    "new_trigger_verbs": r.new_trigger_verbs,
                    "relation_count": r.relation_count,
                    "precision": precision(state, r.iteration),
                    "judged": sum(1 for j in state.judgments if j.iteration == r.iteration),
                }
            )
    else:
        rows.append(
            {
                "iteration": 0,
                "new_templates": len(accepted),
                "cumulative_templates": len(accepted),
                "new_instances": len(state.instances),
                "cumulative_instances": len(state.instances),
                "new_trigger_verbs": {},
                "relation_count": len(relation_inventory(accepted)),
                "precision": precision(state, 0),
                "judged": sum(1 for j in state.judgments if j.iteration == 0),
            }
        )
    status_counts = {STATUS_CANDIDATE: 0, STATUS_ACCEPTED: 0, STATUS_REJECTED: 0}
    for t in state.templates:
        status_counts[t.status] = status_counts.get(t.status, 0) + 1
    return {
        "iterations": rows,
        "relation_count": len(state.relations),
        "event_type_count": len(state.event_specs),
        "template_status_counts": status_counts,
        "instance_count": len(state.instances),
    }
