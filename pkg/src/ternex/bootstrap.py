"""Iterative template discovery via distant supervision.

Accepted instances validate generalized tuples: a tuple whose three
normalized arguments equal an instance's arguments is a match, and typed
(verb, connector) patterns matched by enough distinct instances of one
relation are promoted to accepted templates that inherit the parent
relation's role labels. Each iteration extends the owning event's trigger
verbs and materializes instances of the newly promoted templates; the
relation inventory never grows after the initial curation pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import TYPE_CHECKING, Iterable

from .extraction import MODE_GENERALIZED, ORIGIN_BOOTSTRAPPED, Tuple5
from .induction import (
    STATUS_ACCEPTED,
    Instance,
    Template,
    TemplateKey,
    TernaryRelation,
    _connector_key,
    materialize_instances,
    relation_inventory,
    template_id,
    typed_candidates,
)
from .lexicon import TypeLexicon

if TYPE_CHECKING:
    from .store import ProjectState

MIN_SUPPORT_BOOTSTRAP = 10


class BootstrapError(RuntimeError):
    """Raised when the loop is started from an unready project state."""


@dataclass
class BootstrapConfig:
    min_support_bootstrap: int = MIN_SUPPORT_BOOTSTRAP
    max_iterations: int = 10
    max_per_source: int = 1
    instance_match_mode: str = "exactTriple"

    def __post_init__(self) -> None:
        if self.min_support_bootstrap < 1:
            raise ValueError("min_support_bootstrap must be >= 1")
        if self.instance_match_mode != "exactTriple":
            raise ValueError(f"unknown instance match mode: {self.instance_match_mode!r}")


@dataclass
class IterationReport:
    iteration: int
    new_templates: int
    cumulative_templates: int
    new_instances: int
    cumulative_instances: int
    new_trigger_verbs: dict[str, list[str]] = field(default_factory=dict)
    relation_count: int = 0


def discover_templates(
    instances: Iterable[Instance],
    gen_tuples: Iterable[Tuple5],
    lex: TypeLexicon,
    cfg: BootstrapConfig,
    existing: Iterable[Template],
    iteration: int = 1,
) -> list[Template]:
    """Promote typed (verb, connector) patterns supported by at least
    ``cfg.min_support_bootstrap`` distinct accepted instances whose
    arguments all match. Promoted templates are born accepted, inherit the
    parent relation's role labels and event type, and never duplicate an
    existing (event type, key) pair."""
    existing_keys: set[tuple[str, TemplateKey]] = set()
    for t in existing:
        existing_keys.add((t.event_type, t.key))

    by_args: dict[tuple[str, str, str], list[Instance]] = {}
    for inst in instances:
        by_args.setdefault(inst.args, []).append(inst)

    # (key, relation) -> supporting data
    groups: dict[tuple[str, TemplateKey, tuple[str, str, str]], dict] = {}
    for t in gen_tuples:
        if t.mode != MODE_GENERALIZED:
            raise ValueError("discover_templates expects generalized-mode tuples")
        matched = by_args.get(t.args())
        if not matched:
            continue
        types1 = typed_candidates(lex, t.n1, cfg.max_per_source)
        types2 = typed_candidates(lex, t.n2, cfg.max_per_source)
        types3 = typed_candidates(lex, t.n3, cfg.max_per_source)
        for ty1, ty2, ty3 in product(types1, types2, types3):
            key = TemplateKey(ty1, t.verb_lemma, ty2, _connector_key(t.connector), ty3)
            for inst in matched:
                gk = (inst.event_type, key, inst.roles)
                group = groups.setdefault(
                    gk, {"instances": set(), "tuples": [], "parents": set()}
                )
                group["instances"].add(inst.args)
                group["tuples"].append(t)
                group["parents"].add(inst.template_id)

    # One key may clear the threshold under several relations; each such
    # (key, relation) pair is promoted on its own, never pooled or split.
    out: list[Template] = []
    for (event_type, key, roles), group in groups.items():
        if len(group["instances"]) < cfg.min_support_bootstrap:
            continue
        if (event_type, key) in existing_keys:
            continue
        seen: set[Tuple5] = set()
        support_tuples = []
        for t in sorted(group["tuples"], key=lambda x: (x.doc_id, x.sent_index, x.chunk_indices)):
            if t not in seen:
                seen.add(t)
                support_tuples.append(t)
        out.append(
            Template(
                id=template_id(event_type, key, roles),
                key=key,
                event_type=event_type,
                status=STATUS_ACCEPTED,
                role_labels=roles,
                support=set(group["instances"]),
                support_tuples=support_tuples,
                iteration_discovered=iteration,
                parent_template_id=min(group["parents"]),
            )
        )
    out.sort(key=lambda t: (t.event_type, t.key.sort_key(), t.role_labels or ()))
    return out


def _accepted(state: "ProjectState") -> list[Template]:
    return [t for t in state.templates if t.status == STATUS_ACCEPTED]


def initialize_instances(state: "ProjectState", lex: TypeLexicon, max_per_source: int = 1) -> int:
    """Materialize instances of the curated templates from their own
    supporting tuples and record the initial iteration report. Idempotent;
    returns the number of instances added."""
    accepted = _accepted(state)
    if not accepted:
        raise BootstrapError("no accepted templates; curate candidates first")
    added = 0
    if not state.instances:
        tuples = [t for template in accepted for t in template.support_tuples]
        state.instances = materialize_instances(accepted, tuples, lex, max_per_source)
        added = len(state.instances)
    if not state.iteration_reports:
        state.iteration_reports.append(
            IterationReport(
                iteration=0,
                new_templates=len(accepted),
                cumulative_templates=len(accepted),
                new_instances=len(state.instances),
                cumulative_instances=len(state.instances),
                new_trigger_verbs={},
                relation_count=len(relation_inventory(accepted)),
            )
        )
    return added


def run_iterations(
    state: "ProjectState",
    gen_tuples: list[Tuple5],
    lex: TypeLexicon,
    cfg: BootstrapConfig,
) -> list[IterationReport]:
    """Run the bootstrap loop to fixpoint (or ``cfg.max_iterations``).

    Generalized tuples are extracted once by the caller and reused across
    iterations. Each iteration discovers templates against the current
    instance set, extends trigger verbs, materializes the new templates'
    instances, and appends a report; the loop stops after the first
    iteration that adds nothing. Returns the reports it added."""
    if not _accepted(state):
        raise BootstrapError("no accepted templates; curate candidates first")
    initialize_instances(state, lex, cfg.max_per_source)

    specs_by_event = {spec.event_type: spec for spec in state.event_specs}
    instance_keys = {inst.dedup_key() for inst in state.instances}
    reports: list[IterationReport] = []
    iteration = state.iteration_reports[-1].iteration + 1

    while iteration <= cfg.max_iterations:
        new_templates = discover_templates(
            state.instances, gen_tuples, lex, cfg, state.templates, iteration
        )
        state.templates.extend(new_templates)

        new_triggers: dict[str, list[str]] = {}
        for template in new_templates:
            spec = specs_by_event.get(template.event_type)
            if spec is not None and spec.add_trigger(template.key.verb_lemma, ORIGIN_BOOTSTRAPPED):
                new_triggers.setdefault(template.event_type, []).append(template.key.verb_lemma)
        for verbs in new_triggers.values():
            verbs.sort()

        added = 0
        if new_templates:
            for inst in materialize_instances(new_templates, gen_tuples, lex, cfg.max_per_source):
                if inst.dedup_key() in instance_keys:
                    continue
                instance_keys.add(inst.dedup_key())
                state.instances.append(inst)
                added += 1

        accepted = _accepted(state)
        report = IterationReport(
            iteration=iteration,
            new_templates=len(new_templates),
            cumulative_templates=len(accepted),
            new_instances=added,
            cumulative_instances=len(state.instances),
            new_trigger_verbs=new_triggers,
            relation_count=len(relation_inventory(accepted)),
        )
        state.iteration_reports.append(report)
        reports.append(report)
        if not new_templates:
            break
        iteration += 1
    return reports
