"""Template induction and instance materialization.

Tuples are generalized into typed templates by replacing each argument with
its semantic types and counting distinct argument triples per typed
pattern; patterns that clear the support threshold become candidate
templates. Counting is exposed in shardable form (collect per shard, merge,
threshold) so large corpora can be aggregated deterministically.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

from .extraction import MODE_STRICT, Tuple5
from .lexicon import TypeLexicon, TypeName, resolve_types

STATUS_CANDIDATE = "candidate"
STATUS_ACCEPTED = "accepted"
STATUS_REJECTED = "rejected"

MIN_SUPPORT_STRICT = 3

DOLLAR_AMOUNT_TYPE = TypeName("WDN", "dollar_amount")

_AMOUNT_HEAD_RE = re.compile(r"^[$€£¥][\d.,]*$")
_AMOUNT_PART_RE = re.compile(r"^[\d.,]+$")
_SCALE_WORDS = frozenset({"hundred", "thousand", "million", "billion", "trillion"})


@dataclass(frozen=True)
class TemplateKey:
    type1: TypeName
    verb_lemma: str
    type2: TypeName
    connector: tuple[str, ...]
    type3: TypeName

    def sort_key(self) -> tuple:
        return (
            self.verb_lemma,
            self.connector,
            self.type1.render(),
            self.type2.render(),
            self.type3.render(),
        )

    def render(self) -> str:
        conn = " ".join(self.connector)
        return (
            f"⟨{self.type1.render()}⟩ {self.verb_lemma} "
            f"⟨{self.type2.render()}⟩ {conn} ⟨{self.type3.render()}⟩"
        )


@dataclass(frozen=True)
class TernaryRelation:
    event_type: str
    roles: tuple[str, str, str]


@dataclass
class Template:
    id: str
    key: TemplateKey
    event_type: str
    status: str = STATUS_CANDIDATE
    role_labels: tuple[str, str, str] | None = None
    support: set[tuple[str, str, str]] = field(default_factory=set)
    support_tuples: list[Tuple5] = field(default_factory=list)
    iteration_discovered: int = 0
    parent_template_id: str | None = None

    def relation(self) -> TernaryRelation | None:
        if self.role_labels is None:
            return None
        return TernaryRelation(self.event_type, self.role_labels)


@dataclass(frozen=True)
class Instance:
    event_type: str
    roles: tuple[str, str, str]
    args: tuple[str, str, str]
    raw_args: tuple[str, str, str]
    template_id: str
    doc_id: str
    sent_index: int

    def relation(self) -> TernaryRelation:
        return TernaryRelation(self.event_type, self.roles)

    def dedup_key(self) -> tuple:
        return (self.roles, self.args)


@dataclass
class InductionStats:
    tuples_seen: int = 0
    dropped_untypeable: int = 0


def template_id(
    event_type: str, key: TemplateKey, roles: tuple[str, str, str] | None = None
) -> str:
    """Stable id over the typed pattern. Bootstrapped templates pass the
    inherited role triple too, since one key may be promoted under several
    relations and each needs its own identity."""
    material = "\x1f".join(
        [
            event_type,
            key.type1.render(),
            key.verb_lemma,
            key.type2.render(),
            " ".join(t.casefold() for t in key.connector),
            key.type3.render(),
        ]
        + (list(roles) if roles is not None else [])
    )
    return hashlib.sha1(material.encode("utf-8")).hexdigest()[:12]


def is_amount_phrase(phrase: str) -> bool:
    """Dollar-amount-like NP: leading currency-symbol word, then cardinals
    or scale words ("$40 billion", "$ 1,200")."""
    words = phrase.split()
    if not words:
        return False
    head, rest = words[0], words[1:]
    if not _AMOUNT_HEAD_RE.match(head):
        return False
    return all(_AMOUNT_PART_RE.match(w) or w in _SCALE_WORDS for w in rest)


def typed_candidates(lex: TypeLexicon, phrase: str, max_per_source: int = 1) -> list[TypeName]:
    """Types for an argument phrase: lexicon resolution, with a built-in
    dollar-amount pseudo-type when the lexicon misses a currency NP."""
    types = resolve_types(lex, phrase, max_per_source)
    if not types and is_amount_phrase(phrase):
        return [DOLLAR_AMOUNT_TYPE]
    return types


def _connector_key(connector: tuple[str, ...]) -> tuple[str, ...]:
    return tuple(t.casefold() for t in connector)


@dataclass
class SupportGroup:
    triples: set[tuple[str, str, str]] = field(default_factory=set)
    tuples: list[Tuple5] = field(default_factory=list)


GroupKey = tuple[str, TemplateKey]  # (event_type, key)


def collect_support(
    tuples: Iterable[Tuple5],
    lex: TypeLexicon,
    max_per_source: int = 1,
    stats: InductionStats | None = None,
) -> dict[GroupKey, SupportGroup]:
    """Shard-local aggregation: enumerate the typed variants of each strict
    tuple (one per resolved type combination across the three arguments) and
    group distinct argument triples per (event type, typed key). Tuples with
    an untypeable argument are dropped and counted."""
    groups: dict[GroupKey, SupportGroup] = {}
    for t in tuples:
        if t.mode != MODE_STRICT or t.event_type is None:
            raise ValueError("collect_support expects strict-mode tuples")
        if stats is not None:
            stats.tuples_seen += 1
        types1 = typed_candidates(lex, t.n1, max_per_source)
        types2 = typed_candidates(lex, t.n2, max_per_source)
        types3 = typed_candidates(lex, t.n3, max_per_source)
        if not (types1 and types2 and types3):
            if stats is not None:
                stats.dropped_untypeable += 1
            continue
        for ty1, ty2, ty3 in product(types1, types2, types3):
            key = TemplateKey(ty1, t.verb_lemma, ty2, _connector_key(t.connector), ty3)
            group = groups.setdefault((t.event_type, key), SupportGroup())
            group.triples.add(t.args())
            group.tuples.append(t)
    return groups


def merge_support(
    a: Mapping[GroupKey, SupportGroup], b: Mapping[GroupKey, SupportGroup]
) -> dict[GroupKey, SupportGroup]:
    """Merge two shard aggregations; set union on triples, concatenation on
    supporting tuples. Associative and commutative up to tuple order."""
    merged: dict[GroupKey, SupportGroup] = {}
    for source in (a, b):
        for gk, group in source.items():
            target = merged.setdefault(gk, SupportGroup())
            target.triples |= group.triples
            target.tuples.extend(group.tuples)
    return merged


def _tuple_sort_key(t: Tuple5) -> tuple:
    return (t.doc_id, t.sent_index, t.chunk_indices, t.event_type or "")


def threshold_templates(
    groups: Mapping[GroupKey, SupportGroup],
    min_support: int = MIN_SUPPORT_STRICT,
    iteration: int = 0,
) -> list[Template]:
    """Keep groups whose distinct-triple count is >= min_support, in
    deterministic order."""
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    out: list[Template] = []
    for (event_type, key), group in groups.items():
        if len(group.triples) < min_support:
            continue
        seen: set[Tuple5] = set()
        support_tuples = []
        for t in sorted(group.tuples, key=_tuple_sort_key):
            if t not in seen:
                seen.add(t)
                support_tuples.append(t)
        out.append(
            Template(
                id=template_id(event_type, key),
                key=key,
                event_type=event_type,
                status=STATUS_CANDIDATE,
                support=set(group.triples),
                support_tuples=support_tuples,
                iteration_discovered=iteration,
            )
        )
    out.sort(key=lambda t: (t.event_type, t.key.sort_key()))
    return out


def induce_candidates(
    tuples: Iterable[Tuple5],
    lex: TypeLexicon,
    min_support: int = MIN_SUPPORT_STRICT,
    max_per_source: int = 1,
    stats: InductionStats | None = None,
) -> list[Template]:
    """Candidate templates from strict tuples: typed-variant enumeration,
    distinct-argument-triple support counting, thresholding."""
    return threshold_templates(collect_support(tuples, lex, max_per_source, stats), min_support)


def tuple_matches_template(
    template: Template, t: Tuple5, lex: TypeLexicon, max_per_source: int = 1
) -> bool:
    key = template.key
    if t.verb_lemma != key.verb_lemma:
        return False
    if _connector_key(t.connector) != key.connector:
        return False
    if t.mode == MODE_STRICT and t.event_type != template.event_type:
        return False
    return (
        key.type1 in typed_candidates(lex, t.n1, max_per_source)
        and key.type2 in typed_candidates(lex, t.n2, max_per_source)
        and key.type3 in typed_candidates(lex, t.n3, max_per_source)
    )


def materialize_instances(
    accepted: Iterable[Template],
    tuples: Iterable[Tuple5],
    lex: TypeLexicon,
    max_per_source: int = 1,
) -> list[Instance]:
    """One instance per supporting tuple per accepted template, inheriting
    the template's role labels; deduplicated on (relation, args). Arguments
    must still resolve to the template's types at materialization time."""
    templates = sorted(accepted, key=lambda t: t.id)
    for template in templates:
        if template.role_labels is None:
            raise ValueError(f"template {template.id} has no role labels")
    tuples = sorted(set(tuples), key=_tuple_sort_key)
    out: list[Instance] = []
    seen: set[tuple] = set()
    for template in templates:
        roles = template.role_labels
        assert roles is not None
        for t in tuples:
            if not tuple_matches_template(template, t, lex, max_per_source):
                continue
            inst = Instance(
                event_type=template.event_type,
                roles=roles,
                args=t.args(),
                raw_args=(t.raw_n1, t.raw_n2, t.raw_n3),
                template_id=template.id,
                doc_id=t.doc_id,
                sent_index=t.sent_index,
            )
            if inst.dedup_key() in seen:
                continue
            seen.add(inst.dedup_key())
            out.append(inst)
    out.sort(key=lambda i: (i.roles, i.args))
    return out


def relation_inventory(templates: Iterable[Template]) -> set[TernaryRelation]:
    """Distinct role-label triples of the given (accepted) templates."""
    out: set[TernaryRelation] = set()
    for t in templates:
        rel = t.relation()
        if rel is not None:
            out.add(rel)
    return out
