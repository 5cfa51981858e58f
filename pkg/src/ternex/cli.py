"""Command line front end.

Subcommands walk the pipeline end to end: ``induce`` builds iteration-0
candidates from a tagged corpus, ``serve`` exposes the curation API,
``bootstrap`` runs the iterative template discovery, ``export``/``stats``/
``validate`` read the project file. Exit codes: 0 success, 1 unreadable or
invalid input, 2 state precondition not met (e.g. bootstrapping before any
template was accepted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import bootstrap as bootstrap_mod
from . import store as store_mod
from .corpus import CorpusFormatError, ReadStats, Sentence, chunk_sentence, read_corpus
from .extraction import (
    DEFAULT_PREPOSITIONS,
    EventConfigError,
    EventSpec,
    MAX_CONNECTOR_TOKENS,
    Tuple5,
    extract_generalized,
    extract_strict,
    load_event_config,
)
from .induction import InductionStats, MIN_SUPPORT_STRICT, induce_candidates
from .lexicon import TypeLexicon, load_lexicon
from .store import IntegrityError, ProjectState, StoreError, VersionError


class InputError(Exception):
    """Exit code 1: bad flags, unreadable files, malformed content."""


class StateError(Exception):
    """Exit code 2: project state does not meet the command's precondition."""


@dataclass
class RunConfig:
    corpus_paths: list[str] = field(default_factory=list)
    lexicon_paths: list[str] = field(default_factory=list)
    events_path: str | None = None
    project_path: str | None = None
    min_support: int = MIN_SUPPORT_STRICT
    min_support_bootstrap: int = bootstrap_mod.MIN_SUPPORT_BOOTSTRAP
    max_connector_len: int = MAX_CONNECTOR_TOKENS
    max_per_source: int = 1
    max_iterations: int = 10
    seed: int = 0
    workers: int = 1

    def validate(self) -> None:
        for name in ("min_support", "min_support_bootstrap", "max_connector_len",
                     "max_per_source", "max_iterations", "workers"):
            if getattr(self, name) < 1:
                raise InputError(f"--{name.replace('_', '-')} must be >= 1")


def _env_paths(name: str) -> list[str]:
    raw = os.environ.get(name, "")
    return [p for p in raw.split(os.pathsep) if p]


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge flags over TERNEX_* environment defaults."""
    cfg = RunConfig(
        corpus_paths=list(getattr(args, "corpus", None) or []) or _env_paths("TERNEX_CORPUS"),
        lexicon_paths=list(getattr(args, "lexicon", None) or []) or _env_paths("TERNEX_LEXICON"),
        events_path=getattr(args, "events", None) or os.environ.get("TERNEX_EVENTS"),
        project_path=args.project or os.environ.get("TERNEX_PROJECT"),
        min_support=getattr(args, "min_support", MIN_SUPPORT_STRICT),
        min_support_bootstrap=getattr(
            args, "min_support_bootstrap", bootstrap_mod.MIN_SUPPORT_BOOTSTRAP
        ),
        max_connector_len=getattr(args, "max_connector_len", MAX_CONNECTOR_TOKENS),
        max_per_source=getattr(args, "max_per_source", 1),
        max_iterations=getattr(args, "max_iterations", 10),
        seed=getattr(args, "seed", 0),
        workers=getattr(args, "workers", 1),
    )
    cfg.validate()
    if cfg.project_path is None:
        raise InputError("a project file is required (--project or TERNEX_PROJECT)")
    return cfg


# ---------------------------------------------------------------------------
# shared pipeline pieces

def _read_sentences(cfg: RunConfig) -> tuple[list[Sentence], ReadStats]:
    if not cfg.corpus_paths:
        raise InputError("at least one corpus file is required (--corpus or TERNEX_CORPUS)")
    stats = ReadStats()
    sentences: list[Sentence] = []
    for path in cfg.corpus_paths:
        try:
            with open(path, "r", encoding="utf-8") as f:
                sentences.extend(read_corpus(f, stats=stats))
        except OSError as e:
            raise InputError(f"cannot read corpus {path}: {e}") from e
        except CorpusFormatError as e:
            raise InputError(f"corpus {path}: {e}") from e
    return sentences, stats


def _load_lexicon(cfg: RunConfig) -> TypeLexicon:
    if not cfg.lexicon_paths:
        raise InputError("at least one lexicon file is required (--lexicon or TERNEX_LEXICON)")
    lex = TypeLexicon()
    errors: list[tuple[int, str]] = []
    for path in cfg.lexicon_paths:
        try:
            with open(path, "r", encoding="utf-8") as f:
                load_lexicon(f, lexicon=lex, errors=errors)
        except OSError as e:
            raise InputError(f"cannot read lexicon {path}: {e}") from e
    if errors:
        print(f"lexicon: skipped {len(errors)} malformed line(s)", file=sys.stderr)
    return lex


def _load_events(cfg: RunConfig) -> list[EventSpec]:
    if cfg.events_path is None:
        raise InputError("an event config file is required (--events or TERNEX_EVENTS)")
    try:
        with open(cfg.events_path, "r", encoding="utf-8") as f:
            events = load_event_config(f)
    except OSError as e:
        raise InputError(f"cannot read event config {cfg.events_path}: {e}") from e
    except EventConfigError as e:
        raise InputError(f"event config {cfg.events_path}: {e}") from e
    if not any(s.triggers for s in events):
        raise InputError("event config defines zero trigger verbs; nothing to extract")
    return events


def _extract_all(
    sentences: list[Sentence],
    events: list[EventSpec],
    cfg: RunConfig,
    mode: str,
) -> list[Tuple5]:
    """Chunk and extract per sentence, optionally across a thread pool.
    Results keep corpus order either way."""

    def one(sentence: Sentence) -> list[Tuple5]:
        chunks = chunk_sentence(sentence)
        if mode == "strict":
            return extract_strict(sentence, chunks, events, DEFAULT_PREPOSITIONS)
        return extract_generalized(sentence, chunks, max_connector_len=cfg.max_connector_len)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            per_sentence = list(pool.map(one, sentences))
    else:
        per_sentence = [one(s) for s in sentences]
    return [t for batch in per_sentence for t in batch]


def _load_project(cfg: RunConfig) -> ProjectState:
    try:
        return store_mod.load(cfg.project_path)
    except OSError as e:
        raise InputError(f"cannot read project {cfg.project_path}: {e}") from e
    except IntegrityError as e:
        raise StateError(f"project {cfg.project_path} is inconsistent: {e}") from e
    except (VersionError, StoreError) as e:
        raise InputError(f"project {cfg.project_path}: {e}") from e


# ---------------------------------------------------------------------------
# subcommands

def cmd_induce(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    events = _load_events(cfg)
    lex = _load_lexicon(cfg)
    sentences, read_stats = _read_sentences(cfg)
    tuples = _extract_all(sentences, events, cfg, mode="strict")
    ind_stats = InductionStats()
    templates = induce_candidates(
        tuples, lex, min_support=cfg.min_support, max_per_source=cfg.max_per_source,
        stats=ind_stats,
    )
    state = ProjectState(event_specs=events, templates=templates)
    store_mod.save(state, cfg.project_path)
    print(f"sentences read: {len(sentences)} (skipped {read_stats.skipped_sentences})")
    print(f"strict tuples: {ind_stats.tuples_seen}")
    print(f"dropped untypeable tuples: {ind_stats.dropped_untypeable}")
    print(f"candidate templates: {len(templates)}")
    print(f"project written: {cfg.project_path}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .api import serve_api

    cfg = _resolve_config(args)
    state = _load_project(cfg)
    print(f"serving {cfg.project_path} at http://{args.address}")
    try:
        serve_api(state, args.address, path=cfg.project_path)
    except OSError as e:
        raise InputError(f"cannot bind {args.address}: {e}") from e
    return 0


def _print_iteration_table(rows: list[dict], out) -> None:
    header = (
        "iteration",
        "new_templates",
        "cum_templates",
        "new_instances",
        "cum_instances",
        "relations",
        "judged",
        "precision",
    )
    out.write("\t".join(header) + "\n")
    for r in rows:
        precision = r.get("precision")
        cells = (
            r["iteration"],
            r["new_templates"],
            r["cumulative_templates"],
            r["new_instances"],
            r["cumulative_instances"],
            r["relation_count"],
            r.get("judged", 0),
            "-" if precision is None else f"{100.0 * precision:.1f}%",
        )
        out.write("\t".join(str(c) for c in cells) + "\n")


def cmd_bootstrap(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    state = _load_project(cfg)
    if not any(t.status == "accepted" for t in state.templates):
        raise StateError(
            "no accepted templates in the project; curate candidates first "
            "(serve the API and accept at least one labeled template)"
        )
    lex = _load_lexicon(cfg)
    sentences, _ = _read_sentences(cfg)
    gen_tuples = _extract_all(sentences, state.event_specs, cfg, mode="generalized")
    bcfg = bootstrap_mod.BootstrapConfig(
        min_support_bootstrap=cfg.min_support_bootstrap,
        max_iterations=cfg.max_iterations,
        max_per_source=cfg.max_per_source,
    )
    try:
        bootstrap_mod.run_iterations(state, gen_tuples, lex, bcfg)
    except bootstrap_mod.BootstrapError as e:
        raise StateError(str(e)) from e
    store_mod.save(state, cfg.project_path)
    report = store_mod.stats_report(state)
    _print_iteration_table(report["iterations"], sys.stdout)
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    state = _load_project(cfg)
    if args.out == "-":
        if args.what == "instances":
            count = store_mod.export_instances_tsv(state, sys.stdout)
        else:
            count = store_mod.export_templates_tsv(state, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            if args.what == "instances":
                count = store_mod.export_instances_tsv(state, f)
            else:
                count = store_mod.export_templates_tsv(state, f)
    print(f"exported {count} {args.what}", file=sys.stderr)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    state = _load_project(cfg)
    report = store_mod.stats_report(state)
    if args.json:
        json.dump(report, sys.stdout, indent=1, sort_keys=True)
        sys.stdout.write("\n")
        return 0
    _print_iteration_table(report["iterations"], sys.stdout)
    print(f"relations: {report['relation_count']}")
    print(f"event types: {report['event_type_count']}")
    counts = report["template_status_counts"]
    print(
        "templates: "
        + ", ".join(f"{counts.get(k, 0)} {k}" for k in ("candidate", "accepted", "rejected"))
    )
    print(f"instances: {report['instance_count']}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    state = _load_project(cfg)
    issues = store_mod.validate_state(state)
    if issues:
        for issue in issues:
            print(issue, file=sys.stderr)
        raise StateError(f"{len(issues)} integrity issue(s)")
    print("ok")
    return 0


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p: argparse.ArgumentParser, *, corpus: bool, lexicon: bool, events: bool) -> None:
    p.add_argument("--project", help="project file path (or TERNEX_PROJECT)")
    if corpus:
        p.add_argument(
            "--corpus",
            action="append",
            metavar="PATH",
            help="tagged corpus file, repeatable (or TERNEX_CORPUS)",
        )
    if lexicon:
        p.add_argument(
            "--lexicon",
            action="append",
            metavar="PATH",
            help="type lexicon file, repeatable (or TERNEX_LEXICON)",
        )
    if events:
        p.add_argument("--events", help="event trigger config (or TERNEX_EVENTS)")
    p.add_argument("--workers", type=int, default=1, help="parallelism cap (default 1)")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ternex",
        description="Induce ternary relation templates and instances from tagged text.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("induce", help="extract strict tuples and write iteration-0 candidates")
    _add_common(p, corpus=True, lexicon=True, events=True)
    p.add_argument("--min-support", type=int, default=MIN_SUPPORT_STRICT, dest="min_support")
    p.add_argument("--max-per-source", type=int, default=1, dest="max_per_source")
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("serve", help="serve the curation API over a project file")
    _add_common(p, corpus=False, lexicon=False, events=False)
    p.add_argument("--address", default="127.0.0.1:8756", help="host:port to bind")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("bootstrap", help="iteratively discover templates from accepted ones")
    _add_common(p, corpus=True, lexicon=True, events=False)
    p.add_argument(
        "--min-support-bootstrap",
        type=int,
        default=bootstrap_mod.MIN_SUPPORT_BOOTSTRAP,
        dest="min_support_bootstrap",
    )
    p.add_argument(
        "--max-connector-len",
        type=int,
        default=MAX_CONNECTOR_TOKENS,
        dest="max_connector_len",
    )
    p.add_argument("--max-per-source", type=int, default=1, dest="max_per_source")
    p.add_argument("--max-iterations", type=int, default=10, dest="max_iterations")
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("export", help="write instances or templates as TSV")
    _add_common(p, corpus=False, lexicon=False, events=False)
    p.add_argument("what", choices=("instances", "templates"))
    p.add_argument("--out", default="-", help="output path, - for stdout")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("stats", help="per-iteration template/instance/precision report")
    _add_common(p, corpus=False, lexicon=False, events=False)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("validate", help="check project referential integrity")
    _add_common(p, corpus=False, lexicon=False, events=False)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except StateError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
