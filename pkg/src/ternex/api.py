"""HTTP curation API over a loaded project.

The service is a thin layer over the store operations: reads are lock-free,
mutations are serialized through one writer lock and persisted to the project
file before the response goes out. Every response carries the state's
mutation counter so a client can detect that it is looking at a stale view.
JSON field names follow the external camelCase convention.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import store
from .induction import Instance, Template
from .store import CurationError, ProjectState, UnknownTemplateError


class StatusBody(BaseModel):
    status: str


class RolesBody(BaseModel):
    roles: list[str]


class JudgmentBody(BaseModel):
    templateId: str
    verdict: str
    iteration: int
    note: str = ""


def template_summary(t: Template) -> dict:
    return {
        "id": t.id,
        "eventType": t.event_type,
        "rendering": t.key.render(),
        "type1": t.key.type1.render(),
        "verb": t.key.verb_lemma,
        "type2": t.key.type2.render(),
        "connector": " ".join(t.key.connector),
        "type3": t.key.type3.render(),
        "status": t.status,
        "roleLabels": list(t.role_labels) if t.role_labels else None,
        "supportCount": len(t.support),
        "iterationDiscovered": t.iteration_discovered,
        "parentTemplateId": t.parent_template_id,
    }


def template_detail(t: Template) -> dict:
    doc = template_summary(t)
    doc["supportingTuples"] = [
        {
            "docId": x.doc_id,
            "sentIndex": x.sent_index,
            "arg1": x.raw_n1,
            "verb": x.verb_surface,
            "arg2": x.raw_n2,
            "connector": " ".join(x.connector),
            "arg3": x.raw_n3,
            "normalizedArgs": [x.n1, x.n2, x.n3],
            "mode": x.mode,
        }
        for x in t.support_tuples
    ]
    doc["support"] = sorted(list(triple) for triple in t.support)
    return doc


def instance_view(i: Instance) -> dict:
    return {
        "relation": ",".join(i.roles),
        "eventType": i.event_type,
        "roles": list(i.roles),
        "args": list(i.args),
        "rawArgs": list(i.raw_args),
        "templateId": i.template_id,
        "docId": i.doc_id,
        "sentIndex": i.sent_index,
    }


def _error(status_code: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status_code, content={"error": code, "detail": detail})


def create_app(state: ProjectState, path: str | None = None) -> FastAPI:
    """Build the service around one loaded state. When ``path`` is given,
    every successful mutation is saved there before the handler returns."""
    app = FastAPI(title="ternex curation api")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    write_lock = threading.Lock()

    def persist() -> None:
        if path is not None:
            store.save(state, path)

    @app.get("/templates")
    def list_templates(
        status: str | None = None,
        iteration: int | None = None,
        eventType: str | None = None,
    ):
        rows = state.templates
        if status is not None:
            rows = [t for t in rows if t.status == status]
        if iteration is not None:
            rows = [t for t in rows if t.iteration_discovered == iteration]
        if eventType is not None:
            rows = [t for t in rows if t.event_type == eventType]
        rows = sorted(rows, key=lambda t: (t.event_type, t.key.sort_key(), t.id))
        return {
            "version": state.mutation_counter,
            "total": len(rows),
            "templates": [template_summary(t) for t in rows],
        }

    @app.get("/templates/{template_id}")
    def get_template(template_id: str):
        try:
            t = state.template_by_id(template_id)
        except UnknownTemplateError as e:
            return _error(404, "unknown_template", str(e))
        return {"version": state.mutation_counter, "template": template_detail(t)}

    @app.post("/templates/{template_id}/status")
    def post_status(template_id: str, body: StatusBody):
        with write_lock:
            try:
                t = store.set_status(state, template_id, body.status)
            except UnknownTemplateError as e:
                return _error(404, "unknown_template", str(e))
            except CurationError as e:
                if "role labels" in str(e):
                    return _error(409, "labels_required", str(e))
                return _error(422, "invalid_status", str(e))
            persist()
            return {"version": state.mutation_counter, "template": template_summary(t)}

    @app.post("/templates/{template_id}/roles")
    def post_roles(template_id: str, body: RolesBody):
        with write_lock:
            try:
                t = store.set_role_labels(state, template_id, body.roles)
            except UnknownTemplateError as e:
                return _error(404, "unknown_template", str(e))
            except CurationError as e:
                return _error(422, "invalid_roles", str(e))
            persist()
            return {"version": state.mutation_counter, "template": template_summary(t)}

    @app.get("/relations")
    def list_relations():
        rows = sorted(state.relations, key=lambda r: (r.event_type, r.roles))
        return {
            "version": state.mutation_counter,
            "total": len(rows),
            "relations": [
                {"eventType": r.event_type, "roles": list(r.roles)} for r in rows
            ],
        }

    @app.get("/instances")
    def list_instances(relation: str | None = None):
        rows = state.instances
        if relation is not None:
            rows = [i for i in rows if ",".join(i.roles) == relation]
        return {
            "version": state.mutation_counter,
            "total": len(rows),
            "instances": [instance_view(i) for i in rows],
        }

    @app.get("/sample")
    def get_sample(iteration: int, n: int = 100, seed: int = 0):
        if n < 1:
            return _error(422, "invalid_n", "n must be >= 1")
        rows = store.sample_for_review(state, iteration, n=n, seed=seed)
        return {
            "version": state.mutation_counter,
            "total": len(rows),
            "templates": [template_summary(t) for t in rows],
        }

    @app.post("/judgments")
    def post_judgment(body: JudgmentBody):
        with write_lock:
            try:
                j = store.record_judgment(
                    state, body.templateId, body.verdict, body.iteration, body.note
                )
            except UnknownTemplateError as e:
                return _error(404, "unknown_template", str(e))
            except CurationError as e:
                if "iteration" in str(e):
                    return _error(409, "iteration_mismatch", str(e))
                return _error(422, "invalid_verdict", str(e))
            persist()
            return {
                "version": state.mutation_counter,
                "judgment": {
                    "templateId": j.template_id,
                    "verdict": j.verdict,
                    "iteration": j.iteration,
                    "note": j.note,
                },
            }

    @app.get("/judgments")
    def list_judgments(iteration: int | None = None):
        rows = state.judgments
        if iteration is not None:
            rows = [j for j in rows if j.iteration == iteration]
        return {
            "version": state.mutation_counter,
            "total": len(rows),
            "judgments": [
                {
                    "templateId": j.template_id,
                    "verdict": j.verdict,
                    "iteration": j.iteration,
                    "note": j.note,
                }
                for j in rows
            ],
        }

    @app.get("/stats")
    def get_stats():
        report = store.stats_report(state)
        rows = [
            {
                "iteration": r["iteration"],
                "newTemplates": r["new_templates"],
                "cumulativeTemplates": r["cumulative_templates"],
                "newInstances": r["new_instances"],
                "cumulativeInstances": r["cumulative_instances"],
                "newTriggerVerbs": r["new_trigger_verbs"],
                "relationCount": r["relation_count"],
                "precision": r["precision"],
                "judged": r["judged"],
            }
            for r in report["iterations"]
        ]
        return {
            "version": state.mutation_counter,
            "iterations": rows,
            "relationCount": report["relation_count"],
            "eventTypeCount": report["event_type_count"],
            "templateStatusCounts": report["template_status_counts"],
            "instanceCount": report["instance_count"],
        }

    @app.get("/events")
    def list_events():
        rows = sorted(state.event_specs, key=lambda s: s.event_type)
        return {
            "version": state.mutation_counter,
            "total": len(rows),
            "events": [
                {
                    "eventType": s.event_type,
                    "triggers": [
                        {"lemma": lemma, "origin": origin}
                        for lemma, origin in sorted(s.triggers.items())
                    ],
                }
                for s in rows
            ],
        }

    @app.get("/validate")
    def get_validate():
        issues = store.validate_state(state)
        return {"version": state.mutation_counter, "ok": not issues, "issues": issues}

    return app


def serve_api(state: ProjectState, address: str, path: str | None = None) -> None:
    """Run the service on ``host:port`` until interrupted. A busy port
    surfaces as the usual bind error."""
    import uvicorn

    host, _, port_text = address.rpartition(":")
    if not host:
        host = "127.0.0.1"
    try:
        port = int(port_text)
    except ValueError:
        raise ValueError(f"address must be host:port, got {address!r}") from None
    app = create_app(state, path=path)
    uvicorn.run(app, host=host, port=port, log_level="warning")
