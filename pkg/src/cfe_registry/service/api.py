"""HTTP API over the registry.

All response bodies are canonical JSON. Authentication is a bearer token;
role enforcement happens in the registry through the engine's visibility
and legal-action checks, so the API layer stays a thin adapter.
"""

from __future__ import annotations

from typing import Optional

from fastapi import Depends, FastAPI, Header, Query, Request, Response
from pydantic import BaseModel, Field

from cfe_registry import __version__
from cfe_registry.errors import (
    AuthError,
    BadPageToken,
    CfeNotActionable,
    CyclicLineage,
    DocumentSyntaxError,
    DomainError,
    IdSyntaxError,
    IllegalState,
    IllegalTransition,
    MissingIdentifier,
    NotFoundError,
    PayloadInvalid,
    RegistryError,
    RoleNotPermitted,
    SchemaError,
    StaleVersion,
    SupersedeOrderViolation,
    UnknownModel,
    UnsupportedValue,
)
from cfe_registry.formats.canonical import canonical_bytes
from cfe_registry.service.registry import Registry

_STATUS_BY_ERROR = {
    NotFoundError: 404,
    UnknownModel: 404,
    AuthError: 401,
    RoleNotPermitted: 403,
    IllegalTransition: 409,
    IllegalState: 409,
    StaleVersion: 409,
    SupersedeOrderViolation: 409,
    SchemaError: 422,
    PayloadInvalid: 400,
    DocumentSyntaxError: 400,
    IdSyntaxError: 400,
    DomainError: 400,
    BadPageToken: 400,
    UnsupportedValue: 400,
    CfeNotActionable: 409,
    CyclicLineage: 400,
    MissingIdentifier: 409,
}


def canonical_response(doc, status_code: int = 200) -> Response:
    return Response(
        content=canonical_bytes(doc), status_code=status_code, media_type="application/json"
    )


class TransitionRequest(BaseModel):
    action: str
    payload: dict = Field(default_factory=dict)
    expected_version: int


class EvidenceRequest(BaseModel):
    n: int
    k: int
    sampling_protocol: str = ""
    raw_payload: Optional[str] = None


class AdjudicateRequest(BaseModel):
    threshold: Optional[float] = None
    alpha: Optional[float] = None


class HexEvaluateRequest(BaseModel):
    cfe_id: str
    profile: Optional[dict] = None
    profiles: Optional[list[dict]] = None
    lineage_graph: Optional[dict[str, str]] = None
    record: bool = True


class HexAssertRequest(BaseModel):
    cfe_id: str
    deployment_ref: str
    subcomponent: dict
    status: str
    justification: Optional[str] = None
    impact_statement: Optional[str] = None
    action_statement: Optional[str] = None


class TokenRequest(BaseModel):
    actor_id: str
    display_name: str = ""
    roles: list[str] = Field(default_factory=list)
    ttl_days: Optional[float] = None


def _bearer(authorization: Optional[str]) -> Optional[str]:
    if authorization is None:
        return None
    scheme, _, token = authorization.partition(" ")
    if scheme.lower() != "bearer" or not token:
        return None
    return token.strip()


def create_app(registry: Registry) -> FastAPI:
    app = FastAPI(title="cfe-registry", version=__version__)
    app.state.registry = registry

    def current_actor(authorization: Optional[str] = Header(default=None)):
        return registry.authenticate(_bearer(authorization))

    def optional_actor(authorization: Optional[str] = Header(default=None)):
        try:
            return registry.authenticate_optional(_bearer(authorization))
        except AuthError:
            # an invalid token gets the anonymous view, not an error page
            return None

    @app.exception_handler(RegistryError)
    async def registry_error_handler(_: Request, exc: RegistryError):
        status = 500
        for klass, code in _STATUS_BY_ERROR.items():
            if isinstance(exc, klass):
                status = code
                break
        body = {"error": exc.code, "message": str(exc)}
        if isinstance(exc, SchemaError):
            body["findings"] = [f.to_doc() for f in exc.findings]
        if isinstance(exc, StaleVersion):
            body["actual_version"] = exc.actual
        return canonical_response(body, status)

    @app.get("/healthz")
    def healthz():
        return canonical_response({"status": "ok", "version": __version__})

    # -- admin ----------------------------------------------------------

    @app.post("/admin/tokens")
    async def issue_token(
        body: TokenRequest, authorization: Optional[str] = Header(default=None)
    ):
        registry.check_admin(_bearer(authorization))
        return canonical_response(
            registry.issue_token(body.actor_id, body.display_name, body.roles, body.ttl_days)
        )

    # -- model cards and taxonomies --------------------------------------

    @app.post("/model-cards")
    async def register_card(
        request: Request,
        dry_run: bool = Query(default=False),
        actor=Depends(current_actor),
    ):
        data = await request.body()
        return canonical_response(registry.register_card(actor, data, dry_run=dry_run))

    @app.get("/model-cards/{name}/{version}")
    def get_card(name: str, version: str):
        return canonical_response(registry.get_card(name, version).to_doc())

    @app.post("/taxonomies")
    async def register_taxonomy(request: Request, actor=Depends(current_actor)):
        data = await request.body()
        return canonical_response(registry.register_taxonomy(actor, data))

    @app.get("/taxonomies/{tax_id}/{version}")
    def get_taxonomy(tax_id: str, version: str):
        return canonical_response(registry.get_taxonomy(tax_id, version).to_doc())

    # -- reports and cases ------------------------------------------------

    @app.post("/reports")
    async def submit_report(request: Request, actor=Depends(current_actor)):
        data = await request.body()
        view = registry.submit_report(actor, data)
        return canonical_response(view, 201)

    @app.get("/whoami")
    def whoami(actor=Depends(current_actor)):
        return canonical_response(actor.to_doc())

    @app.get("/cases")
    def list_cases(actor=Depends(optional_actor)):
        return canonical_response({"cases": registry.list_cases(actor)})

    @app.get("/cases/{case_id}")
    def get_case(case_id: str, actor=Depends(optional_actor)):
        return canonical_response(registry.case_view(case_id, actor))

    @app.get("/cases/{case_id}/actions")
    def get_case_actions(case_id: str, actor=Depends(current_actor)):
        return canonical_response(registry.case_actions(case_id, actor))

    @app.post("/cases/{case_id}/transitions")
    def post_transition(case_id: str, body: TransitionRequest, actor=Depends(current_actor)):
        view = registry.apply_case_transition(
            case_id, actor, body.action, body.payload, body.expected_version
        )
        return canonical_response(view)

    @app.post("/cases/{case_id}/evidence")
    def post_evidence(case_id: str, body: EvidenceRequest, actor=Depends(current_actor)):
        view = registry.attach_case_evidence(
            case_id, actor, body.n, body.k, body.sampling_protocol, body.raw_payload
        )
        return canonical_response(view)

    @app.post("/cases/{case_id}/adjudicate")
    def post_adjudicate(case_id: str, body: AdjudicateRequest, actor=Depends(current_actor)):
        return canonical_response(
            registry.adjudicate_case(case_id, actor, body.threshold, body.alpha)
        )

    # -- CFE and HEX -------------------------------------------------------

    @app.get("/cfe/{cfe_id}")
    def get_cfe(cfe_id: str, actor=Depends(optional_actor)):
        return canonical_response(registry.cfe_view(cfe_id, actor))

    @app.get("/cfe/{cfe_id}/hex")
    def get_cfe_hex(cfe_id: str, actor=Depends(optional_actor)):
        return canonical_response({"statements": registry.cfe_hex_index(cfe_id, actor)})

    @app.post("/hex/evaluate")
    def post_hex_evaluate(body: HexEvaluateRequest, actor=Depends(current_actor)):
        statements = registry.evaluate_hex(
            actor,
            body.cfe_id,
            profile_doc=body.profile,
            profile_docs=body.profiles,
            lineage_graph=body.lineage_graph,
            record=body.record,
        )
        return canonical_response({"statements": statements})

    @app.post("/hex/statements")
    def post_hex_statement(body: HexAssertRequest, actor=Depends(current_actor)):
        statement = registry.assert_hex(
            actor,
            body.cfe_id,
            body.deployment_ref,
            body.subcomponent,
            body.status,
            justification=body.justification,
            impact_statement=body.impact_statement,
            action_statement=body.action_statement,
        )
        return canonical_response(statement)

    # -- public database, feed, meta ---------------------------------------

    @app.get("/export/public-db")
    def export_public_db():
        return canonical_response(registry.export_public_db())

    @app.get("/advisories")
    def advisories(
        page: Optional[str] = Query(default=None),
        page_size: Optional[int] = Query(default=None, ge=1, le=500),
    ):
        return canonical_response(registry.advisory_feed(page, page_size))

    @app.get("/meta/transition-table")
    def meta_transition_table():
        return canonical_response(registry.meta_transition_table())

    @app.get("/meta/finding-catalogue")
    def meta_finding_catalogue():
        return canonical_response(registry.meta_finding_catalogue())

    return app
