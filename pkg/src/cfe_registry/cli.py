"""Command-line client for the registry, plus offline card linting.

Exit codes: 0 success, 1 validation findings of severity error, 2 API or
transport error, 3 permission or transition denied. Errors go to stderr;
the output stream carries only results (canonical JSON under --json).
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Optional

import click
import httpx

from cfe_registry.domain.vocab import DEFAULT_LICENSE_ALLOWLIST
from cfe_registry.errors import DocumentSyntaxError, SchemaError
from cfe_registry.formats.canonical import canonical_dumps
from cfe_registry.formats.case_docs import parse_taxonomy
from cfe_registry.formats.model_card import lint_model_card, parse_model_card

ENV_URL = "CFE_REGISTRY_URL"
ENV_TOKEN = "CFE_REGISTRY_TOKEN"
ENV_ADMIN_TOKEN = "CFE_REGISTRY_ADMIN_TOKEN"

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_TRANSPORT = 2
EXIT_DENIED = 3

_DENIED_STATUSES = {401, 403, 409}


class ClientContext:
    def __init__(self, server: Optional[str], token: Optional[str], as_json: bool, config: Optional[str]):
        file_values = {}
        if config:
            try:
                file_values = json.loads(Path(config).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                fail(f"cannot read config {config}: {exc}", EXIT_TRANSPORT)
        self.server = server or os.environ.get(ENV_URL) or file_values.get("server") or "http://127.0.0.1:8300"
        self.token = token or os.environ.get(ENV_TOKEN) or file_values.get("token")
        self.as_json = as_json

    def headers(self, admin_token: Optional[str] = None) -> dict:
        token = admin_token or self.token
        return {"Authorization": f"Bearer {token}"} if token else {}

    def request(self, method: str, path: str, admin_token: Optional[str] = None, **kwargs):
        url = self.server.rstrip("/") + path
        try:
            response = httpx.request(method, url, headers=self.headers(admin_token), timeout=30.0, **kwargs)
        except httpx.HTTPError as exc:
            fail(f"transport error: {exc}", EXIT_TRANSPORT)
        if response.status_code >= 400:
            try:
                body = response.json()
            except json.JSONDecodeError:
                body = {"error": "http_error", "message": response.text}
            message = body.get("message", response.text)
            code = EXIT_DENIED if response.status_code in _DENIED_STATUSES else EXIT_TRANSPORT
            if response.status_code == 422 and body.get("findings"):
                echo_findings(body["findings"])
                raise SystemExit(EXIT_FINDINGS)
            fail(f"{response.status_code} {body.get('error', '')}: {message}", code)
        return response.json()

    def emit(self, doc, human) -> None:
        if self.as_json:
            click.echo(canonical_dumps(doc))
        else:
            human(doc)


def fail(message: str, code: int):
    click.echo(message, err=True)
    raise SystemExit(code)


def echo_findings(findings: list[dict]) -> None:
    for finding in findings:
        click.echo(f"{finding['severity']}: {finding['code']} at {finding['path']}: {finding['message']}", err=True)


def _read_file(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        fail(f"cannot read {path}: {exc}", EXIT_TRANSPORT)


pass_ctx = click.make_pass_decorator(ClientContext)


@click.group()
@click.option("--server", default=None, help=f"registry URL (or ${ENV_URL})")
@click.option("--token", default=None, help=f"bearer token (or ${ENV_TOKEN})")
@click.option("--json", "as_json", is_flag=True, help="canonical JSON output")
@click.option("--config", default=None, help="client config file (JSON: server, token)")
@click.pass_context
def main(ctx, server, token, as_json, config):
    """Client for the coordinated-disclosure registry."""
    ctx.obj = ClientContext(server, token, as_json, config)


# -- card ------------------------------------------------------------------


@main.group()
def card():
    """Model card operations."""


@card.command("lint")
@click.argument("file", type=click.Path(exists=True))
@click.option("--taxonomy", default=None, type=click.Path(exists=True), help="taxonomy descriptor to check")
@click.option("--allowlist", default=None, help="comma-separated permissive license ids")
@pass_ctx
def card_lint(ctx, file, taxonomy, allowlist):
    """Validate and lint a card offline (no server contact)."""
    data = _read_file(file)
    licenses = (
        frozenset(item.strip() for item in allowlist.split(",") if item.strip())
        if allowlist
        else DEFAULT_LICENSE_ALLOWLIST
    )
    try:
        parsed = parse_model_card(data)
    except SchemaError as exc:
        findings = [f.to_doc() for f in exc.findings]
        if ctx.as_json:
            click.echo(canonical_dumps({"findings": findings, "valid": False}))
        echo_findings(findings)
        raise SystemExit(EXIT_FINDINGS)
    except DocumentSyntaxError as exc:
        fail(f"syntax error: {exc}", EXIT_FINDINGS)
    descriptor = parse_taxonomy(_read_file(taxonomy)) if taxonomy else None
    findings = [f.to_doc() for f in lint_model_card(parsed, descriptor, licenses)]
    if ctx.as_json:
        click.echo(canonical_dumps({"findings": findings, "valid": not _any_error(findings)}))
    else:
        if findings:
            echo_findings(findings)
        else:
            click.echo(f"{parsed.model_name}@{parsed.model_version}: clean")
    raise SystemExit(EXIT_FINDINGS if _any_error(findings) else EXIT_OK)


def _any_error(findings: list[dict]) -> bool:
    return any(f["severity"] == "error" for f in findings)


@card.command("push")
@click.argument("file", type=click.Path(exists=True))
@click.option("--dry-run", is_flag=True, help="lint on the server without registering")
@pass_ctx
def card_push(ctx, file, dry_run):
    doc = ctx.request("POST", f"/model-cards?dry_run={'true' if dry_run else 'false'}", content=_read_file(file))
    ctx.emit(doc, lambda d: _human_card_push(d))
    if _any_error(doc.get("findings", [])):
        raise SystemExit(EXIT_FINDINGS)


def _human_card_push(doc) -> None:
    model = doc["model"]
    state = "registered" if doc["registered"] else "not registered"
    click.echo(f"{model['name']}@{model['version']}: {state}")
    if doc["findings"]:
        echo_findings(doc["findings"])


@main.group()
def taxonomy():
    """Taxonomy descriptor operations."""


@taxonomy.command("push")
@click.argument("file", type=click.Path(exists=True))
@pass_ctx
def taxonomy_push(ctx, file):
    doc = ctx.request("POST", "/taxonomies", content=_read_file(file))
    ctx.emit(doc, lambda d: click.echo(f"{d['id']}@{d['version']} conformant={d['conformant']}"))


# -- report / case -----------------------------------------------------------


@main.group()
def report():
    """Disclosure report operations."""


@report.command("submit")
@click.argument("file", type=click.Path(exists=True))
@pass_ctx
def report_submit(ctx, file):
    doc = ctx.request("POST", "/reports", content=_read_file(file))
    ctx.emit(doc, lambda d: click.echo(f"{d['case_id']}: {d['state']} ({d['track']} track)"))


@main.group()
def case():
    """Case operations."""


def _human_case(doc) -> None:
    click.echo(f"{doc['case_id']}: state={doc['state']} version={doc.get('version', '?')}")
    for key in ("track", "cfe_id", "cve_ref", "advisory_id"):
        if doc.get(key):
            click.echo(f"  {key}: {doc[key]}")
    if doc.get("severity"):
        click.echo(f"  severity: {doc['severity']['bracket']}")


@case.command("show")
@click.argument("case_id")
@pass_ctx
def case_show(ctx, case_id):
    ctx.emit(ctx.request("GET", f"/cases/{case_id}"), _human_case)


@case.command("actions")
@click.argument("case_id")
@pass_ctx
def case_actions(ctx, case_id):
    doc = ctx.request("GET", f"/cases/{case_id}/actions")

    def human(d):
        click.echo(f"{d['case_id']} v{d['version']}:")
        for item in d["actions"]:
            required = [f["name"] for f in item["payload"] if f["required"]]
            suffix = f" (requires {', '.join(required)})" if required else ""
            click.echo(f"  {item['action']} -> {item['to']}{suffix}")

    ctx.emit(doc, human)


def _transition(ctx, case_id: str, action: str, payload: dict, expected_version: Optional[int]):
    if expected_version is None:
        expected_version = ctx.request("GET", f"/cases/{case_id}")["version"]
    return ctx.request(
        "POST",
        f"/cases/{case_id}/transitions",
        json={"action": action, "payload": payload, "expected_version": expected_version},
    )


@case.command("transition")
@click.argument("case_id")
@click.argument("action")
@click.option("--payload", default="{}", help="action payload as JSON")
@click.option("--expected-version", type=int, default=None)
@pass_ctx
def case_transition(ctx, case_id, action, payload, expected_version):
    try:
        payload_doc = json.loads(payload)
    except json.JSONDecodeError as exc:
        fail(f"--payload is not valid JSON: {exc}", EXIT_TRANSPORT)
    doc = _transition(ctx, case_id, action, payload_doc, expected_version)
    ctx.emit(doc, _human_case)


@case.command("escalate")
@click.argument("case_id")
@pass_ctx
def case_escalate(ctx, case_id):
    doc = _transition(ctx, case_id, "escalate", {}, None)
    ctx.emit(doc, _human_case)


@case.group("evidence")
def case_evidence():
    """Evidence operations."""


@case_evidence.command("add")
@click.argument("case_id")
@click.option("--trials", "-n", "n", type=int, required=True, help="number of trials")
@click.option("--violations", "-k", "k", type=int, required=True, help="number of violations")
@click.option("--protocol", default="", help="sampling protocol description")
@click.option("--raw-file", type=click.Path(exists=True), default=None, help="raw prompt/output pairs (stored sealed)")
@pass_ctx
def case_evidence_add(ctx, case_id, n, k, protocol, raw_file):
    raw = _read_file(raw_file).decode("utf-8") if raw_file else None
    doc = ctx.request(
        "POST",
        f"/cases/{case_id}/evidence",
        json={"n": n, "k": k, "sampling_protocol": protocol, "raw_payload": raw},
    )
    ctx.emit(doc, _human_case)


@main.command("adjudicate")
@click.argument("case_id")
@click.option("--threshold", type=float, default=None, help="violation-rate threshold override")
@click.option("--alpha", type=float, default=None, help="significance level override")
@pass_ctx
def adjudicate_cmd(ctx, case_id, threshold, alpha):
    doc = ctx.request(
        "POST", f"/cases/{case_id}/adjudicate", json={"threshold": threshold, "alpha": alpha}
    )

    def human(d):
        rec = d["recommendation"]
        click.echo(f"{d['case_id']}: {rec['decision']} (evidence: {rec['evidence_used']})")
        if rec.get("validity"):
            click.echo(f"  lower_bound={rec['validity']['lower_bound']:.6g} threshold={rec['threshold']}")
        if rec.get("bias"):
            click.echo(f"  bias p={rec['bias']['p_value']:.6g} direction={rec['bias']['direction']}")

    ctx.emit(doc, human)


# -- cfe / advisory / hex / export -------------------------------------------


@main.group()
def cfe():
    """CFE record operations."""


@cfe.command("show")
@click.argument("cfe_id")
@pass_ctx
def cfe_show(ctx, cfe_id):
    doc = ctx.request("GET", f"/cfe/{cfe_id}")

    def human(d):
        click.echo(f"{d['cfe_id']}: {d['status']} ({d['model']['name']}@{d['model']['version']})")
        if d.get("summary"):
            click.echo(f"  {d['summary']}")
        if d.get("severity"):
            click.echo(f"  severity: {d['severity']['bracket']}")
        if d.get("advisory_id"):
            click.echo(f"  advisory: {d['advisory_id']}")

    ctx.emit(doc, human)


@main.group()
def advisory():
    """Advisory feed."""


@advisory.command("list")
@click.option("--page", default=None, help="page token from a previous call")
@click.option("--page-size", type=int, default=None)
@pass_ctx
def advisory_list(ctx, page, page_size):
    path = "/advisories"
    params = []
    if page:
        params.append(f"page={page}")
    if page_size:
        params.append(f"page_size={page_size}")
    if params:
        path += "?" + "&".join(params)
    doc = ctx.request("GET", path)

    def human(d):
        for item in d["advisories"]:
            ident = item.get("cfe_id") or item.get("cve_ref")
            click.echo(f"{item['advisory_id']} [{ident}] {item['title']} ({item['published_at']})")
        if d.get("next_page_token"):
            click.echo(f"next page: {d['next_page_token']}")

    ctx.emit(doc, human)


@main.group("hex")
def hex_group():
    """HEX exposure statements."""


@hex_group.command("evaluate")
@click.argument("cfe_id")
@click.argument("profile_file", type=click.Path(exists=True))
@click.option("--lineage-graph", type=click.Path(exists=True), default=None, help="child->parent commit map (JSON)")
@click.option("--no-record", is_flag=True, help="evaluate without recording the statement")
@pass_ctx
def hex_evaluate(ctx, cfe_id, profile_file, lineage_graph, no_record):
    profile = json.loads(_read_file(profile_file))
    body = {"cfe_id": cfe_id, "record": not no_record}
    if isinstance(profile, list):
        body["profiles"] = profile
    else:
        body["profile"] = profile
    if lineage_graph:
        body["lineage_graph"] = json.loads(_read_file(lineage_graph))
    doc = ctx.request("POST", "/hex/evaluate", json=body)

    def human(d):
        for s in d["statements"]:
            line = f"{s['statement_id']}: {s['deployment_ref']} -> {s['status']}"
            if s.get("justification"):
                line += f" ({s['justification']})"
            click.echo(line)

    ctx.emit(doc, human)


@hex_group.command("issue")
@click.argument("cfe_id")
@click.option("--deployment", required=True, help="deployment reference")
@click.option("--status", required=True, type=click.Choice(["affected", "unaffected", "fixed", "under_investigation"]))
@click.option("--justification", default=None)
@click.option("--impact", default=None, help="impact statement (required for affected)")
@click.option("--action", "action_statement", default=None, help="action statement")
@click.option("--commit", required=True, help="subcomponent commit")
@click.option("--stage", default="inference", type=click.Choice(["development", "training", "fine_tuning", "inference"]))
@pass_ctx
def hex_issue(ctx, cfe_id, deployment, status, justification, impact, action_statement, commit, stage):
    doc = ctx.request(
        "POST",
        "/hex/statements",
        json={
            "cfe_id": cfe_id,
            "deployment_ref": deployment,
            "subcomponent": {"commit": commit, "lifecycle_stage": stage, "source": deployment},
            "status": status,
            "justification": justification,
            "impact_statement": impact,
            "action_statement": action_statement,
        },
    )
    ctx.emit(doc, lambda d: click.echo(f"{d['statement_id']}: {d['deployment_ref']} -> {d['status']}"))


@main.group()
def export():
    """Public exports."""


@export.command("public-db")
@pass_ctx
def export_public_db(ctx):
    doc = ctx.request("GET", "/export/public-db")

    def human(d):
        click.echo(f"public database as of seq {d['as_of_seq']}:")
        for rec in d["cfes"]:
            click.echo(f"  {rec['cfe_id']} [{rec['status']}] {rec['model']['name']}@{rec['model']['version']}")
        click.echo(f"  {len(d['advisories'])} advisories, {sum(len(v) for v in d['hex_statements'].values())} HEX statements")

    ctx.emit(doc, human)


# -- admin --------------------------------------------------------------------


@main.group()
def admin():
    """Operator commands."""


@admin.group("token")
def admin_token():
    """Token provisioning."""


@admin_token.command("issue")
@click.option("--actor", required=True, help="actor id")
@click.option("--roles", default="", help="comma-separated roles")
@click.option("--display-name", default="")
@click.option("--ttl-days", type=float, default=None)
@click.option("--admin-token", default=None, help=f"operator token (or ${ENV_ADMIN_TOKEN})")
@pass_ctx
def admin_token_issue(ctx, actor, roles, display_name, ttl_days, admin_token):
    operator = admin_token or os.environ.get(ENV_ADMIN_TOKEN)
    if not operator:
        fail(f"an operator token is required (--admin-token or ${ENV_ADMIN_TOKEN})", EXIT_DENIED)
    doc = ctx.request(
        "POST",
        "/admin/tokens",
        admin_token=operator,
        json={
            "actor_id": actor,
            "display_name": display_name,
            "roles": [r.strip() for r in roles.split(",") if r.strip()],
            "ttl_days": ttl_days,
        },
    )
    ctx.emit(doc, lambda d: click.echo(f"{d['actor_id']}: {d['token']} (expires {d['expires_at']})"))


if __name__ == "__main__":
    main()
