// DOM rendering. Deliberately free of workflow knowledge: states, actions,
// and form fields all come from API documents.

import { ApiClient, ApiError } from "./api.js";
import { performAction } from "./controller.js";
import { formForAction } from "./forms.js";
import type { Queue } from "./queues.js";
import { buildQueues } from "./queues.js";
import type { AuditEntry, CaseView, RecommendationDoc, Session, TransitionTable } from "./types.js";

export interface AppState {
  api: ApiClient;
  session: Session | null;
  table: TransitionTable | null;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Array<Node | string>
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function banner(kind: "error" | "warn" | "info", text: string): HTMLElement {
  return el("div", { class: `banner ${kind}` }, text);
}

export function renderLogin(root: HTMLElement, onToken: (token: string) => void): void {
  const input = el("input", { type: "password", placeholder: "paste your bearer token" });
  const button = el("button", {}, "Sign in");
  button.addEventListener("click", () => onToken((input as HTMLInputElement).value.trim()));
  const anonymous = el("button", { class: "ghost" }, "Browse public records");
  anonymous.addEventListener("click", () => onToken(""));
  root.replaceChildren(
    el("div", { class: "login" }, el("h1", {}, "cfe-registry console"), input, button, anonymous),
  );
}

export async function renderQueues(root: HTMLElement, state: AppState): Promise<void> {
  let queues: Queue[];
  try {
    queues = await buildQueues(state.api, state.session);
  } catch (error) {
    root.replaceChildren(banner("error", `cannot load queues: ${String(error)}`));
    return;
  }
  const sections = queues.map((queue) => {
    const rows = queue.rows.map((row) => {
      const link = el("a", { href: `#/case/${row.caseId}` }, row.caseId);
      const actions = row.actions.length ? row.actions.join(", ") : "—";
      const age = row.ageDays === null ? "—" : `${row.ageDays.toFixed(1)}d`;
      return el(
        "tr",
        {},
        el("td", {}, link),
        el("td", {}, row.state),
        el("td", {}, row.severityBracket ?? "—"),
        el("td", {}, age),
        el("td", {}, actions),
      );
    });
    return el(
      "section",
      {},
      el("h2", {}, `${queue.title} (${queue.rows.length})`),
      el(
        "table",
        {},
        el(
          "thead",
          {},
          el("tr", {}, el("th", {}, "case"), el("th", {}, "state"), el("th", {}, "severity"),
            el("th", {}, "age"), el("th", {}, "your actions")),
        ),
        el("tbody", {}, ...rows),
      ),
    );
  });
  root.replaceChildren(...sections);
}

function latestRecommendation(audit: AuditEntry[] | undefined): RecommendationDoc | null {
  if (!audit) return null;
  for (let i = audit.length - 1; i >= 0; i -= 1) {
    const payload = audit[i].payload as { recommendation?: RecommendationDoc } | undefined;
    if (audit[i].action === "recommend" && payload?.recommendation) {
      return payload.recommendation;
    }
  }
  return null;
}

function recommendationPanel(view: CaseView): HTMLElement | null {
  const rec = latestRecommendation(view.audit);
  if (!rec) return null;
  const lines = [
    `recommendation: ${rec.decision} (evidence: ${rec.evidence_used})`,
    rec.validity
      ? `lower bound ${rec.validity.lower_bound.toPrecision(6)} vs threshold ${rec.threshold}`
      : null,
    rec.bias ? `bias p-value ${rec.bias.p_value.toPrecision(6)} (${rec.bias.direction})` : null,
  ].filter((line): line is string => line !== null);
  return el("aside", { class: "panel" }, el("h3", {}, "Adjudication"), ...lines.map((t) => el("p", {}, t)));
}

export async function renderCase(root: HTMLElement, state: AppState, caseId: string): Promise<void> {
  let view: CaseView;
  try {
    view = await state.api.getCase(caseId);
  } catch (error) {
    const message = error instanceof ApiError && error.klass === "not_found"
      ? `no case ${caseId} is visible to this session`
      : String(error);
    root.replaceChildren(banner("error", message));
    return;
  }
  const header = el(
    "header",
    {},
    el("h1", {}, caseId),
    el("p", {}, `state ${view.state}` + (view.track ? ` · ${view.track} track` : "")),
  );
  const facts = el(
    "dl",
    {},
    ...[
      ["severity", view.severity?.bracket ?? view.severity_bracket],
      ["CFE", view.cfe_id],
      ["CVE", view.cve_ref],
      ["advisory", view.advisory_id],
      ["version", view.version?.toString()],
    ].flatMap(([k, v]) => (v ? [el("dt", {}, String(k)), el("dd", {}, String(v))] : [])),
  );
  const panels: HTMLElement[] = [header, facts];
  const adjudication = recommendationPanel(view);
  if (adjudication) panels.push(adjudication);

  if (state.session && state.table && view.version !== undefined) {
    try {
      const offered = await state.api.getActions(caseId);
      panels.push(actionForms(root, state, view, offered.actions.map((a) => a.action)));
    } catch {
      // no actions for this session
    }
  }
  if (view.audit) {
    panels.push(
      el(
        "section",
        {},
        el("h3", {}, "Audit trail"),
        el(
          "ol",
          {},
          ...view.audit.map((entry) =>
            el("li", {}, `${entry.timestamp} ${entry.actor_id}: ${entry.action} → ${entry.to_state}`),
          ),
        ),
      ),
    );
  }
  root.replaceChildren(...panels);
}

function actionForms(
  root: HTMLElement,
  state: AppState,
  view: CaseView,
  actions: string[],
): HTMLElement {
  const container = el("section", {}, el("h3", {}, "Actions"));
  for (const action of actions.sort()) {
    const form = state.table && view.track
      ? formForAction(state.table, view.track, view.state, action)
      : null;
    if (!form) continue;
    const fieldInputs = new Map<string, HTMLInputElement | HTMLTextAreaElement | HTMLSelectElement>();
    const formEl = el("form", { class: "action" }, el("strong", {}, action));
    for (const field of form.fields) {
      let input: HTMLInputElement | HTMLTextAreaElement | HTMLSelectElement;
      if (field.options) {
        input = el("select", { name: field.name }, ...field.options.map((o) => el("option", { value: o }, o)));
        if (!field.required) (input as HTMLSelectElement).add(new Option("", "", true, true));
      } else if (field.kind === "object" || field.kind === "string_list") {
        input = el("textarea", { name: field.name, placeholder: field.label });
      } else {
        input = el("input", { name: field.name, placeholder: field.label });
      }
      fieldInputs.set(field.name, input);
      formEl.append(el("label", {}, `${field.label}${field.required ? " *" : ""}: `, input));
    }
    const errorsEl = el("div", { class: "field-errors" });
    const submit = el("button", { type: "submit" }, "apply");
    formEl.append(errorsEl, submit);
    formEl.addEventListener("submit", (event) => {
      event.preventDefault();
      const values: Record<string, string> = {};
      for (const [name, input] of fieldInputs) values[name] = input.value;
      void performAction(state.api, view.case_id, form, values, view.version ?? 0).then((outcome) => {
        if (outcome.ok) {
          void renderCase(root, state, view.case_id);
          return;
        }
        if (outcome.staleRetry) {
          errorsEl.replaceChildren(banner("warn", outcome.message));
          if (outcome.refreshedVersion !== null) view.version = outcome.refreshedVersion;
          return;
        }
        const messages = Object.values(outcome.fieldErrors);
        errorsEl.replaceChildren(
          banner(outcome.errorClass === "permission" ? "error" : "warn",
            messages.length ? messages.join("; ") : outcome.message),
        );
      });
    });
    container.append(formEl);
  }
  return container;
}

export async function renderPublic(root: HTMLElement, state: AppState): Promise<void> {
  const feed = await state.api.advisories();
  const items = feed.advisories.map((advisory) =>
    el(
      "li",
      {},
      el("strong", {}, advisory.advisory_id),
      ` [${advisory.cfe_id ?? advisory.cve_ref}] ${advisory.title} — ${advisory.published_at}`,
    ),
  );
  root.replaceChildren(
    el("section", {}, el("h1", {}, "Advisories"), el("ul", {}, ...items)),
  );
}

export function renderLint(root: HTMLElement, state: AppState): void {
  const editor = el("textarea", { rows: "20", cols: "80", placeholder: "paste a .modelcard.json" });
  const output = el("pre", { class: "findings" });
  let timer: ReturnType<typeof setTimeout> | null = null;
  editor.addEventListener("input", () => {
    if (timer) clearTimeout(timer);
    timer = setTimeout(() => {
      void state.api
        .lintCard((editor as HTMLTextAreaElement).value)
        .then((result) => {
          output.textContent = result.findings.length
            ? result.findings.map((f) => `${f.severity}: ${f.code} at ${f.path}: ${f.message}`).join("\n")
            : "clean";
        })
        .catch((error) => {
          if (error instanceof ApiError && error.findings.length) {
            output.textContent = error.findings
              .map((f) => `${f.severity}: ${f.code} at ${f.path}: ${f.message}`)
              .join("\n");
          } else {
            output.textContent = String(error);
          }
        });
    }, 400);
  });
  root.replaceChildren(el("section", {}, el("h1", {}, "Card lint"), editor, output));
}
