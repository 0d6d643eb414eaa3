// Role-scoped queue derivation. Rows carry exactly the action set the API
// returned for the session at render time; nothing is computed locally.

import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import type { CaseView, Session } from "./types.js";

export interface CaseRow {
  caseId: string;
  state: string;
  track: string | null;
  severityBracket: string | null;
  ageDays: number | null;
  version: number | null;
  actions: string[];
  cfeId: string | null;
  advisoryId: string | null;
}

export interface Queue {
  title: string;
  role: string;
  rows: CaseRow[];
}

export function ageInDays(reportedAt: string | undefined, now: Date): number | null {
  if (!reportedAt) return null;
  const started = Date.parse(reportedAt.replace(/Z$/, "+00:00"));
  if (Number.isNaN(started)) return null;
  return Math.max(0, (now.getTime() - started) / 86_400_000);
}

export async function buildRow(api: ApiClient, view: CaseView, now: Date): Promise<CaseRow> {
  let actions: string[] = [];
  if (api.token) {
    try {
      const response = await api.getActions(view.case_id);
      actions = response.actions.map((a) => a.action).sort();
    } catch (error) {
      if (!(error instanceof ApiError) || error.klass === "transport") throw error;
      actions = [];
    }
  }
  return {
    caseId: view.case_id,
    state: view.state,
    track: view.track ?? null,
    severityBracket: view.severity?.bracket ?? view.severity_bracket ?? null,
    ageDays: ageInDays(view.report?.reported_at, now),
    version: view.version ?? null,
    actions,
    cfeId: view.cfe_id ?? null,
    advisoryId: view.advisory_id ?? null,
  };
}

const VENDOR_QUEUE_STATES = new Set(["Submitted", "VendorTriage", "CfeRequested"]);

export async function buildQueues(
  api: ApiClient,
  session: Session | null,
  now: Date = new Date(),
): Promise<Queue[]> {
  const { cases } = await api.listCases();
  const rows = new Map<string, CaseRow>();
  for (const view of cases) {
    rows.set(view.case_id, await buildRow(api, view, now));
  }
  const pick = (predicate: (view: CaseView) => boolean): CaseRow[] =>
    cases.filter(predicate).map((view) => rows.get(view.case_id)!);

  if (!session) {
    return [
      {
        title: "Published cases",
        role: "public",
        rows: pick((view) => view.state === "Published" || view.state === "Fixed"),
      },
    ];
  }

  const queues: Queue[] = [];
  if (session.roles.includes("reporter")) {
    queues.push({
      title: "My reports",
      role: "reporter",
      rows: pick((view) => view.participants?.reporter === session.actorId),
    });
  }
  if (session.roles.includes("vendor")) {
    queues.push({
      title: "Vendor triage",
      role: "vendor",
      rows: pick(
        (view) =>
          view.participants?.vendor === session.actorId && VENDOR_QUEUE_STATES.has(view.state),
      ),
    });
  }
  if (session.roles.includes("committee")) {
    queues.push({
      title: "CFE requests",
      role: "committee",
      rows: pick((view) => view.state === "CfeRequested"),
    });
  }
  if (session.roles.includes("adjudicator")) {
    queues.push({
      title: "Contested cases",
      role: "adjudicator",
      rows: pick((view) => view.state === "Adjudication"),
    });
  }
  if (queues.length === 0) {
    queues.push({
      title: "Published cases",
      role: "consumer",
      rows: pick((view) => view.state === "Published" || view.state === "Fixed"),
    });
  }
  return queues;
}
