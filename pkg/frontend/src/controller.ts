// Action submission with optimistic-concurrency handling: on a stale-version
// conflict the view refreshes and asks the user to retry; nothing is
// resubmitted automatically.

import { ApiClient, ApiError } from "./api.js";
import type { FormModel } from "./forms.js";
import { buildPayload } from "./forms.js";
import type { CaseView, FindingDoc } from "./types.js";

export interface ActionOutcome {
  ok: boolean;
  view: CaseView | null;
  errorClass: "validation" | "permission" | "transport" | null;
  message: string;
  fieldErrors: Record<string, string>;
  findings: FindingDoc[];
  staleRetry: boolean; // show the retry banner; the form keeps its values
  refreshedVersion: number | null;
}

const OK: Omit<ActionOutcome, "view"> = {
  ok: true,
  errorClass: null,
  message: "",
  fieldErrors: {},
  findings: [],
  staleRetry: false,
  refreshedVersion: null,
};

export async function performAction(
  api: ApiClient,
  caseId: string,
  form: FormModel,
  values: Record<string, string>,
  expectedVersion: number,
): Promise<ActionOutcome> {
  const { payload, errors } = buildPayload(form, values);
  if (Object.keys(errors).length > 0) {
    // inline validation failure: no request leaves the console
    return {
      ok: false,
      view: null,
      errorClass: "validation",
      message: "fix the highlighted fields",
      fieldErrors: errors,
      findings: [],
      staleRetry: false,
      refreshedVersion: null,
    };
  }
  try {
    const view = await api.postTransition(caseId, form.action, payload, expectedVersion);
    return { ...OK, view };
  } catch (error) {
    if (!(error instanceof ApiError)) throw error;
    if (error.klass === "conflict" && error.code === "stale_version") {
      let refreshed: number | null = error.actualVersion;
      if (refreshed === null) {
        try {
          refreshed = (await api.getCase(caseId)).version ?? null;
        } catch {
          refreshed = null;
        }
      }
      return {
        ok: false,
        view: null,
        errorClass: null,
        message: "the case changed while you were editing; review and retry",
        fieldErrors: {},
        findings: [],
        staleRetry: true,
        refreshedVersion: refreshed,
      };
    }
    const errorClass =
      error.klass === "permission" ? "permission" : error.klass === "validation" ? "validation" : "transport";
    return {
      ok: false,
      view: null,
      errorClass,
      message: error.message,
      fieldErrors: {},
      findings: error.findings,
      staleRetry: false,
      refreshedVersion: null,
    };
  }
}
