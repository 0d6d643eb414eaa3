// Transition forms generated from the machine-readable table; adding a
// transition server-side needs no console change.

import type { PayloadFieldSpec, TransitionTable } from "./types.js";

export interface FormField {
  name: string;
  kind: PayloadFieldSpec["kind"];
  required: boolean;
  options: string[] | null;
  label: string;
}

export interface FormModel {
  action: string;
  fields: FormField[];
}

export function formForAction(
  table: TransitionTable,
  track: string,
  state: string,
  action: string,
): FormModel | null {
  const rule = table.transitions.find(
    (t) => t.track === track && t.from === state && t.action === action,
  );
  if (!rule) return null;
  return {
    action,
    fields: rule.payload.map((spec) => ({
      name: spec.name,
      kind: spec.kind,
      required: spec.required,
      options: spec.enum ?? null,
      label: spec.name.replace(/_/g, " "),
    })),
  };
}

export interface PayloadResult {
  payload: Record<string, unknown>;
  errors: Record<string, string>;
}

// Raw form values (strings) -> typed payload, with inline validation errors.
// A payload with errors must never be submitted.
export function buildPayload(form: FormModel, values: Record<string, string>): PayloadResult {
  const payload: Record<string, unknown> = {};
  const errors: Record<string, string> = {};
  for (const field of form.fields) {
    const raw = (values[field.name] ?? "").trim();
    if (!raw) {
      if (field.required) errors[field.name] = `${field.label} is required`;
      continue;
    }
    switch (field.kind) {
      case "string": {
        if (field.options && !field.options.includes(raw)) {
          errors[field.name] = `${field.label} must be one of: ${field.options.join(", ")}`;
        } else {
          payload[field.name] = raw;
        }
        break;
      }
      case "number": {
        const parsed = Number(raw);
        if (Number.isNaN(parsed)) {
          errors[field.name] = `${field.label} must be a number`;
        } else {
          payload[field.name] = parsed;
        }
        break;
      }
      case "string_list": {
        payload[field.name] = raw
          .split(/[\n,]/)
          .map((item) => item.trim())
          .filter((item) => item.length > 0);
        break;
      }
      case "object": {
        try {
          const parsed: unknown = JSON.parse(raw);
          if (parsed === null || typeof parsed !== "object" || Array.isArray(parsed)) {
            errors[field.name] = `${field.label} must be a JSON object`;
          } else {
            payload[field.name] = parsed;
          }
        } catch {
          errors[field.name] = `${field.label} must be valid JSON`;
        }
        break;
      }
    }
  }
  return { payload, errors };
}
