// Documents served by the registry API. Field names mirror the wire format.

export interface ModelRef {
  name: string;
  version: string;
}

export interface SeverityDoc {
  harm_categories: string[];
  breadth: string;
  bracket: string;
}

export interface AuditEntry {
  seq: number;
  actor_id: string;
  action: string;
  from_state: string | null;
  to_state: string;
  timestamp: string;
  payload_digest: string | null;
  payload?: Record<string, unknown>;
}

export interface CaseView {
  view: "full" | "public";
  case_id: string;
  state: string;
  model_ref: ModelRef;
  version?: number;
  track?: string;
  severity?: SeverityDoc | null;
  severity_bracket?: string;
  cfe_id?: string | null;
  cve_ref?: string | null;
  advisory_id?: string | null;
  participants?: Record<string, string>;
  report?: { reported_at: string; [key: string]: unknown };
  audit?: AuditEntry[];
  evidence?: Array<Record<string, unknown>>;
  evidence_digests?: string[];
}

export interface PayloadFieldSpec {
  name: string;
  kind: "string" | "number" | "string_list" | "object";
  required: boolean;
  enum?: string[];
}

export interface ActionSpec {
  action: string;
  to: string;
  payload: PayloadFieldSpec[];
}

export interface CaseActions {
  case_id: string;
  version: number;
  actions: ActionSpec[];
}

export interface TransitionRuleDoc {
  track: string;
  from: string;
  action: string;
  roles: string[];
  to: string;
  payload: PayloadFieldSpec[];
  auto: boolean;
}

export interface TransitionTable {
  table_version: string;
  tracks: string[];
  states: string[];
  terminal_states: string[];
  transitions: TransitionRuleDoc[];
  annotations: Array<{ action: string; roles: string[]; payload: PayloadFieldSpec[] }>;
}

export interface Session {
  actorId: string;
  displayName: string;
  roles: string[];
}

export interface FindingDoc {
  code: string;
  severity: "error" | "warning";
  path: string;
  message: string;
}

export interface AdvisoryDoc {
  advisory_id: string;
  case_id: string;
  title: string;
  body: string;
  published_at: string;
  cfe_id: string | null;
  cve_ref: string | null;
  severity_bracket: string | null;
  model: ModelRef;
  links: string[];
}

export interface RecommendationDoc {
  decision: string;
  threshold: number;
  alpha: number;
  evidence_used: string;
  validity: { lower_bound: number; threshold: number; alpha: number; supported: boolean } | null;
  bias: { p_value: number; alpha: number; biased: boolean; direction: string } | null;
}
