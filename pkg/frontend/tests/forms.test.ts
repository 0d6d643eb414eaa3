// Offline unit tests for schema-driven form generation and payload building.

import { describe, expect, it } from "vitest";

import { buildPayload, formForAction } from "../src/forms.js";
import { ageInDays } from "../src/queues.js";
import type { TransitionTable } from "../src/types.js";

const TABLE: TransitionTable = {
  table_version: "1",
  tracks: ["safety", "security", "ambiguous"],
  states: ["Submitted", "VendorRejected"],
  terminal_states: ["Withdrawn"],
  transitions: [
    {
      track: "safety",
      from: "Submitted",
      action: "reject",
      roles: ["vendor"],
      to: "VendorRejected",
      payload: [{ name: "reason", kind: "string", required: true }],
      auto: false,
    },
    {
      track: "safety",
      from: "Submitted",
      action: "reassign_track",
      roles: ["vendor"],
      to: "VendorTriage",
      payload: [
        { name: "track", kind: "string", required: true, enum: ["safety", "security"] },
      ],
      auto: false,
    },
    {
      track: "safety",
      from: "CfeAssigned",
      action: "publish",
      roles: ["vendor", "committee"],
      to: "Published",
      payload: [
        { name: "advisory", kind: "object", required: true },
        { name: "links", kind: "string_list", required: false },
      ],
      auto: false,
    },
    {
      track: "security",
      from: "CveAssigned",
      action: "start_embargo",
      roles: ["vendor", "committee"],
      to: "Embargoed",
      payload: [{ name: "embargo_days", kind: "number", required: false }],
      auto: false,
    },
  ],
  annotations: [],
};

describe("formForAction", () => {
  it("builds a form from the table row", () => {
    const form = formForAction(TABLE, "safety", "Submitted", "reject");
    expect(form).not.toBeNull();
    expect(form!.fields).toHaveLength(1);
    expect(form!.fields[0]).toMatchObject({ name: "reason", required: true });
  });

  it("returns null for an unknown (track, state, action) row", () => {
    expect(formForAction(TABLE, "safety", "Submitted", "publish")).toBeNull();
    expect(formForAction(TABLE, "security", "Submitted", "reject")).toBeNull();
  });
});

describe("buildPayload", () => {
  it("flags a missing required field inline", () => {
    const form = formForAction(TABLE, "safety", "Submitted", "reject")!;
    const { payload, errors } = buildPayload(form, { reason: "   " });
    expect(errors.reason).toMatch(/required/);
    expect(payload).toEqual({});
  });

  it("enforces enum membership", () => {
    const form = formForAction(TABLE, "safety", "Submitted", "reassign_track")!;
    expect(buildPayload(form, { track: "ambiguous" }).errors.track).toMatch(/one of/);
    expect(buildPayload(form, { track: "security" }).payload).toEqual({ track: "security" });
  });

  it("parses numbers, lists, and JSON objects", () => {
    const publish = formForAction(TABLE, "safety", "CfeAssigned", "publish")!;
    const good = buildPayload(publish, {
      advisory: '{"title": "x", "body": "y"}',
      links: "https://a.example\nhttps://b.example",
    });
    expect(good.errors).toEqual({});
    expect(good.payload).toEqual({
      advisory: { title: "x", body: "y" },
      links: ["https://a.example", "https://b.example"],
    });

    const bad = buildPayload(publish, { advisory: "[1,2]" });
    expect(bad.errors.advisory).toMatch(/JSON object/);

    const embargo = formForAction(TABLE, "security", "CveAssigned", "start_embargo")!;
    expect(buildPayload(embargo, { embargo_days: "45" }).payload).toEqual({ embargo_days: 45 });
    expect(buildPayload(embargo, { embargo_days: "soon" }).errors.embargo_days).toMatch(/number/);
    expect(buildPayload(embargo, {}).errors).toEqual({});
  });
});

describe("ageInDays", () => {
  it("computes the case age from the report timestamp", () => {
    const now = new Date("2025-06-11T00:00:00Z");
    expect(ageInDays("2025-06-01T00:00:00.000000Z", now)).toBeCloseTo(10, 5);
    expect(ageInDays(undefined, now)).toBeNull();
  });
});
