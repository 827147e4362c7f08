/** Contract against recorded service payloads: the UI shows service
 * numbers verbatim and the final panel matches the fixture exactly. */

import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { test } from "node:test";

import type { SessionPayload, SpacePayload } from "../src/api.js";
import { renderFinalPanel, renderSession } from "../src/render.js";
import { sessionView } from "../src/session.js";

interface Fixture {
  space: Omit<SpacePayload, "id">;
  steps: Omit<SessionPayload, "id" | "space_id">[];
  final: { state: string; recently_learned: string[]; ready_to_learn: string[] };
}

const fixture: Fixture = JSON.parse(
  readFileSync(new URL("../../fixtures/abc_transcript.json", import.meta.url), "utf8"),
);

const space: SpacePayload = { id: "sp", ...fixture.space };

function asSession(step: Fixture["steps"][number]): SessionPayload {
  return { id: "s", space_id: "sp", ...step };
}

test("every probability shown appears verbatim in the payload", () => {
  for (const step of fixture.steps) {
    const html = renderSession(sessionView(space, asSession(step)));
    const shown = [...html.matchAll(/data-p="([^"]+)"/g)].map((m) => m[1]);
    const payloadValues = Object.values(step.marginals)
      .filter((p): p is number => p !== null)
      .map(String);
    for (const value of shown) {
      assert.ok(
        payloadValues.includes(value),
        `displayed ${value} missing from payload ${payloadValues}`,
      );
    }
  }
});

test("final panel matches the recorded final payload byte for byte", () => {
  const last = fixture.steps[fixture.steps.length - 1];
  assert.equal(last.status, "done");
  const html = renderFinalPanel(sessionView(space, asSession(last)));
  const state = /data-state="([^"]*)"/.exec(html)?.[1];
  assert.equal(state, fixture.final.state);
  const chips = (cls: string) =>
    [...html.matchAll(new RegExp(`class="chip ${cls}">([^<]*)<`, "g"))].map(
      (m) => m[1],
    );
  assert.deepEqual(chips("outer"), fixture.final.ready_to_learn);
  assert.deepEqual(chips("inner"), fixture.final.recently_learned);
});

test("replaying the transcript never invents a number", () => {
  const marginalEvents = fixture.steps
    .flatMap((s) => Object.values(s.marginals))
    .filter((p): p is number => p !== null);
  const seen = new Set(marginalEvents.map(String));
  for (const step of fixture.steps) {
    const html = renderSession(sessionView(space, asSession(step)));
    for (const m of html.matchAll(/data-p="([^"]+)"/g)) {
      assert.ok(seen.has(m[1]));
    }
  }
});
