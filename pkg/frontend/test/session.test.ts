import assert from "node:assert/strict";
import { test } from "node:test";

import type { SessionPayload, SpacePayload, TranscriptEvent } from "../src/api.js";
import { replayView, sessionView } from "../src/session.js";

const space: SpacePayload = {
  id: "sp1",
  n: 3,
  concepts: ["A", "B", "C"],
  state_count: 7,
  dim_c: 2,
  sequences: ["A,B,C", "C,B,A"],
};

function payload(overrides: Partial<SessionPayload>): SessionPayload {
  return {
    id: "s1",
    space_id: "sp1",
    status: "active",
    question: "B",
    marginals: { A: 4 / 7, B: 3 / 7, C: 4 / 7 },
    questions_asked: 0,
    config: {
      beta: 0.1,
      eta: 0.01,
      theta_lo: 0.2,
      theta_hi: 0.8,
      collection_size: 8,
      seed: 0,
    },
    ...overrides,
  };
}

test("bars copy marginals verbatim and mark the current question", () => {
  const view = sessionView(space, payload({}));
  assert.equal(view.bars.length, 3);
  const barB = view.bars[1];
  assert.equal(barB.concept, "B");
  assert.equal(barB.p, 3 / 7);
  assert.equal(barB.label, String(3 / 7));
  assert.equal(barB.isQuestion, true);
  assert.equal(view.bars[0].isQuestion, false);
});

test("settled markers follow the service thresholds", () => {
  const view = sessionView(
    space,
    payload({ marginals: { A: 0.95, B: 0.5, C: 0.1 } }),
  );
  assert.equal(view.bars[0].settled, "high");
  assert.equal(view.bars[1].settled, null);
  assert.equal(view.bars[2].settled, "low");
});

test("missing marginals render as placeholders", () => {
  const view = sessionView(space, payload({ marginals: { A: 0.5, B: null, C: null } }));
  assert.equal(view.bars[1].p, null);
  assert.equal(view.bars[1].label, "-");
  assert.equal(view.bars[1].settled, null);
});

test("final payload maps onto the final view", () => {
  const view = sessionView(
    space,
    payload({
      status: "done",
      question: null,
      final: {
        state: "A,C",
        recently_learned: ["A", "C"],
        ready_to_learn: ["B"],
        forced_termination: false,
      },
    }),
  );
  assert.equal(view.status, "done");
  assert.deepEqual(view.final, {
    state: "A,C",
    readyToLearn: ["B"],
    recentlyLearned: ["A", "C"],
    forced: false,
  });
});

test("replay folds transcript events up to the requested step", () => {
  const events: TranscriptEvent[] = [
    { type: "marginal", concept: "A", p: 0.5 },
    { type: "ask", concept: "A" },
    { type: "answer", concept: "A", correct: 1 },
    { type: "marginal", concept: "A", p: 1.0 },
    { type: "final", state: "A" },
  ];
  assert.equal(replayView(events, 0).description, "start");
  assert.equal(replayView(events, 2).description, "asked A");
  assert.equal(replayView(events, 2).marginals.A, 0.5);
  assert.equal(replayView(events, 4).marginals.A, 1.0);
  const last = replayView(events, 99);
  assert.equal(last.step, events.length);
  assert.equal(last.description, "final state A");
});
