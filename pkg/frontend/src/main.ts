/** Browser wiring: upload a space, configure, answer, review. */

import { ApiClient, SessionPayload, SpacePayload } from "./api.js";
import { renderReplay, renderSession } from "./render.js";
import { replayView, sessionView } from "./session.js";

const SAMPLE_SPACE = "domain: A,B,C\nA,B,C\nC,B,A\n";

const api = new ApiClient("");

let space: SpacePayload | null = null;
let session: SessionPayload | null = null;
let replayStep = 0;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showError(message: string): void {
  el("error").textContent = message;
}

function configFromInputs() {
  return {
    beta: Number(el<HTMLInputElement>("cfg-beta").value),
    eta: Number(el<HTMLInputElement>("cfg-eta").value),
    theta_lo: Number(el<HTMLInputElement>("cfg-lo").value),
    theta_hi: Number(el<HTMLInputElement>("cfg-hi").value),
    seed: Number(el<HTMLInputElement>("cfg-seed").value),
  };
}

function paintSession(): void {
  if (!space || !session) return;
  el("session-root").innerHTML = renderSession(sessionView(space, session));
  const yes = document.getElementById("answer-correct");
  const no = document.getElementById("answer-incorrect");
  yes?.addEventListener("click", () => submit(true));
  no?.addEventListener("click", () => submit(false));
  el("session-id").textContent = session.id;
}

async function submit(correct: boolean): Promise<void> {
  if (!session || session.question === null) return;
  try {
    session = await api.answer(session.id, session.question, correct);
    paintSession();
    if (session.status === "done") {
      await paintReplay(0);
    }
  } catch (exc) {
    showError(String(exc));
  }
}

async function paintReplay(step: number): Promise<void> {
  if (!session) return;
  const full = await api.getSession(session.id);
  const events = full.transcript ?? [];
  replayStep = Math.max(0, Math.min(step, events.length));
  el("replay-root").innerHTML = renderReplay(replayView(events, replayStep));
  document.getElementById("replay-back")?.addEventListener("click", () =>
    paintReplay(replayStep - 1),
  );
  document.getElementById("replay-forward")?.addEventListener("click", () =>
    paintReplay(replayStep + 1),
  );
}

async function startSession(): Promise<void> {
  showError("");
  try {
    const text = el<HTMLTextAreaElement>("space-text").value || SAMPLE_SPACE;
    const format = el<HTMLSelectElement>("space-format").value as
      | "hasse"
      | "seqs"
      | "states";
    space = await api.createSpace(format, text);
    el("space-info").textContent =
      `space ${space.id}: ${space.n} concepts, ` +
      `${space.state_count ?? "many"} states, dimension ${space.dim_c}`;
    session = await api.createSession(space.id, configFromInputs());
    paintSession();
  } catch (exc) {
    showError(String(exc));
  }
}

async function resumeSession(): Promise<void> {
  showError("");
  try {
    const id = el<HTMLInputElement>("resume-id").value.trim();
    session = await api.getSession(id);
    space = await api.getSpace(session.space_id);
    paintSession();
    if (session.status === "done") await paintReplay(0);
  } catch (exc) {
    showError(String(exc));
  }
}

export function boot(): void {
  el<HTMLTextAreaElement>("space-text").value = SAMPLE_SPACE;
  el("start").addEventListener("click", () => void startSession());
  el("resume").addEventListener("click", () => void resumeSession());
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
