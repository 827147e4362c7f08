/** View models to HTML strings; main.ts mounts them into the page. */
function esc(text) {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
export function renderBars(view) {
    return view.bars
        .map((bar) => {
        const width = bar.p === null ? 0 : bar.p * 100;
        const classes = ["bar-row"];
        if (bar.settled)
            classes.push(`settled-${bar.settled}`);
        if (bar.isQuestion)
            classes.push("current-question");
        return `
      <div class="${classes.join(" ")}" data-concept="${esc(bar.concept)}">
        <div class="bar-label">${esc(bar.concept)}</div>
        <div class="bar-track">
          <div class="bar-fill" style="width:${width}%"></div>
          <div class="bar-threshold lo" style="left:${view.thetaLo * 100}%"></div>
          <div class="bar-threshold hi" style="left:${view.thetaHi * 100}%"></div>
        </div>
        <div class="bar-value" data-p="${bar.p === null ? "" : bar.label}">${bar.label}</div>
      </div>`;
    })
        .join("\n");
}
export function renderQuestion(view) {
    if (view.status === "done" || view.question === null) {
        return `<div class="question-panel done">assessment complete</div>`;
    }
    return `
  <div class="question-panel">
    <div class="question-counter">${esc(view.counter)}</div>
    <div class="question-concept">Can you solve: <strong>${esc(view.question)}</strong>?</div>
    <button id="answer-correct" data-concept="${esc(view.question)}">correct</button>
    <button id="answer-incorrect" data-concept="${esc(view.question)}">incorrect</button>
  </div>`;
}
export function renderFinalPanel(view) {
    if (!view.final)
        return "";
    const chips = (items, cls) => items.length
        ? items.map((c) => `<span class="chip ${cls}">${esc(c)}</span>`).join("")
        : `<span class="chip empty">none</span>`;
    return `
  <div class="final-panel">
    <h2>assessed state</h2>
    <div class="final-state" data-state="${esc(view.final.state)}">${esc(view.final.state)}</div>
    <div class="fringe-row"><span class="fringe-title">ready to learn</span>${chips(view.final.readyToLearn, "outer")}</div>
    <div class="fringe-row"><span class="fringe-title">recently learned</span>${chips(view.final.recentlyLearned, "inner")}</div>
    ${view.final.forced ? `<div class="forced-note">question cap reached before all concepts settled</div>` : ""}
  </div>`;
}
export function renderSession(view) {
    return `
  <section class="session">
    ${renderQuestion(view)}
    <div class="bars">${renderBars(view)}</div>
    ${renderFinalPanel(view)}
  </section>`;
}
export function renderReplay(view) {
    const rows = Object.entries(view.marginals)
        .map(([concept, p]) => `<div class="replay-row"><span>${esc(concept)}</span><span data-p="${String(p)}">${String(p)}</span></div>`)
        .join("");
    return `
  <section class="replay">
    <div class="replay-step">step ${view.step} / ${view.total}: ${esc(view.description)}</div>
    <button id="replay-back">back</button>
    <button id="replay-forward">forward</button>
    <div class="replay-marginals">${rows}</div>
  </section>`;
}
