// Dashboard wiring: candidate review panel, live network view, trend charts.

import { ApiClient } from "./api.js";
import { TrendChart } from "./charts.js";
import { NetworkView } from "./network.js";
import { SessionController } from "./session.js";
import type { CandidateRow } from "./types.js";

const api = new ApiClient("");
const session = new SessionController(api);

const el = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

const banner = el<HTMLDivElement>("banner");
const stateLine = el<HTMLDivElement>("state-line");
const candidatePanel = el<HTMLDivElement>("candidates");
const detailPanel = el<HTMLDivElement>("detail");
const network = new NetworkView(el<HTMLCanvasElement>("network"));
const trends = new TrendChart(el<HTMLCanvasElement>("trends"));

function showBanner(message: string | null): void {
  banner.textContent = message ?? "";
  banner.style.display = message ? "block" : "none";
}

function renderState(): void {
  const s = session.state;
  if (!s) return;
  const assigned = Object.entries(s.assigned_counts)
    .map(([cls, n]) => `${cls}: ${n}`)
    .join("  ");
  stateLine.textContent =
    `iteration ${s.iteration}${s.stable ? " (stable)" : ""}  |  assigned ${assigned}` +
    `  |  rejected ${s.rejected_count}  |  buffer ${session.bufferSize}`;
}

function candidateRow(cls: string, row: CandidateRow): HTMLElement {
  const div = document.createElement("div");
  div.className = "candidate";
  const scores = Object.entries(row.class_scores)
    .map(([c, v]) => `${c}: ${v.toFixed(1)}`)
    .join(", ");
  div.innerHTML =
    `<span class="tag">#${row.hashtag}</span>` +
    `<span class="meta">${row.occurrences} uses &middot; ${scores}</span>`;
  const accept = document.createElement("button");
  accept.textContent = "accept";
  const reject = document.createElement("button");
  reject.textContent = "reject";
  for (const [btn, action] of [[accept, "accept"], [reject, "reject"]] as const) {
    btn.addEventListener("click", () => {
      session.decide(row.hashtag, action);
      div.classList.remove("accepted", "rejected");
      div.classList.add(action === "accept" ? "accepted" : "rejected");
      renderState();
    });
  }
  div.append(accept, reject);
  div.addEventListener("mouseenter", () => renderDetail(row));
  return div;
}

function renderCandidates(): void {
  candidatePanel.replaceChildren();
  const view = session.candidates;
  if (!view) return;
  for (const [cls, rows] of Object.entries(view.candidates)) {
    const head = document.createElement("h3");
    head.textContent = `${cls} (${rows.length} proposed)`;
    candidatePanel.append(head);
    for (const row of rows) {
      candidatePanel.append(candidateRow(cls, row));
    }
  }
}

function renderDetail(row: CandidateRow): void {
  const neighbors = row.top_neighbors
    .map((n) => `<li>#${n.hashtag} <small>(s=${n.s.toFixed(1)}, ${n.class ?? "-"})</small></li>`)
    .join("");
  detailPanel.innerHTML =
    `<b>#${row.hashtag}</b> &mdash; score ${row.score.toFixed(1)}` +
    `<ul>${neighbors}</ul>`;
}

async function refreshGraph(): Promise<void> {
  network.setGraph(await api.graph());
}

network.onSelect = (id) => {
  if (id) {
    detailPanel.innerHTML = `<b>#${id}</b>`;
  }
};

async function refreshTrends(): Promise<void> {
  try {
    const [opinion, polls, fit] = await Promise.all([
      api.opinionSeries("whole"),
      api.pollSeries(),
      api.fitSeries(),
    ]);
    const ratioKey = Object.keys(opinion.series).find((k) => k.startsWith("r_"));
    const series = [];
    if (ratioKey) {
      series.push({
        label: ratioKey,
        color: "#3366cc",
        days: opinion.days,
        values: opinion.series[ratioKey]!,
      });
    }
    series.push({
      label: "polls",
      color: "#7b4fa6",
      days: polls.days,
      values: polls.series["y_a"]!,
      dashed: true,
    });
    series.push({
      label: `fitted (w=${fit.params.w}, T_d=${fit.params.T_d})`,
      color: "#e45756",
      days: fit.days,
      values: fit.series.fitted,
    });
    try {
      const baselines = await api.baselineSeries();
      const colors: Record<string, string> = {
        mentions: "#59a14f",
        "mentions-emotion": "#f28e2b",
        hashtags: "#b07aa1",
      };
      for (const [name, payload] of Object.entries(baselines)) {
        if (name === "comparison" || !("series" in payload)) continue;
        const key = Object.keys(payload.series)[0];
        if (!key) continue;
        series.push({
          label: name,
          color: colors[name] ?? "#888",
          days: payload.days,
          values: payload.series[key]!,
          dashed: true,
        });
      }
    } catch {
      // benchmark series are optional
    }
    trends.setSeries(series);
  } catch (err) {
    showBanner(`series unavailable: ${(err as Error).message}`);
  }
}

async function submitAndIterate(): Promise<void> {
  try {
    if (session.bufferSize > 0) {
      const result = await session.submit();
      if (result.dropped.length > 0) {
        showBanner(
          `session moved on; dropped stale decisions: ` +
            result.dropped.map((d) => d.hashtag).join(", "),
        );
        renderCandidates();
        renderState();
        return; // analyst reviews the resynced list before iterating
      }
    }
    await session.iterate();
    showBanner(null);
    renderCandidates();
    renderState();
    await refreshGraph();
  } catch (err) {
    showBanner((err as Error).message);
    await session.refresh();
    renderCandidates();
    renderState();
  }
}

el<HTMLButtonElement>("submit").addEventListener("click", () => void submitAndIterate());
el<HTMLButtonElement>("reload").addEventListener("click", () => void boot());

async function boot(): Promise<void> {
  try {
    await session.refresh();
    showBanner(null);
    renderState();
    renderCandidates();
    await refreshGraph();
    await refreshTrends();
  } catch (err) {
    showBanner(`service unreachable: ${(err as Error).message} (read-only view)`);
  }
}

void boot();
