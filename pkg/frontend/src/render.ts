// Pure HTML-string renderers. The console adds no ranking logic of its
// own: cards are emitted strictly in payload order, evidence quote first,
// paper metadata beneath it.

import type { SessionState } from "./state";
import type { EvidenceDetail, RecommendPayload, ResultEntry } from "./types";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function routeBadge(route: string): string {
  const label = route === "lexical_fallback" ? "lexical (fallback)" : route;
  return `<span class="badge route-badge route-${escapeHtml(route)}">${escapeHtml(label)}</span>`;
}

function scoreLine(entry: ResultEntry): string {
  const parts = Object.entries(entry.scores)
    .map(([name, value]) => `${escapeHtml(name)} ${value.toFixed(4)}`)
    .join(" · ");
  return `<div class="scores">${parts}</div>`;
}

export function renderResultCard(entry: ResultEntry, showScores: boolean): string {
  const paper = entry.paper;
  const year = paper.year > 0 ? String(paper.year) : "year unknown";
  const venue = paper.venue ? ` · ${escapeHtml(paper.venue)}` : "";
  const authors = paper.authors.length ? `<div class="authors">${escapeHtml(paper.authors.join(", "))}</div>` : "";
  return [
    `<article class="result-card" data-rank="${entry.rank}" data-span-id="${entry.span_id}" data-paper-id="${escapeHtml(paper.id)}">`,
    `<blockquote class="evidence">&ldquo;${escapeHtml(entry.evidence)}&rdquo;</blockquote>`,
    `<div class="paper">`,
    `<span class="rank">#${entry.rank}</span> `,
    `<span class="title">${escapeHtml(paper.title || paper.id)}</span>`,
    `<span class="meta"> (${year}${venue})</span>`,
    authors,
    `</div>`,
    `<div class="badges">`,
    `<span class="badge">best evidence rank ${entry.p_r}</span>`,
    `<span class="badge">support ${entry.p_s}</span>`,
    `</div>`,
    showScores ? scoreLine(entry) : "",
    `</article>`,
  ].join("");
}

export function renderResults(payload: RecommendPayload, state: SessionState): string {
  const header = [
    `<div class="results-header">`,
    `<span class="count">${payload.results.length} recommendations for ` +
      `<strong>${escapeHtml(payload.query)}</strong></span>`,
    state.options.showRouteBadge ? routeBadge(payload.route) : "",
    `</div>`,
  ].join("");
  if (payload.results.length === 0) {
    return `${header}<p class="empty">No evidence in the database matches this query.</p>`;
  }
  const cards = payload.results
    .map((entry) => renderResultCard(entry, state.options.showScores))
    .join("\n");
  return `${header}<section class="results">${cards}</section>`;
}

export function renderErrorBanner(message: string): string {
  return `<div class="error-banner" role="alert">${escapeHtml(message)}</div>`;
}

export function renderHistory(history: readonly string[]): string {
  if (history.length === 0) return `<p class="history-empty">No queries yet.</p>`;
  const items = history
    .map((q) => `<li><button class="history-item" data-query="${escapeHtml(q)}">${escapeHtml(q)}</button></li>`)
    .join("");
  return `<ol class="history">${items}</ol>`;
}

export function renderEvidenceDetail(detail: EvidenceDetail): string {
  const citations = detail.citations
    .map((c) => {
      const title = c.paper.title || c.paper.paper_id;
      const year = c.paper.year ? ` (${c.paper.year})` : "";
      return (
        `<li>${escapeHtml(title)}${year} ` +
        `<span class="badge support-badge">${c.support}</span></li>`
      );
    })
    .join("");
  const provenance = detail.provenance
    .map((p) => `${escapeHtml(p.paper_id)}#${p.sentence_index}`)
    .join(", ");
  return [
    `<div class="evidence-detail" data-span-id="${detail.span_id}">`,
    `<blockquote class="evidence">&ldquo;${escapeHtml(detail.span_text)}&rdquo;</blockquote>`,
    `<h3>Cited papers</h3>`,
    `<ul class="citations">${citations}</ul>`,
    provenance ? `<p class="provenance">Seen in: ${provenance}</p>` : "",
    `<button class="close-evidence">Close</button>`,
    `</div>`,
  ].join("");
}

export function renderApp(state: SessionState): string {
  const parts = [];
  if (state.error) parts.push(renderErrorBanner(state.error));
  if (state.evidence) parts.push(renderEvidenceDetail(state.evidence));
  if (state.results) parts.push(renderResults(state.results, state));
  parts.push(renderHistory(state.history));
  return parts.join("\n");
}
