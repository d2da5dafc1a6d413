/** Pure HTML builders for the side panels. They return markup strings built
 * verbatim from API payloads (escaped), so tests can assert the rendered
 * tables match the server's ranking exactly. */

import type { BreakoutItem, SearchResponse } from "./types.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function breakoutListHtml(
  breakouts: BreakoutItem[],
  selectedDate: string | null,
): string {
  if (breakouts.length === 0) {
    return '<p class="empty">No breakouts in range.</p>';
  }
  const items = breakouts
    .map((b) => {
      const selected = b.date === selectedDate ? ' class="selected"' : "";
      const arrow = b.direction === "below_lower" ? "&#9660;" : "&#9650;";
      return (
        `<li${selected}><button type="button" data-breakout="${b.date}">` +
        `${arrow} ${b.date} <span class="gap">gap ${b.gap.toFixed(3)}</span>` +
        `</button></li>`
      );
    })
    .join("");
  return `<ul class="breakout-list">${items}</ul>`;
}

/** Word table for one breakout, in the server's order — the ranking is the
 * server's job, the dashboard only displays it. */
export function breakoutDetailHtml(breakout: BreakoutItem): string {
  const rows = breakout.top_words
    .map(
      ([word, frequency]) =>
        `<tr><td>${escapeHtml(word)}</td><td>${frequency}</td></tr>`,
    )
    .join("");
  return (
    `<h3>${breakout.date} (${escapeHtml(breakout.direction)})</h3>` +
    `<p>z ${breakout.z.toFixed(4)}, band ${breakout.band.toFixed(4)}, ` +
    `gap ${breakout.gap.toFixed(4)}</p>` +
    `<table class="words"><thead><tr><th>word</th><th>frequency</th></tr>` +
    `</thead><tbody>${rows}</tbody></table>`
  );
}

export function searchResultsHtml(response: SearchResponse): string {
  if (response.total === 0) {
    return '<p class="empty">No tweets match.</p>';
  }
  const rows = response.items
    .map((item) => {
      const score =
        item.p_positive === null
          ? "unscored"
          : `p+ ${item.p_positive.toFixed(3)}`;
      return (
        `<li><time>${escapeHtml(item.created_at)}</time> ` +
        `<span class="score">${score}</span>` +
        `<p>${escapeHtml(item.text)}</p></li>`
      );
    })
    .join("");
  return `<ol class="search-results">${rows}</ol>`;
}

export function searchPagerText(
  response: SearchResponse,
  cursor: number,
): string {
  const first = response.total === 0 ? 0 : cursor + 1;
  const last = cursor + response.items.length;
  return `${first}–${last} of ${response.total}`;
}
