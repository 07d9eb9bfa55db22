/** Pure renderers: every fragment of result HTML is a function of the last
 * service response and nothing else. */

import type {
  CompareResponse,
  RequirementValue,
  SelectionReport,
  WinnerDetail,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function formatValue(value: RequirementValue): string {
  if (typeof value === "number") return formatNumber(value);
  if (typeof value === "string") return value;
  return `${formatNumber(value.lo)}..${formatNumber(value.hi)}`;
}

export function formatNumber(x: number): string {
  if (x === 0) return "0";
  const magnitude = Math.abs(x);
  if (magnitude >= 1e6 || magnitude < 1e-4) return x.toExponential(4);
  return String(Number(x.toPrecision(6)));
}

export function classBadge(materialClass: string): string {
  const slug = materialClass.toLowerCase();
  return `<span class="badge badge-${escapeHtml(slug)}" data-role="class-badge">${escapeHtml(materialClass)}</span>`;
}

function winnerByMaterialId(response: CompareResponse): Map<string, WinnerDetail> {
  return new Map(response.winners.map((w) => [w.material_id, w]));
}

/** Per-metric comparison table: metric, degree of similarity, winner and the
 * winner's projected property values. */
export function comparisonTable(response: CompareResponse): string {
  const winners = winnerByMaterialId(response);
  const attributes = response.requirement.map((entry) => entry.property);
  const header =
    "<tr><th>metric</th><th>degree of similarity</th><th>winner</th>" +
    attributes.map((name) => `<th>${escapeHtml(name)}</th>`).join("") +
    "</tr>";
  const rows = response.reports.map((report) => metricRow(report, winners, attributes));
  return `<table class="comparison" data-role="comparison-table"><thead>${header}</thead><tbody>${rows.join("")}</tbody></table>`;
}

function metricRow(
  report: SelectionReport,
  winners: Map<string, WinnerDetail>,
  attributes: string[],
): string {
  const winner = winners.get(report.winner_id);
  const valueCells = attributes
    .map((name) => {
      const value = winner?.values[name];
      return `<td>${value === undefined ? "" : escapeHtml(formatValue(value))}</td>`;
    })
    .join("");
  const winnerLabel = winner
    ? `${winner.material_id} (${winner.material_name})`
    : report.winner_id;
  return (
    `<tr data-metric="${escapeHtml(report.metric)}">` +
    `<td>${escapeHtml(report.metric)}</td>` +
    `<td class="degree">${formatNumber(report.degree_of_similarity)}</td>` +
    `<td class="winner">${escapeHtml(winnerLabel)}</td>` +
    valueCells +
    "</tr>"
  );
}

/** Horizontal bar chart of per-metric degrees (linear scale vs the max). */
export function degreeChart(reports: SelectionReport[]): string {
  const width = 560;
  const barHeight = 22;
  const gap = 6;
  const labelWidth = 90;
  const max = Math.max(...reports.map((r) => r.degree_of_similarity), 0);
  const bars = reports.map((report, index) => {
    const y = index * (barHeight + gap);
    const span = max > 0 ? (report.degree_of_similarity / max) * (width - labelWidth - 120) : 0;
    const barSpan = Math.max(span, 1);
    return (
      `<g transform="translate(0, ${y})">` +
      `<text x="${labelWidth - 6}" y="${barHeight - 7}" text-anchor="end" class="chart-label">${escapeHtml(report.metric)}</text>` +
      `<rect x="${labelWidth}" y="2" width="${barSpan.toFixed(1)}" height="${barHeight - 6}" class="chart-bar"></rect>` +
      `<text x="${labelWidth + barSpan + 6}" y="${barHeight - 7}" class="chart-value">${formatNumber(report.degree_of_similarity)}</text>` +
      "</g>"
    );
  });
  const height = reports.length * (barHeight + gap);
  return `<svg data-role="degree-chart" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" role="img">${bars.join("")}</svg>`;
}

export function resultsView(response: CompareResponse): string {
  const pattern = response.index_pattern.join(", ");
  return (
    `<div class="results-header">${classBadge(response.material_class)}` +
    `<span class="meta">mode: ${escapeHtml(response.mode)}${response.normalized ? ", normalized" : ""}` +
    ` &middot; rules fired: ${escapeHtml(pattern)}</span></div>` +
    comparisonTable(response) +
    degreeChart(response.reports)
  );
}

export function errorView(detail: string): string {
  return `<div class="error-panel" data-role="error">${escapeHtml(detail)}</div>`;
}

export function retryBanner(message: string): string {
  return `<div class="retry-banner" data-role="retry">${escapeHtml(message)} <button data-role="retry-button">retry</button></div>`;
}
