import type { JudgingView } from "./judging.js";
import {
  agreementHeatmap,
  criterionSections,
  densityChart,
  describePayloadProblem,
  pdfPlots,
  radarChart,
  radarPolygon,
  rankedRows,
  type BarChart,
  type Heatmap,
  type PdfPlot,
  type RadarChart,
} from "./results.js";
import { HOLISTIC, type ResultsPayload } from "./types.js";

/**
 * HTML string renderers. Values that the page displays are embedded twice:
 * once as display text and once in data-* attributes as String(value), which
 * round-trips float64 exactly and is what the tests read back.
 */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function pane(view: JudgingView, side: "left" | "right"): string {
  const itemId = view[side];
  if (itemId === null) {
    return `<section class="pane" data-side="${side}"></section>`;
  }
  const safeItem = escapeHtml(itemId);
  let buttons: string;
  if (view.mode === "BCJ") {
    buttons = `<button type="button" data-action="choose" data-item="${safeItem}">Choose ${safeItem}</button>`;
  } else {
    buttons = view.criteria
      .map((criterion) => {
        const selected = view.selections[criterion.id] === itemId;
        const safeCriterion = escapeHtml(criterion.id);
        return (
          `<button type="button" data-action="select" data-criterion="${safeCriterion}" ` +
          `data-item="${safeItem}" class="${selected ? "selected" : ""}">` +
          `${escapeHtml(criterion.label || criterion.id)}</button>`
        );
      })
      .join("");
  }
  return (
    `<section class="pane" data-side="${side}" data-item="${safeItem}">` +
    `<h2>${safeItem}</h2>${buttons}</section>`
  );
}

export function renderJudging(view: JudgingView): string {
  if (view.phase === "exhausted") {
    return (
      `<div class="judging" data-phase="exhausted">` +
      `<p>All ${view.maxComparisons} comparisons are in.</p>` +
      `<a data-action="open-results" href="#results">View results</a></div>`
    );
  }
  const progress =
    `<p class="budget" data-used="${view.budgetUsed}" data-remaining="${view.budgetRemaining}">` +
    `Comparison ${view.budgetUsed + 1} of ${view.maxComparisons}</p>`;
  const submit =
    view.mode === "MBCJ"
      ? `<button type="button" data-action="submit"${view.canSubmit ? "" : " disabled"}>Submit</button>`
      : "";
  return (
    `<div class="judging" data-phase="${view.phase}">` +
    progress +
    pane(view, "left") +
    pane(view, "right") +
    submit +
    `</div>`
  );
}

function renderBars(chart: BarChart): string {
  const peak = Math.max(...chart.values, Number.MIN_VALUE);
  const bars = chart.values
    .map((value, index) => {
      const height = Math.round((value / peak) * 100);
      return (
        `<div class="bar" data-rank="${chart.ranks[index]}" data-value="${value}" ` +
        `style="height:${height}%" title="rank ${chart.ranks[index]}: ${value}"></div>`
      );
    })
    .join("");
  return `<figure class="density" data-item="${escapeHtml(chart.itemId)}">${bars}</figure>`;
}

function renderRadar(chart: RadarChart): string {
  const radius = 80;
  const points = radarPolygon(chart, radius)
    .map(([x, y]) => `${(100 + x).toFixed(2)},${(100 + y).toFixed(2)}`)
    .join(" ");
  const axes = chart.criterionIds
    .map(
      (criterionId, index) =>
        `<span class="axis" data-criterion="${escapeHtml(criterionId)}" ` +
        `data-value="${chart.values[index]}">${escapeHtml(chart.axes[index] ?? criterionId)}: ` +
        `${chart.values[index]}</span>`,
    )
    .join("");
  return (
    `<figure class="radar" data-item="${escapeHtml(chart.itemId)}" data-combined="${chart.combined}">` +
    `<svg viewBox="0 0 200 200"><polygon points="${points}"></polygon></svg>` +
    `<div class="axes">${axes}</div>` +
    `<figcaption>${escapeHtml(chart.note)}</figcaption></figure>`
  );
}

function renderHeatmap(heatmap: Heatmap, criterionId: string): string {
  const header = heatmap.items.map((item) => `<th>${escapeHtml(item)}</th>`).join("");
  const body = heatmap.rows
    .map((row, rowIndex) => {
      const cells = row
        .map((cell) => {
          const classes = cell.aboveThreshold ? "cell above-threshold" : "cell";
          const value = cell.value === null ? "" : ` data-value="${cell.value}"`;
          return `<td class="${classes}"${value}>${cell.display}</td>`;
        })
        .join("");
      return `<tr><th>${escapeHtml(heatmap.items[rowIndex] ?? "")}</th>${cells}</tr>`;
    })
    .join("");
  return (
    `<table class="heatmap" data-criterion="${escapeHtml(criterionId)}" data-kind="${heatmap.kind}">` +
    `<thead><tr><th></th>${header}</tr></thead><tbody>${body}</tbody></table>`
  );
}

function renderPdf(plot: PdfPlot): string {
  const width = 200;
  const height = 100;
  const peak = Math.max(...plot.pdf, Number.MIN_VALUE);
  const points = plot.grid
    .map((x, index) => `${(x * width).toFixed(2)},${(height - ((plot.pdf[index] ?? 0) / peak) * height).toFixed(2)}`)
    .join(" ");
  const modeX = (plot.mode * width).toFixed(2);
  const label = `${plot.pair[0]} vs ${plot.pair[1]}`;
  return (
    `<figure class="pair-pdf" data-pair="${escapeHtml(plot.pair.join("|"))}" data-mode="${plot.mode}" ` +
    `data-alpha="${plot.alpha}" data-beta="${plot.beta}">` +
    `<svg viewBox="0 0 ${width} ${height}"><polyline points="${points}"></polyline>` +
    `<line class="mode" x1="${modeX}" y1="0" x2="${modeX}" y2="${height}"></line></svg>` +
    `<figcaption>${escapeHtml(label)} (mode ${plot.mode})</figcaption></figure>`
  );
}

export function renderResults(payload: ResultsPayload): string {
  const problem = describePayloadProblem(payload);
  if (problem !== null) {
    return `<div class="results-error" role="alert">Cannot render results: ${escapeHtml(problem)}</div>`;
  }
  const rows = rankedRows(payload);
  const itemCount = rows.length;
  const list = payload.ranking
    .map((entry) => {
      const radar =
        payload.mode === "MBCJ" && payload.radar
          ? renderRadar(
              radarChart(entry.item_id, payload.radar[entry.item_id]!, payload.criteria, itemCount),
            )
          : "";
      const sections = criterionSections(entry, payload.criteria)
        .map(
          (section) =>
            `<details class="criterion" data-criterion="${escapeHtml(section.criterionId)}"` +
            `${section.collapsed ? "" : " open"}>` +
            `<summary>${escapeHtml(section.label)} (expected rank ` +
            `<span data-expected-rank="${section.expectedRank}">${section.expectedRank}</span>)</summary>` +
            renderBars(section.chart) +
            `</details>`,
        )
        .join("");
      return (
        `<li class="ranked-item" data-item="${escapeHtml(entry.item_id)}" data-rank="${entry.rank}">` +
        `<h2>#${entry.rank} ${escapeHtml(entry.title || entry.item_id)}</h2>` +
        `<p>Expected rank <span class="expected-rank" data-expected-rank="${entry.expected_rank}">` +
        `${entry.expected_rank}</span></p>` +
        renderBars(densityChart(entry)) +
        radar +
        sections +
        `</li>`
      );
    })
    .join("");
  const heatmaps = Object.entries(payload.agreement)
    .map(([criterionId, matrix]) =>
      (["map", "eap"] as const)
        .map((kind) => renderHeatmap(agreementHeatmap(matrix, kind), criterionId))
        .join(""),
    )
    .join("");
  const pdfs = Object.entries(payload.decision_pdfs)
    .map(([criterionId, plots]) => {
      const figures = pdfPlots(plots).map(renderPdf).join("");
      const label = criterionId === HOLISTIC ? "Holistic" : criterionId;
      return `<section class="pdfs" data-criterion="${escapeHtml(criterionId)}"><h3>${escapeHtml(label)}</h3>${figures}</section>`;
    })
    .join("");
  return (
    `<div class="results" data-session="${escapeHtml(payload.session_id)}" data-mode="${payload.mode}">` +
    `<ol class="ranking">${list}</ol>` +
    `<section class="agreement">${heatmaps}</section>` +
    pdfs +
    `</div>`
  );
}
