import { writeFileSync } from "node:fs";
import { basename } from "node:path";
import { parseSweepCsv, type SweepCsv, type SweepRow } from "./csv.js";
import { boundaryLambda, parseLambdaHeader, type BoundaryRule } from "./boundary.js";
import {
  SERIES_COLORS,
  SvgDoc,
  makeScale,
  project,
  tickLabel,
  ticks,
  type Scale,
  type ScaleKind,
} from "./svg.js";

export type FigureKind = "survival_curves" | "censor_heatmap" | "threshold_overlay";

export interface FigureSpec {
  kind: FigureKind;
  /** One sweep CSV per series; the heatmap merges them into one grid. */
  inputs: string[];
  output: string;
  xScale: ScaleKind;
  yScale: ScaleKind;
}

const W = 640;
const H = 440;
const MARGIN = { left: 78, right: 24, top: 42, bottom: 58 };
const PLOT_W = W - MARGIN.left - MARGIN.right;
const PLOT_H = H - MARGIN.top - MARGIN.bottom;

export function render(spec: FigureSpec): void {
  if (spec.inputs.length === 0) throw new Error("at least one input CSV is required");
  if (!spec.output.endsWith(".svg")) {
    throw new Error(`unsupported image format for ${spec.output}: only .svg output is implemented`);
  }
  const csvs = spec.inputs.map(parseSweepCsv);
  let svg: string;
  if (spec.kind === "survival_curves") svg = survivalCurves(csvs, spec);
  else if (spec.kind === "censor_heatmap") svg = censorHeatmap(csvs);
  else if (spec.kind === "threshold_overlay") svg = thresholdOverlay(csvs);
  else throw new Error(`unknown figure kind: ${String(spec.kind)}`);
  writeFileSync(spec.output, svg);
}

// ── shared chart scaffolding ────────────────────────────────────────

function drawFrame(doc: SvgDoc, x: Scale, y: Scale, xLabel: string, yLabel: string, title: string): void {
  doc.text(W / 2, 22, title, "middle", 14, 'font-weight="bold"');
  doc.line(MARGIN.left, MARGIN.top, MARGIN.left, MARGIN.top + PLOT_H, "#222");
  doc.line(MARGIN.left, MARGIN.top + PLOT_H, MARGIN.left + PLOT_W, MARGIN.top + PLOT_H, "#222");
  for (const t of ticks(x)) {
    const px = project(x, t);
    doc.line(px, MARGIN.top + PLOT_H, px, MARGIN.top + PLOT_H + 4, "#222");
    doc.text(px, MARGIN.top + PLOT_H + 17, tickLabel(t), "middle", 10);
  }
  for (const t of ticks(y)) {
    const py = project(y, t);
    doc.line(MARGIN.left - 4, py, MARGIN.left, py, "#222");
    doc.text(MARGIN.left - 7, py + 3.5, tickLabel(t), "end", 10);
    doc.line(MARGIN.left, py, MARGIN.left + PLOT_W, py, "#eee");
  }
  doc.text(MARGIN.left + PLOT_W / 2, H - 14, xLabel, "middle", 12);
  doc.text(16, MARGIN.top - 12, yLabel, "start", 12);
}

function seriesLabel(csv: SweepCsv): string {
  return csv.config.get("lambda") ?? basename(csv.path);
}

function padDomain(lo: number, hi: number, kind: ScaleKind): [number, number] {
  if (lo === hi) {
    // single-valued axis still needs a window to project into
    return kind === "log" ? [lo / 2, hi * 2] : [lo - 1, hi + 1];
  }
  if (kind === "log") return [lo * 0.85, hi * 1.18];
  const pad = (hi - lo) * 0.06;
  return [lo - pad, hi + pad];
}

// ── survival_curves ─────────────────────────────────────────────────

function survivalCurves(csvs: SweepCsv[], spec: FigureSpec): string {
  const series = csvs.map((csv) => ({
    label: seriesLabel(csv),
    points: [...csv.rows]
      .sort((a, b) => a.n - b.n)
      .map((r) => [r.n, r.mean_censored] as [number, number]),
  }));
  const allX = series.flatMap((s) => s.points.map((p) => p[0]));
  const allY = series.flatMap((s) => s.points.map((p) => p[1]));
  if (spec.yScale === "log" && allY.some((v) => v <= 0)) {
    throw new Error("log y-scale cannot show a zero mean; pass a linear y-scale");
  }
  const x = makeScale(spec.xScale, padDomain(Math.min(...allX), Math.max(...allX), spec.xScale), [
    MARGIN.left,
    MARGIN.left + PLOT_W,
  ]);
  const y = makeScale(spec.yScale, padDomain(Math.min(...allY), Math.max(...allY), spec.yScale), [
    MARGIN.top + PLOT_H,
    MARGIN.top,
  ]);
  const doc = new SvgDoc(W, H);
  drawFrame(doc, x, y, "n", "mean survival time", "Survival time vs system size");
  series.forEach((s, idx) => {
    const color = SERIES_COLORS[idx % SERIES_COLORS.length]!;
    const pts = s.points.map(([px, py]) => [project(x, px), project(y, py)] as [number, number]);
    if (pts.length > 1) doc.polyline(pts, color);
    for (const [px, py] of pts) doc.circle(px, py, 3, color);
    doc.line(MARGIN.left + 12, MARGIN.top + 14 + 16 * idx, MARGIN.left + 34, MARGIN.top + 14 + 16 * idx, color, 2);
    doc.text(MARGIN.left + 40, MARGIN.top + 18 + 16 * idx, s.label, "start", 10);
  });
  return doc.render();
}

// ── censor_heatmap ──────────────────────────────────────────────────

export interface HeatmapGrid {
  /** Sorted ascending; one heatmap row per n. */
  ns: number[];
  /** Sorted ascending; one heatmap column per lambda. */
  lambdas: number[];
  /** cells[nIndex][lambdaIndex], null where the sweep has no data. */
  cells: (number | null)[][];
}

export function buildHeatmapGrid(rows: SweepRow[]): HeatmapGrid {
  const ns = [...new Set(rows.map((r) => r.n))].sort((a, b) => a - b);
  const lambdas = [...new Set(rows.map((r) => r.lambda))].sort((a, b) => a - b);
  const cells: (number | null)[][] = ns.map(() => lambdas.map(() => null));
  for (const row of rows) {
    const ni = ns.indexOf(row.n);
    const li = lambdas.indexOf(row.lambda);
    const existing = cells[ni]![li];
    if (existing !== null && existing !== row.censored_fraction) {
      throw new Error(
        `conflicting censored_fraction at n=${row.n} lambda=${row.lambda}: ${existing} vs ${row.censored_fraction}`
      );
    }
    cells[ni]![li] = row.censored_fraction;
  }
  return { ns, lambdas, cells };
}

function rampColor(v: number): string {
  // white at 0 to deep red at 1
  const t = Math.min(1, Math.max(0, v));
  const r = Math.round(255 - 135 * t);
  const g = Math.round(255 - 215 * t);
  const b = Math.round(255 - 220 * t);
  return `rgb(${r},${g},${b})`;
}

function censorHeatmap(csvs: SweepCsv[]): string {
  const grid = buildHeatmapGrid(csvs.flatMap((c) => c.rows));
  const doc = new SvgDoc(W, H);
  doc.text(W / 2, 22, "Censored fraction over (n, lambda)", "middle", 14, 'font-weight="bold"');
  const cellW = PLOT_W / grid.lambdas.length;
  const cellH = PLOT_H / grid.ns.length;
  grid.ns.forEach((n, ni) => {
    const yTop = MARGIN.top + PLOT_H - (ni + 1) * cellH; // larger n higher up
    grid.lambdas.forEach((lam, li) => {
      const v = grid.cells[ni]![li];
      if (v == null) return;
      doc.rect(
        MARGIN.left + li * cellW,
        yTop,
        cellW,
        cellH,
        rampColor(v),
        `stroke="#ccc" stroke-width="0.5" data-row="${ni}" data-col="${li}" data-value="${v}"`
      );
    });
    doc.text(MARGIN.left - 7, yTop + cellH / 2 + 3.5, tickLabel(n), "end", 10);
  });
  grid.lambdas.forEach((lam, li) => {
    doc.text(
      MARGIN.left + (li + 0.5) * cellW,
      MARGIN.top + PLOT_H + 16,
      tickLabel(lam),
      "middle",
      9
    );
  });
  doc.text(MARGIN.left + PLOT_W / 2, H - 14, "lambda", "middle", 12);
  doc.text(16, MARGIN.top - 12, "n", "start", 12);
  // color key
  for (let k = 0; k <= 4; k++) {
    const v = k / 4;
    doc.rect(W - 160 + 26 * k, 28, 24, 10, rampColor(v), 'stroke="#ccc" stroke-width="0.5"');
    doc.text(W - 160 + 26 * k + 12, 50, v.toFixed(2), "middle", 8);
  }
  return doc.render();
}

// ── threshold_overlay ───────────────────────────────────────────────

function boundaryRuleOf(csv: SweepCsv): BoundaryRule {
  const header = csv.config.get("lambda");
  if (header === undefined) {
    throw new Error(`${csv.path}: config header has no lambda entry`);
  }
  const rule = parseLambdaHeader(header);
  if (typeof rule === "number") {
    throw new Error(
      `${csv.path}: threshold overlay needs a named boundary rule in the lambda header, got a literal rate`
    );
  }
  const topology = csv.config.get("topology");
  if (topology !== undefined && topology !== rule.topology) {
    throw new Error(`${csv.path}: lambda rule is for ${rule.topology} but topology is ${topology}`);
  }
  return rule;
}

function logSpacedInts(lo: number, hi: number, count: number): number[] {
  const out: number[] = [];
  for (let k = 0; k < count; k++) {
    const v = Math.round(Math.exp(Math.log(lo) + ((Math.log(hi) - Math.log(lo)) * k) / (count - 1)));
    if (out.length === 0 || v > out[out.length - 1]!) out.push(v);
  }
  return out;
}

function thresholdOverlay(csvs: SweepCsv[]): string {
  const entries = csvs.map((csv) => {
    const rule = boundaryRuleOf(csv);
    const alpha = csv.rows[0]!.alpha;
    const points = [...csv.rows]
      .sort((a, b) => a.n - b.n)
      .map((r) => [r.n, r.lambda] as [number, number]);
    const nLo = points[0]![0];
    const nHi = points[points.length - 1]![0];
    const curve = logSpacedInts(nLo, nHi, 64).map(
      (n) => [n, boundaryLambda(rule.topology, n, alpha, rule.side)] as [number, number]
    );
    return { rule, label: seriesLabel(csv), points, curve };
  });
  const allX = entries.flatMap((e) => e.points.map((p) => p[0]));
  const allY = entries.flatMap((e) => [...e.points, ...e.curve].map((p) => p[1]));
  const x = makeScale("log", padDomain(Math.min(...allX), Math.max(...allX), "log"), [
    MARGIN.left,
    MARGIN.left + PLOT_W,
  ]);
  const y = makeScale("log", padDomain(Math.min(...allY), Math.max(...allY), "log"), [
    MARGIN.top + PLOT_H,
    MARGIN.top,
  ]);
  const doc = new SvgDoc(W, H);
  drawFrame(doc, x, y, "n", "lambda", "Sweep rates against threshold boundaries");
  entries.forEach((e, idx) => {
    const color = SERIES_COLORS[idx % SERIES_COLORS.length]!;
    doc.polyline(
      e.curve.map(([px, py]) => [project(x, px), project(y, py)] as [number, number]),
      color,
      1.2,
      "5,4"
    );
    const pts = e.points.map(([px, py]) => [project(x, px), project(y, py)] as [number, number]);
    if (pts.length > 1) doc.polyline(pts, color);
    for (const [px, py] of pts) doc.circle(px, py, 3, color);
    const ly = MARGIN.top + 14 + 30 * idx;
    doc.line(MARGIN.left + 12, ly, MARGIN.left + 34, ly, color, 2);
    doc.text(MARGIN.left + 40, ly + 4, `sweep ${e.label}`, "start", 10);
    doc.line(MARGIN.left + 12, ly + 14, MARGIN.left + 34, ly + 14, color, 1.2, "5,4");
    doc.text(MARGIN.left + 40, ly + 18, `${e.rule.topology}_${e.rule.side} boundary`, "start", 10);
  });
  return doc.render();
}
