// Small hand-rolled SVG scene builder: enough for line charts and cell
// grids, nothing more. Deterministic output (element order = call
// order, numbers fixed to 2 decimals).

export type ScaleKind = "linear" | "log";

export interface Scale {
  kind: ScaleKind;
  domain: [number, number];
  range: [number, number];
}

export function makeScale(kind: ScaleKind, domain: [number, number], range: [number, number]): Scale {
  const [lo, hi] = domain;
  if (!(hi > lo)) throw new Error(`degenerate scale domain [${lo}, ${hi}]`);
  if (kind === "log" && lo <= 0) {
    throw new Error(`log scale needs a positive domain, got [${lo}, ${hi}]`);
  }
  return { kind, domain, range };
}

export function project(s: Scale, v: number): number {
  const [d0, d1] = s.domain;
  const [r0, r1] = s.range;
  const t =
    s.kind === "log"
      ? (Math.log(v) - Math.log(d0)) / (Math.log(d1) - Math.log(d0))
      : (v - d0) / (d1 - d0);
  return r0 + t * (r1 - r0);
}

/** Tick positions: powers of ten inside a log domain, else 5 even steps. */
export function ticks(s: Scale): number[] {
  const [lo, hi] = s.domain;
  if (s.kind === "log") {
    const out: number[] = [];
    for (let e = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, e) <= hi * (1 + 1e-9); e++) {
      const v = Math.pow(10, e);
      if (v >= lo * (1 - 1e-9)) out.push(v);
    }
    return out.length >= 2 ? out : [lo, hi];
  }
  const out: number[] = [];
  for (let k = 0; k <= 4; k++) out.push(lo + ((hi - lo) * k) / 4);
  return out;
}

export function tickLabel(v: number): string {
  if (v === 0) return "0";
  const e = Math.log10(Math.abs(v));
  if (e >= 5 || e < -3) return v.toExponential(0).replace("+", "");
  return Number(v.toPrecision(3)).toString();
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

const fmt = (v: number) => (Math.round(v * 100) / 100).toString();

export class SvgDoc {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number
  ) {}

  rect(x: number, y: number, w: number, h: number, fill: string, attrs = ""): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"${attrs ? " " + attrs : ""}/>`
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, strokeWidth = 1, dash = ""): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${strokeWidth}"${d}/>`
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, strokeWidth = 1.5, dash = ""): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${strokeWidth}"${d}/>`
    );
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"/>`);
  }

  text(x: number, y: number, content: string, anchor = "start", size = 11, extra = ""): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-size="${size}" font-family="sans-serif"${extra ? " " + extra : ""}>${esc(content)}</text>`
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">\n<rect width="${this.width}" height="${this.height}" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

export const SERIES_COLORS = ["#1f6f8b", "#c05746", "#4c9a52", "#8d6a9f", "#b08a3e", "#5a5a5a"];
