import { readFileSync } from "node:fs";

// Fixed sweep schema; column order matters and extras are rejected so a
// schema drift upstream cannot be papered over silently.
export const SWEEP_COLUMNS = [
  "topology",
  "n",
  "lambda",
  "alpha",
  "init",
  "runs",
  "t_max",
  "max_jumps",
  "master_seed",
  "mean_censored",
  "median",
  "q10",
  "q90",
  "censored_fraction",
  "ci_halfwidth",
] as const;

const STRING_COLUMNS = new Set(["topology", "init"]);

export interface SweepRow {
  topology: string;
  n: number;
  lambda: number;
  alpha: number;
  init: string;
  runs: number;
  t_max: number;
  max_jumps: number;
  master_seed: number;
  mean_censored: number;
  median: number;
  q10: number;
  q90: number;
  censored_fraction: number;
  ci_halfwidth: number;
}

export interface SweepCsv {
  path: string;
  /** `# key = value` header lines, in file order. */
  config: Map<string, string>;
  rows: SweepRow[];
}

export function parseSweepCsv(path: string): SweepCsv {
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n").filter((line) => line.length > 0);
  const config = new Map<string, string>();
  let i = 0;
  for (; i < lines.length; i++) {
    const line = lines[i]!;
    if (!line.startsWith("# ")) break;
    const sep = line.indexOf(" = ");
    if (sep < 0) throw new Error(`${path}: malformed config line ${i + 1}: ${line}`);
    config.set(line.slice(2, sep), line.slice(sep + 3));
  }
  const header = lines[i];
  if (header === undefined) throw new Error(`${path}: no column header line`);
  const got = header.split(",");
  const want: readonly string[] = SWEEP_COLUMNS;
  if (got.length !== want.length || got.some((c, k) => c !== want[k])) {
    const missing = want.filter((c) => !got.includes(c));
    const extra = got.filter((c) => !want.includes(c));
    throw new Error(
      `${path}: column mismatch (missing: ${missing.join(",") || "none"}; ` +
        `unexpected: ${extra.join(",") || "none"})`
    );
  }
  const rows: SweepRow[] = [];
  for (i += 1; i < lines.length; i++) {
    const fields = lines[i]!.split(",");
    if (fields.length !== want.length) {
      throw new Error(`${path}: row ${i + 1} has ${fields.length} fields, expected ${want.length}`);
    }
    const row: Record<string, string | number> = {};
    for (let k = 0; k < want.length; k++) {
      const name = want[k]!;
      const raw = fields[k]!;
      if (STRING_COLUMNS.has(name)) {
        row[name] = raw;
      } else {
        const value = Number(raw);
        if (!Number.isFinite(value)) {
          throw new Error(`${path}: row ${i + 1}: column ${name} is not a number: ${raw}`);
        }
        row[name] = value;
      }
    }
    rows.push(row as unknown as SweepRow);
  }
  if (rows.length === 0) throw new Error(`${path}: no data rows`);
  return { path, config, rows };
}
