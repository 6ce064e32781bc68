// Survival-threshold boundary curves for the infection coefficient,
// mirroring the analysis oracles on the Python side. Natural log
// throughout so the two implementations agree to rounding.

export type TopologyKind = "clique" | "star";
export type Side = "fast" | "slow";

export interface BoundaryRule {
  topology: TopologyKind;
  side: Side;
  scale: number;
}

const RULE_NAMES: Record<string, { topology: TopologyKind; side: Side }> = {
  clique_fast: { topology: "clique", side: "fast" },
  clique_slow: { topology: "clique", side: "slow" },
  star_fast: { topology: "star", side: "fast" },
  star_slow: { topology: "star", side: "slow" },
};

export function boundaryLambda(
  topology: TopologyKind,
  n: number,
  alpha: number,
  side: Side
): number {
  if (!Number.isInteger(n) || n < 2) {
    throw new Error(`threshold formulas need an integer n >= 2, got ${n}`);
  }
  if (!(alpha > -1)) {
    throw new Error(`infection exponent must be > -1, got ${alpha}`);
  }
  if (topology === "clique") {
    if (alpha === 0) return 1 / n;
    if (alpha < 0) {
      if (side === "fast") return 1 / n;
      return Math.log(n) ** -alpha / n;
    }
    if (side === "fast") return n ** (-1 - alpha);
    return n ** (-1 - alpha) * Math.log(n) ** alpha;
  }
  const base = n ** (-0.5 - alpha / (2 * (2 + alpha)));
  if (side === "fast") return base;
  return base * Math.log(n) ** (4 / (2 + alpha));
}

/**
 * Parse a CSV header lambda value: either a literal rate ("0.25",
 * returned as a number) or a named boundary rule with optional scale
 * ("star_fast * 0.1").
 */
export function parseLambdaHeader(text: string): BoundaryRule | number {
  const trimmed = text.trim();
  const parts = trimmed.split("*").map((p) => p.trim());
  const name = parts[0]!;
  const named = RULE_NAMES[name];
  if (named !== undefined) {
    if (parts.length > 2) throw new Error(`malformed lambda rule: ${text}`);
    let scale = 1.0;
    if (parts.length === 2) {
      scale = Number(parts[1]);
      if (!Number.isFinite(scale) || scale <= 0) {
        throw new Error(`lambda rule scale must be a positive number: ${text}`);
      }
    }
    return { ...named, scale };
  }
  const literal = Number(trimmed);
  if (!Number.isFinite(literal) || literal < 0) {
    throw new Error(`lambda header is neither a rate nor a known rule: ${text}`);
  }
  return literal;
}
