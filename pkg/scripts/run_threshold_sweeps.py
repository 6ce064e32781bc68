#!/usr/bin/env python3
"""Regenerate the threshold-sweep CSVs under artifacts/.

These are the same five experiments the acceptance suite runs: clique
sweeps on both sides of the survival boundary for one superlinear and
one sublinear exponent, and star sweeps on both sides for the
superlinear case. Everything is seeded, so reruns are byte-identical.
"""

import argparse
from pathlib import Path

from nlsis import LambdaRule, SweepSpec, run_sweep
from nlsis.estimator import write_sweep_csv

SWEEPS = [
    (
        "clique_superlinear_below.csv",
        SweepSpec("clique", (64, 128, 256, 512), LambdaRule("clique_fast", scale=0.25),
                  1.0, "one", 10_000, 1.0, 10**6, 6001, t_max_rule="n_squared"),
    ),
    (
        "clique_sublinear_below.csv",
        SweepSpec("clique", (64, 128, 256, 512, 1024), LambdaRule("clique_fast", scale=0.25),
                  -0.5, "one", 10_000, 1.0, 10**6, 7001, t_max_rule="n_squared"),
    ),
    (
        "clique_sublinear_above.csv",
        SweepSpec("clique", (64, 128, 256, 512, 1024), LambdaRule("clique_slow", scale=8.0),
                  -0.5, "one", 10_000, 1.0, 30_000, 7002, t_max_rule="n_squared"),
    ),
    (
        "star_below.csv",
        SweepSpec("star", (256, 512, 1024, 2048, 4096), LambdaRule("star_fast", scale=0.1),
                  1.0, "center", 10_000, 1.0, 10**6, 8001, t_max_rule="n_squared"),
    ),
    (
        "star_above.csv",
        SweepSpec("star", (256, 512, 1024, 2048, 4096), LambdaRule("star_slow", scale=10.0),
                  1.0, "center", 10_000, 1.0, 30_000, 8002, t_max_rule="n_squared"),
    ),
]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path,
                        default=Path(__file__).resolve().parent.parent / "artifacts")
    parser.add_argument("--only", help="substring filter on the output file name")
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for name, spec in SWEEPS:
        if args.only and args.only not in name:
            continue
        rows = run_sweep(spec)
        echo = dict(spec.config_mapping())
        echo["output"] = f"artifacts/{name}"
        write_sweep_csv(rows, echo, args.out_dir / name)
        worst = max(row.stats.censored_fraction for row in rows)
        print(f"{name}: {len(rows)} rows, max censored fraction {worst}")


if __name__ == "__main__":
    main()
