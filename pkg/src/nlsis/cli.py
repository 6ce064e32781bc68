"""Command-line front end.

Subcommands: simulate (one run), sweep (config-driven grid to CSV),
oracle (closed-form and exact values), couple-test (domination check).
Exit codes: 0 success, 1 runtime or correctness failure, 2 usage or
validation failure.

Every command is deterministic given its full flag/config set. The seed
resolution order for flag-driven commands is: --seed flag, then the
NLSIS_SEED environment variable, then 0. Config-driven sweeps take the
seed from the config file only.
"""

from __future__ import annotations

import argparse
import os
import sys

from .analysis import (
    GamblersRuinSpec,
    drop_probability_bound,
    drop_probability_exact,
    equilibrium_infected,
    expected_survival_exact_small,
    gamblers_ruin_absorption,
    max_exponential_expectation,
    reach_equilibrium_prob_bounds,
    star_potential,
    threshold_lambda,
)
from .dynamics import (
    CliqueChain,
    ProcessParams,
    SimLimits,
    StarChain,
    coupled_simulate_clique,
    simulate,
    simulate_clique_lumped,
    simulate_star_lumped,
)
from .estimator import (
    LambdaRule,
    SweepSpec,
    derived_seed,
    parse_lambda_rule,
    resolve_init,
    run_sweep,
    write_sweep_csv,
)
from .topology import ValidationError, load_edge_list

SEED_ENV_VAR = "NLSIS_SEED"


def _resolve_seed(flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(SEED_ENV_VAR)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValidationError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None


def _parse_count_init(rule: str, limit: int) -> list[int]:
    if rule == "one":
        k = 1
    elif rule.startswith("count:"):
        try:
            k = int(rule.split(":", 1)[1])
        except ValueError:
            raise ValidationError(f"count init needs an integer, got {rule!r}") from None
    elif rule == "center":
        raise ValidationError("init 'center' needs a star topology")
    else:
        raise ValidationError(f"unknown init rule {rule!r}")
    if not (0 <= k <= limit):
        raise ValidationError(f"init count {k} out of range 0..{limit}")
    return list(range(k))


def cmd_simulate(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.max_jumps < 1:
        raise ValidationError(f"max_jumps must be >= 1, got {args.max_jumps}")
    limits = SimLimits(args.t_max, args.max_jumps)
    params = ProcessParams(args.lam, args.alpha)
    trace_rows: list[str] = []
    star_trace = False

    def observer(rec):
        if star_trace:
            trace_rows.append(
                f"{rec.jump_index},{rec.time!r},{rec.event_kind},"
                f"{rec.infected_count},{int(bool(rec.center_infected))}"
            )
        else:
            trace_rows.append(
                f"{rec.jump_index},{rec.time!r},{rec.event_kind},{rec.infected_count}"
            )

    obs = observer if args.trace else None
    if args.topology == "clique":
        if args.n is None:
            raise ValidationError("clique topology needs --n")
        init = resolve_init("clique", args.init)
        outcome = simulate_clique_lumped(args.n, params, init, seed, limits, obs)
    elif args.topology == "star":
        if args.n is None:
            raise ValidationError("star topology needs --n")
        star_trace = True
        init = resolve_init("star", args.init)
        outcome = simulate_star_lumped(args.n, params, init, seed, limits, obs)
    elif args.topology.startswith("edgelist:"):
        if args.n is not None:
            raise ValidationError("--n is derived from the edge list; do not pass it")
        graph = load_edge_list(args.topology.split(":", 1)[1])
        init = _parse_count_init(args.init, len(graph.adjacency))
        outcome = simulate(graph, params, init, seed, limits, obs)
    else:
        raise ValidationError(
            f"topology must be clique, star, or edgelist:<path>, got {args.topology!r}"
        )
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="\n") as fh:
            for row in trace_rows:
                fh.write(row + "\n")
    print(
        f"time={outcome.time!r} jumps={outcome.jumps} peak_infected={outcome.peak_infected}"
        f" censor_reason={outcome.censor_reason} seed={outcome.seed}"
    )
    return 0


_REQUIRED_SWEEP_KEYS = (
    "topology", "n", "lambda", "alpha", "init", "runs", "t_max", "max_jumps", "seed", "output",
)
_OPTIONAL_SWEEP_KEYS = ("confidence",)


def parse_config(text: str) -> dict[str, str]:
    """Flat `key = value` lines; '#' starts a comment; keys beginning
    with 'resolved_' are informational echoes and are dropped."""
    cfg: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ValidationError(f"config line {lineno}: empty key")
        if key.startswith("resolved_"):
            continue
        if key in cfg:
            raise ValidationError(f"config line {lineno}: duplicate key {key!r}")
        cfg[key] = value
    return cfg


def _config_int(cfg: dict[str, str], key: str) -> int:
    try:
        return int(cfg[key])
    except ValueError:
        raise ValidationError(f"config key {key!r} must be an integer, got {cfg[key]!r}") from None


def _config_float(cfg: dict[str, str], key: str) -> float:
    try:
        return float(cfg[key])
    except ValueError:
        raise ValidationError(f"config key {key!r} must be a number, got {cfg[key]!r}") from None


def build_sweep_spec(cfg: dict[str, str]) -> tuple[SweepSpec, str]:
    for key in _REQUIRED_SWEEP_KEYS:
        if key not in cfg:
            raise ValidationError(f"missing required key: {key}")
    for key in cfg:
        if key not in _REQUIRED_SWEEP_KEYS and key not in _OPTIONAL_SWEEP_KEYS:
            raise ValidationError(f"unknown config key: {key}")
    try:
        ns = tuple(int(tok.strip()) for tok in cfg["n"].split(","))
    except ValueError:
        raise ValidationError(f"config key 'n' must be comma-separated integers, got {cfg['n']!r}") from None
    t_max_text = cfg["t_max"]
    if t_max_text == "n_squared":
        t_max_rule = "n_squared"
        t_max = 1.0
    else:
        t_max_rule = "literal"
        t_max = _config_float(cfg, "t_max")
    spec = SweepSpec(
        topology_kind=cfg["topology"],
        ns=ns,
        lambda_rule=parse_lambda_rule(cfg["lambda"]),
        alpha=_config_float(cfg, "alpha"),
        init_rule=cfg["init"],
        runs=_config_int(cfg, "runs"),
        t_max=t_max,
        max_jumps=_config_int(cfg, "max_jumps"),
        master_seed=_config_int(cfg, "seed"),
        confidence=float(cfg.get("confidence", "0.95")),
        t_max_rule=t_max_rule,
    )
    return spec, cfg["output"]


def cmd_sweep(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        cfg = parse_config(fh.read())
    spec, output = build_sweep_spec(cfg)
    rows = run_sweep(spec)
    echo = spec.config_mapping()
    echo["output"] = output
    write_sweep_csv(rows, echo, output)
    print(f"rows={len(rows)} output={output}")
    return 0


def _require(args, names: tuple[str, ...], quantity: str) -> None:
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise ValidationError(f"oracle {quantity} needs {flags}")


def cmd_oracle(args) -> int:
    q = args.quantity
    if q == "beta":
        _require(args, ("n", "lam", "alpha"), q)
        print(f"beta={star_potential(args.n, args.lam, args.alpha)!r}")
    elif q == "equilibrium":
        _require(args, ("n", "lam", "alpha"), q)
        print(f"equilibrium_infected={equilibrium_infected(args.n, args.lam, args.alpha)!r}")
    elif q == "ruin":
        _require(args, ("p", "l", "u", "p0"), q)
        lo, hi = gamblers_ruin_absorption(GamblersRuinSpec(args.p, args.l, args.u, args.p0))
        print(f"prob_hit_lower={lo!r}")
        print(f"prob_hit_upper={hi!r}")
    elif q == "drop-exact":
        _require(args, ("x", "y", "lam", "alpha"), q)
        print(f"drop_probability={drop_probability_exact(args.x, args.y, args.lam, args.alpha)!r}")
    elif q == "drop-bound":
        _require(args, ("x", "y", "lam", "alpha"), q)
        print(f"drop_bound={drop_probability_bound(args.x, args.y, args.lam, args.alpha)!r}")
    elif q == "reach-bounds":
        _require(args, ("n", "lam", "alpha"), q)
        lo, hi = reach_equilibrium_prob_bounds(args.n, args.lam, args.alpha)
        print(f"lower={lo!r}")
        print(f"upper={hi!r}")
    elif q == "survival":
        _require(args, ("chain", "n", "lam", "alpha"), q)
        params = ProcessParams(args.lam, args.alpha)
        init = resolve_init(args.chain, args.init)
        chain = CliqueChain(args.n) if args.chain == "clique" else StarChain(args.n)
        print(f"expected_survival={expected_survival_exact_small(chain, params, init)!r}")
    elif q == "max-exp":
        _require(args, ("n", "lam"), q)
        print(f"max_exponential_expectation={max_exponential_expectation(args.n, args.lam)!r}")
    elif q == "threshold":
        _require(args, ("kind", "n", "alpha", "side"), q)
        print(f"threshold_lambda={threshold_lambda(args.kind, args.n, args.alpha, args.side)!r}")
    else:  # argparse choices make this unreachable
        raise ValidationError(f"unknown oracle quantity {q!r}")
    return 0


def cmd_couple_test(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.runs < 1:
        raise ValidationError(f"runs must be >= 1, got {args.runs}")
    limits = SimLimits(args.t_max, args.max_jumps)
    params_lo = ProcessParams(args.lambda_lo, args.alpha)
    params_hi = ProcessParams(args.lambda_hi, args.alpha)
    state_violations = 0
    order_violations = 0
    for r in range(args.runs):
        out = coupled_simulate_clique(
            args.n, params_lo, params_hi, args.i0, args.i0,
            derived_seed(seed, (), r), limits,
        )
        state_violations += out.violations
        lo, hi = out.outcome_lo, out.outcome_hi
        if not lo.censored and not hi.censored and lo.time > hi.time:
            order_violations += 1
        if lo.censored and not hi.censored:
            # The dominated chain outlived the dominating one.
            order_violations += 1
    total = state_violations + order_violations
    print(f"violations={total} state_violations={state_violations}"
          f" survival_order_violations={order_violations} runs={args.runs}")
    return 0 if total == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlsis",
        description="Simulation and analysis of the contact process with"
        " non-linear infection rates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one simulation and print the outcome")
    sim.add_argument("--topology", required=True,
                     help="clique | star | edgelist:<path>")
    sim.add_argument("--n", type=int, default=None,
                     help="clique size / star leaf count")
    sim.add_argument("--lambda", dest="lam", type=float, required=True,
                     help="infection coefficient")
    sim.add_argument("--alpha", type=float, required=True, help="infection exponent")
    sim.add_argument("--init", default="one", help="one | center | count:<k>")
    sim.add_argument("--seed", type=int, default=None,
                     help=f"RNG seed (default: ${SEED_ENV_VAR} or 0)")
    sim.add_argument("--t-max", type=float, default=1000.0, help="time censor")
    sim.add_argument("--max-jumps", type=int, default=1_000_000, help="jump censor")
    sim.add_argument("--trace", default=None, help="write per-jump trace to this path")
    sim.set_defaults(func=cmd_simulate)

    swp = sub.add_parser("sweep", help="run a config-driven grid and write CSV")
    swp.add_argument("--config", required=True, help="key = value config file")
    swp.set_defaults(func=cmd_sweep)

    orc = sub.add_parser("oracle", help="print closed-form and exact values")
    orc.add_argument("quantity", choices=(
        "beta", "equilibrium", "ruin", "drop-exact", "drop-bound",
        "reach-bounds", "survival", "max-exp", "threshold",
    ))
    orc.add_argument("--n", type=int, default=None)
    orc.add_argument("--lambda", dest="lam", type=float, default=None)
    orc.add_argument("--alpha", type=float, default=None)
    orc.add_argument("--p", type=float, default=None, help="per-step win probability")
    orc.add_argument("--l", type=int, default=None, help="lower boundary")
    orc.add_argument("--u", type=int, default=None, help="upper boundary")
    orc.add_argument("--p0", type=int, default=None, help="start position")
    orc.add_argument("--x", type=int, default=None, help="start level")
    orc.add_argument("--y", type=int, default=None, help="floor level")
    orc.add_argument("--side", choices=("fast", "slow"), default=None)
    orc.add_argument("--kind", choices=("clique", "star"), default=None)
    orc.add_argument("--chain", choices=("clique", "star"), default=None)
    orc.add_argument("--init", default="one", help="one | center | count:<k>")
    orc.set_defaults(func=cmd_oracle)

    cpl = sub.add_parser("couple-test", help="check domination between coupled chains")
    cpl.add_argument("--n", type=int, required=True)
    cpl.add_argument("--lambda-lo", dest="lambda_lo", type=float, required=True)
    cpl.add_argument("--lambda-hi", dest="lambda_hi", type=float, required=True)
    cpl.add_argument("--alpha", type=float, required=True)
    cpl.add_argument("--runs", type=int, required=True)
    cpl.add_argument("--seed", type=int, default=None)
    cpl.add_argument("--i0", type=int, default=1, help="initial infected count, both chains")
    cpl.add_argument("--t-max", type=float, default=50.0)
    cpl.add_argument("--max-jumps", type=int, default=100_000)
    cpl.set_defaults(func=cmd_couple_test)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return 0 if code is None else int(code)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # CLI boundary: anything else is a runtime failure
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
