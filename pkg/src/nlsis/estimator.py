"""Monte Carlo harness over the simulation engines.

Survival statistics with censoring, hitting-probability and phase-event
estimation, growth-regime classification over n-sweeps, and the CSV
emitting sweep driver.

Replica r of grid cell c draws its seed from
SeedSequence(master_seed, spawn_key=(c, r)), so every replica is an
independent stream, reruns are bit-reproducible, and completion order
cannot matter. Aggregation uses exact summation and sorting quantiles,
which makes it a pure function of the outcome multiset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .analysis import threshold_lambda
from .dynamics import (
    CliqueChain,
    ProcessParams,
    SimLimits,
    StarChain,
    StarState,
    SurvivalOutcome,
    infection_rate,
    run_clique_to_level,
    run_spec,
)
from .topology import ValidationError

CSV_COLUMNS = (
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
)

# classify_growth decision constants. The asymptotic statements these
# operationalize leave every constant free; fixing them here is what
# makes the classification reproducible.
R2_LOG_MIN = 0.9
EXPONENT_CEILING = 0.25
FLAT_GUARD = 0.1
CENSOR_LEVEL = 0.5
SLOPE_WINDOW = 3


@dataclass(frozen=True)
class McConfig:
    runs: int
    t_max: float
    max_jumps: int
    master_seed: int
    confidence: float = 0.95

    def __post_init__(self) -> None:
        if not isinstance(self.runs, int) or self.runs < 1:
            raise ValidationError(f"runs must be an integer >= 1, got {self.runs!r}")
        if not (self.t_max > 0) or not math.isfinite(self.t_max):
            raise ValidationError(f"t_max must be a positive finite real, got {self.t_max!r}")
        if not isinstance(self.max_jumps, int) or self.max_jumps < 1:
            raise ValidationError(f"max_jumps must be an integer >= 1, got {self.max_jumps!r}")
        if not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise ValidationError(f"master seed must be an integer >= 0, got {self.master_seed!r}")
        if not (0.0 < self.confidence < 1.0):
            raise ValidationError(f"confidence must be in (0,1), got {self.confidence!r}")

    @property
    def limits(self) -> SimLimits:
        return SimLimits(self.t_max, self.max_jumps)


@dataclass(frozen=True)
class SurvivalStats:
    """Aggregate over one cell of replicas. mean_censored averages the
    observed (possibly cut) times; when censored_fraction reaches 1/2
    the median is only a lower bound on the true one."""

    mean_censored: float
    median: float
    q10: float
    q90: float
    censored_fraction: float
    ci_halfwidth: float
    runs: int
    master_seed: int
    confidence: float

    @property
    def median_beyond_censor(self) -> bool:
        return self.censored_fraction >= 0.5


def derived_seed(master_seed: int, subkey: tuple[int, ...], replica: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=(*subkey, replica))
    return int(ss.generate_state(1, np.uint64)[0])


def aggregate_outcomes(outcomes: Sequence[SurvivalOutcome], mc: McConfig) -> SurvivalStats:
    """Collapse replica outcomes to summary statistics.

    Exact (fsum) accumulation and sorting quantiles make the result
    independent of the order outcomes arrive in.
    """
    runs = len(outcomes)
    if runs == 0:
        raise ValidationError("cannot aggregate zero outcomes")
    times = np.array([o.time for o in outcomes], dtype=np.float64)
    censored = sum(1 for o in outcomes if o.censored)
    mean = math.fsum(times.tolist()) / runs
    q10, median, q90 = (float(q) for q in np.quantile(times, (0.1, 0.5, 0.9)))
    if runs > 1:
        var = math.fsum(((t - mean) ** 2 for t in times.tolist())) / (runs - 1)
        sd = math.sqrt(var)
    else:
        sd = 0.0
    z = NormalDist().inv_cdf(0.5 + mc.confidence / 2.0)
    return SurvivalStats(
        mean_censored=mean,
        median=median,
        q10=q10,
        q90=q90,
        censored_fraction=censored / runs,
        ci_halfwidth=z * sd / math.sqrt(runs),
        runs=runs,
        master_seed=mc.master_seed,
        confidence=mc.confidence,
    )


def censor_at(outcome: SurvivalOutcome, t_max: float) -> SurvivalOutcome:
    """Re-censor a finished outcome at a lower time cutoff.

    Only time and censor_reason are re-derived; jumps and peak_infected
    keep their values from the original horizon (the counts at the
    earlier cutoff are not recoverable). Intended for re-aggregating one
    raw run set at several censor levels.
    """
    if not (t_max > 0):
        raise ValidationError(f"t_max must be positive, got {t_max!r}")
    if outcome.time > t_max:
        return SurvivalOutcome(t_max, outcome.jumps, outcome.peak_infected, "time_limit", outcome.seed)
    return outcome


def run_replicas(
    spec,
    params: ProcessParams,
    init,
    mc: McConfig,
    subkey: tuple[int, ...] = (),
) -> list[SurvivalOutcome]:
    limits = mc.limits
    return [
        run_spec(spec, params, init, derived_seed(mc.master_seed, subkey, r), limits)
        for r in range(mc.runs)
    ]


def estimate_survival(
    spec,
    params: ProcessParams,
    init,
    mc: McConfig,
    subkey: tuple[int, ...] = (),
) -> SurvivalStats:
    """Survival statistics over mc.runs independent replicas."""
    return aggregate_outcomes(run_replicas(spec, params, init, mc, subkey), mc)


def wilson_interval(successes: int, trials: int, confidence: float) -> tuple[float, float]:
    if not isinstance(trials, int) or trials < 1:
        raise ValidationError(f"trials must be an integer >= 1, got {trials!r}")
    if not isinstance(successes, int) or not (0 <= successes <= trials):
        raise ValidationError(f"successes {successes!r} out of range 0..{trials}")
    if not (0.0 < confidence < 1.0):
        raise ValidationError(f"confidence must be in (0,1), got {confidence!r}")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class HitEstimate:
    estimate: float
    ci_low: float
    ci_high: float
    hits: int
    runs: int


def estimate_hitting_probability(
    spec,
    params: ProcessParams,
    init,
    target,
    mc: McConfig,
    subkey: tuple[int, ...] = (),
) -> HitEstimate:
    """Fraction of replicas that reach the target before absorption or a
    limit, with a Wilson interval.

    Censored runs that never hit count as misses and stay in the
    denominator. On a clique chain an integer target runs through the
    early-stopping kernel; a callable target is checked against every
    visited state (clique: infected count, star: StarState).
    """
    limits = mc.limits
    hits = 0
    if isinstance(spec, CliqueChain) and isinstance(target, int):
        if not isinstance(init, int):
            raise ValidationError("clique chain init must be an infected count")
        for r in range(mc.runs):
            seed = derived_seed(mc.master_seed, subkey, r)
            if run_clique_to_level(spec.n, params, init, target, seed, limits).hit:
                hits += 1
    elif isinstance(spec, (CliqueChain, StarChain)) and callable(target):
        for r in range(mc.runs):
            seed = derived_seed(mc.master_seed, subkey, r)
            if _predicate_run_hits(spec, params, init, target, seed, limits):
                hits += 1
    else:
        raise ValidationError(
            "hitting estimation needs a collapsed chain with an integer level or a predicate"
        )
    lo, hi = wilson_interval(hits, mc.runs, mc.confidence)
    return HitEstimate(hits / mc.runs, lo, hi, hits, mc.runs)


def _predicate_run_hits(spec, params, init, target, seed, limits) -> bool:
    if isinstance(spec, CliqueChain):
        start_state = init
        to_state = lambda rec: rec.infected_count
    else:
        start_state = init
        to_state = lambda rec: StarState(
            rec.infected_count - int(rec.center_infected), bool(rec.center_infected)
        )
    if target(start_state):
        return True
    seen = []

    def observer(rec):
        seen.append(to_state(rec))

    run_spec(spec, params, init, seed, limits, observer)
    return any(target(s) for s in seen)


@dataclass(frozen=True)
class CenterHealthyDrop:
    """Phase: the center is healthy with `start` infected leaves; the
    event is the count falling to `floor` before the center is
    reinfected."""

    start: int
    floor: int


@dataclass(frozen=True)
class CenterInfectedRise:
    """Phase: the center is infected with `start` infected leaves; the
    event is gaining ceil(lam*n/(4z)) leaves before the center heals.
    z is a free tuning parameter and has no default on purpose."""

    start: int
    z: float


@dataclass(frozen=True)
class PhaseEstimate:
    estimate: float
    ci_low: float
    ci_high: float
    successes: int
    runs: int
    rise_target: int | None = None


def estimate_phase_event(
    n: int,
    params: ProcessParams,
    phase: Union[CenterHealthyDrop, CenterInfectedRise],
    mc: McConfig,
    subkey: tuple[int, ...] = (),
) -> PhaseEstimate:
    """Estimate one phase-event probability on an n-leaf star.

    The center state is pinned for the duration of the phase, so only
    the embedded jump chain matters; each replica is a Bernoulli walk
    consuming one uniform per step. t_max/max_jumps do not apply (a
    phase ends in finitely many steps with probability one).
    """
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"star leaf count must be an integer >= 1, got {n!r}")
    if isinstance(phase, CenterHealthyDrop):
        if not (0 <= phase.floor <= phase.start <= n):
            raise ValidationError(
                f"drop phase needs 0 <= floor <= start <= n, got {phase!r} with n={n}"
            )
        runner: Callable[[np.random.Generator], bool] = lambda rng: _drop_phase_run(
            n, params, phase, rng
        )
        rise_target = None
    elif isinstance(phase, CenterInfectedRise):
        if not (phase.z > 0) or not math.isfinite(phase.z):
            raise ValidationError(f"rise phase needs z > 0, got {phase.z!r}")
        gain = math.ceil(params.lam * n / (4.0 * phase.z))
        target = phase.start + gain
        if not (0 <= phase.start <= n) or target > n:
            raise ValidationError(
                f"rise phase target {target} out of range for start {phase.start} on {n} leaves"
            )
        runner = lambda rng: _rise_phase_run(n, params, phase.start, target, rng)
        rise_target = target
    else:
        raise ValidationError(f"unsupported phase type {type(phase).__name__}")
    successes = 0
    for r in range(mc.runs):
        rng = np.random.default_rng(derived_seed(mc.master_seed, subkey, r))
        if runner(rng):
            successes += 1
    lo, hi = wilson_interval(successes, mc.runs, mc.confidence)
    return PhaseEstimate(successes / mc.runs, lo, hi, successes, mc.runs, rise_target)


def _drop_phase_run(n, params, phase, rng) -> bool:
    i = phase.start
    while i > phase.floor:
        reinfect = infection_rate(params, i)
        if rng.random() * (i + reinfect) >= i:
            return False
        i -= 1
    return True


def _rise_phase_run(n, params, start, target, rng) -> bool:
    i = start
    while i < target:
        up = params.lam * (n - i)
        total = up + i + 1.0
        u = rng.random() * total
        if u < up:
            i += 1
        elif u < up + i:
            i -= 1
        else:
            return False
    return True


@dataclass(frozen=True)
class GrowthClassification:
    kind: str  # logarithmic | polynomial | super_polynomial
    exponent: float | None


def _fit_r2(xs: np.ndarray, ys: np.ndarray) -> tuple[float, float]:
    slope, intercept = np.polyfit(xs, ys, 1)
    pred = slope * xs + intercept
    ss_res = float(np.sum((ys - pred) ** 2))
    ss_tot = float(np.sum((ys - np.mean(ys)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), r2


def classify_growth(
    points: Sequence[tuple[float, float]],
    censored_fractions: Sequence[float] | None = None,
) -> GrowthClassification:
    """Sort an n-indexed statistic into logarithmic, polynomial, or
    super-polynomial growth.

    Decision order: (1) censoring at the two largest n above 1/2 is
    taken as direct evidence of super-polynomial survival, since the
    statistic itself is then a floor, not a measurement. (2) A fitted
    power-law exponent below 0.25 with either a good linear fit against
    ln n or a flat profile (|exponent| < 0.1) reads as logarithmic; the
    flat gate exists because a constant statistic fits neither model
    but is certainly not growing. (3) With at least 5 points, strictly
    increasing local log-log slopes over windows of 3 read as
    super-polynomial. (4) Otherwise polynomial with the fitted exponent.
    """
    if len(points) < 4:
        raise ValidationError(f"classification needs at least 4 points, got {len(points)}")
    ns = [p[0] for p in points]
    stats = [p[1] for p in points]
    for a, b in zip(ns, ns[1:]):
        if not (b > a):
            raise ValidationError("n values must be strictly increasing")
    if ns[0] < 2:
        raise ValidationError("n values must be at least 2")
    for s in stats:
        if not (s > 0) or not math.isfinite(s):
            raise ValidationError(f"statistic values must be positive and finite, got {s!r}")
    if censored_fractions is not None:
        if len(censored_fractions) != len(points):
            raise ValidationError("censored_fractions must align with points")
        if censored_fractions[-1] > CENSOR_LEVEL and censored_fractions[-2] > CENSOR_LEVEL:
            return GrowthClassification("super_polynomial", None)
    ln_n = np.log(np.array(ns, dtype=np.float64))
    ln_s = np.log(np.array(stats, dtype=np.float64))
    raw = np.array(stats, dtype=np.float64)
    exponent, _ = _fit_r2(ln_n, ln_s)
    _, r2_log = _fit_r2(ln_n, raw)
    if exponent < EXPONENT_CEILING and (r2_log >= R2_LOG_MIN or abs(exponent) < FLAT_GUARD):
        return GrowthClassification("logarithmic", None)
    if len(points) >= SLOPE_WINDOW + 2:
        slopes = []
        for j in range(len(points) - SLOPE_WINDOW + 1):
            s, _ = _fit_r2(ln_n[j : j + SLOPE_WINDOW], ln_s[j : j + SLOPE_WINDOW])
            slopes.append(s)
        if all(b > a for a, b in zip(slopes, slopes[1:])):
            return GrowthClassification("super_polynomial", None)
    return GrowthClassification("polynomial", exponent)


_RULE_KINDS = ("literal", "clique_fast", "clique_slow", "star_fast", "star_slow")


@dataclass(frozen=True)
class LambdaRule:
    """Infection coefficient as a function of n: a literal value, or a
    named threshold boundary times a constant."""

    kind: str
    value: float = 0.0
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in _RULE_KINDS:
            raise ValidationError(f"lambda rule kind must be one of {_RULE_KINDS}, got {self.kind!r}")
        if self.kind == "literal":
            if not (self.value >= 0) or not math.isfinite(self.value):
                raise ValidationError(f"literal lambda must be >= 0, got {self.value!r}")
        elif not (self.scale > 0) or not math.isfinite(self.scale):
            raise ValidationError(f"lambda rule scale must be positive, got {self.scale!r}")

    def resolve(self, n: int, alpha: float) -> float:
        if self.kind == "literal":
            return self.value
        topo, side = self.kind.rsplit("_", 1)
        return self.scale * threshold_lambda(topo, n, alpha, side)

    def spelling(self) -> str:
        if self.kind == "literal":
            return repr(self.value)
        if self.scale == 1.0:
            return self.kind
        return f"{self.kind} * {self.scale!r}"


def parse_lambda_rule(text: str) -> LambdaRule:
    parts = [p.strip() for p in text.split("*")]
    if len(parts) == 1:
        token = parts[0]
        if token in _RULE_KINDS and token != "literal":
            return LambdaRule(token)
        try:
            return LambdaRule("literal", value=float(token))
        except ValueError:
            raise ValidationError(
                f"lambda must be a number or one of {_RULE_KINDS[1:]} with an optional"
                f" '* scale', got {text!r}"
            ) from None
    if len(parts) == 2 and parts[0] in _RULE_KINDS and parts[0] != "literal":
        try:
            scale = float(parts[1])
        except ValueError:
            raise ValidationError(f"lambda rule scale must be a number, got {parts[1]!r}") from None
        return LambdaRule(parts[0], scale=scale)
    raise ValidationError(f"cannot parse lambda rule {text!r}")


_INIT_RULES = ("one", "center")  # plus count:<k>


def resolve_init(topology_kind: str, rule: str):
    """Map an init rule string to a concrete chain init."""
    if topology_kind == "clique":
        if rule == "one":
            return 1
        if rule.startswith("count:"):
            return _parse_count(rule)
        raise ValidationError(f"clique init must be 'one' or 'count:<k>', got {rule!r}")
    if topology_kind == "star":
        if rule == "center":
            return StarState(0, True)
        if rule == "one":
            return StarState(1, False)
        if rule.startswith("count:"):
            return StarState(_parse_count(rule), False)
        raise ValidationError(f"star init must be 'one', 'center' or 'count:<k>', got {rule!r}")
    raise ValidationError(f"unsupported topology kind {topology_kind!r}")


def _parse_count(rule: str) -> int:
    try:
        k = int(rule.split(":", 1)[1])
    except ValueError:
        raise ValidationError(f"count init needs an integer, got {rule!r}") from None
    if k < 0:
        raise ValidationError(f"count init must be >= 0, got {k}")
    return k


@dataclass(frozen=True)
class SweepSpec:
    """Grid over n for one topology kind, lambda rule, and exponent."""

    topology_kind: str
    ns: tuple[int, ...]
    lambda_rule: LambdaRule
    alpha: float
    init_rule: str
    runs: int
    t_max: float
    max_jumps: int
    master_seed: int
    confidence: float = 0.95
    t_max_rule: str = "literal"  # literal | n_squared

    def __post_init__(self) -> None:
        if self.topology_kind not in ("clique", "star"):
            raise ValidationError(
                f"sweep topology must be 'clique' or 'star', got {self.topology_kind!r}"
            )
        if len(self.ns) == 0:
            raise ValidationError("sweep needs a nonempty n grid")
        for n in self.ns:
            if not isinstance(n, int) or n < 1:
                raise ValidationError(f"grid sizes must be integers >= 1, got {n!r}")
        for a, b in zip(self.ns, self.ns[1:]):
            if not (b > a):
                raise ValidationError("grid sizes must be strictly increasing")
        if self.t_max_rule not in ("literal", "n_squared"):
            raise ValidationError(
                f"t_max rule must be 'literal' or 'n_squared', got {self.t_max_rule!r}"
            )
        resolve_init(self.topology_kind, self.init_rule)  # validate pairing early
        # Validate the shared mc fields once; per-cell t_max may differ.
        McConfig(self.runs, self.t_max if self.t_max_rule == "literal" else 1.0,
                 self.max_jumps, self.master_seed, self.confidence)

    def cell_t_max(self, n: int) -> float:
        if self.t_max_rule == "n_squared":
            return float(n) * float(n)
        return self.t_max

    def config_mapping(self) -> dict[str, str]:
        """Canonical key = value form; parsing this back yields an
        equivalent spec."""
        return {
            "topology": self.topology_kind,
            "n": ",".join(str(n) for n in self.ns),
            "lambda": self.lambda_rule.spelling(),
            "alpha": repr(self.alpha),
            "init": self.init_rule,
            "runs": str(self.runs),
            "t_max": "n_squared" if self.t_max_rule == "n_squared" else repr(self.t_max),
            "max_jumps": str(self.max_jumps),
            "seed": str(self.master_seed),
            "confidence": repr(self.confidence),
        }


@dataclass(frozen=True)
class SweepRow:
    topology: str
    n: int
    lam: float
    alpha: float
    init: str
    runs: int
    t_max: float
    max_jumps: int
    master_seed: int
    stats: SurvivalStats


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """One SurvivalStats row per grid point, in grid order."""
    rows = []
    for idx, n in enumerate(spec.ns):
        lam = spec.lambda_rule.resolve(n, spec.alpha)
        params = ProcessParams(lam, spec.alpha)
        t_max = spec.cell_t_max(n)
        mc = McConfig(spec.runs, t_max, spec.max_jumps, spec.master_seed, spec.confidence)
        chain = CliqueChain(n) if spec.topology_kind == "clique" else StarChain(n)
        init = resolve_init(spec.topology_kind, spec.init_rule)
        stats = estimate_survival(chain, params, init, mc, subkey=(idx,))
        rows.append(
            SweepRow(spec.topology_kind, n, lam, spec.alpha, spec.init_rule,
                     spec.runs, t_max, spec.max_jumps, spec.master_seed, stats)
        )
    return rows


def format_csv(rows: Sequence[SweepRow], config_echo: Mapping[str, str]) -> str:
    """Render sweep rows as CSV text with a '# key = value' header block.

    The echo block is a valid config: feeding it back through the sweep
    front end reproduces the data rows. Lines starting with
    '# resolved_' are informational and skipped by the parser.
    """
    lines = [f"# {key} = {value}" for key, value in config_echo.items()]
    if rows:
        lines.append("# resolved_lambda = " + ",".join(repr(r.lam) for r in rows))
    lines.append(",".join(CSV_COLUMNS))
    for r in rows:
        s = r.stats
        lines.append(
            ",".join(
                (
                    r.topology,
                    str(r.n),
                    repr(r.lam),
                    repr(r.alpha),
                    r.init,
                    str(r.runs),
                    repr(r.t_max),
                    str(r.max_jumps),
                    str(r.master_seed),
                    repr(s.mean_censored),
                    repr(s.median),
                    repr(s.q10),
                    repr(s.q90),
                    repr(s.censored_fraction),
                    repr(s.ci_halfwidth),
                )
            )
        )
    return "\n".join(lines) + "\n"


def write_sweep_csv(rows: Sequence[SweepRow], config_echo: Mapping[str, str], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_csv(rows, config_echo))
