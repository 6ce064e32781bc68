"""Event-driven simulation of the contact process.

Infected vertices heal at rate 1; a susceptible vertex with k infected
neighbors is infected at rate lam * k**(1 + alpha). The general-graph
engine is a Gillespie direct-method loop over a weighted sum tree. On
cliques and stars the process collapses to a one- or two-coordinate
chain by exchangeability, and those paths run through compiled kernels.

All entry points consume randomness in the same fixed pattern (two
uniforms per jump: waiting time, then event pick), so a seed pins the
full trajectory regardless of which observer or recording options are
attached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence, Union

import numpy as np

from . import _kernels
from .topology import (
    Clique,
    General,
    Star,
    Topology,
    ValidationError,
    to_general,
    vertex_count,
)

MAX_VERTICES = 100_000
ALPHA_MAX = 4.0
RECORD_LIMIT = 1_000_000

_REASONS = {
    _kernels.STOP_ABSORBED: "none",
    _kernels.STOP_TIME: "time_limit",
    _kernels.STOP_JUMPS: "jump_limit",
}


@dataclass(frozen=True)
class ProcessParams:
    """Infection coefficient and infection exponent.

    lam = 0 is allowed (pure-death chain); alpha is restricted to
    (-1, 4]: below -1 the one-neighbor rate would not dominate, above 4
    the rate powers leave the double-precision envelope we promise.
    """

    lam: float
    alpha: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.lam) or self.lam < 0:
            raise ValidationError(f"infection coefficient must be >= 0, got {self.lam!r}")
        if not math.isfinite(self.alpha) or self.alpha <= -1:
            raise ValidationError(
                f"infection exponent must be > -1, got {self.alpha!r}"
            )
        if self.alpha > ALPHA_MAX:
            raise ValidationError(
                f"infection exponent above {ALPHA_MAX} is outside the supported range"
            )


@dataclass(frozen=True)
class SimLimits:
    """Censoring limits. Both are mandatory: in the supercritical regime
    survival is exponential in n, so an unbounded run never returns."""

    t_max: float
    max_jumps: int

    def __post_init__(self) -> None:
        if not (self.t_max > 0) or not math.isfinite(self.t_max):
            raise ValidationError(f"t_max must be a positive finite real, got {self.t_max!r}")
        if not isinstance(self.max_jumps, int) or self.max_jumps < 1:
            raise ValidationError(f"max_jumps must be an integer >= 1, got {self.max_jumps!r}")


@dataclass(frozen=True)
class CliqueState:
    """Infected count on a clique; the identity of infected vertices is
    irrelevant by symmetry."""

    infected: int


@dataclass(frozen=True)
class StarState:
    infected_leaves: int
    center_infected: bool


class GeneralState:
    """Explicit per-vertex state with incrementally maintained
    infected-neighbor counts."""

    __slots__ = ("infected", "infected_neighbor_count")

    def __init__(self, infected: np.ndarray, infected_neighbor_count: np.ndarray):
        self.infected = infected
        self.infected_neighbor_count = infected_neighbor_count

    def copy(self) -> "GeneralState":
        return GeneralState(self.infected.copy(), self.infected_neighbor_count.copy())


ProcessState = Union[CliqueState, StarState, GeneralState]


@dataclass(frozen=True)
class SurvivalOutcome:
    """One finished (or censored) run.

    time is the survival time when censor_reason is "none", otherwise
    the time observed before the run was cut.
    """

    time: float
    jumps: int
    peak_infected: int
    censor_reason: str
    seed: int

    @property
    def censored(self) -> bool:
        return self.censor_reason != "none"


@dataclass(frozen=True)
class LevelHit:
    """Result of running a clique chain until the infected count first
    reaches a target level (or the run ends first)."""

    hit: bool
    time: float
    jumps: int
    peak_infected: int
    final_infected: int
    censor_reason: str
    seed: int


@dataclass(frozen=True)
class CoupledOutcome:
    outcome_lo: SurvivalOutcome
    outcome_hi: SurvivalOutcome
    violations: int
    epochs: int


class Event(NamedTuple):
    kind: str
    vertex: int | None
    rate: float


class JumpRecord(NamedTuple):
    jump_index: int
    time: float
    event_kind: str
    infected_count: int
    center_infected: bool | None


class RateSummary(NamedTuple):
    heal_total: float
    infect_total: float
    events: tuple[Event, ...]


Observer = Callable[[JumpRecord], None]


def infection_rate(params: ProcessParams, k: int) -> float:
    """Rate at which a vertex with k infected neighbors is infected.

    Defined as exactly 0 at k = 0 for every alpha; for k >= 1 the power
    is evaluated in exp/ln form so the same arithmetic serves negative
    and positive exponents alike.
    """
    if k < 0:
        raise ValidationError(f"infected-neighbor count must be >= 0, got {k}")
    if k == 0:
        return 0.0
    return params.lam * math.exp((1.0 + params.alpha) * math.log(k))


def _clique_up_rates(n: int, params: ProcessParams) -> np.ndarray:
    # up[i] = lam * i^(1+alpha) * (n - i); zero at both ends.
    up = np.zeros(n + 1, dtype=np.float64)
    for i in range(1, n):
        up[i] = infection_rate(params, i) * (n - i)
    return up


def _star_center_rates(n: int, params: ProcessParams) -> np.ndarray:
    rates = np.zeros(n + 1, dtype=np.float64)
    for i in range(1, n + 1):
        rates[i] = infection_rate(params, i)
    return rates


def general_state(topology: Topology, infected_vertices: Iterable[int]) -> GeneralState:
    """Build a consistent explicit state with the given vertices infected."""
    g = to_general(topology)
    nv = len(g.adjacency)
    infected = np.zeros(nv, dtype=np.bool_)
    for v in infected_vertices:
        if not (0 <= v < nv):
            raise ValidationError(f"infected vertex {v} out of range for graph on {nv} vertices")
        if infected[v]:
            raise ValidationError(f"vertex {v} listed as infected twice")
        infected[v] = True
    counts = np.zeros(nv, dtype=np.int64)
    for v in range(nv):
        counts[v] = sum(1 for u in g.adjacency[v] if infected[u])
    return GeneralState(infected, counts)


def recount_infected_neighbors(topology: Topology, state: GeneralState) -> np.ndarray:
    """Recompute all neighbor counts from scratch; the incremental values
    must match these exactly."""
    g = to_general(topology)
    counts = np.zeros(len(g.adjacency), dtype=np.int64)
    for v in range(len(g.adjacency)):
        counts[v] = sum(1 for u in g.adjacency[v] if state.infected[u])
    return counts


def _check_state(topology: Topology, state: GeneralState) -> None:
    nv = vertex_count(topology)
    if state.infected.shape != (nv,) or state.infected_neighbor_count.shape != (nv,):
        raise ValidationError("state arrays do not match the vertex count")
    expected = recount_infected_neighbors(topology, state)
    if not np.array_equal(expected, state.infected_neighbor_count):
        raise ValidationError("inconsistent init state: neighbor counts do not match a recount")


def _coerce_general_init(topology: Topology, init) -> GeneralState:
    if isinstance(init, GeneralState):
        state = init.copy()
        _check_state(topology, state)
        return state
    if isinstance(init, CliqueState):
        if not isinstance(topology, Clique):
            raise ValidationError("clique state requires a clique topology")
        if not (0 <= init.infected <= topology.n):
            raise ValidationError(f"infected count {init.infected} out of range 0..{topology.n}")
        return general_state(topology, range(init.infected))
    if isinstance(init, StarState):
        if not isinstance(topology, Star):
            raise ValidationError("star state requires a star topology")
        if not (0 <= init.infected_leaves <= topology.n):
            raise ValidationError(
                f"infected leaf count {init.infected_leaves} out of range 0..{topology.n}"
            )
        vs = list(range(init.infected_leaves))
        if init.center_infected:
            vs.append(topology.center)
        return general_state(topology, vs)
    return general_state(topology, init)


def total_rates(topology: Topology, state: ProcessState, params: ProcessParams) -> RateSummary:
    """Healing total, infection total, and the full event enumeration
    for the current state."""
    if isinstance(state, CliqueState):
        if not isinstance(topology, Clique):
            raise ValidationError("clique state requires a clique topology")
        n, i = topology.n, state.infected
        if not (0 <= i <= n):
            raise ValidationError(f"infected count {i} out of range 0..{n}")
        up = infection_rate(params, i) * (n - i) if 0 < i < n else 0.0
        events = []
        if up > 0:
            events.append(Event("infect", None, up))
        if i > 0:
            events.append(Event("heal", None, float(i)))
        return RateSummary(float(i), up, tuple(events))
    if isinstance(state, StarState):
        if not isinstance(topology, Star):
            raise ValidationError("star state requires a star topology")
        n, i = topology.n, state.infected_leaves
        if not (0 <= i <= n):
            raise ValidationError(f"infected leaf count {i} out of range 0..{n}")
        events = []
        heal = float(i)
        infect = 0.0
        if state.center_infected:
            heal += 1.0
            leaf_up = params.lam * (n - i)
            if leaf_up > 0:
                infect += leaf_up
                events.append(Event("leaf_infect", None, leaf_up))
            if i > 0:
                events.append(Event("leaf_heal", None, float(i)))
            events.append(Event("center_heal", None, 1.0))
        else:
            if i > 0:
                events.append(Event("leaf_heal", None, float(i)))
            center_up = infection_rate(params, i)
            if center_up > 0:
                infect += center_up
                events.append(Event("center_infect", None, center_up))
        return RateSummary(heal, infect, tuple(events))
    if isinstance(state, GeneralState):
        events = []
        heal = 0.0
        infect = 0.0
        for v in range(state.infected.shape[0]):
            if state.infected[v]:
                heal += 1.0
                events.append(Event("heal", v, 1.0))
            elif state.infected_neighbor_count[v] > 0:
                r = infection_rate(params, int(state.infected_neighbor_count[v]))
                if r > 0:
                    infect += r
                    events.append(Event("infect", v, r))
        return RateSummary(heal, infect, tuple(events))
    raise ValidationError(f"unsupported state type {type(state).__name__}")


def embedded_jump_probabilities(
    topology: Topology, state: ProcessState, params: ProcessParams
) -> tuple[tuple[Event, float], ...]:
    """Jump-chain distribution over the next event. Errors on absorbing
    states, where no clock is running."""
    summary = total_rates(topology, state, params)
    total = summary.heal_total + summary.infect_total
    if total <= 0 or not summary.events:
        raise ValidationError("absorbing state has no jump distribution")
    return tuple((e, e.rate / total) for e in summary.events)


class WeightTree:
    """Flat binary sum tree over nonnegative weights.

    Updates propagate to the root by re-adding child pairs, so the
    stored totals are always exact sums of the current leaves and never
    accumulate drift. Sampling descends from the root; a total of zero
    or a floating-point edge landing on an empty leaf is handled by
    falling back to the last positive leaf.
    """

    __slots__ = ("size", "_cap", "_tree")

    def __init__(self, size: int):
        if size < 1:
            raise ValidationError("weight tree needs at least one slot")
        cap = 1
        while cap < size:
            cap *= 2
        self.size = size
        self._cap = cap
        self._tree = [0.0] * (2 * cap)

    @property
    def total(self) -> float:
        return self._tree[1]

    def __getitem__(self, i: int) -> float:
        if not (0 <= i < self.size):
            raise IndexError(i)
        return self._tree[self._cap + i]

    def __setitem__(self, i: int, w: float) -> None:
        if not (0 <= i < self.size):
            raise IndexError(i)
        if w < 0 or not math.isfinite(w):
            raise ValidationError(f"weight must be finite and >= 0, got {w!r}")
        tree = self._tree
        node = self._cap + i
        tree[node] = w
        node //= 2
        while node >= 1:
            tree[node] = tree[2 * node] + tree[2 * node + 1]
            node //= 2

    def sample(self, x: float) -> int:
        """Index of the leaf whose cumulative-weight interval contains x."""
        if self.total <= 0:
            raise ValidationError("cannot sample from an all-zero weight tree")
        tree = self._tree
        node = 1
        while node < self._cap:
            left = tree[2 * node]
            if x < left:
                node = 2 * node
            else:
                x -= left
                node = 2 * node + 1
        i = node - self._cap
        if tree[node] > 0.0 and i < self.size:
            return i
        # x landed past the last positive leaf through rounding; walk back.
        while i > 0 and (i >= self.size or tree[self._cap + i] <= 0.0):
            i -= 1
        if tree[self._cap + i] <= 0.0:
            raise ValidationError("cannot sample from an all-zero weight tree")
        return i


def simulate(
    topology: Topology,
    params: ProcessParams,
    init,
    seed: int,
    limits: SimLimits,
    observer: Observer | None = None,
) -> SurvivalOutcome:
    """Run the process on an arbitrary graph until absorption or a limit.

    init may be a ProcessState or an iterable of infected vertex
    indices. The observer, when given, is called once per jump with the
    post-jump record.
    """
    g = to_general(topology)
    nv = len(g.adjacency)
    if nv > MAX_VERTICES:
        raise ValidationError(f"graph on {nv} vertices exceeds the supported {MAX_VERTICES}")
    state = _coerce_general_init(topology, init)
    rng = np.random.default_rng(seed)

    infected = state.infected
    counts = state.infected_neighbor_count
    infected_count = int(infected.sum())
    # Slots [0, nv) hold per-vertex infection weights, [nv, 2nv) healing.
    tree = WeightTree(2 * nv)
    for v in range(nv):
        if infected[v]:
            tree[nv + v] = 1.0
        elif counts[v] > 0:
            tree[v] = infection_rate(params, int(counts[v]))

    t = 0.0
    jumps = 0
    peak = infected_count
    if infected_count == 0:
        return SurvivalOutcome(0.0, 0, peak, "none", seed)

    adjacency = g.adjacency
    while True:
        total = tree.total
        u1 = rng.random()
        dt = -math.log1p(-u1) / total
        if t + dt > limits.t_max:
            return SurvivalOutcome(limits.t_max, jumps, peak, "time_limit", seed)
        t += dt
        slot = tree.sample(rng.random() * total)
        if slot < nv:
            v = slot
            kind = "infect"
            infected[v] = True
            infected_count += 1
            tree[v] = 0.0
            tree[nv + v] = 1.0
            for u in adjacency[v]:
                counts[u] += 1
                if not infected[u]:
                    tree[u] = infection_rate(params, int(counts[u]))
        else:
            v = slot - nv
            kind = "heal"
            infected[v] = False
            infected_count -= 1
            tree[nv + v] = 0.0
            for u in adjacency[v]:
                counts[u] -= 1
                if not infected[u]:
                    tree[u] = infection_rate(params, int(counts[u])) if counts[u] > 0 else 0.0
            tree[v] = infection_rate(params, int(counts[v])) if counts[v] > 0 else 0.0
        jumps += 1
        if infected_count > peak:
            peak = infected_count
        if observer is not None:
            observer(JumpRecord(jumps, t, kind, infected_count, None))
        if infected_count == 0:
            return SurvivalOutcome(t, jumps, peak, "none", seed)
        if jumps >= limits.max_jumps:
            return SurvivalOutcome(t, jumps, peak, "jump_limit", seed)


def simulate_standard_sis_superposition(
    topology: Topology,
    lam: float,
    init,
    seed: int,
    limits: SimLimits,
) -> SurvivalOutcome:
    """Standard SIS via independent per-infected-neighbor clocks.

    Every (infected u, susceptible v) edge carries its own rate-lam
    infection clock; superposing them is the alpha = 0 process. Kept as
    a deliberately separate implementation (arc enumeration instead of
    per-vertex aggregate rates) so the two routes can be compared.
    """
    if lam < 0 or not math.isfinite(lam):
        raise ValidationError(f"infection coefficient must be >= 0, got {lam!r}")
    g = to_general(topology)
    nv = len(g.adjacency)
    state = _coerce_general_init(topology, init)
    infected = state.infected
    rng = np.random.default_rng(seed)

    infected_count = int(infected.sum())
    t = 0.0
    jumps = 0
    peak = infected_count
    if infected_count == 0:
        return SurvivalOutcome(0.0, 0, peak, "none", seed)
    while True:
        arcs = [
            (u, v)
            for u in range(nv)
            if infected[u]
            for v in g.adjacency[u]
            if not infected[v]
        ]
        total = infected_count * 1.0 + lam * len(arcs)
        u1 = rng.random()
        dt = -math.log1p(-u1) / total
        if t + dt > limits.t_max:
            return SurvivalOutcome(limits.t_max, jumps, peak, "time_limit", seed)
        t += dt
        x = rng.random() * total
        if x < lam * len(arcs):
            idx = min(int(x / lam), len(arcs) - 1)
            infected[arcs[idx][1]] = True
            infected_count += 1
        else:
            k = min(int(x - lam * len(arcs)), infected_count - 1)
            for v in range(nv):
                if infected[v]:
                    if k == 0:
                        infected[v] = False
                        infected_count -= 1
                        break
                    k -= 1
        jumps += 1
        if infected_count > peak:
            peak = infected_count
        if infected_count == 0:
            return SurvivalOutcome(t, jumps, peak, "none", seed)
        if jumps >= limits.max_jumps:
            return SurvivalOutcome(t, jumps, peak, "jump_limit", seed)


def _record_arrays(limits: SimLimits, want: bool):
    if not want:
        dummy = np.empty(1, dtype=np.float64)
        idummy = np.empty(1, dtype=np.int64)
        return dummy, idummy, idummy
    if limits.max_jumps > RECORD_LIMIT:
        raise ValidationError(
            f"recording jumps requires max_jumps <= {RECORD_LIMIT}, got {limits.max_jumps}"
        )
    times = np.empty(limits.max_jumps, dtype=np.float64)
    counts = np.empty(limits.max_jumps, dtype=np.int64)
    centers = np.empty(limits.max_jumps, dtype=np.int64)
    return times, counts, centers


def simulate_clique_lumped(
    n: int,
    params: ProcessParams,
    i0: int,
    seed: int,
    limits: SimLimits,
    observer: Observer | None = None,
) -> SurvivalOutcome:
    """Birth-death chain on the infected count of an n-clique."""
    if not isinstance(n, int) or n < 1 or n > MAX_VERTICES:
        raise ValidationError(f"clique size must be in 1..{MAX_VERTICES}, got {n!r}")
    if not isinstance(i0, int) or not (0 <= i0 <= n):
        raise ValidationError(f"initial infected count {i0!r} out of range 0..{n}")
    up = _clique_up_rates(n, params)
    rng = np.random.default_rng(seed)
    times, icounts, _ = _record_arrays(limits, observer is not None)
    t, jumps, peak, reason, _ = _kernels.clique_run(
        up, i0, float(limits.t_max), limits.max_jumps, -1, observer is not None,
        times, icounts, rng,
    )
    if observer is not None:
        prev = i0
        for j in range(jumps):
            cur = int(icounts[j])
            kind = "infect" if cur > prev else "heal"
            observer(JumpRecord(j + 1, float(times[j]), kind, cur, None))
            prev = cur
    return SurvivalOutcome(float(t), int(jumps), int(peak), _REASONS[reason], seed)


def simulate_star_lumped(
    n: int,
    params: ProcessParams,
    init: StarState,
    seed: int,
    limits: SimLimits,
    observer: Observer | None = None,
) -> SurvivalOutcome:
    """Two-layer chain on (infected leaves, center state) of an n-leaf star."""
    if not isinstance(n, int) or n < 1 or n > MAX_VERTICES:
        raise ValidationError(f"star leaf count must be in 1..{MAX_VERTICES}, got {n!r}")
    if not isinstance(init, StarState):
        raise ValidationError("star chain init must be a StarState")
    if not (0 <= init.infected_leaves <= n):
        raise ValidationError(
            f"initial infected leaf count {init.infected_leaves!r} out of range 0..{n}"
        )
    center_rates = _star_center_rates(n, params)
    rng = np.random.default_rng(seed)
    times, icounts, centers = _record_arrays(limits, observer is not None)
    t, jumps, peak, reason, _, _ = _kernels.star_run(
        n, params.lam, center_rates, init.infected_leaves, int(init.center_infected),
        float(limits.t_max), limits.max_jumps, observer is not None,
        times, icounts, centers, rng,
    )
    if observer is not None:
        prev_i = init.infected_leaves
        prev_c = int(init.center_infected)
        for j in range(jumps):
            cur_i, cur_c = int(icounts[j]), int(centers[j])
            if cur_c > prev_c:
                kind = "center_infect"
            elif cur_c < prev_c:
                kind = "center_heal"
            elif cur_i > prev_i:
                kind = "leaf_infect"
            else:
                kind = "leaf_heal"
            observer(JumpRecord(j + 1, float(times[j]), kind, cur_i + cur_c, bool(cur_c)))
            prev_i, prev_c = cur_i, cur_c
    return SurvivalOutcome(float(t), int(jumps), int(peak), _REASONS[reason], seed)


def run_clique_to_level(
    n: int,
    params: ProcessParams,
    i0: int,
    target: int,
    seed: int,
    limits: SimLimits,
) -> LevelHit:
    """Run the clique chain until the infected count first reaches
    target, absorption, or a limit. A start at or above target counts
    as an immediate hit."""
    if not isinstance(n, int) or n < 1 or n > MAX_VERTICES:
        raise ValidationError(f"clique size must be in 1..{MAX_VERTICES}, got {n!r}")
    if not isinstance(i0, int) or not (0 <= i0 <= n):
        raise ValidationError(f"initial infected count {i0!r} out of range 0..{n}")
    if not isinstance(target, int) or target < 0:
        raise ValidationError(f"target level must be an integer >= 0, got {target!r}")
    up = _clique_up_rates(n, params)
    rng = np.random.default_rng(seed)
    dummy_t = np.empty(1, dtype=np.float64)
    dummy_i = np.empty(1, dtype=np.int64)
    t, jumps, peak, reason, final = _kernels.clique_run(
        up, i0, float(limits.t_max), limits.max_jumps, target, False,
        dummy_t, dummy_i, rng,
    )
    hit = reason == _kernels.STOP_TARGET
    censor = "none" if hit else _REASONS[reason]
    return LevelHit(hit, float(t), int(jumps), int(peak), int(final), censor, seed)


def coupled_simulate_clique(
    n: int,
    params_lo: ProcessParams,
    params_hi: ProcessParams,
    i0_lo: int,
    i0_hi: int,
    seed: int,
    limits: SimLimits,
) -> CoupledOutcome:
    """Run two clique chains on one uniformized event stream.

    Both chains read the same uniform each epoch; infection regions sit
    at the bottom of the unit interval and healing regions at the top,
    nested so the chain with the larger coefficient can never drop
    below the other. Domination violations are counted and reported,
    and are impossible by construction.
    """
    if not isinstance(n, int) or n < 1 or n > MAX_VERTICES:
        raise ValidationError(f"clique size must be in 1..{MAX_VERTICES}, got {n!r}")
    if params_lo.alpha != params_hi.alpha:
        raise ValidationError("coupled chains must share the infection exponent")
    if params_lo.lam > params_hi.lam:
        raise ValidationError("lower chain must have the smaller infection coefficient")
    for name, i0 in (("lower", i0_lo), ("upper", i0_hi)):
        if not isinstance(i0, int) or not (0 <= i0 <= n):
            raise ValidationError(f"{name} initial infected count {i0!r} out of range 0..{n}")
    if i0_lo > i0_hi:
        raise ValidationError("lower chain cannot start above the upper chain")
    up_lo = _clique_up_rates(n, params_lo)
    up_hi = _clique_up_rates(n, params_hi)
    big_lambda = n + infection_rate(params_hi, n) * n
    rng = np.random.default_rng(seed)
    dummy_t = np.empty(1, dtype=np.float64)
    dummy_i = np.empty(1, dtype=np.int64)
    (surv_lo, surv_hi, t, epochs, jumps_lo, jumps_hi, peak_lo, peak_hi,
     violations, reason, _, _) = _kernels.coupled_clique_run(
        up_lo, up_hi, i0_lo, i0_hi, big_lambda, float(limits.t_max), limits.max_jumps,
        False, dummy_t, dummy_i, dummy_i, rng,
    )
    return CoupledOutcome(
        outcome_lo=_coupled_outcome(surv_lo, jumps_lo, peak_lo, t, reason, seed, limits),
        outcome_hi=_coupled_outcome(surv_hi, jumps_hi, peak_hi, t, reason, seed, limits),
        violations=int(violations),
        epochs=int(epochs),
    )


def _coupled_outcome(surv, jumps, peak, t, reason, seed, limits) -> SurvivalOutcome:
    if surv >= 0.0:
        return SurvivalOutcome(float(surv), int(jumps), int(peak), "none", seed)
    if reason == _kernels.STOP_TIME:
        return SurvivalOutcome(float(limits.t_max), int(jumps), int(peak), "time_limit", seed)
    return SurvivalOutcome(float(t), int(jumps), int(peak), "jump_limit", seed)


@dataclass(frozen=True)
class CliqueChain:
    """Marker for the collapsed clique chain; init is an infected count."""

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"chain size must be an integer >= 1, got {self.n!r}")


@dataclass(frozen=True)
class StarChain:
    """Marker for the collapsed star chain; init is a StarState."""

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"chain size must be an integer >= 1, got {self.n!r}")


SimSpec = Union[Clique, Star, General, CliqueChain, StarChain]


def run_spec(
    spec: SimSpec,
    params: ProcessParams,
    init,
    seed: int,
    limits: SimLimits,
    observer: Observer | None = None,
) -> SurvivalOutcome:
    """Single dispatch point: collapsed chains go through the compiled
    kernels, topologies through the general engine."""
    if isinstance(spec, CliqueChain):
        if isinstance(init, CliqueState):
            init = init.infected
        if not isinstance(init, int):
            raise ValidationError("clique chain init must be an infected count")
        return simulate_clique_lumped(spec.n, params, init, seed, limits, observer)
    if isinstance(spec, StarChain):
        return simulate_star_lumped(spec.n, params, init, seed, limits, observer)
    return simulate(spec, params, init, seed, limits, observer)
