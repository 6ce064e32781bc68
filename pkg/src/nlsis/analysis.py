"""Closed-form probabilities and exact small-instance oracles.

Everything here is deterministic arithmetic: absorption probabilities
for the biased random walk, equilibrium and threshold formulas for the
collapsed chains, leaf-drop probabilities on the star, and expected
survival times by direct linear solve. These are the ground truths the
Monte Carlo layer is checked against, so the two layers deliberately
share no simulation code.

Products and powers that can span hundreds of orders of magnitude are
evaluated in log space throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .dynamics import (
    CliqueChain,
    ProcessParams,
    StarChain,
    StarState,
    infection_rate,
)
from .topology import ValidationError

STATE_SPACE_CAP = 10_000


@dataclass(frozen=True)
class GamblersRuinSpec:
    """Biased +-1 walk on {lower..upper}, absorbed at both ends.

    win_prob is the probability of a +1 step; start is the initial
    position and may sit on a boundary.
    """

    win_prob: float
    lower: int
    upper: int
    start: int

    def __post_init__(self) -> None:
        if not (0.0 < self.win_prob < 1.0):
            raise ValidationError(f"win probability must be in (0,1), got {self.win_prob!r}")
        for name in ("lower", "upper", "start"):
            if not isinstance(getattr(self, name), int):
                raise ValidationError(f"{name} boundary must be an integer")
        if self.lower >= self.upper:
            raise ValidationError(
                f"lower boundary {self.lower} must be below upper boundary {self.upper}"
            )
        if not (self.lower <= self.start <= self.upper):
            raise ValidationError(
                f"start {self.start} outside [{self.lower}, {self.upper}]"
            )


def _expm1_ratio(a: float, b: float, log_r: float) -> float:
    # (1 - r^a) / (1 - r^b) for r = e^log_r, evaluated without overflow.
    # For log_r > 0 both numerator and denominator explode, so factor
    # out the leading exponentials first.
    if a == 0:
        return 0.0
    if log_r > 0:
        return math.exp((a - b) * log_r) * math.expm1(-a * log_r) / math.expm1(-b * log_r)
    return math.expm1(a * log_r) / math.expm1(b * log_r)


def gamblers_ruin_absorption(spec: GamblersRuinSpec) -> tuple[float, float]:
    """Probabilities of absorbing at the lower and at the upper boundary.

    The unbiased case uses the classical linear formula; the biased case
    the geometric one. The pair sums to 1 up to rounding.
    """
    span = spec.upper - spec.lower
    from_start_up = spec.upper - spec.start
    from_lower = spec.start - spec.lower
    if spec.win_prob == 0.5:
        hit_upper = from_lower / span
        hit_lower = from_start_up / span
        return hit_lower, hit_upper
    # r = p/q where p is the win probability.
    log_r = math.log(spec.win_prob) - math.log1p(-spec.win_prob)
    hit_lower = _expm1_ratio(from_start_up, span, log_r)
    hit_upper = _expm1_ratio(from_lower, span, -log_r)
    return hit_lower, hit_upper


def equilibrium_infected(n: int, lam: float, alpha: float) -> float:
    """Infected count (lam*n)^(-1/alpha) at which aggregate healing and
    infection pressure balance on a clique. Attracting for alpha < 0,
    repelling for alpha > 0; the linear model has no such point."""
    if alpha == 0:
        raise ValidationError("equilibrium point undefined for linear scaling (alpha = 0)")
    if not (n >= 1) or not (lam > 0):
        raise ValidationError("equilibrium point needs n >= 1 and a positive coefficient")
    return math.exp(-math.log(lam * n) / alpha)


def star_potential(n: int, lam: float, alpha: float) -> float:
    """lam^2 * n * (lam*n)^alpha, the quantity governing star survival."""
    if not (n >= 1) or lam < 0:
        raise ValidationError("star potential needs n >= 1 and a nonnegative coefficient")
    if lam == 0:
        return 0.0
    return math.exp(2.0 * math.log(lam) + math.log(n) + alpha * math.log(lam * n))


def drop_probability_exact(x: int, y: int, lam: float, alpha: float) -> float:
    """Probability that the infected leaf count falls from x to y while
    the center stays healthy: at each level i the next event is a leaf
    healing with probability 1/(1 + lam*i^alpha), independently."""
    if not isinstance(x, int) or not isinstance(y, int) or y < 0 or x < y:
        raise ValidationError(f"drop levels need integers 0 <= y <= x, got x={x!r} y={y!r}")
    if lam < 0:
        raise ValidationError(f"infection coefficient must be >= 0, got {lam!r}")
    if x == y:
        return 1.0
    log_total = 0.0
    for i in range(y + 1, x + 1):
        log_total -= math.log1p(lam * math.exp(alpha * math.log(i)))
    return math.exp(log_total)


def drop_probability_bound(x: int, y: int, lam: float, alpha: float) -> float:
    """Closed-form upper bound exp(-(x-y)*lam*z^alpha/2) on the exact
    drop probability, with z = y for positive alpha and z = x otherwise.

    Only valid when lam*z^alpha <= 1; violations are reported, never
    clamped.
    """
    if not isinstance(x, int) or not isinstance(y, int) or y < 0 or x < y:
        raise ValidationError(f"drop levels need integers 0 <= y <= x, got x={x!r} y={y!r}")
    if lam < 0:
        raise ValidationError(f"infection coefficient must be >= 0, got {lam!r}")
    if x == y:
        return 1.0
    z = y if alpha > 0 else x
    if z == 0:
        raise ValidationError("bound undefined at y = 0 with a positive exponent (z = 0)")
    rate = lam * math.exp(alpha * math.log(z))
    if rate > 1.0:
        raise ValidationError(
            f"bound requires lam * z^alpha <= 1, got {rate!r} with z = {z}"
        )
    return math.exp(-(x - y) * rate / 2.0)


def reach_equilibrium_prob_bounds(n: int, lam: float, alpha: float) -> tuple[float, float]:
    """Lower and upper bounds on the probability that a single infected
    vertex pushes the clique to the level (lam*n/2)^(-1/alpha).

    Requires a positive exponent and 1 <= (lam*n/2)^(-1/alpha) <= n/2;
    the upper bound 2^(1 - (2*lam*n)^(-1/alpha)) is clamped to 1.
    """
    if alpha <= 0:
        raise ValidationError("reach bounds need a positive infection exponent")
    if not (n >= 2) or not (lam > 0):
        raise ValidationError("reach bounds need n >= 2 and a positive coefficient")
    level = math.exp(-math.log(lam * n / 2.0) / alpha)
    if not (1.0 <= level <= n / 2.0):
        raise ValidationError(
            f"reach bounds require 1 <= (lam*n/2)^(-1/alpha) <= n/2, got level {level!r}"
        )
    lower = math.exp(level * math.log(lam * n / 2.0))
    upper_exponent = 1.0 - math.exp(-math.log(2.0 * lam * n) / alpha)
    upper = min(1.0, math.exp(upper_exponent * math.log(2.0)))
    return lower, upper


Chain = Union[CliqueChain, StarChain]


def _clique_generator_solve(n: int, params: ProcessParams) -> np.ndarray:
    # tau[i] = 1/R(i) + sum of jump probabilities times tau at the
    # neighbors; state 0 absorbing. Dense solve with partial pivoting.
    m = n + 1
    a = np.zeros((m, m))
    b = np.zeros(m)
    a[0, 0] = 1.0
    for i in range(1, m):
        up = infection_rate(params, i) * (n - i) if i < n else 0.0
        down = float(i)
        total = up + down
        a[i, i] = 1.0
        b[i] = 1.0 / total
        if up > 0:
            a[i, i + 1] -= up / total
        a[i, i - 1] -= down / total
    return np.linalg.solve(a, b)


def _star_generator_solve(n: int, params: ProcessParams) -> np.ndarray:
    # State (i, c), index 2i + c; (0, 0) absorbing.
    m = 2 * (n + 1)
    a = np.zeros((m, m))
    b = np.zeros(m)
    a[0, 0] = 1.0
    for i in range(n + 1):
        for c in (0, 1):
            if i == 0 and c == 0:
                continue
            idx = 2 * i + c
            moves = []
            if c == 1:
                if i < n:
                    moves.append((2 * (i + 1) + 1, params.lam * (n - i)))
                if i > 0:
                    moves.append((2 * (i - 1) + 1, float(i)))
                moves.append((2 * i, 1.0))
            else:
                if i > 0:
                    moves.append((2 * (i - 1), float(i)))
                    moves.append((2 * i + 1, infection_rate(params, i)))
            total = sum(rate for _, rate in moves)
            a[idx, idx] = 1.0
            b[idx] = 1.0 / total
            for dest, rate in moves:
                if rate > 0:
                    a[idx, dest] -= rate / total
    return np.linalg.solve(a, b)


def expected_survival_exact_small(chain: Chain, params: ProcessParams, init) -> float:
    """Exact expected survival time by first-step linear solve.

    Capped at state spaces of 10^4; the collapsed clique has n+1 states,
    the collapsed star 2(n+1).
    """
    if isinstance(chain, CliqueChain):
        if chain.n + 1 > STATE_SPACE_CAP:
            raise ValidationError(
                f"state space {chain.n + 1} exceeds the supported {STATE_SPACE_CAP}"
            )
        if not isinstance(init, int) or not (0 <= init <= chain.n):
            raise ValidationError(f"initial infected count {init!r} out of range 0..{chain.n}")
        tau = _clique_generator_solve(chain.n, params)
        return float(tau[init])
    if isinstance(chain, StarChain):
        if 2 * (chain.n + 1) > STATE_SPACE_CAP:
            raise ValidationError(
                f"state space {2 * (chain.n + 1)} exceeds the supported {STATE_SPACE_CAP}"
            )
        if not isinstance(init, StarState):
            raise ValidationError("star chain init must be a StarState")
        if not (0 <= init.infected_leaves <= chain.n):
            raise ValidationError(
                f"initial infected leaf count {init.infected_leaves!r} out of range 0..{chain.n}"
            )
        tau = _star_generator_solve(chain.n, params)
        return float(tau[2 * init.infected_leaves + int(init.center_infected)])
    raise ValidationError(f"unsupported chain type {type(chain).__name__}")


def expected_survival_clique_recursive(n: int, params: ProcessParams, init: int) -> float:
    """Same quantity as the dense solve on a clique, via the one-pass
    birth-death recursion. Kept as an independent route: descent[k] is
    the expected time to go from k infected to k-1, built top down."""
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"clique size must be an integer >= 1, got {n!r}")
    if not isinstance(init, int) or not (0 <= init <= n):
        raise ValidationError(f"initial infected count {init!r} out of range 0..{n}")
    descent = np.zeros(n + 1)
    for k in range(n, 0, -1):
        up = infection_rate(params, k) * (n - k) if k < n else 0.0
        nxt = descent[k + 1] if k < n else 0.0
        descent[k] = (1.0 + up * nxt) / k
    return float(math.fsum(descent[1 : init + 1]))


def max_exponential_expectation(n: int, lam: float) -> float:
    """Expected maximum of n independent rate-lam exponentials: H_n/lam."""
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"count must be an integer >= 1, got {n!r}")
    if not (lam > 0):
        raise ValidationError(f"rate must be positive, got {lam!r}")
    return math.fsum(1.0 / k for k in range(1, n + 1)) / lam


_THRESHOLD_KINDS = ("clique", "star")
_THRESHOLD_SIDES = ("fast", "slow")


def threshold_lambda(topology_kind: str, n: int, alpha: float, side: str) -> float:
    """Boundary value of the infection coefficient separating fast
    extinction (below `fast`) from long survival (above `slow`).

    Natural logarithm throughout; the asymptotic statements behind these
    boundaries are base-independent, so a fixed base just makes the
    numbers reproducible.
    """
    if topology_kind not in _THRESHOLD_KINDS:
        raise ValidationError(f"topology kind must be one of {_THRESHOLD_KINDS}, got {topology_kind!r}")
    if side not in _THRESHOLD_SIDES:
        raise ValidationError(f"side must be one of {_THRESHOLD_SIDES}, got {side!r}")
    if not isinstance(n, int) or n < 2:
        raise ValidationError(f"threshold formulas need an integer n >= 2, got {n!r}")
    if alpha <= -1:
        raise ValidationError(f"infection exponent must be > -1, got {alpha!r}")
    if topology_kind == "clique":
        if alpha == 0:
            return 1.0 / n
        if alpha < 0:
            if side == "fast":
                return 1.0 / n
            return math.log(n) ** (-alpha) / n
        if side == "fast":
            return n ** (-1.0 - alpha)
        return n ** (-1.0 - alpha) * math.log(n) ** alpha
    exponent = -0.5 - alpha / (2.0 * (2.0 + alpha))
    base = n ** exponent
    if side == "fast":
        return base
    return base * math.log(n) ** (4.0 / (2.0 + alpha))


@dataclass(frozen=True)
class RegimeBoundary:
    """Pair of boundary curves for one topology kind and exponent."""

    topology_kind: str
    alpha: float
    fast_boundary: Callable[[int], float]
    slow_boundary: Callable[[int], float]


def regime_boundary(topology_kind: str, alpha: float) -> RegimeBoundary:
    threshold_lambda(topology_kind, 2, alpha, "fast")  # validate inputs once
    return RegimeBoundary(
        topology_kind,
        alpha,
        fast_boundary=lambda n: threshold_lambda(topology_kind, n, alpha, "fast"),
        slow_boundary=lambda n: threshold_lambda(topology_kind, n, alpha, "slow"),
    )
