import math
from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy import stats
from scipy.special import comb

from app.exceptions import DegenerateDataError, DomainError
from app.logger import logger
from app.rng import RACES, make_rng

METHODS = ("negative_binomial", "poisson")
# walks that drift this far below the tie line are counted as lost
WALK_CUTOFF_PROBABILITY = 1e-9


def _check_domain(q: float, delta_h: int) -> None:
    if not 0.0 <= q < 0.5:
        raise DomainError(f"adversary fraction q must lie in [0, 0.5), got {q}")
    if delta_h < 0:
        raise DomainError(f"confirmation depth must be >= 0, got {delta_h}")


def _negative_binomial_catch_up(q: float, n: int) -> float:
    p = 1.0 - q
    # attacker blocks found while the honest chain mines n are NegBin(n, p);
    # from a deficit of n - m the attacker ties with probability (q/p)^(n-m)
    m = np.arange(n + 1)
    behind = float(np.sum(comb(m + n - 1, m) * p**m * q**n))
    ahead = float(stats.nbinom.sf(n, n, p))
    return min(1.0, behind + ahead)


def _poisson_catch_up(q: float, n: int) -> float:
    p = 1.0 - q
    lam = n * q / p
    k = np.arange(n + 1)
    behind = float(np.sum(stats.poisson.pmf(k, lam) * (q / p) ** (n - k)))
    ahead = float(stats.poisson.sf(n, lam))
    return min(1.0, behind + ahead)


def reorg_probability_bound(q: float, delta_h: int, method: str = "negative_binomial") -> float:
    """Probability that an attacker with hashrate fraction q ever catches up
    from ``delta_h`` confirmations behind.

    ``negative_binomial`` is the exact catch-up form; ``poisson`` is the
    classic approximation that treats attacker progress as Poisson.
    """
    _check_domain(q, delta_h)
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}, expected one of {METHODS}")
    if delta_h == 0:
        return 1.0
    if q == 0.0:
        return 0.0
    if method == "poisson":
        return _poisson_catch_up(q, delta_h)
    return _negative_binomial_catch_up(q, delta_h)


def finality_probability(q: float, delta_h: int, method: str = "negative_binomial") -> float:
    return 1.0 - reorg_probability_bound(q, delta_h, method)


class RaceResult(BaseModel):
    """Outcome of a batch of attacker-vs-honest races at one depth"""

    q: float
    delta_h: int
    races: int
    reversals: int

    @property
    def frequency(self) -> float:
        return self.reversals / self.races

    @property
    def standard_error(self) -> float:
        f = self.frequency
        return math.sqrt(f * (1.0 - f) / self.races)


def simulate_reorg_races(q: float, delta_h: int, races: int, seed: int) -> RaceResult:
    """Monte Carlo catch-up oracle.

    The attacker's head start is drawn while the honest chain mines
    ``delta_h`` blocks; the remaining deficit then follows a +/-1 walk that
    succeeds on reaching a tie.
    """
    _check_domain(q, delta_h)
    if races < 1:
        raise DomainError(f"races must be >= 1, got {races}")
    rng = make_rng(seed, RACES, delta_h)
    if delta_h == 0:
        return RaceResult(q=q, delta_h=delta_h, races=races, reversals=races)
    if q == 0.0:
        return RaceResult(q=q, delta_h=delta_h, races=races, reversals=0)

    p = 1.0 - q
    attacker = rng.negative_binomial(delta_h, p, size=races)
    deficit = np.maximum(delta_h - attacker, 0).astype(np.int64)
    cutoff = delta_h + math.ceil(math.log(WALK_CUTOFF_PROBABILITY) / math.log(q / p))

    won = deficit == 0
    active = np.flatnonzero(~won)
    while active.size:
        step = np.where(rng.random(active.size) < q, -1, 1)
        deficit[active] += step
        caught = deficit[active] == 0
        won[active[caught]] = True
        active = active[~caught & (deficit[active] < cutoff)]
    return RaceResult(q=q, delta_h=delta_h, races=races, reversals=int(won.sum()))


class InertiaFit(BaseModel):
    """Log-linear fit of reversal frequency against confirmation depth"""

    rate: float = Field(..., description="Decay rate lambda; positive when reversals decay")
    intercept: float
    r_squared: float
    dropped: int = Field(0, description="Zero-frequency points left out of the fit")

    def predict(self, delta_h: float) -> float:
        return math.exp(self.intercept - self.rate * delta_h)


def fit_inertia_rate(empirical: Sequence[Tuple[float, float]]) -> InertiaFit:
    """Fit freq ~ exp(a - lambda * delta_h) by least squares on log-frequency."""
    points: List[Tuple[float, float]] = []
    dropped = 0
    for delta_h, freq in empirical:
        if freq < 0 or freq > 1:
            raise DegenerateDataError(f"frequency {freq} at depth {delta_h} is not a probability")
        if freq == 0:
            dropped += 1
            continue
        points.append((float(delta_h), float(freq)))
    if dropped:
        logger.warning(f"fit_inertia_rate dropped {dropped} zero-frequency point(s)")
    if len(points) < 3:
        raise DegenerateDataError(f"need >= 3 positive-frequency points, got {len(points)}")

    x = np.array([p[0] for p in points])
    y = np.log(np.array([p[1] for p in points]))
    if np.ptp(y) == 0:
        raise DegenerateDataError("all frequencies are equal; no decay to fit")
    if np.ptp(x) == 0:
        raise DegenerateDataError("all points share one depth")

    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    total = y - y.mean()
    r_squared = 1.0 - float(residual @ residual) / float(total @ total)
    return InertiaFit(rate=float(-slope), intercept=float(intercept), r_squared=r_squared, dropped=dropped)
