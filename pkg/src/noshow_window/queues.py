"""Stationary occupancy of M/M/1/K, M/D/1/K and their unbounded limits.

Deterministic service is handled through the chain embedded at departure
epochs.  With Poisson arrivals, a_n = P(n arrivals during one service of
length 1/mu) = e^{-rho} rho^n / n!.  A departure from state i >= 1 leaves
i - 1 + n behind (capped at K - 1); a departure from 0 leaves n.

Departure-epoch probabilities pi_0..pi_{K-1} are converted to time averages
with the standard M/G/1/K relations (Gross & Harris, *Fundamentals of
Queueing Theory*, M/G/1/K section; also Takagi, *Queueing Analysis* vol. 2):

    Pi_j = pi_j / (pi_0 + rho),        j = 0..K-1
    Pi_K = 1 - 1 / (pi_0 + rho)

For the unbounded M/D/1 queue departure and time averages coincide.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

EXPONENTIAL = "exponential"
DETERMINISTIC = "deterministic"
SERVICE_LAWS = (EXPONENTIAL, DETERMINISTIC)

UNIFORM_BAND = 1e-9
RESIDUAL_LIMIT = 1e-10
DEFAULT_TRUNCATION = 1e-12
MAX_LEVELS = 2_000_000


class InstabilityError(ValueError):
    """Raised when an unbounded queue is requested with lambda >= mu."""


class NumericalError(RuntimeError):
    """Raised when a linear solve fails its residual check."""


@dataclass(frozen=True)
class QueueSpec:
    lam: float
    mu: float
    capacity: int | None = None  # None means unbounded
    service_law: str = EXPONENTIAL

    def __post_init__(self):
        _check_rates(self.lam, self.mu)
        if self.service_law not in SERVICE_LAWS:
            raise ValueError(f"unknown service law {self.service_law!r}")
        if self.capacity is None:
            if self.lam >= self.mu:
                raise InstabilityError(
                    f"unbounded queue needs lam < mu (lam={self.lam}, mu={self.mu})")
        elif int(self.capacity) != self.capacity or self.capacity < 1:
            raise ValueError("capacity must be a positive integer or None")

    @property
    def rho(self):
        return self.lam / self.mu

    @property
    def bounded(self):
        return self.capacity is not None


@dataclass(frozen=True)
class StationaryDistribution:
    """Time-stationary probabilities Pi_0..Pi_n.

    For unbounded queues ``probs`` stops at ``truncation_level`` and
    ``tail_mass`` is the probability left beyond it.
    """

    probs: np.ndarray = field(repr=False)
    spec: QueueSpec
    truncation_level: int | None = None
    tail_mass: float = 0.0

    def __post_init__(self):
        self.probs.setflags(write=False)

    def __len__(self):
        return len(self.probs)

    def __getitem__(self, j):
        return self.probs[j]

    @property
    def capacity(self):
        return self.spec.capacity

    @property
    def idle(self):
        return float(self.probs[0])

    @property
    def blocking(self):
        """Pi_K, which by PASTA is also the rejection probability."""
        return float(self.probs[-1]) if self.spec.bounded else 0.0

    def mean(self):
        return float(np.dot(np.arange(len(self.probs)), self.probs))

    def cdf(self, k):
        return float(np.sum(self.probs[: int(k) + 1]))

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("j,prob\n")
            for j, p in enumerate(self.probs):
                fh.write(f"{j},{p:.17g}\n")


def _check_rates(lam, mu):
    if not (lam > 0 and mu > 0) or not (math.isfinite(lam) and math.isfinite(mu)):
        raise ValueError(f"rates must be positive and finite (lam={lam}, mu={mu})")


# ---------------------------------------------------------------- M/M/1/K

def mm1k_probs(lam, mu, K):
    """Truncated-geometric occupancy of M/M/1/K as a plain array."""
    _check_rates(lam, mu)
    rho = lam / mu
    if abs(rho - 1.0) < UNIFORM_BAND:
        return np.full(K + 1, 1.0 / (K + 1))
    logw = np.arange(K + 1) * math.log(rho)
    w = np.exp(logw - logw.max())
    return w / w.sum()


def mm1k_distribution(spec: QueueSpec) -> StationaryDistribution:
    if not spec.bounded:
        raise ValueError("mm1k_distribution needs a finite capacity")
    return StationaryDistribution(mm1k_probs(spec.lam, spec.mu, spec.capacity), spec)


def mm1_distribution(lam, mu, truncation_tolerance=DEFAULT_TRUNCATION):
    """Geometric M/M/1 occupancy cut where the tail mass rho^(n+1) < tol."""
    spec = QueueSpec(lam, mu, None, EXPONENTIAL)
    rho = spec.rho
    n = max(int(math.ceil(math.log(truncation_tolerance) / math.log(rho))) - 1, 0)
    probs = (1.0 - rho) * rho ** np.arange(n + 1)
    return StationaryDistribution(probs, spec, truncation_level=n,
                                  tail_mass=rho ** (n + 1))


# ---------------------------------------------------------------- M/D/1/K

def poisson_terms(rho, n):
    """a_0..a_{n-1}, evaluated in log space."""
    k = np.arange(n)
    return np.exp(-rho + k * math.log(rho) - gammaln(k + 1))


def poisson_tails(rho, n):
    """abar_k = P(N >= k) for k = 0..n-1."""
    return poisson.sf(np.arange(n) - 1, rho)


def embedded_transition_matrix(lam, mu, K):
    """Departure-epoch transition matrix of M/D/1/K on states 0..K-1."""
    rho = lam / mu
    a = poisson_terms(rho, K)
    abar = poisson_tails(rho, K + 1)
    i = np.arange(K)[:, None]
    base = np.maximum(i - 1, 0)
    n = np.arange(K)[None, :] - base
    P = np.where(n >= 0, a[np.clip(n, 0, K - 1)], 0.0)
    P[:, K - 1] = abar[(K - 1) - base[:, 0]]
    return P


def departure_to_time_average(pi_dep, rho):
    """Convert departure-epoch probabilities to time averages (see module doc)."""
    denom = pi_dep[0] + rho
    # in light traffic Pi_K is below the rounding floor and can come out -1e-16
    return np.append(pi_dep / denom, max(1.0 - 1.0 / denom, 0.0))


def md1k_distribution(spec: QueueSpec) -> StationaryDistribution:
    """M/D/1/K occupancy from a dense solve of the embedded chain."""
    if not spec.bounded:
        raise ValueError("md1k_distribution needs a finite capacity")
    K = spec.capacity
    P = embedded_transition_matrix(spec.lam, spec.mu, K)
    A = P.T - np.eye(K)
    A[-1, :] = 1.0
    b = np.zeros(K)
    b[-1] = 1.0
    pi = np.linalg.solve(A, b)
    residual = np.max(np.abs(pi @ P - pi)) if K > 1 else 0.0
    if not np.isfinite(residual) or residual > RESIDUAL_LIMIT:
        raise NumericalError(f"embedded-chain residual {residual:.3e} too large")
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    return StationaryDistribution(departure_to_time_average(pi, spec.rho), spec)


def _cut_recursion(rho, n_levels, stop_tail=None):
    """Unnormalised departure-epoch vector by cut balance.

    Flow up across the cut between levels j-1 and j equals flow down:

        pi_j a_0 = pi_0 abar_j + sum_{i=1}^{j-1} pi_i abar_{j-i+1}

    Every term is non-negative, so the recursion is stable. Capping at K-1
    only redirects upward jumps, so the same vector (normalised over 0..K-1)
    is the M/D/1/K embedded solution for every K <= n_levels.

    With ``stop_tail`` set (rho < 1, pi_0 = 1 - rho), levels are added until
    the geometric tail estimate pi_j r / (1 - r), r = pi_j / pi_{j-1}, drops
    below it.  The tail decays geometrically, so the estimate is sharp once
    r has settled; a running 1 - sum test would stall at the rounding floor
    of 1 - rho.
    """
    if stop_tail is not None:
        n_levels = MAX_LEVELS
    chunk = 4096 if stop_tail is not None else n_levels + 1
    abar = poisson_tails(rho, chunk + 1)
    a0 = math.exp(-rho)
    x = np.empty(min(n_levels, chunk))
    x[0] = 1.0 - rho if stop_tail is not None else 1.0
    mean = rho + rho * rho / (2.0 * (1.0 - rho)) if stop_tail is not None else 0.0
    j = 1
    while j < n_levels:
        if j >= len(x):
            x = np.concatenate([x, np.empty(len(x))])
            abar = poisson_tails(rho, len(x) + 1)
        s = x[0] * abar[j] + np.dot(x[1:j], abar[j:1:-1])
        x[j] = s / a0
        if stop_tail is not None:
            if j > mean and j > 2:
                r = x[j] / x[j - 1]
                if r < 1.0:
                    tail = x[j] * r / (1.0 - r)
                    if tail < stop_tail:
                        return x[: j + 1], tail
        elif x[j] > 1e200:
            x[: j + 1] /= x[j]
        j += 1
    if stop_tail is not None:
        raise NumericalError("M/D/1 truncation did not converge")
    return x[:n_levels], None


def md1k_recursive(spec: QueueSpec) -> StationaryDistribution:
    """M/D/1/K occupancy from the cut-balance recursion (O(K^2))."""
    if not spec.bounded:
        raise ValueError("md1k_recursive needs a finite capacity")
    x, _ = _cut_recursion(spec.rho, spec.capacity)
    return StationaryDistribution(departure_to_time_average(x / x.sum(), spec.rho), spec)


def md1_distribution(lam, mu, truncation_tolerance=DEFAULT_TRUNCATION):
    """Unbounded M/D/1 occupancy, truncated once the tail mass < tolerance."""
    spec = QueueSpec(lam, mu, None, DETERMINISTIC)
    x, tail = _cut_recursion(spec.rho, None, stop_tail=truncation_tolerance)
    return StationaryDistribution(x, spec, truncation_level=len(x) - 1,
                                  tail_mass=max(tail, 0.0))


# ---------------------------------------------------------------- dispatch

def distribution(spec: QueueSpec, truncation_tolerance=DEFAULT_TRUNCATION):
    if spec.bounded:
        if spec.service_law == EXPONENTIAL:
            return mm1k_distribution(spec)
        return md1k_distribution(spec)
    if spec.service_law == EXPONENTIAL:
        return mm1_distribution(spec.lam, spec.mu, truncation_tolerance)
    return md1_distribution(spec.lam, spec.mu, truncation_tolerance)


def infinite_distribution(lam, mu, service_law, truncation_tolerance=DEFAULT_TRUNCATION):
    return distribution(QueueSpec(lam, mu, None, service_law), truncation_tolerance)


class WindowFamily:
    """Occupancy distributions for many capacities at fixed (lam, mu, law).

    One pass of the cut recursion serves every K up to ``k_max`` for
    deterministic service; exponential service uses the closed form.
    """

    def __init__(self, lam, mu, service_law, k_max):
        _check_rates(lam, mu)
        if service_law not in SERVICE_LAWS:
            raise ValueError(f"unknown service law {service_law!r}")
        self.lam, self.mu, self.law, self.k_max = lam, mu, service_law, int(k_max)
        self._x = None
        if service_law == DETERMINISTIC:
            self._x, _ = _cut_recursion(lam / mu, self.k_max)

    def probs(self, K):
        if K > self.k_max or K < 1:
            raise ValueError(f"capacity {K} outside 1..{self.k_max}")
        if self.law == EXPONENTIAL:
            return mm1k_probs(self.lam, self.mu, K)
        x = self._x[:K]
        return departure_to_time_average(x / x.sum(), self.lam / self.mu)

    def __call__(self, K):
        spec = QueueSpec(self.lam, self.mu, int(K), self.law)
        return StationaryDistribution(self.probs(K), spec)
