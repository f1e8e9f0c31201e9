"""Long-run average net reward of an appointment queue.

For a window K the clinic earns

    T(K) = lam * sum_{j<K} Pi_j q_j  +  ancillary  -  lam * theta * Pi_K

and, when capacity is bought beyond the regular level M, pays the overtime
cost a * ((mu - M)^+)^2.

Two ancillary bases are supported:

``unused`` (default)
    xi per unit of capacity not consumed by a patient who shows up, i.e.
    xi * (mu - lam * sum Pi_j q_j).  The server is free both when the clinic
    is empty and during a no-show slot.
``empty``
    xi * mu * Pi_0, revenue only while nobody is booked.

With q == 1 the two coincide, because lam * (1 - Pi_K) = mu * (1 - Pi_0).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .queues import DEFAULT_TRUNCATION, StationaryDistribution, infinite_distribution
from .showup import ShowupModel

ANCILLARY_BASES = ("unused", "empty")


@dataclass(frozen=True)
class EconomicParams:
    theta: float = 0.0
    xi: float = 0.0
    overtime_a: float = 0.0
    regular_capacity: float = 20.0
    ancillary_basis: str = "unused"

    def __post_init__(self):
        if self.theta < 0 or self.xi < 0 or self.overtime_a < 0:
            raise ValueError("theta, xi and overtime_a must be non-negative")
        if self.regular_capacity <= 0:
            raise ValueError("regular_capacity must be positive")
        if self.ancillary_basis not in ANCILLARY_BASES:
            raise ValueError(f"unknown ancillary basis {self.ancillary_basis!r}")


@dataclass(frozen=True)
class RewardBreakdown:
    """Per-day reward components.

    ``idle_fraction`` is Pi_0 and ``unused_capacity`` is mu minus the rate of
    shows, kept so either ancillary basis can be audited after the fact.
    """

    visit_revenue: float
    ancillary_revenue: float
    rejection_cost: float
    overtime_cost: float
    total: float
    idle_fraction: float = float("nan")
    unused_capacity: float = float("nan")
    truncation_error: float = 0.0


def overtime_cost(mu, econ: EconomicParams):
    if mu <= 0:
        raise ValueError("service rate must be positive")
    return econ.overtime_a * max(mu - econ.regular_capacity, 0.0) ** 2


def _assemble(lam, mu, visit, idle, blocking, econ, overtime=0.0, trunc=0.0):
    unused = mu - visit
    if econ.ancillary_basis == "unused":
        ancillary = econ.xi * unused
    else:
        ancillary = econ.xi * mu * idle
    rejection = lam * econ.theta * blocking
    total = visit + ancillary - rejection - overtime
    return RewardBreakdown(visit, ancillary, rejection, overtime, total,
                           idle, unused, trunc)


def reward_from_probs(probs, lam, mu, q, econ: EconomicParams, overtime=0.0):
    """Reward for a finite window given Pi_0..Pi_K and q_0..q_{K-1} as arrays."""
    visit = lam * float(np.dot(probs[:-1], q[: len(probs) - 1]))
    return _assemble(lam, mu, visit, float(probs[0]), float(probs[-1]), econ, overtime)


def net_reward(dist: StationaryDistribution, econ: EconomicParams,
               showup: ShowupModel, include_overtime=False) -> RewardBreakdown:
    """T(K) for a finite-capacity distribution."""
    spec = dist.spec
    if not spec.bounded:
        raise ValueError("net_reward needs a finite-capacity distribution")
    K = spec.capacity
    q = showup.at_positions(np.arange(K), spec.mu)
    ot = overtime_cost(spec.mu, econ) if include_overtime else 0.0
    return reward_from_probs(dist.probs, spec.lam, spec.mu, q, econ, ot)


def net_reward_infinite(lam, mu, econ: EconomicParams, showup: ShowupModel,
                        service_law="exponential",
                        truncation_tolerance=DEFAULT_TRUNCATION,
                        include_overtime=False) -> RewardBreakdown:
    """T(inf): no window, so nothing is rejected.

    The visit sum runs over the truncated distribution; the neglected tail is
    bounded by lam * tail_mass * max q, reported as ``truncation_error``.
    """
    if mu <= 0:
        raise ValueError("service rate must be positive")
    ot = overtime_cost(mu, econ) if include_overtime else 0.0
    if lam == 0:
        return _assemble(0.0, mu, 0.0, 1.0, 0.0, econ, ot)
    dist = infinite_distribution(lam, mu, service_law, truncation_tolerance)
    return reward_infinite_from_dist(dist, econ, showup, ot)


def reward_infinite_from_dist(dist: StationaryDistribution, econ, showup, overtime=0.0):
    spec = dist.spec
    n = len(dist.probs)
    q = showup.at_positions(np.arange(n), spec.mu)
    visit = spec.lam * float(np.dot(dist.probs, q))
    trunc = spec.lam * dist.tail_mass * showup.upper_bound()
    # idle fraction of any stable single-server queue is 1 - rho
    return _assemble(spec.lam, spec.mu, visit, 1.0 - spec.rho, 0.0, econ, overtime, trunc)


def service_level(dist_infinite: StationaryDistribution, k_star):
    """P(at most k_star patients in the unbounded system); None means no window."""
    if dist_infinite.spec.bounded:
        raise ValueError("service_level expects an unbounded-queue distribution")
    if k_star is None:
        return 1.0
    if k_star < 0:
        raise ValueError("k_star must be non-negative")
    return min(dist_infinite.cdf(k_star), 1.0)

