"""Panel size (lam) and overbooking level (mu) optimisation.

``optimal_panel`` maximises the no-window reward

    lam * sum_j Pi_j(lam, mu) q_j + ancillary - a * ((mu - M)^+)^2

over lam < mu, with mu either fixed at M or searched.  ``joint_optimal`` adds
the window K to the search, with rejections priced at theta.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .queues import DEFAULT_TRUNCATION, WindowFamily, infinite_distribution
from .reward import EconomicParams, _assemble, overtime_cost, reward_from_probs, service_level
from .showup import ShowupModel
from .window import WindowSearchResult, efficiency_gain_vs_infinite, optimal_window

FIXED_MU, OPTIMIZE_MU, JOINT = "fixed-mu", "optimize-mu", "joint"


class EmptyGridError(ValueError):
    pass


@dataclass
class CapacitySearchResult:
    lam_star: float
    mu_star: float
    objective: float
    mode: str
    k_star: int | None = None
    trace: list = field(default_factory=list, repr=False)
    service_law: str = "exponential"


@dataclass
class EfficiencyReport:
    delta_e: float
    alpha: float
    window: WindowSearchResult
    capacity: CapacitySearchResult

    @property
    def k_star(self):
        return self.window.k_star


@lru_cache(maxsize=64)
def _cached_infinite(lam, mu, law, tol):
    return infinite_distribution(lam, mu, law, tol)


@lru_cache(maxsize=None)
def _visit_rate(lam, mu, law, showup, tol):
    # only a float per grid point, so searches that differ in econ share solves
    dist = infinite_distribution(lam, mu, law, tol)
    q = showup.at_positions(np.arange(len(dist.probs)), mu)
    return lam * float(np.dot(dist.probs, q))


def panel_objective(lam, mu, econ, showup, service_law="exponential",
                    truncation_tolerance=DEFAULT_TRUNCATION):
    """No-window reward net of overtime at (lam, mu)."""
    lam, mu = float(lam), float(mu)
    visit = _visit_rate(lam, mu, service_law, showup, truncation_tolerance)
    return _assemble(lam, mu, visit, 1.0 - lam / mu, 0.0, econ,
                     overtime_cost(mu, econ)).total


def _grid(lo, hi, step):
    n = int(np.floor((hi - lo) / step + 1e-9))
    return np.round(lo + step * np.arange(n + 1), 10)


def _best(trace):
    # largest objective, ties to the smallest (lam, mu, K)
    def key(row):
        k = row[2] if len(row) == 4 else None
        return (-row[-1], row[0], row[1], float("inf") if k is None else k)
    return min(trace, key=key)


def optimal_panel(service_law, econ: EconomicParams, showup: ShowupModel,
                  mu_values=None, lam_min=10.0, lam_steps=(0.1, 0.01, 0.001), lam_gap=None,
                  truncation_tolerance=DEFAULT_TRUNCATION) -> CapacitySearchResult:
    """Grid search for (lam*, mu*) with an unbounded window.

    For each mu the lam grid runs from ``lam_min`` to ``mu - lam_gap`` at
    ``lam_steps[0]``; every further step size re-grids one previous step
    either side of the incumbent.  ``mu_values`` defaults to the regular
    capacity alone (fixed-mu mode).
    """
    if mu_values is None:
        mu_values = [econ.regular_capacity]
    mode = FIXED_MU if len(mu_values) == 1 else OPTIMIZE_MU
    lam_steps = tuple(lam_steps)
    if lam_gap is None:
        lam_gap = lam_steps[-1]
    trace = []
    for mu in mu_values:
        lam_hi = mu - lam_gap
        if lam_hi < lam_min:
            continue
        lams = _grid(lam_min, lam_hi, lam_steps[0])
        rows = [(float(l), float(mu), panel_objective(l, mu, econ, showup, service_law,
                                                      truncation_tolerance)) for l in lams]
        for prev, step in zip(lam_steps, lam_steps[1:]):
            centre = _best(rows)[0]
            lo, hi = max(lam_min, centre - prev), min(lam_hi, centre + prev)
            seen = {r[0] for r in rows}
            for l in _grid(lo, hi, step):
                if float(l) not in seen:
                    rows.append((float(l), float(mu), panel_objective(
                        l, mu, econ, showup, service_law, truncation_tolerance)))
        trace.extend(rows)
    if not trace:
        raise EmptyGridError("no stable (lam, mu) pair on the grid")
    lam, mu, obj = _best(trace)
    return CapacitySearchResult(lam, mu, obj, mode, None, trace, service_law)


def levers_efficiency_report(capacity: CapacitySearchResult, econ: EconomicParams,
                             showup: ShowupModel, **window_kw) -> EfficiencyReport:
    """Gain from adopting the best window at (lam*, mu*), plus its service level."""
    law = capacity.service_law
    tol = window_kw.get("truncation_tolerance", DEFAULT_TRUNCATION)
    res = optimal_window(law, capacity.lam_star, capacity.mu_star, econ, showup, **window_kw)
    if res.unbounded:
        return EfficiencyReport(0.0, 1.0, res, capacity)
    dist = _cached_infinite(capacity.lam_star, capacity.mu_star, law, tol)
    return EfficiencyReport(efficiency_gain_vs_infinite(res),
                            service_level(dist, res.k_star), res, capacity)


def joint_optimal(service_law, econ: EconomicParams, showup: ShowupModel,
                  lam_values, mu_values, k_values, allow_overload=False,
                  truncation_tolerance=DEFAULT_TRUNCATION) -> CapacitySearchResult:
    """Exhaustive search over (lam, mu, K); ``None`` in ``k_values`` means no window.

    Finite windows admit lam >= mu only with ``allow_overload``.
    """
    finite = sorted(int(k) for k in k_values if k is not None)
    with_inf = any(k is None for k in k_values)
    trace = []
    for mu in mu_values:
        ot = overtime_cost(mu, econ)
        for lam in lam_values:
            lam, mu = float(lam), float(mu)
            stable = lam < mu
            if finite and (stable or allow_overload):
                fam = WindowFamily(lam, mu, service_law, finite[-1])
                q = showup.at_positions(np.arange(finite[-1]), mu)
                for K in finite:
                    t = reward_from_probs(fam.probs(K), lam, mu, q, econ, ot).total
                    trace.append((lam, mu, K, t))
            if with_inf and stable:
                trace.append((lam, mu, None, panel_objective(
                    lam, mu, econ, showup, service_law, truncation_tolerance)))
    if not trace:
        raise EmptyGridError("no feasible (lam, mu, K) triple on the grid")
    lam, mu, k, obj = _best(trace)
    return CapacitySearchResult(lam, mu, obj, JOINT, k, trace, service_law)


def sequential_value(capacity: CapacitySearchResult, econ, showup, **window_kw):
    """Reward net of overtime when (lam*, mu*) is fixed first and K* chosen after."""
    res = optimal_window(capacity.service_law, capacity.lam_star, capacity.mu_star,
                         econ, showup, **window_kw)
    return res.t_at_k_star - overtime_cost(capacity.mu_star, econ), res


def joint_gain_over_sequential(joint: CapacitySearchResult, sequential: float):
    return 100.0 * (joint.objective - sequential) / sequential
