"""Grid search for the optimal scheduling window and its efficiency gains."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .queues import DEFAULT_TRUNCATION, InstabilityError, WindowFamily
from .reward import EconomicParams, net_reward_infinite, reward_from_probs
from .showup import ShowupModel

REFERENCES = ("infinite", "cap")


class UndefinedComparisonError(ValueError):
    """Raised when a window comparison involves an unbounded optimum."""


@dataclass
class WindowSearchResult:
    """Outcome of a window search.

    ``k_star`` is None when no finite window beats the reference reward
    (``t_reference``) by more than the declaration tolerance.  ``k_best`` and
    ``t_best`` always hold the best grid point, so both readings of an
    unbounded cell (search hit the cap vs. T never rises above T(inf)) stay
    available.
    """

    k_star: int | None
    t_at_k_star: float
    t_at_infinity: float
    t_at_cap: float
    reference: str
    k_best: int
    t_best: float
    trace: list = field(default_factory=list, repr=False)
    lam: float = float("nan")
    mu: float = float("nan")
    service_law: str = ""
    tolerance: float = 1e-12

    @property
    def unbounded(self):
        return self.k_star is None

    @property
    def t_reference(self):
        return self.t_at_cap if self.reference == "cap" else self.t_at_infinity


def k_grid(k_min=20, k_max=2000, k_step=20):
    if k_step < 1 or k_min < 1 or k_max < k_min:
        raise ValueError("need k_step >= 1 and k_max >= k_min >= 1")
    return np.arange(k_min, k_max + 1, k_step)


def reward_trace(service_law, lam, mu, econ, showup, ks, family=None):
    """T(K) for every K in ``ks`` (one queue solve shared across the grid)."""
    ks = np.asarray(ks, dtype=int)
    k_top = int(ks.max())
    if family is None:
        family = WindowFamily(lam, mu, service_law, k_top)
    q = showup.at_positions(np.arange(k_top), mu)
    return np.array([reward_from_probs(family.probs(int(K)), lam, mu, q, econ).total
                     for K in ks])


def optimal_window(service_law, lam, mu, econ: EconomicParams, showup: ShowupModel,
                   k_min=20, k_max=2000, k_step=20, infinity_tolerance=1e-12,
                   reference="infinite", truncation_tolerance=DEFAULT_TRUNCATION,
                   family=None) -> WindowSearchResult:
    """Maximise T(K) over ``k_min..k_max`` in steps of ``k_step``.

    The window is declared unbounded when the reference reward comes within
    ``infinity_tolerance`` (relative) of the best grid value.  The reference
    is the analytic no-window reward (``"infinite"``) or T at ``k_max``
    (``"cap"``).  Ties go to the smallest K.
    """
    if reference not in REFERENCES:
        raise ValueError(f"reference must be one of {REFERENCES}")
    ks = k_grid(k_min, k_max, k_step)
    if ks[-1] != k_max:
        ks = np.append(ks, k_max)
    if family is None:
        family = WindowFamily(lam, mu, service_law, k_max)
    ts = reward_trace(service_law, lam, mu, econ, showup, ks, family)
    i = int(np.argmax(ts))  # first maximum, i.e. smallest K
    k_best, t_best = int(ks[i]), float(ts[i])
    t_cap = float(ts[-1])

    if lam < mu:
        t_inf = net_reward_infinite(lam, mu, econ, showup, service_law,
                                    truncation_tolerance).total
    else:
        t_inf = float("nan")
        if reference == "infinite":
            raise InstabilityError(
                f"cannot compare against an unbounded window with lam={lam} >= mu={mu}")

    t_ref = t_cap if reference == "cap" else t_inf
    if t_ref >= t_best - infinity_tolerance * abs(t_ref):
        k_star, t_star = None, t_ref
    else:
        k_star, t_star = k_best, t_best
    return WindowSearchResult(k_star, t_star, t_inf, t_cap, reference, k_best, t_best,
                              list(zip(ks.tolist(), ts.tolist())), lam, mu, service_law,
                              infinity_tolerance)


def efficiency_gain_vs_infinite(result: WindowSearchResult):
    """Percent improvement of T(K*) over the no-window reward."""
    t_ref = result.t_reference
    if not t_ref > 0:
        raise ValueError(f"reference reward must be positive, got {t_ref}")
    if result.unbounded:
        return 0.0
    return 100.0 * (result.t_at_k_star - t_ref) / t_ref


def efficiency_gain_md_vs_mm(t_of, k_star_d, k_star_m, denominator="reward"):
    """Percent reward lost in the M/D/1/K system by using the M/M/1/K window.

    ``t_of`` maps a window K to the M/D/1/K reward.  With
    ``denominator="window"`` the loss is divided by K*_D instead of
    T(K*_D), which is dimensionally odd but kept for literal comparisons.
    """
    if k_star_d is None or k_star_m is None:
        raise UndefinedComparisonError("both optima must be finite")
    if k_star_d == k_star_m:
        return 0.0
    t_d = t_of(k_star_d)
    loss = t_d - t_of(k_star_m)
    if denominator == "reward":
        return 100.0 * loss / t_d
    if denominator == "window":
        return 100.0 * loss / k_star_d
    raise ValueError("denominator must be 'reward' or 'window'")


def trace_is_consistent(result: WindowSearchResult):
    """Exhaustive check that the reported optimum dominates the trace."""
    ks = np.array([k for k, _ in result.trace])
    ts = np.array([t for _, t in result.trace])
    if result.unbounded:
        t_ref = result.t_reference
        return bool(t_ref >= ts.max() - result.tolerance * abs(t_ref))
    return bool(result.t_at_k_star >= ts.max()
                and result.k_star == int(ks[np.argmax(ts)]))
