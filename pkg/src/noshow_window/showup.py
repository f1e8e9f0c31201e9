"""Delay-dependent show-up probability functions.

Three families are supported:

* ``kopach``       q(d) = 1 - p * (1 - 0.5 * exp(-0.017 d))
* ``exponential``  q(d) = 0.5 * exp(-0.017 d)   (the pure-exponential variant)
* ``saturating``   q(d) = q_min + (q_max - q_min) * exp(-c d)

``d`` is the appointment delay in days. A queue position ``j`` is turned into
a delay either as ``d = j`` (``slots``) or as ``d = j / mu`` (``slots-over-mu``,
the backlog cleared at ``mu`` patients per day).
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

KOPACH_HALF = 0.5
KOPACH_DECAY = 0.017

FAMILIES = ("kopach", "exponential", "saturating")
DELAY_MAPS = ("slots", "slots-over-mu")


def _check_delay(d):
    d = np.asarray(d, dtype=float)
    if np.any(d < 0) or np.any(np.isnan(d)):
        raise ValueError("delay must be non-negative")
    return d


def _unwrap(x):
    return float(x) if np.ndim(x) == 0 else x


def showup_kopach(p, d, half=KOPACH_HALF, decay=KOPACH_DECAY):
    """Kopach show-up probability for estimated no-show rate ``p``.

    Accepts scalar or array delays; the result lies in ``[1 - p, 1 - half*p]``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"no-show rate p={p} outside [0, 1]")
    if decay <= 0:
        raise ValueError("decay must be positive")
    d = _check_delay(d)
    return _unwrap(1.0 - p * (1.0 - half * np.exp(-decay * d)))


def showup_pure_exponential(d, half=KOPACH_HALF, decay=KOPACH_DECAY):
    if decay <= 0:
        raise ValueError("decay must be positive")
    d = _check_delay(d)
    return _unwrap(half * np.exp(-decay * d))


def showup_saturating(q_min, q_max, c, d):
    """Exponential decay from ``q_max`` at zero delay towards ``q_min``."""
    if not 0.0 <= q_min <= q_max <= 1.0:
        raise ValueError(f"need 0 <= q_min <= q_max <= 1, got {q_min}, {q_max}")
    if c <= 0:
        raise ValueError("decay coefficient c must be positive")
    d = _check_delay(d)
    return _unwrap(q_min + (q_max - q_min) * np.exp(-c * d))


@dataclass(frozen=True)
class ShowupModel:
    """A show-up function together with its position-to-delay mapping.

    ``position_offset`` shifts the position before the delay map is applied
    (0 evaluates q at the number of patients found on arrival, 1 at the
    position the new patient takes).
    """

    family: str
    noshow_base_p: float = 0.0
    decay_coeff: float = KOPACH_DECAY
    q_min: float = 0.0
    q_max: float = 1.0
    half: float = KOPACH_HALF
    delay_map: str = "slots-over-mu"
    position_offset: int = 0
    label: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown show-up family {self.family!r}")
        if self.delay_map not in DELAY_MAPS:
            raise ValueError(f"unknown delay map {self.delay_map!r}")
        if self.decay_coeff <= 0:
            raise ValueError("decay_coeff must be positive")
        if not 0.0 <= self.noshow_base_p <= 1.0:
            raise ValueError("noshow_base_p must lie in [0, 1]")
        if not 0.0 <= self.q_min <= self.q_max <= 1.0:
            raise ValueError("need 0 <= q_min <= q_max <= 1")
        if not 0.0 <= self.half <= 1.0:
            raise ValueError("half must lie in [0, 1]")
        if self.position_offset < 0:
            raise ValueError("position_offset must be non-negative")

    @classmethod
    def kopach(cls, p, **kw):
        kw.setdefault("label", f"K{p:g}")
        return cls("kopach", noshow_base_p=p, **kw)

    @classmethod
    def exponential(cls, **kw):
        kw.setdefault("label", "Exp")
        return cls("exponential", **kw)

    @classmethod
    def saturating(cls, q_min, q_max, c, **kw):
        kw.setdefault("label", "Sat")
        return cls("saturating", q_min=q_min, q_max=q_max, decay_coeff=c, **kw)

    @classmethod
    def constant(cls, q=1.0, **kw):
        """Delay-insensitive show-up, handy for degenerate checks."""
        kw.setdefault("label", f"const{q:g}")
        return cls("saturating", q_min=q, q_max=q, **kw)

    @property
    def name(self):
        return self.label or self.family

    def with_delay_map(self, delay_map):
        return replace(self, delay_map=delay_map)

    def at_delay(self, d):
        if self.family == "kopach":
            return showup_kopach(self.noshow_base_p, d, self.half, self.decay_coeff)
        if self.family == "exponential":
            return showup_pure_exponential(d, self.half, self.decay_coeff)
        return showup_saturating(self.q_min, self.q_max, self.decay_coeff, d)

    def delays(self, j, mu):
        if mu <= 0:
            raise ValueError("service rate mu must be positive")
        j = np.asarray(j, dtype=float) + self.position_offset
        if np.any(j < 0):
            raise ValueError("queue position must be non-negative")
        return j if self.delay_map == "slots" else j / mu

    def at_positions(self, j, mu):
        """Vector of q_j for integer positions ``j`` at service rate ``mu``."""
        return np.asarray(self.at_delay(self.delays(j, mu)), dtype=float)

    def upper_bound(self):
        """Largest value the function can take (its value at zero delay)."""
        return float(self.at_delay(0.0))


def showup_at_position(model: ShowupModel, j, mu):
    """Show-up probability for a patient booked with ``j`` patients ahead."""
    if np.ndim(j) == 0 and (int(j) != j or j < 0):
        raise ValueError("queue position must be a non-negative integer")
    return _unwrap(model.at_positions(j, mu))
