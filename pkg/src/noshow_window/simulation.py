"""Discrete-event simulation of a booked-ahead single-server clinic.

Requests arrive as a Poisson stream.  A request that finds ``K`` patients in
the system is rejected; otherwise it joins the queue with ``j`` patients ahead
and shows up with probability q_j.  A no-show still holds its slot: the
backlog advances by one service time, earning no visit revenue.

The statistics are time averages over ``[warmup, horizon]`` with batch-means
standard errors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .queues import DETERMINISTIC, QueueSpec
from .reward import EconomicParams
from .showup import ShowupModel

UNBOUNDED_RING = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    spec: QueueSpec
    showup: ShowupModel
    econ: EconomicParams = field(default_factory=EconomicParams)
    horizon: float = 2e5
    warmup: float | None = None  # defaults to 10% of the horizon
    seed: int = 12345
    n_batches: int = 20

    def __post_init__(self):
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.warmup is not None and not 0 <= self.warmup < self.horizon:
            raise ValueError("need 0 <= warmup < horizon")
        if self.n_batches < 2:
            raise ValueError("need at least two batches")

    @property
    def warmup_time(self):
        return 0.1 * self.horizon if self.warmup is None else self.warmup


@dataclass
class SimResult:
    probs: np.ndarray
    probs_se: np.ndarray
    reward: float
    reward_se: float
    arrivals: int
    admitted: int
    rejected: int
    shows: int
    noshows: int
    observed_time: float

    @property
    def rejection_fraction(self):
        return self.rejected / self.arrivals if self.arrivals else 0.0

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("j,prob,se\n")
            for j, (p, s) in enumerate(zip(self.probs, self.probs_se)):
                fh.write(f"{j},{p:.17g},{s:.17g}\n")


@numba.njit(cache=True)
def _accumulate(occ, t0, t1, state, warmup, blen, nb):
    if t0 < warmup:
        t0 = warmup
    while t0 < t1:
        b = int((t0 - warmup) / blen)
        if b >= nb:
            break
        end = min(t1, warmup + (b + 1) * blen)
        occ[b, state] += end - t0
        t0 = end


@numba.njit(cache=True)
def _run(inter, service, uniform, q, K, horizon, warmup, nb):
    blen = (horizon - warmup) / nb
    occ = np.zeros((nb, K + 1))
    # per batch: arrivals, admitted, rejected, shows, noshow service time
    counts = np.zeros((nb, 5))
    ring = np.empty(K)
    head = 0
    n = 0
    tcur = 0.0
    last_dep = 0.0
    ta = 0.0
    for i in range(inter.shape[0]):
        ta += inter[i]
        if ta > horizon:
            break
        while n > 0 and ring[head] <= ta:
            _accumulate(occ, tcur, ring[head], n, warmup, blen, nb)
            tcur = ring[head]
            head = (head + 1) % K
            n -= 1
        _accumulate(occ, tcur, ta, n, warmup, blen, nb)
        tcur = ta
        b = -1
        if ta >= warmup:
            b = min(int((ta - warmup) / blen), nb - 1)
            counts[b, 0] += 1
        if n >= K:
            if b >= 0:
                counts[b, 2] += 1
            continue
        show = uniform[i] < q[n]
        start = ta if ta > last_dep else last_dep
        last_dep = start + service[i]
        ring[(head + n) % K] = last_dep
        n += 1
        if b >= 0:
            counts[b, 1] += 1
            if show:
                counts[b, 3] += 1
            else:
                counts[b, 4] += service[i]
    while n > 0 and ring[head] <= horizon:
        _accumulate(occ, tcur, ring[head], n, warmup, blen, nb)
        tcur = ring[head]
        head = (head + 1) % K
        n -= 1
    _accumulate(occ, tcur, horizon, n, warmup, blen, nb)
    return occ, counts


def _draws(rng, lam, mu, law, horizon):
    if lam == 0:
        return np.empty(0), np.empty(0), np.empty(0)
    chunks, total = [], 0.0
    size = int(lam * horizon + 10 * math.sqrt(lam * horizon) + 100)
    while total <= horizon:
        c = rng.exponential(1.0 / lam, size)
        chunks.append(c)
        total += c.sum()
        size = max(size // 10, 1000)
    inter = np.concatenate(chunks)
    n = len(inter)
    if law == DETERMINISTIC:
        service = np.full(n, 1.0 / mu)
    else:
        service = rng.exponential(1.0 / mu, n)
    return inter, service, rng.random(n)


def simulate(config: SimConfig) -> SimResult:
    """Run one replication; identical seeds give identical results."""
    spec = config.spec
    K = spec.capacity if spec.bounded else UNBOUNDED_RING
    rng = np.random.default_rng(config.seed)
    inter, service, uniform = _draws(rng, spec.lam, spec.mu, spec.service_law,
                                     config.horizon)
    q = config.showup.at_positions(np.arange(K), spec.mu)
    warmup = config.warmup_time
    nb = config.n_batches
    occ, counts = _run(inter, service, uniform, q, K, float(config.horizon),
                          float(warmup), nb)
    if not spec.bounded and occ[:, -1].sum() > 0:
        raise RuntimeError("unbounded simulation overflowed its buffer")

    blen = (config.horizon - warmup) / nb
    frac = occ / blen
    probs = frac.mean(axis=0)
    probs_se = frac.std(axis=0, ddof=1) / math.sqrt(nb)

    econ = config.econ
    idle = occ[:, 0]
    if econ.ancillary_basis == "unused":
        ancillary = econ.xi * spec.mu * (idle + counts[:, 4])
    else:
        ancillary = econ.xi * spec.mu * idle
    per_batch = (counts[:, 3] + ancillary - econ.theta * counts[:, 2]) / blen

    if not spec.bounded:
        last = int(np.max(np.nonzero(probs)[0])) if np.any(probs) else 0
        probs, probs_se = probs[: last + 1], probs_se[: last + 1]

    tot = counts.sum(axis=0)
    return SimResult(
        probs=probs,
        probs_se=probs_se,
        reward=float(per_batch.mean()),
        reward_se=float(per_batch.std(ddof=1) / math.sqrt(nb)),
        arrivals=int(tot[0]),
        admitted=int(tot[1]),
        rejected=int(tot[2]),
        shows=int(tot[3]),
        noshows=int(tot[1] - tot[3]),
        observed_time=config.horizon - warmup,
    )
