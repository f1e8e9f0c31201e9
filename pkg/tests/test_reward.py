import numpy as np
import pytest
from hypothesis import given, strategies as st

from noshow_window.queues import (DETERMINISTIC, EXPONENTIAL, InstabilityError, QueueSpec,
                                  distribution, infinite_distribution, mm1_distribution)
from noshow_window.reward import (EconomicParams, net_reward, net_reward_infinite,
                                  overtime_cost, reward_infinite_from_dist, service_level)
from noshow_window.showup import ShowupModel

ONE = ShowupModel.constant(1.0)
K2 = ShowupModel.kopach(0.2)


def breakdown_adds_up(b):
    return abs(b.visit_revenue + b.ancillary_revenue - b.rejection_cost
               - b.overtime_cost - b.total) < 1e-12


def test_econ_validation():
    with pytest.raises(ValueError):
        EconomicParams(theta=-1)
    with pytest.raises(ValueError):
        EconomicParams(regular_capacity=0)
    with pytest.raises(ValueError):
        EconomicParams(ancillary_basis="busy")


def test_unit_showup_is_throughput():
    for law in (EXPONENTIAL, DETERMINISTIC):
        d = distribution(QueueSpec(19.9, 20, 37, law))
        b = net_reward(d, EconomicParams(), ONE)
        assert b.total == pytest.approx(19.9 * (1 - d.blocking), abs=1e-12)


def test_two_state_breakdown():
    d = distribution(QueueSpec(10, 20, 1, EXPONENTIAL))
    for basis in ("unused", "empty"):
        b = net_reward(d, EconomicParams(0, 0.5, ancillary_basis=basis), ONE)
        assert b.ancillary_revenue == pytest.approx(20 / 3, abs=1e-12)
        assert b.visit_revenue == pytest.approx(20 / 3, abs=1e-12)
        assert breakdown_adds_up(b)


def test_bases_agree_without_noshows():
    d = distribution(QueueSpec(19.9, 20, 120, DETERMINISTIC))
    a = net_reward(d, EconomicParams(1.5, 0.5, ancillary_basis="unused"), ONE)
    b = net_reward(d, EconomicParams(1.5, 0.5, ancillary_basis="empty"), ONE)
    assert a.total == pytest.approx(b.total, abs=1e-10)


def test_unused_basis_counts_noshow_time():
    d = distribution(QueueSpec(19.9, 20, 120, EXPONENTIAL))
    e = EconomicParams(0, 0.5)
    b = net_reward(d, e, K2)
    assert b.ancillary_revenue == pytest.approx(0.5 * (20 - b.visit_revenue), abs=1e-12)
    assert b.ancillary_revenue > 0.5 * 20 * d.idle


def test_infinite_examples():
    b = net_reward_infinite(18, 20, EconomicParams(), ONE)
    assert b.total == pytest.approx(18, abs=1e-10)
    assert b.rejection_cost == 0
    b = net_reward_infinite(0, 20, EconomicParams(0, 0.5), K2)
    assert b.total == pytest.approx(10.0)
    with pytest.raises(InstabilityError):
        net_reward_infinite(20, 20, EconomicParams(), K2)


@pytest.mark.parametrize("law", [EXPONENTIAL, DETERMINISTIC])
def test_infinite_equals_large_window(law):
    m = ShowupModel.kopach(0.6)
    e = EconomicParams(1.5, 0.5)
    inf = net_reward_infinite(18, 20, e, m, law)
    K = len(infinite_distribution(18, 20, law).probs)
    fin = net_reward(distribution(QueueSpec(18, 20, K, law)), e, m)
    assert fin.total == pytest.approx(inf.total, abs=1e-8)
    assert inf.truncation_error < 1e-9 * abs(inf.total)


@pytest.mark.parametrize("lam", [19.9, 19.99])
def test_truncation_error_certified(lam):
    for law in (EXPONENTIAL, DETERMINISTIC):
        b = net_reward_infinite(lam, 20, EconomicParams(0, 0.5), K2, law)
        assert b.truncation_error < 1e-9 * abs(b.total)


def test_overtime():
    assert overtime_cost(20, EconomicParams(overtime_a=2)) == 0
    assert overtime_cost(22, EconomicParams(overtime_a=0.2)) == pytest.approx(0.8)
    assert overtime_cost(18, EconomicParams(overtime_a=2)) == 0
    with pytest.raises(ValueError):
        overtime_cost(0, EconomicParams())


def test_service_level():
    d = mm1_distribution(10, 20)
    assert service_level(d, 0) == pytest.approx(0.5)
    assert service_level(d, 10_000) == pytest.approx(1.0, abs=1e-12)
    assert service_level(d, None) == 1.0
    with pytest.raises(ValueError):
        service_level(distribution(QueueSpec(10, 20, 3, EXPONENTIAL)), 1)


def test_idle_fraction_is_one_minus_rho_for_md1():
    d = infinite_distribution(18, 20, DETERMINISTIC)
    assert d.probs[0] == pytest.approx(0.1, abs=1e-13)
    b = reward_infinite_from_dist(d, EconomicParams(0, 0.5, ancillary_basis="empty"), ONE)
    assert b.idle_fraction == pytest.approx(0.1, abs=1e-15)


# ------------------------------------------------------------ properties

models = st.sampled_from([ONE, K2, ShowupModel.kopach(0.6), ShowupModel.exponential(),
                          ShowupModel.saturating(0.5, 0.9, 0.1)])
laws = st.sampled_from([EXPONENTIAL, DETERMINISTIC])


@given(lam=st.floats(0.5, 30), K=st.integers(1, 250), law=laws, m=models,
       theta=st.floats(0, 5), xi=st.floats(0, 2))
def test_reward_bounds(lam, K, law, m, theta, xi):
    d = distribution(QueueSpec(lam, 20.0, K, law))
    b = net_reward(d, EconomicParams(theta, xi), m)
    assert breakdown_adds_up(b)
    assert b.total <= lam + 20.0 * xi + 1e-12
    if theta == 0 and xi == 0:
        assert b.total <= lam * (1 - d.blocking) + 1e-12


@given(lam=st.floats(0.5, 30), K=st.integers(1, 200), law=laws, m=models,
       theta=st.floats(0, 5), xi=st.floats(0, 2), c=st.floats(0.1, 10))
def test_linear_scaling(lam, K, law, m, theta, xi, c):
    d = distribution(QueueSpec(lam, 20.0, K, law))
    b1 = net_reward(d, EconomicParams(theta, xi), m)
    b2 = net_reward(d, EconomicParams(c * theta, c * xi), m)
    assert b2.visit_revenue == b1.visit_revenue
    assert b2.rejection_cost == pytest.approx(c * b1.rejection_cost, rel=1e-12, abs=1e-14)
    assert b2.ancillary_revenue == pytest.approx(c * b1.ancillary_revenue, rel=1e-12, abs=1e-14)
