import numpy as np
import pytest

from noshow_window.capacity import (FIXED_MU, JOINT, OPTIMIZE_MU, EmptyGridError,
                                    joint_gain_over_sequential, joint_optimal,
                                    levers_efficiency_report, optimal_panel, panel_objective,
                                    sequential_value)
from noshow_window.queues import DETERMINISTIC, EXPONENTIAL
from noshow_window.reward import EconomicParams, net_reward_infinite
from noshow_window.showup import ShowupModel

K2 = ShowupModel.kopach(0.2)
ONE = ShowupModel.constant(1.0)
MUS = [20.0, 20.5, 21.0, 21.5, 22.0]
WIN = dict(k_max=1000, reference="cap")


def test_objective_matches_reward_engine():
    e = EconomicParams(1.5, 0.5, 0.2)
    for law in (EXPONENTIAL, DETERMINISTIC):
        want = net_reward_infinite(19, 21, e, K2, law, include_overtime=True).total
        assert panel_objective(19, 21, e, K2, law) == pytest.approx(want, abs=1e-12)


def test_unit_showup_closed_form_and_argmax():
    e = EconomicParams(0, 0.5, 0.2)
    lam, mu = 17.3, 21.0
    want = lam + mu * 0.5 * (1 - lam / mu) - 0.2 * 1.0 ** 2
    assert panel_objective(lam, mu, e, ONE) == pytest.approx(want, abs=1e-10)
    res = optimal_panel(EXPONENTIAL, EconomicParams(), ONE, lam_steps=(0.1, 0.01))
    assert res.lam_star == pytest.approx(19.99)
    assert res.mode == FIXED_MU


def test_expensive_overtime_keeps_regular_capacity():
    e = EconomicParams(0, 0, overtime_a=50)
    res = optimal_panel(EXPONENTIAL, e, K2, mu_values=MUS, lam_steps=(0.1,))
    assert res.mu_star == 20.0 and res.mode == OPTIMIZE_MU


def test_panel_result_invariants():
    e = EconomicParams(0, 0.5, 0.2)
    res = optimal_panel(DETERMINISTIC, e, K2, mu_values=MUS, lam_steps=(0.1, 0.01))
    assert res.lam_star < res.mu_star
    assert all(res.objective >= row[-1] for row in res.trace)
    assert all(lam < mu for lam, mu, _ in res.trace)


def test_overtime_scan():
    # past the point where overtime dominates, the best value per mu keeps falling
    e = EconomicParams(0, 0.5, 2.0)
    res = optimal_panel(EXPONENTIAL, e, K2, mu_values=[20 + 0.5 * i for i in range(9)],
                        lam_steps=(0.1,))
    best = {}
    for lam, mu, v in res.trace:
        best[mu] = max(best.get(mu, -np.inf), v)
    vals = [best[m] for m in sorted(best)]
    peak = int(np.argmax(vals))
    assert all(a >= b for a, b in zip(vals[peak:], vals[peak + 1:]))


def test_empty_grid():
    with pytest.raises(EmptyGridError):
        optimal_panel(EXPONENTIAL, EconomicParams(), K2, mu_values=[5.0])
    with pytest.raises(EmptyGridError):
        joint_optimal(EXPONENTIAL, EconomicParams(), K2, [25.0], [20.0], [None])


def test_levers_report_fixed_mu():
    e = EconomicParams(0, 0, 0.2)
    mm = levers_efficiency_report(optimal_panel(EXPONENTIAL, e, K2, lam_steps=(0.1,)), e, K2,
                                  **WIN)
    md = levers_efficiency_report(optimal_panel(DETERMINISTIC, e, K2, lam_steps=(0.1,)), e, K2,
                                  **WIN)
    assert mm.delta_e == pytest.approx(0.03, abs=0.1)
    assert md.delta_e == pytest.approx(0.20, abs=0.1)
    assert 0 < mm.alpha < 1 and 0 < md.alpha < 1


def test_levers_report_unbounded_convention():
    e = EconomicParams(1.5, 0.5, 0.2)
    cap = optimal_panel(DETERMINISTIC, e, K2, lam_min=17.0, lam_steps=(0.5,), lam_gap=2.0)
    rep = levers_efficiency_report(cap, e, K2, **WIN)
    assert rep.k_star is None and rep.delta_e == 0.0 and rep.alpha == 1.0


def test_joint_reduces_to_panel_on_infinite_grid():
    e = EconomicParams(0, 0.5, 0.2)
    lams = [round(10 + 0.1 * i, 10) for i in range(150)]
    panel = optimal_panel(EXPONENTIAL, e, K2, mu_values=MUS, lam_steps=(0.1,))
    joint = joint_optimal(EXPONENTIAL, e, K2, lams, MUS, [None])
    assert (joint.lam_star, joint.mu_star, joint.k_star) == (panel.lam_star, panel.mu_star, None)
    assert joint.objective == panel.objective and joint.mode == JOINT


@pytest.mark.parametrize("theta,xi", [(0, 0), (1.5, 0.5)])
def test_joint_dominates_sequential(theta, xi):
    e = EconomicParams(theta, xi, 0.2)
    lams = [round(10 + 0.1 * i, 10) for i in range(150)]
    ks = list(range(20, 1001, 20)) + [None]
    cap = optimal_panel(EXPONENTIAL, e, K2, mu_values=MUS, lam_steps=(0.1,))
    seq, _ = sequential_value(cap, e, K2, **WIN)
    joint = joint_optimal(EXPONENTIAL, e, K2, lams, MUS, ks)
    assert joint.objective >= seq - 1e-12
    assert joint_gain_over_sequential(joint, seq) >= -1e-10
    assert all(joint.objective >= row[-1] for row in joint.trace)


def test_overload_only_on_request():
    e = EconomicParams(0, 0, 0.2)
    lams, ks = [19.0, 20.0, 21.0], [20, 40]
    res = joint_optimal(EXPONENTIAL, e, K2, lams, [20.0], ks)
    assert all(lam < mu for lam, mu, _, _ in res.trace)
    res = joint_optimal(EXPONENTIAL, e, K2, lams, [20.0], ks, allow_overload=True)
    assert any(lam >= mu for lam, mu, _, _ in res.trace)
