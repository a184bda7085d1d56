import numpy as np
import pytest

from mobcoop.exceptions import DomainError
from mobcoop.fiscal import FiscalPolicy, Regime, optimal_tax, post_tax_scenario, welfare
from mobcoop.threshold import delta_min
from mobcoop.values import Scenario, autarky_consumptions, coop_consumptions


def base(alpha=1.0, beta=1.5, m=0.8, rho=0.5, n=3):
    return Scenario.from_alpha(n, alpha, beta, rho, m)


def test_post_tax_examples():
    b = base()
    same = post_tax_scenario(FiscalPolicy(0.0, 0.09), b)
    assert np.array_equal(same.incomes, b.incomes) and same.grant == 0
    half = post_tax_scenario(FiscalPolicy(0.5, 0.09), b)
    assert half.grant == pytest.approx(0.151667, abs=5e-7)
    assert np.allclose(half.incomes, b.incomes / 2)
    full = post_tax_scenario(FiscalPolicy(1.0, 0.09), b)
    assert np.all(full.incomes == 0)
    assert np.allclose(coop_consumptions(full), 0.91 / 3)
    assert np.allclose(autarky_consumptions(full), 0.91 / 3)


def test_full_confiscation_with_total_loss_is_a_domain_error():
    with pytest.raises(DomainError):
        post_tax_scenario(FiscalPolicy(1.0, 1.0), base(rho=1.0))


@pytest.mark.parametrize("tau,s", [(-0.1, 0.5), (1.1, 0.5), (0.5, 0.0), (0.5, 1.2)])
def test_policy_domain(tau, s):
    with pytest.raises(DomainError):
        FiscalPolicy(tau, s)


@pytest.mark.parametrize("tau,s", [(0.2, 0.09), (0.7, 0.5), (1.0, 0.3)])
def test_revenue_and_budget_identities(tau, s):
    b = base()
    pol = FiscalPolicy(tau, s)
    assert pol.revenue(b.incomes) == pytest.approx(tau, abs=1e-15)
    sc = post_tax_scenario(pol, b)
    assert b.n * sc.grant == pytest.approx((1 - s) * tau, abs=1e-15)
    total = autarky_consumptions(sc).sum()
    assert total == pytest.approx(1 - tau + (1 - s) * tau, abs=1e-14)
    assert total <= 1 + 1e-15
    assert coop_consumptions(sc).sum() == pytest.approx(total, abs=1e-14)


def test_welfare_baseline_and_regime_boundary():
    b = base(alpha=1.0)
    w, regime, th = welfare(FiscalPolicy(0.0, 0.09), 0.7, b)
    assert regime is Regime.AUTARKIC
    assert w == pytest.approx(np.mean(b.u(b.incomes)))
    rich = base(alpha=7.0)
    for tau in (0.0, 0.01, 0.3):
        pol = FiscalPolicy(tau, 0.09)
        sc = post_tax_scenario(pol, rich)
        independent = delta_min(sc, method="bisection", rule="all")
        for delta in (0.3, 0.7, 0.95):
            w, regime, _ = welfare(pol, delta, rich)
            coop = independent.sustainable and delta >= independent.delta_min
            assert (regime is Regime.COOPERATIVE) == coop
            x = coop_consumptions(sc) if coop else autarky_consumptions(sc)
            assert w == pytest.approx(np.mean(sc.u(x)))


def test_autarkic_welfare_falls_with_cost_of_funds():
    b = base(alpha=1.0)
    ws = [welfare(FiscalPolicy(0.4, s), 0.7, b) for s in (0.05, 0.2, 0.5, 0.9)]
    assert all(r is Regime.AUTARKIC for _, r, _ in ws)
    vals = [w for w, _, _ in ws]
    assert np.all(np.diff(vals) < 0)


@pytest.mark.parametrize("alpha,beta,m", [(1.0, 1.5, 0.8), (7.0, 2.0, 0.8), (3.0, 0.0, 0.4)])
def test_optimal_tax_invariants(alpha, beta, m):
    b = base(alpha=alpha, beta=beta, m=m)
    r = optimal_tax(0.7, b, 0.09, points=201)
    assert np.all(r.welfare_at_star >= r.welfare)
    k = int(np.flatnonzero(r.taus == r.tau_star)[0])
    assert np.all(r.welfare[:k] < r.welfare_at_star)
    coop = r.delta_mins[k] < 1 and 0.7 >= r.delta_mins[k]
    assert (r.regime is Regime.COOPERATIVE) == coop
    assert r.welfare_at_star >= r.welfare[0]
    if r.tau_dagger is not None:
        d = delta_min(post_tax_scenario(FiscalPolicy(r.tau_dagger, 0.09), b), rule="all").delta_min
        assert d == pytest.approx(0.7, abs=1e-7)


def test_autarky_rate_ignores_mobility_and_norm():
    rates = {optimal_tax(0.7, base(alpha=1.5, beta=bt, m=m), 0.09, points=201).tau_a
             for m in (0.2, 0.8) for bt in (0.0, 2.0)}
    assert len(rates) == 1


def test_refinement_never_lowers_welfare():
    b = base(alpha=1.5)
    grid = optimal_tax(0.7, b, 0.09, points=101)
    ref = optimal_tax(0.7, b, 0.09, points=101, refine=True)
    assert ref.welfare_at_star >= grid.welfare_at_star
    assert ref.regime is grid.regime
    assert abs(ref.tau_star - grid.tau_star) <= 0.01
