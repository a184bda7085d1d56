"""Welfare-maximizing proportional tax with and without a sustainable norm."""
from mobcoop import Scenario, optimal_tax

for alpha in (1.0, 4.0, 8.0):
    for m, beta in ((0.8, 1.5), (0.4, 2.0)):
        base = Scenario.from_alpha(3, alpha, beta, 0.5, m)
        r = optimal_tax(0.7, base, 0.09, points=201)
        print(f"alpha={alpha:4.1f} m={m} beta={beta}: tau*={r.tau_star:.4f} "
              f"regime={r.regime.value} tau_a={r.tau_a:.4f} tau_dagger={r.tau_dagger}")
