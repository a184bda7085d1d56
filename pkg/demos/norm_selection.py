"""Norm that minimizes the threshold, at two mobility levels."""
from mobcoop import SearchConfig, Scenario, beta_star

template = Scenario.from_alpha(6, 0.5, 0.0, 4.0, 0.5)
cfg = SearchConfig(0.0, 8.0, 100, 200)
for alpha in (0.1, 0.3, 0.6, 1.0):
    row = []
    for m in (0.4, 0.9):
        r = beta_star(alpha, m, template, cfg)
        row.append(f"m={m}: beta*={r.beta_star:.3f} (delta_min {r.delta_min_at_star:.4f})")
    print(f"alpha={alpha:.1f}  " + "  ".join(row))
