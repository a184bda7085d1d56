"""Values of cooperating, deviating and autarky, and the minimum discount factor."""
from mobcoop import Scenario, delta_min, values

sc = Scenario.from_alpha(3, 1.0, 1.0, 1.0, 0.5, delta=0.9)
v = values(sc)
print("type  cooperate   deviate    autarky")
for k in range(sc.n):
    print(f"{k + 1:>4}  {v.v_coop[k]:9.5f}  {v.v_dev[k]:9.5f}  {v.v_aut[k]:9.5f}")

for m in (0.0, 0.25, 0.5, 0.75, 1.0):
    r = delta_min(sc.replace(m=m), rule="all")
    print(f"m={m:4.2f}  delta_min={r.delta_min:.6f}  {r.status.value}")
