"""Compare closed-form values with simulated discounted payoffs."""
from mobcoop import Scenario, SimConfig, oracle_check

sc = Scenario.from_alpha(3, 1.0, 1.0, 2.0, 0.5, delta=0.9)
for regime, i, closed, est, ok in oracle_check(sc, SimConfig(replications=5000, seed=1)):
    print(f"{regime:9s} type {i}: closed {closed:9.5f}  simulated {est.mean:9.5f} "
          f"+- {est.stderr:.5f}  covered={ok}")
