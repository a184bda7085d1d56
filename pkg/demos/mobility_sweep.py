"""Threshold against mobility for several inequality levels, written as CSV and SVG."""
import sys

from mobcoop.io import render_chart, to_csv
from mobcoop.sweeps import preset_specs, run_sweep

spec = preset_specs("fig2-beta0")[0]
records = run_sweep(spec)
out = sys.argv[1] if len(sys.argv) > 1 else "mobility_sweep"
with open(out + ".csv", "w") as f:
    f.write(to_csv(records, spec.fields()))
with open(out + ".svg", "w") as f:
    f.write(render_chart(records, "m", "delta_min", group="alpha", title="threshold vs mobility"))
print(f"wrote {out}.csv and {out}.svg ({len(records)} rows)")
