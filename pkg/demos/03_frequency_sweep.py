"""Relative benefit against wind spatial frequency.

A reduced version of the full sweep: 12 initial headings and 5-minute
flights, which runs in about a minute. Pass ``--full`` for 72 headings and
20-minute flights. The table and an SVG plot go to ``demo-sweep/``.
"""

import math
import sys
from pathlib import Path

from windguide.cli import plot_benefit
from windguide.config import DEFAULT_OMEGAS
from windguide.scenario import ScenarioSpec, frequency_sweep
from windguide.windfield import WindFieldParams

full = "--full" in sys.argv
spec = ScenarioSpec(wind=WindFieldParams(kind="sinusoidal", w_m=1.5),
                    flight_time=1200.0 if full else 300.0)
d_psi0 = math.radians(5.0 if full else 30.0)

sweep = frequency_sweep(spec, DEFAULT_OMEGAS, d_psi0, kinds=("adjusted", "adjusted-airspeed-only"))

print(f"{'omega_w':>8} {'adjusted':>10} {'speed only':>11}")
for i, omega in enumerate(sweep.omegas):
    print(f"{omega:8.4f} {sweep.benefit['adjusted'][i]:+10.3%} "
          f"{sweep.benefit['adjusted-airspeed-only'][i]:+11.3%}")

out = Path("demo-sweep")
out.mkdir(exist_ok=True)
print(f"wrote {plot_benefit(out / 'benefit.svg', sweep)}")
