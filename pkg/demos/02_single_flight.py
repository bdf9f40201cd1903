"""One 20-minute flight through a sinusoidal wind field.

Compares the reference flight (endurance speed, fixed heading) with the
adjusted flight that re-plans airspeed and heading every 4 s, and writes the
adjusted trajectory to ``demo-flight.csv``.
"""

import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from windguide.cli import write_trajectory
from windguide.scenario import ScenarioSpec, benefit, run
from windguide.windfield import WindFieldParams

omega = float(sys.argv[1]) if len(sys.argv) > 1 else 0.041
wind = WindFieldParams(kind="sinusoidal", w_m=1.5, psi_w=0.0, omega_w=omega)
start = replace(ScenarioSpec(wind=wind).start_state(), psi=math.radians(30.0))
spec = ScenarioSpec(kind="adjusted", wind=wind, initial_state=start)

ref = run(ScenarioSpec(kind="reference", wind=wind, initial_state=spec.initial_state), record=False)
adj = run(spec)

cols = adj.trajectory_summary.columns
v_c = cols["v_bar_c"] * spec.basis.v_n
print(f"omega_w = {omega:g} rad/ft (wavelength {2 * math.pi / omega:.0f} ft)")
print(f"mean power: reference {ref.p_bar_avg:.6f}, adjusted {adj.p_bar_avg:.6f}")
print(f"benefit {benefit(ref.p_bar_avg, adj.p_bar_avg):+.3%}")
print(f"commanded airspeed range {v_c.min():.1f} .. {v_c.max():.1f} ft/s")
print(f"heading excursion {np.degrees(np.ptp(np.unwrap(cols['psi_c']))):.1f} deg")
path = write_trajectory(Path("demo-flight.csv"), adj)
print(f"wrote {path}")
