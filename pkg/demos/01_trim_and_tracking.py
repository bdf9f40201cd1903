"""Trim flight and autopilot step responses.

Flies the airframe at its zero-wind endurance speed, then asks the autopilot
for a 30 deg heading change and a 5 ft/s airspeed change and prints how long
each takes to settle within 2%.
"""

import math

import numpy as np

from windguide.airframe import AircraftParams, NormalizationBasis
from windguide.dynamics import State, step, trim_controls, wind_rates
from windguide.tracking import TrackingGains, VelocityCommand, control_commands, saturate, wrap_angle
from windguide.windfield import ConstantWindField, advect

basis = NormalizationBasis()
params = AircraftParams()
calm = ConstantWindField(0.0, 0.0)
dt = 0.02 / basis.time_unit
v_star = params.endurance_speed

print(f"time unit {basis.time_unit:.4f} s, length unit {basis.length_unit:.1f} ft")
print(f"endurance speed {v_star * basis.v_n:.2f} ft/s, "
      f"trim power {trim_controls(v_star, params).p_bar * basis.power_unit:.0f} ft*lbf/s")
print(f"bank-rate bound {math.degrees(params.mu_rate_max / basis.time_unit):.2f} deg/s")


def fly(cmd, seconds=8.0):
    s = State(v_star, 0.0, 0.0, 0.0, 0.0, 5.0)
    prev = trim_controls(v_star, params)
    history = []
    for k in range(round(seconds / 0.02) + 1):
        history.append((k * 0.02, s.v_bar, s.psi, prev.mu))
        w = advect(calm, s)
        u = saturate(control_commands(s, cmd, wind_rates(s, w), TrackingGains(), params, prev), prev, params, dt)
        s = step(s, u, calm, dt, params, wind0=w)
        prev = u
    return np.array(history)


def settle(times, error, tol):
    outside = np.flatnonzero(np.abs(error) > tol)
    return 0.0 if outside.size == 0 else times[outside[-1]] + 0.02


turn = fly(VelocityCommand(v_star, math.radians(30)))
t_turn = settle(turn[:, 0], wrap_angle(turn[:, 2] - math.radians(30)), 0.02 * math.radians(30))
print(f"30 deg heading step settles in {t_turn:.2f} s (peak bank {math.degrees(turn[:, 3].max()):.1f} deg)")

v_target = v_star + 5.0 / basis.v_n
speed = fly(VelocityCommand(v_target, 0.0))
t_speed = settle(speed[:, 0], speed[:, 1] - v_target, 0.02 * (v_target - v_star))
print(f"5 ft/s airspeed step settles in {t_speed:.2f} s")
