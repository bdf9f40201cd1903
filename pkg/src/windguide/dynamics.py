"""Normalized 3D point-mass equations of motion and a fixed-step RK4 integrator.

Every function here broadcasts: state fields may be floats or equally shaped
arrays, which is how the scenario runner integrates a whole heading sweep in
one pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _fastmath as fm
from .airframe import AircraftParams
from .windfield import advect

TWO_PI = 2.0 * np.pi
HALF_PI = 0.5 * np.pi


class SingularStateError(ValueError):
    """Raised when airspeed is non-positive or the flight path is vertical."""


@dataclass(frozen=True, slots=True)
class State:
    """Normalized kinematic state of the point mass."""

    v_bar: float
    psi: float
    gamma: float
    x_bar: float
    y_bar: float
    h_bar: float

    def advanced(self, rates: "StateRates", h) -> "State":
        return State(
            self.v_bar + h * rates.v_bar,
            self.psi + h * rates.psi,
            self.gamma + h * rates.gamma,
            self.x_bar + h * rates.x_bar,
            self.y_bar + h * rates.y_bar,
            self.h_bar + h * rates.h_bar,
        )



@dataclass(frozen=True, slots=True)
class Controls:
    """Power, lift coefficient and bank angle (all normalized / radians)."""

    p_bar: float
    cl: float
    mu: float


@dataclass(frozen=True, slots=True)
class StateRates:
    """Derivatives of every :class:`State` field with respect to normalized time."""

    v_bar: float
    psi: float
    gamma: float
    x_bar: float
    y_bar: float
    h_bar: float


@dataclass(frozen=True, slots=True)
class WindRates:
    """Wind-rate terms projected on airspeed, heading and flight path."""

    w_v_rate: float
    w_psi_rate: float
    w_gamma_rate: float


def wind_rates(state: State, wind) -> WindRates:
    """Project along-path wind component rates onto the velocity frame.

    ``wind`` must carry total rates ``w_x_rate, w_y_rate, w_h_rate`` as filled
    in by :func:`windguide.windfield.advect`.
    """
    sp, cp = fm.sin(state.psi), fm.cos(state.psi)
    sg, cg = fm.sin(state.gamma), fm.cos(state.gamma)
    wx, wy, wh = wind.w_x_rate, wind.w_y_rate, wind.w_h_rate
    return WindRates(
        w_v_rate=wx * cg * sp + wy * cg * cp + wh * sg,
        w_psi_rate=wx * cp - wy * sp,
        w_gamma_rate=wx * sg * sp + wy * sg * cp - wh * cg,
    )


def check_state(state: State):
    if fm.any_true((state.v_bar <= 0.0) | (abs(state.gamma) >= HALF_PI)):
        raise SingularStateError(
            f"singular state: v_bar={state.v_bar!r}, gamma={state.gamma!r}"
        )


def state_derivative(state: State, controls: Controls, wind, params: AircraftParams) -> StateRates:
    """Right-hand side of the normalized equations of motion.

    Parameters
    ----------
    state : State
    controls : Controls
    wind : WindSample
        In-situ sample at ``state`` including total along-path rates.
    params : AircraftParams
    """
    v = state.v_bar
    if fm.any_true((v <= 0.0) | (abs(state.gamma) >= HALF_PI)):
        check_state(state)
    sp, cp = fm.sin(state.psi), fm.cos(state.psi)
    sg, cg = fm.sin(state.gamma), fm.cos(state.gamma)
    # same projection as wind_rates(), reusing the trig values
    wx, wy, wh = wind.w_x_rate, wind.w_y_rate, wind.w_h_rate
    rates = WindRates(wx * cg * sp + wy * cg * cp + wh * sg,
                      wx * cp - wy * sp,
                      wx * sg * sp + wy * sg * cp - wh * cg)
    rho = params.rho_bar
    cl = controls.cl
    lift = rho * v * cl
    return StateRates(
        v_bar=controls.p_bar / v - rho * v * v * (params.cd0 + params.k_induced * cl * cl)
        - sg - rates.w_v_rate,
        psi=lift / cg * fm.sin(controls.mu) - rates.w_psi_rate / (v * cg),
        gamma=lift * fm.cos(controls.mu) - cg / v + rates.w_gamma_rate / v,
        x_bar=v * cg * sp + wind.w_x,
        y_bar=v * cg * cp + wind.w_y,
        h_bar=v * sg + wind.w_h,
    )


def trim_controls(v_bar, params: AircraftParams) -> Controls:
    """Zero-wind steady level controls at airspeed ``v_bar``."""
    cl = 1.0 / (params.rho_bar * v_bar * v_bar)
    p = params.rho_bar * v_bar**3 * (params.cd0 + params.k_induced * cl * cl)
    return Controls(p_bar=p, cl=cl, mu=0.0 * cl)


def step(state: State, controls: Controls, wind_model, dt_bar: float, params: AircraftParams,
         t_bar: float = 0.0, wind0=None) -> State:
    """Advance ``state`` by one classical RK4 step with controls held constant.

    The wind is re-sampled (including along-path rates) at every stage.
    ``wind0`` may be passed when the sample at the initial stage is already
    known. The heading of the returned state is wrapped into [0, 2*pi).
    """
    if not dt_bar > 0:
        raise ValueError("dt_bar must be positive")
    half = 0.5 * dt_bar
    if wind0 is None:
        wind0 = advect(wind_model, state, t_bar)
    k1 = state_derivative(state, controls, wind0, params)
    s2 = state.advanced(k1, half)
    k2 = state_derivative(s2, controls, advect(wind_model, s2, t_bar + half), params)
    s3 = state.advanced(k2, half)
    k3 = state_derivative(s3, controls, advect(wind_model, s3, t_bar + half), params)
    s4 = state.advanced(k3, dt_bar)
    k4 = state_derivative(s4, controls, advect(wind_model, s4, t_bar + dt_bar), params)
    sixth = dt_bar / 6.0
    return State(
        state.v_bar + sixth * (k1.v_bar + 2.0 * (k2.v_bar + k3.v_bar) + k4.v_bar),
        (state.psi + sixth * (k1.psi + 2.0 * (k2.psi + k3.psi) + k4.psi)) % TWO_PI,
        state.gamma + sixth * (k1.gamma + 2.0 * (k2.gamma + k3.gamma) + k4.gamma),
        state.x_bar + sixth * (k1.x_bar + 2.0 * (k2.x_bar + k3.x_bar) + k4.x_bar),
        state.y_bar + sixth * (k1.y_bar + 2.0 * (k2.y_bar + k3.y_bar) + k4.y_bar),
        state.h_bar + sixth * (k1.h_bar + 2.0 * (k2.h_bar + k3.h_bar) + k4.h_bar),
    )
