"""Feedback-linearizing autopilot for airspeed, heading and flight-path commands."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _fastmath as fm
from .airframe import AircraftParams
from .dynamics import Controls, State, WindRates

SINGULAR_EPS = 1e-9


class SingularTrackingError(ValueError):
    """The bank-angle law denominator vanished and no previous controls were given."""


@dataclass(frozen=True)
class VelocityCommand:
    v_bar_c: float
    psi_c: float
    gamma_c: float = 0.0


@dataclass(frozen=True)
class TrackingGains:
    """Normalized proportional gains (1 / normalized time).

    Each channel closes to ``e' = -k e``. The defaults give time constants of
    about 0.8 s for the default normalization basis.
    """

    k_v: float = 5.0
    k_psi: float = 5.0
    k_gamma: float = 5.0

    def __post_init__(self):
        if not (self.k_v > 0 and self.k_psi > 0 and self.k_gamma > 0):
            raise ValueError("tracking gains must be positive")


def wrap_angle(angle):
    """Wrap to (-pi, pi]."""
    return np.pi - np.mod(np.pi - angle, 2.0 * np.pi)


def control_commands(state: State, cmd: VelocityCommand, wind_rates: WindRates,
                     gains: TrackingGains, params: AircraftParams,
                     previous: Controls | None = None) -> Controls:
    """Unsaturated controls that impose first-order error decay on V, psi and gamma.

    Where the bank-law denominator is (numerically) zero the ``previous``
    controls are held; without ``previous`` a :class:`SingularTrackingError`
    is raised.
    """
    v = state.v_bar
    cg = fm.cos(state.gamma)
    heading_error = wrap_angle(state.psi - cmd.psi_c)
    num = wind_rates.w_psi_rate - v * cg * gains.k_psi * heading_error
    den = cg - wind_rates.w_gamma_rate - v * gains.k_gamma * (state.gamma - cmd.gamma_c)
    singular = abs(den) < SINGULAR_EPS
    any_singular = fm.any_true(singular)
    if any_singular and previous is None:
        raise SingularTrackingError("bank-angle law denominator is zero")
    rho = params.rho_bar
    mu = np.arctan(num / np.where(singular, 1.0, den)) if any_singular else np.arctan(num / den)
    cl = np.sqrt(num * num + den * den) / (rho * v * v)
    p = v * (-gains.k_v * (v - cmd.v_bar_c)
             + rho * v * v * (params.cd0 + params.k_induced * cl * cl)
             + fm.sin(state.gamma) + wind_rates.w_v_rate)
    if any_singular:
        p = np.where(singular, previous.p_bar, p)
        cl = np.where(singular, previous.cl, cl)
        mu = np.where(singular, previous.mu, mu)
    return Controls(p_bar=p, cl=cl, mu=mu)


def saturate(controls: Controls, previous: Controls, params: AircraftParams, dt_bar: float) -> Controls:
    """Clip to magnitude bounds, then limit the change from ``previous`` by the rate bounds."""
    if not dt_bar > 0:
        raise ValueError("dt_bar must be positive")

    def limit(u, prev, lo, hi, rate):
        u = np.minimum(np.maximum(u, lo), hi)
        step = rate * dt_bar
        return np.minimum(np.maximum(u, prev - step), prev + step)

    return Controls(
        p_bar=limit(controls.p_bar, previous.p_bar, params.p_min, params.p_max, params.p_rate_max),
        cl=limit(controls.cl, previous.cl, params.cl_min, params.cl_max, params.cl_rate_max),
        mu=limit(controls.mu, previous.mu, -params.mu_max, params.mu_max, params.mu_rate_max),
    )
