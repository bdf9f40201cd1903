"""Aircraft parameters, normalization conventions and guidance bounds.

All simulation quantities are dimensionless. The scalings used throughout the
package are

====================  ==========================
quantity              divided by
====================  ==========================
speed                 ``v_n``
time                  ``v_n / g``
distance              ``v_n**2 / g``
power                 ``m * g * v_n``
density (``rho_bar``)  ``2 * m * g / (S * v_n**2)``
====================  ==========================

With these choices the point-mass equations carry unit coefficients on the
gravity terms. One normalized time unit is ``v_n / g`` seconds (about 4.18 s
for the default basis), so a normalized rate ``r`` corresponds to
``r * g / v_n`` per second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

STANDARD_GRAVITY = 32.174  # ft/s^2

_KIND_EXPONENTS = {
    # kind: (speed exponent, time exponent)  -> scale = v_n**a * (v_n/g)**b
    "speed": (1, 0),
    "time": (0, 1),
    "distance": (1, 1),
    "acceleration": (1, -1),
    "rate": (0, -1),
    "gradient": (0, -1),
    "spatial_frequency": (-1, -1),
    "specific_power": (2, -1),
    "angle": (0, 0),
}


@dataclass(frozen=True)
class NormalizationBasis:
    """Characteristic scales used to make the equations of motion dimensionless.

    Parameters
    ----------
    v_n : float
        Characteristic speed [ft/s]. Taken as the maximum flight speed.
    mass : float
        Vehicle mass [slug].
    gravity : float
        Gravitational acceleration [ft/s^2].
    wing_area : float
        Reference wing area [ft^2].
    """

    v_n: float = 134.5
    mass: float = 1.5
    gravity: float = STANDARD_GRAVITY
    wing_area: float = 16.05

    def __post_init__(self):
        for name in ("v_n", "mass", "gravity", "wing_area"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and positive, got {value!r}")

    @property
    def time_unit(self) -> float:
        """Seconds per normalized time unit."""
        return self.v_n / self.gravity

    @property
    def length_unit(self) -> float:
        """Feet per normalized distance unit."""
        return self.v_n**2 / self.gravity

    @property
    def power_unit(self) -> float:
        """ft*lbf/s per normalized power unit."""
        return self.mass * self.gravity * self.v_n

    def scale(self, kind: str) -> float:
        """Physical value of one normalized unit of ``kind``."""
        if kind == "power":
            return self.power_unit
        if kind == "density":
            return 2.0 * self.mass * self.gravity / (self.wing_area * self.v_n**2)
        try:
            a, b = _KIND_EXPONENTS[kind]
        except KeyError:
            raise ValueError(f"unknown quantity kind {kind!r}") from None
        return self.v_n**a * self.time_unit**b

    def normalize(self, value, kind: str):
        return value / self.scale(kind)

    def denormalize(self, value, kind: str):
        return value * self.scale(kind)


QUANTITY_KINDS = tuple(_KIND_EXPONENTS) + ("power", "density")


@dataclass(frozen=True)
class PhysicalState:
    """Point-mass state in physical units (ft, ft/s, rad)."""

    v: float
    psi: float
    gamma: float
    x: float
    y: float
    h: float


def _check_finite(*values):
    if not all(np.all(np.isfinite(v)) for v in values):
        raise ValueError(f"non-finite value in state {values!r}")


def normalize_state(physical: PhysicalState, basis: NormalizationBasis):
    """Convert a physical-unit state to the normalized :class:`~windguide.dynamics.State`."""
    from .dynamics import State

    p = physical
    _check_finite(p.v, p.psi, p.gamma, p.x, p.y, p.h)
    length = basis.length_unit
    return State(
        v_bar=p.v / basis.v_n,
        psi=p.psi,
        gamma=p.gamma,
        x_bar=p.x / length,
        y_bar=p.y / length,
        h_bar=p.h / length,
    )


def denormalize_state(state, basis: NormalizationBasis) -> PhysicalState:
    """Exact inverse of :func:`normalize_state`."""
    s = state
    _check_finite(s.v_bar, s.psi, s.gamma, s.x_bar, s.y_bar, s.h_bar)
    length = basis.length_unit
    return PhysicalState(
        v=s.v_bar * basis.v_n,
        psi=s.psi,
        gamma=s.gamma,
        x=s.x_bar * length,
        y=s.y_bar * length,
        h=s.h_bar * length,
    )


@dataclass(frozen=True)
class AircraftParams:
    """Normalized drag polar, control bounds and control-rate bounds.

    The defaults describe a small catapult-launched fixed-wing UAV. ``rho_bar = 4.5``
    is the value for which the cruise-speed rule
    ``1.5 / sqrt(rho_bar * cl_cruise)`` equals 1, i.e. the normalization
    speed is the maximum speed. Airspeed bounds are derived from the lift
    limits unless given explicitly.
    """

    cd0: float = 0.015
    k_induced: float = 0.05
    rho_bar: float = 4.5
    cl_min: float = 0.0
    cl_max: float = 1.2
    cl_cruise: float = 0.5
    p_min: float = 0.0
    p_max: float = 0.15
    mu_max: float = math.radians(30.0)
    p_rate_max: float = 6.216
    cl_rate_max: float = 1.865
    mu_rate_max: float = 1.085
    v_bar_min: float = field(default=None)
    v_bar_max: float = field(default=None)

    def __post_init__(self):
        for name in ("cd0", "k_induced", "rho_bar"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("p_rate_max", "cl_rate_max", "mu_rate_max", "mu_max"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if not (self.cl_min < self.cl_max and self.p_min < self.p_max):
            raise ValueError("control lower bounds must be below upper bounds")
        if self.v_bar_min is None:
            object.__setattr__(self, "v_bar_min", 1.0 / math.sqrt(self.rho_bar * self.cl_max))
        if self.v_bar_max is None:
            object.__setattr__(self, "v_bar_max", 1.5 / math.sqrt(self.rho_bar * self.cl_cruise))
        if not 0 < self.v_bar_min < self.v_bar_max:
            raise ValueError(
                f"airspeed bounds inconsistent: v_bar_min={self.v_bar_min} "
                f"v_bar_max={self.v_bar_max}"
            )

    @classmethod
    def from_physical(cls, basis: NormalizationBasis, density: float, **kwargs) -> "AircraftParams":
        """Build parameters with ``rho_bar`` computed from air density [slug/ft^3]."""
        return cls(rho_bar=density / basis.scale("density"), **kwargs)

    @property
    def endurance_speed(self) -> float:
        """Zero-wind airspeed minimizing level-flight power."""
        return (self.k_induced / (3.0 * self.rho_bar**2 * self.cd0)) ** 0.25


@dataclass(frozen=True)
class GuidanceConfig:
    """Settings of the periodic adjustment solver.

    ``dt_update`` and ``dv_max`` are physical (s, ft/s); the finite-difference
    steps and the regularization are already normalized.
    """

    dt_update: float = 4.0
    dv_max: float = 5.0
    dpsi_max: float = math.radians(30.0)
    fd_step_v: float = 1e-4
    fd_step_psi: float = 1e-4
    levenberg_lambda0: float = 1e-6
    adjust_heading: bool = True

    def __post_init__(self):
        if not (self.dv_max > 0 and self.dpsi_max > 0 and self.dt_update > 0):
            raise ValueError("dv_max, dpsi_max and dt_update must be positive")
        if self.levenberg_lambda0 <= 0:
            raise ValueError("levenberg_lambda0 must be positive")
        if not 0 < self.fd_step_psi < self.dpsi_max:
            raise ValueError("fd_step_psi must be smaller than dpsi_max")
        # fd_step_v is normalized; checked against dv_max in dv_max_bar().
        if not self.fd_step_v > 0:
            raise ValueError("fd_step_v must be positive")

    def dv_max_bar(self, basis: NormalizationBasis) -> float:
        dv = self.dv_max / basis.v_n
        if not self.fd_step_v < dv:
            raise ValueError("fd_step_v must be smaller than the normalized dv_max")
        return dv

    def dt_update_bar(self, basis: NormalizationBasis) -> float:
        return self.dt_update / basis.time_unit
