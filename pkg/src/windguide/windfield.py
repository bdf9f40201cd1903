"""Parametric wind fields with analytic gradients and an OU gust layer.

The deterministic fields are horizontal: the wind blows along direction
``psi_w`` (measured like heading, from the y axis towards x) and its magnitude
varies sinusoidally along that same direction,

    W(x, y) = w_m * sin(omega_w * (x sin psi_w + y cos psi_w) + phase) * (sin psi_w, cos psi_w).

Vertical wind is identically zero. All values returned by :meth:`WindField.sample`
are normalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _fastmath as fm
from .airframe import NormalizationBasis

FIELD_KINDS = ("constant", "sinusoidal", "sinusoidal+stochastic")


@dataclass(frozen=True, slots=True)
class WindSample:
    """Wind components, their partial derivatives and along-path rates at a point.

    ``dwx_dy`` is the partial of the x component with respect to y, and so on.
    The ``*_rate`` fields are total derivatives along the current trajectory;
    they are ``None`` until :func:`advect` fills them.
    """

    w_x: float
    w_y: float
    w_h: float
    dwx_dx: float = 0.0
    dwx_dy: float = 0.0
    dwx_dh: float = 0.0
    dwy_dx: float = 0.0
    dwy_dy: float = 0.0
    dwy_dh: float = 0.0
    dwh_dx: float = 0.0
    dwh_dy: float = 0.0
    dwh_dh: float = 0.0
    dwx_dt: float = 0.0
    dwy_dt: float = 0.0
    dwh_dt: float = 0.0
    w_x_rate: float | None = None
    w_y_rate: float | None = None
    w_h_rate: float | None = None

    def jacobian(self) -> np.ndarray:
        """Spatial gradient matrix, rows = component, columns = (x, y, h)."""
        return np.array([
            np.broadcast_arrays(self.dwx_dx, self.dwx_dy, self.dwx_dh),
            np.broadcast_arrays(self.dwy_dx, self.dwy_dy, self.dwy_dh),
            np.broadcast_arrays(self.dwh_dx, self.dwh_dy, self.dwh_dh),
        ], dtype=float)

    def with_rates(self, rate_x, rate_y, rate_h) -> "WindSample":
        return WindSample(
            self.w_x, self.w_y, self.w_h,
            self.dwx_dx, self.dwx_dy, self.dwx_dh,
            self.dwy_dx, self.dwy_dy, self.dwy_dh,
            self.dwh_dx, self.dwh_dy, self.dwh_dh,
            self.dwx_dt, self.dwy_dt, self.dwh_dt,
            rate_x, rate_y, rate_h,
        )


@dataclass(frozen=True)
class WindFieldParams:
    """Physical description of a wind field.

    Parameters
    ----------
    kind : {"constant", "sinusoidal", "sinusoidal+stochastic"}
    w_m : float
        Wind magnitude amplitude [ft/s].
    psi_w : float
        Wind direction [rad].
    omega_w : float
        Spatial frequency [rad/ft].
    phase : float
        Phase offset of the magnitude wave [rad]. With ``omega_w = 0`` and
        ``phase = pi/2`` the field is uniform with magnitude ``w_m``.
    ou_sigma : float
        Standard deviation of the gust perturbation [ft/s].
    ou_tau : float
        Correlation time of the gust perturbation [s].
    seed : int or None
        Required when the stochastic layer is enabled.
    """

    kind: str = "sinusoidal"
    w_m: float = 1.5
    psi_w: float = 0.0
    omega_w: float = 0.05
    phase: float = 0.0
    ou_sigma: float = 0.0
    ou_tau: float = 2.0
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in FIELD_KINDS:
            raise ValueError(f"unknown wind field kind {self.kind!r}; expected one of {FIELD_KINDS}")
        if np.any(np.asarray(self.omega_w) < 0):
            raise ValueError("omega_w must be non-negative")
        if self.ou_sigma < 0:
            raise ValueError("ou_sigma must be non-negative")
        if not self.ou_tau > 0:
            raise ValueError("ou_tau must be positive")
        if self.kind == "sinusoidal+stochastic" and self.seed is None:
            raise ValueError("a seed is required for the stochastic wind layer")


class WindField:
    """Base class. Subclasses implement :meth:`sample`."""

    def sample(self, x_bar, y_bar, h_bar, t_bar) -> WindSample:
        raise NotImplementedError

    def advance(self, dt_bar: float) -> None:
        """Move internal stochastic state forward by one simulation tick."""


@dataclass
class ConstantWindField(WindField):
    """Uniform, steady wind (normalized components)."""

    w_x: float = 0.0
    w_y: float = 0.0
    w_h: float = 0.0

    def sample(self, x_bar, y_bar, h_bar, t_bar) -> WindSample:
        return WindSample(self.w_x, self.w_y, self.w_h)

    def rated_sample(self) -> WindSample:
        """Sample with its (identically zero) along-path rates filled in."""
        return WindSample(self.w_x, self.w_y, self.w_h).with_rates(0.0, 0.0, 0.0)


@dataclass
class SinusoidalWindField(WindField):
    """Frozen sinusoidal magnitude wave aligned with the wind direction.

    All attributes are normalized and may be arrays broadcasting against the
    sampled positions (used to sweep several frequencies in one batch).
    """

    amplitude: float
    direction: float
    frequency: float
    phase: float = 0.0

    def __post_init__(self):
        self._s = np.sin(self.direction)
        self._c = np.cos(self.direction)

    def sample(self, x_bar, y_bar, h_bar, t_bar) -> WindSample:
        s, c = self._s, self._c
        arg = self.frequency * (x_bar * s + y_bar * c) + self.phase
        mag = self.amplitude * fm.sin(arg)
        g = self.amplitude * self.frequency * fm.cos(arg)
        gs = g * s
        gc = g * c
        cross = gs * c
        return WindSample(
            w_x=mag * s, w_y=mag * c, w_h=0.0,
            dwx_dx=gs * s, dwx_dy=cross,
            dwy_dx=cross, dwy_dy=gc * c,
        )


@dataclass
class StochasticWindLayer(WindField):
    """Ornstein-Uhlenbeck perturbation added to the horizontal components of ``base``.

    The perturbation is held constant within a simulation tick and advanced by
    :meth:`advance` with the exact OU transition. Spatial partials are those of
    the base field; the time partials report the OU drift ``-eta / tau``.
    """

    base: WindField
    sigma: float
    tau: float
    seed: int
    size: tuple = ()
    eta_x: np.ndarray = field(init=False)
    eta_y: np.ndarray = field(init=False)

    def __post_init__(self):
        self._rng = np.random.default_rng(self.seed)
        # start from the stationary distribution
        self.eta_x = self.sigma * self._normal()
        self.eta_y = self.sigma * self._normal()

    def _normal(self):
        draw = self._rng.standard_normal(self.size)
        return float(draw) if self.size == () else draw

    def sample(self, x_bar, y_bar, h_bar, t_bar) -> WindSample:
        b = self.base.sample(x_bar, y_bar, h_bar, t_bar)
        return replace(
            b,
            w_x=b.w_x + self.eta_x,
            w_y=b.w_y + self.eta_y,
            dwx_dt=b.dwx_dt - self.eta_x / self.tau,
            dwy_dt=b.dwy_dt - self.eta_y / self.tau,
        )

    def advance(self, dt_bar: float) -> None:
        self.base.advance(dt_bar)
        decay = math.exp(-dt_bar / self.tau)
        spread = self.sigma * math.sqrt(1.0 - decay * decay)
        self.eta_x = self.eta_x * decay + spread * self._normal()
        self.eta_y = self.eta_y * decay + spread * self._normal()


def sample(field: WindField, position, t_bar=0.0) -> WindSample:
    """Sample ``field`` at normalized ``position = (x, y, h)`` and time ``t_bar``."""
    x, y, h = position
    return field.sample(x, y, h, t_bar)


def advect(field: WindField, state, t_bar=0.0) -> WindSample:
    """Sample at the state's position and fill in the total along-path rates.

    The position rates used in the chain rule come from the kinematic
    equations evaluated with this sample's own wind components.
    """
    if type(field) is ConstantWindField:
        return field.rated_sample()
    w = field.sample(state.x_bar, state.y_bar, state.h_bar, t_bar)
    v = state.v_bar
    cg = fm.cos(state.gamma)
    xd = v * cg * fm.sin(state.psi) + w.w_x
    yd = v * cg * fm.cos(state.psi) + w.w_y
    hd = v * fm.sin(state.gamma) + w.w_h
    return w.with_rates(
        w.dwx_dx * xd + w.dwx_dy * yd + w.dwx_dh * hd + w.dwx_dt,
        w.dwy_dx * xd + w.dwy_dy * yd + w.dwy_dh * hd + w.dwy_dt,
        w.dwh_dx * xd + w.dwh_dy * yd + w.dwh_dh * hd + w.dwh_dt,
    )


def make_constant(params: WindFieldParams, basis: NormalizationBasis) -> ConstantWindField:
    """Uniform wind of magnitude ``w_m`` blowing along ``psi_w``."""
    w = params.w_m / basis.v_n
    return ConstantWindField(w * math.sin(params.psi_w), w * math.cos(params.psi_w), 0.0)


def make_sinusoidal(params: WindFieldParams, basis: NormalizationBasis) -> SinusoidalWindField:
    """Normalize ``params`` and build the sinusoidal magnitude field."""
    return SinusoidalWindField(
        amplitude=params.w_m / basis.v_n,
        direction=params.psi_w,
        frequency=params.omega_w * basis.length_unit,
        phase=params.phase,
    )


def make_stochastic_layer(base: WindField, params: WindFieldParams, basis: NormalizationBasis,
                          size: tuple = ()) -> StochasticWindLayer:
    """Wrap ``base`` with an OU gust layer; ``size`` is the trajectory batch shape."""
    if params.seed is None:
        raise ValueError("a seed is required for the stochastic wind layer")
    return StochasticWindLayer(
        base=base,
        sigma=params.ou_sigma / basis.v_n,
        tau=params.ou_tau / basis.time_unit,
        seed=int(params.seed),
        size=tuple(size),
    )


def make_field(params: WindFieldParams, basis: NormalizationBasis, size: tuple = ()) -> WindField:
    """Build the field described by ``params.kind``."""
    if params.kind == "constant":
        return make_constant(params, basis)
    base = make_sinusoidal(params, basis)
    if params.kind == "sinusoidal+stochastic":
        return make_stochastic_layer(base, params, basis, size)
    return base
