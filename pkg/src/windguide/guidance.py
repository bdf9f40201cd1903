"""Projected-power objective and the single-shot second-order adjustment solver.

At an update instant the guidance only knows the in-situ wind sample. Wind
gradients and time partials are assumed frozen over the projection horizon
``dt_bar``; the position reached at the end of the horizon follows from a
trapezoidal rule on the kinematics, which makes the terminal wind (and so the
terminal wind rate along the flight path) an explicit function of the airspeed
and heading adjustments. The solver minimizes the terminal steady-level power
over those adjustments with one regularized Newton step.

All functions broadcast over batches of trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .airframe import AircraftParams, GuidanceConfig, NormalizationBasis
from .dynamics import State
from .windfield import WindSample

Q_LEVEL_EPS = 1e-9
EIG_REGULARIZE = 1e-8
LAMBDA_MAX = 1e6


class DegenerateHorizonError(ValueError):
    """The trapezoidal position system is singular for this horizon; shrink it."""


@dataclass(frozen=True)
class ProjectedPowerInputs:
    """Everything the guidance may use at ``t0``: state, in-situ sample, horizon."""

    state: State
    wind: WindSample
    dt_bar: float

    def __post_init__(self):
        if np.any(np.asarray(self.dt_bar) <= 0):
            raise ValueError("projection horizon must be positive")


@dataclass(frozen=True)
class Adjustment:
    """Result of :func:`optimal_adjustment`.

    ``gradient`` and ``hessian`` are the finite-difference derivatives of the
    projected power at zero adjustment (trailing dims ``(m,)`` and ``(m, m)``
    with ``m = 2``, or 1 when heading is not adjusted). ``clamped`` flags
    components that hit the adjustment box, ``accepted`` is False when the
    step was discarded for not improving the projected power and
    ``nonfinite`` marks a non-finite objective inside the stencil.
    """

    d_v_bar: np.ndarray
    d_psi: np.ndarray
    d_gamma: np.ndarray
    gradient: np.ndarray
    hessian: np.ndarray
    lambda_used: np.ndarray
    clamped: np.ndarray
    accepted: np.ndarray
    nonfinite: np.ndarray
    objective: np.ndarray
    objective0: np.ndarray


def steady_level_power(v_bar, w_v_rate, params: AircraftParams):
    """Steady level-flight power at airspeed ``v_bar`` with along-path wind rate ``w_v_rate``."""
    if np.any(np.asarray(v_bar) <= 0):
        raise ValueError("v_bar must be positive")
    rho = params.rho_bar
    return rho * v_bar**3 * params.cd0 + params.k_induced / (rho * v_bar) + v_bar * w_v_rate


def q_level(wind: WindSample, dt_bar):
    """Determinant of the trapezoidal position-increment system."""
    two = 2.0 / dt_bar
    return (two * two - two * (wind.dwx_dx + wind.dwy_dy)
            + (wind.dwx_dx * wind.dwy_dy - wind.dwx_dy * wind.dwy_dx))


def projection_horizon(wind: WindSample, dt_bar, margin: float = 0.5, max_halvings: int = 30):
    """Largest ``dt_bar / 2**k`` whose scaled determinant ``q_level * (h/2)**2`` is at least ``margin``.

    The scaled determinant is ``det(I - h/2 * G)`` for the horizontal gradient
    matrix ``G``; it equals 1 in a uniform field.
    """
    h = np.broadcast_to(np.asarray(dt_bar, dtype=float),
                        np.broadcast(wind.dwx_dx, wind.dwy_dy, wind.dwx_dy).shape).copy()
    for _ in range(max_halvings):
        bad = q_level(wind, h) * (0.5 * h) ** 2 < margin
        if not np.any(bad):
            break
        h = np.where(bad, 0.5 * h, h)
    return h if h.ndim else float(h)


def _commands(inputs: ProjectedPowerInputs, d_v, d_psi):
    s = inputs.state
    return s.v_bar + d_v, s.psi + d_psi


def position_increment(inputs: ProjectedPowerInputs, d_v, d_psi):
    """Horizontal displacement over the horizon for commanded adjustments.

    Solves the 2x2 system obtained from the trapezoidal rule with the terminal
    wind linearized about ``t0``. Raises :class:`DegenerateHorizonError` when
    the system determinant is (numerically) zero.
    """
    w, dt = inputs.wind, inputs.dt_bar
    q = q_level(w, dt)
    if np.any(np.abs(q) < Q_LEVEL_EPS):
        raise DegenerateHorizonError(f"q_level={q!r} too small for horizon {dt!r}")
    s = inputs.state
    v_c, psi_c = _commands(inputs, d_v, d_psi)
    b1 = s.v_bar * np.sin(s.psi) + v_c * np.sin(psi_c) + 2.0 * w.w_x + w.dwx_dt * dt
    b2 = s.v_bar * np.cos(s.psi) + v_c * np.cos(psi_c) + 2.0 * w.w_y + w.dwy_dt * dt
    two = 2.0 / dt
    dx = ((two - w.dwy_dy) * b1 + w.dwx_dy * b2) / q
    dy = (w.dwy_dx * b1 + (two - w.dwx_dx) * b2) / q
    return dx, dy


def projected_wind_rate(inputs: ProjectedPowerInputs, d_v, d_psi):
    """Along-path wind rate at ``t0 + dt_bar`` under frozen gradients (level flight)."""
    w, dt = inputs.wind, inputs.dt_bar
    dx, dy = position_increment(inputs, d_v, d_psi)
    wx = w.w_x + w.dwx_dx * dx + w.dwx_dy * dy + w.dwx_dt * dt
    wy = w.w_y + w.dwy_dx * dx + w.dwy_dy * dy + w.dwy_dt * dt
    v, psi = _commands(inputs, d_v, d_psi)
    sp, cp = np.sin(psi), np.cos(psi)
    return ((w.dwx_dy + w.dwy_dx) * v * sp * cp
            + w.dwx_dx * v * sp * sp + w.dwy_dy * v * cp * cp
            + (wx * w.dwx_dx + wy * w.dwx_dy + w.dwx_dt) * sp
            + (wx * w.dwy_dx + wy * w.dwy_dy + w.dwy_dt) * cp)


def projected_power(inputs: ProjectedPowerInputs, d_v, d_psi, params: AircraftParams,
                    envelope: bool = True):
    """Terminal steady-level power for the adjustment ``(d_v, d_psi)``.

    Returns ``+inf`` where the commanded airspeed leaves ``[v_bar_min, v_bar_max]``
    unless ``envelope`` is False, in which case the smooth formula is evaluated
    for any positive airspeed (used for the finite-difference stencil, which
    may straddle the envelope edge).
    """
    v = inputs.state.v_bar + d_v
    rate = projected_wind_rate(inputs, d_v, d_psi)
    rho = params.rho_bar
    safe_v = np.where(v > 0, v, 1.0)
    p = rho * safe_v**3 * params.cd0 + params.k_induced / (rho * safe_v) + safe_v * rate
    feasible = v > 0
    if envelope:
        feasible = feasible & (v >= params.v_bar_min) & (v <= params.v_bar_max)
    p = np.where(feasible, p, np.inf)
    return p if np.ndim(p) else float(p)


def _derivatives(f, hv, hp, shape, adjust_heading):
    z = np.zeros(shape)
    f0 = f(z, z)
    fvp, fvm = f(z + hv, z), f(z - hv, z)
    grad_v = (fvp - fvm) / (2 * hv)
    hvv = (fvp - 2 * f0 + fvm) / hv**2
    if not adjust_heading:
        stencil = np.stack([f0, fvp, fvm], axis=-1)
        return f0, grad_v[..., None], hvv[..., None, None], stencil
    fpp, fpm = f(z, z + hp), f(z, z - hp)
    f_pp = f(z + hv, z + hp)
    f_pm = f(z + hv, z - hp)
    f_mp = f(z - hv, z + hp)
    f_mm = f(z - hv, z - hp)
    grad_p = (fpp - fpm) / (2 * hp)
    hpp = (fpp - 2 * f0 + fpm) / hp**2
    hvp = (f_pp - f_pm - f_mp + f_mm) / (4 * hv * hp)
    grad = np.stack([grad_v, grad_p], axis=-1)
    hess = np.stack([np.stack([hvv, hvp], axis=-1), np.stack([hvp, hpp], axis=-1)], axis=-2)
    stencil = np.stack([f0, fvp, fvm, fpp, fpm, f_pp, f_pm, f_mp, f_mm], axis=-1)
    return f0, grad, hess, stencil


def optimal_adjustment(inputs: ProjectedPowerInputs, config: GuidanceConfig,
                       params: AircraftParams,
                       basis: NormalizationBasis = NormalizationBasis()) -> Adjustment:
    """Single-shot second-order airspeed/heading adjustment.

    The gradient ``T1`` and Hessian ``T2`` of the projected power at zero
    adjustment come from central finite differences. The step solves the
    normal equations ``T2' T2 d = -T2' T1``. When the smallest eigenvalue of
    ``T2`` is below 1e-8 a Levenberg term ``lam * I`` is added, doubling
    ``lam`` from ``config.levenberg_lambda0`` until the step lowers the
    projected power (giving up, with a zero step, once ``lam > 1e6``). The
    step is then clipped to the adjustment box and the airspeed envelope, and
    is kept only if it does not raise the projected power.
    """
    s, w = inputs.state, inputs.wind
    shape = np.broadcast(s.v_bar, s.psi, w.w_x, w.dwx_dx, w.dwy_dy, w.dwx_dy,
                         np.asarray(inputs.dt_bar)).shape
    heading = config.adjust_heading
    m = 2 if heading else 1

    def f(dv, dp, envelope=False):
        return np.broadcast_to(projected_power(inputs, dv, dp, params, envelope), shape)

    # inf - inf in a bad stencil is expected; such stencils are flagged below
    with np.errstate(invalid="ignore"):
        f0, grad, hess, stencil = _derivatives(f, config.fd_step_v, config.fd_step_psi, shape, heading)

    # flatten the batch for the linear algebra
    n = int(np.prod(shape))
    g = grad.reshape(n, m)
    H = hess.reshape(n, m, m)
    base = f0.reshape(n)
    nonfinite = ~np.all(np.isfinite(stencil.reshape(n, -1)), axis=-1)
    g = np.where(nonfinite[:, None], 0.0, g)
    H = np.where(nonfinite[:, None, None], np.eye(m), H)

    def obj(delta, envelope=False):
        dv = delta[:, 0].reshape(shape)
        dp = delta[:, 1].reshape(shape) if heading else np.zeros(shape)
        return np.asarray(f(dv, dp, envelope)).reshape(n)

    HT = np.swapaxes(H, -1, -2)
    normal = HT @ H
    rhs = -(HT @ g[..., None])
    eye = np.eye(m)
    min_eig = np.linalg.eigvalsh(0.5 * (H + HT))[:, 0]
    regular = (min_eig >= EIG_REGULARIZE) & ~nonfinite

    delta = np.zeros((n, m))
    lam_used = np.zeros(n)
    if np.any(regular):
        delta[regular] = np.linalg.solve(normal[regular], rhs[regular])[..., 0]

    pending = ~regular & ~nonfinite
    lam = np.full(n, config.levenberg_lambda0)
    while np.any(pending):
        idx = np.flatnonzero(pending)
        cand = np.zeros((n, m))
        cand[idx] = np.linalg.solve(normal[idx] + lam[idx, None, None] * eye, rhs[idx])[..., 0]
        better = pending & (obj(cand) < base)
        delta[better] = cand[better]
        lam_used[better] = lam[better]
        pending &= ~better
        lam = np.where(pending, 2.0 * lam, lam)
        exhausted = pending & (lam > LAMBDA_MAX)
        lam_used[exhausted] = lam[exhausted]
        pending &= ~exhausted

    # adjustment box intersected with the airspeed envelope
    dv_max = config.dv_max_bar(basis)
    v0 = np.broadcast_to(s.v_bar, shape).reshape(n)
    lo = np.maximum(-dv_max, params.v_bar_min - v0)
    hi = np.minimum(dv_max, params.v_bar_max - v0)
    clamped = np.zeros((n, m), dtype=bool)
    clamped[:, 0] = (delta[:, 0] < lo) | (delta[:, 0] > hi)
    delta[:, 0] = np.clip(delta[:, 0], lo, hi)
    if heading:
        clamped[:, 1] = np.abs(delta[:, 1]) > config.dpsi_max
        delta[:, 1] = np.clip(delta[:, 1], -config.dpsi_max, config.dpsi_max)

    value = obj(delta, envelope=True)
    accepted = (value <= base) & ~nonfinite
    delta[~accepted] = 0.0
    value = np.where(accepted, value, base)

    def out(a, tail=()):
        return a.reshape(shape + tail) if shape or tail else a.reshape(()).item()

    d_psi = delta[:, 1] if heading else np.zeros(n)
    return Adjustment(
        d_v_bar=out(delta[:, 0]),
        d_psi=out(d_psi),
        d_gamma=out(np.zeros(n)),
        gradient=out(g, (m,)),
        hessian=out(H, (m, m)),
        lambda_used=out(lam_used),
        clamped=out(clamped, (m,)),
        accepted=out(accepted),
        nonfinite=out(nonfinite),
        objective=out(value),
        objective0=out(base),
    )
