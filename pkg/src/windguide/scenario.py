"""Complete flights, performance measures and heading / wind-frequency sweeps.

A *reference* flight holds the zero-wind endurance airspeed and the initial
heading. An *adjusted* flight re-solves the guidance problem every
``dt_update`` seconds from the in-situ wind sample and hands the new airspeed
and heading commands to the autopilot. ``adjusted-airspeed-only`` keeps the
heading command fixed.

Sweeps integrate all headings (and all frequencies) as one vectorized batch,
which keeps a full 72-heading, 8-frequency sweep practical on a single core.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .airframe import AircraftParams, GuidanceConfig, NormalizationBasis
from .dynamics import SingularStateError, State, check_state, step, trim_controls, wind_rates
from .guidance import DegenerateHorizonError, ProjectedPowerInputs, optimal_adjustment, projection_horizon
from .tracking import SingularTrackingError, TrackingGains, VelocityCommand, control_commands, saturate
from .windfield import (SinusoidalWindField, WindField, WindFieldParams, advect, make_field,
                        make_stochastic_layer)

SCENARIO_KINDS = ("reference", "adjusted", "adjusted-airspeed-only")
DEFAULT_ALTITUDE_FT = 15000.0

TRAJECTORY_COLUMNS = (
    "v_bar", "psi", "gamma", "x_bar", "y_bar", "h_bar",
    "p_bar", "cl", "mu", "v_bar_c", "psi_c",
    "w_x", "w_y", "w_h", "w_v_rate",
)


class SimulationError(RuntimeError):
    """A module error raised during a run, tagged with the step index."""

    def __init__(self, step_index: int, cause: Exception):
        super().__init__(f"step {step_index}: {type(cause).__name__}: {cause}")
        self.step_index = step_index
        self.cause = cause


@dataclass(frozen=True)
class ScenarioSpec:
    """Everything needed to reproduce one flight (or one sweep).

    ``initial_state=None`` starts in level flight at the endurance airspeed,
    heading 0, at 15,000 ft.
    """

    kind: str = "adjusted"
    initial_state: State | None = None
    flight_time: float = 1200.0
    sim_rate: float = 50.0
    guidance: GuidanceConfig = field(default_factory=GuidanceConfig)
    wind: WindFieldParams = field(default_factory=WindFieldParams)
    gains: TrackingGains = field(default_factory=TrackingGains)
    aircraft: AircraftParams = field(default_factory=AircraftParams)
    basis: NormalizationBasis = field(default_factory=NormalizationBasis)
    output_rate: float = 1.0

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}; expected one of {SCENARIO_KINDS}")
        if not (self.flight_time > 0 and self.sim_rate > 0 and self.output_rate > 0):
            raise ValueError("flight_time, sim_rate and output_rate must be positive")
        for name, period in (("guidance period", self.guidance.dt_update),
                             ("output period", 1.0 / self.output_rate),
                             ("flight time", self.flight_time)):
            ticks = period * self.sim_rate
            if abs(ticks - round(ticks)) > 1e-9 * max(1.0, ticks) or round(ticks) < 1:
                raise ValueError(f"{name} must be an integer multiple of the simulation step")

    @property
    def dt_bar(self) -> float:
        return 1.0 / self.sim_rate / self.basis.time_unit

    @property
    def n_steps(self) -> int:
        return round(self.flight_time * self.sim_rate)

    @property
    def update_every(self) -> int:
        return round(self.guidance.dt_update * self.sim_rate)

    @property
    def output_every(self) -> int:
        return round(self.sim_rate / self.output_rate)

    def start_state(self) -> State:
        if self.initial_state is not None:
            return self.initial_state
        return State(self.aircraft.endurance_speed, 0.0, 0.0, 0.0, 0.0,
                     DEFAULT_ALTITUDE_FT / self.basis.length_unit)


@dataclass
class Trajectory:
    """Decimated time history; each column has shape ``(len(time),) + batch``."""

    time: np.ndarray
    columns: dict


@dataclass
class RunMetrics:
    """Performance measures of one run or one heading sweep.

    ``p_bar_avg`` is the time-averaged power (an array over headings for a
    sweep), ``p_bar_heading_avg`` its mean over headings, ``benefit`` the
    relative saving over a reference run (set by the sweep helpers).
    ``control_extrema`` holds the largest per-step control rates and the
    control ranges seen anywhere in the batch.
    """

    p_bar_avg: float | np.ndarray
    p_bar_heading_avg: float | None = None
    benefit: float | None = None
    trajectory_summary: Trajectory | None = None
    control_extrema: dict = field(default_factory=dict)
    headings: np.ndarray | None = None


def time_average(values, dt: float) -> float:
    """Trapezoidal time average of equally spaced samples.

    Integrating the deviation from the first sample makes the average of a
    constant signal exact.
    """
    values = np.asarray(values, dtype=float)
    base = values[0]
    return base + np.trapezoid(values - base, dx=dt, axis=0) / (dt * (values.shape[0] - 1))


def _batch_state(s0: State, psi0) -> State:
    shape = np.shape(psi0)
    if not shape:
        return replace(s0, psi=float(np.mod(psi0, 2 * np.pi)))

    def full(v):
        return np.full(shape, float(v))

    return State(full(s0.v_bar), np.mod(np.asarray(psi0, dtype=float), 2 * np.pi),
                 full(s0.gamma), full(s0.x_bar), full(s0.y_bar), full(s0.h_bar))


def simulate(spec: ScenarioSpec, psi0=None, wind_field: WindField | None = None,
             record: bool = True) -> RunMetrics:
    """Integrate one flight, or a batch of flights when ``psi0`` is an array.

    Parameters
    ----------
    spec : ScenarioSpec
    psi0 : float or ndarray, optional
        Initial heading(s); defaults to the heading of ``spec.start_state()``.
    wind_field : WindField, optional
        Pre-built (possibly batched) field; built from ``spec.wind`` otherwise.
    record : bool
        Keep a decimated trajectory.
    """
    params, basis = spec.aircraft, spec.basis
    s0 = spec.start_state()
    if psi0 is None:
        psi0 = s0.psi
    state = _batch_state(s0, psi0)
    shape = np.shape(state.psi)
    if wind_field is None:
        wind_field = make_field(spec.wind, basis, size=shape)

    dt = spec.dt_bar
    n_steps, update_every, output_every = spec.n_steps, spec.update_every, spec.output_every
    adjusted = spec.kind != "reference"
    guidance = spec.guidance
    if spec.kind == "adjusted-airspeed-only":
        guidance = replace(guidance, adjust_heading=False)
    horizon = guidance.dt_update_bar(basis)

    cmd = VelocityCommand(params.endurance_speed + 0.0 * state.psi, state.psi, 0.0)
    prev = trim_controls(state.v_bar, params)
    power_sum = 0.0
    # running per-trajectory extrema: rate maxima, then min and max of (p, cl, mu)
    rate_p = rate_cl = rate_mu = 0.0
    lo_p = lo_cl = lo_mu = np.inf
    hi_p = hi_cl = hi_mu = -np.inf
    n_out = n_steps // output_every + 1
    columns = {name: np.empty((n_out,) + shape) for name in TRAJECTORY_COLUMNS} if record else {}

    k = 0
    try:
        check_state(state)
        for k in range(n_steps + 1):
            t = k * dt
            sample = advect(wind_field, state, t)
            if adjusted and k % update_every == 0 and k < n_steps:
                h = projection_horizon(sample, horizon)
                adj = optimal_adjustment(ProjectedPowerInputs(state, sample, h), guidance, params, basis)
                cmd = VelocityCommand(state.v_bar + adj.d_v_bar,
                                      np.mod(state.psi + adj.d_psi, 2 * np.pi), 0.0)
            rates = wind_rates(state, sample)
            raw = control_commands(state, cmd, rates, spec.gains, params, previous=prev)
            u = saturate(raw, prev, params, dt)
            rate_p = np.maximum(rate_p, abs(u.p_bar - prev.p_bar))
            rate_cl = np.maximum(rate_cl, abs(u.cl - prev.cl))
            rate_mu = np.maximum(rate_mu, abs(u.mu - prev.mu))
            lo_p, hi_p = np.minimum(lo_p, u.p_bar), np.maximum(hi_p, u.p_bar)
            lo_cl, hi_cl = np.minimum(lo_cl, u.cl), np.maximum(hi_cl, u.cl)
            lo_mu, hi_mu = np.minimum(lo_mu, u.mu), np.maximum(hi_mu, u.mu)
            weight = 0.5 if k in (0, n_steps) else 1.0
            power_sum = power_sum + weight * u.p_bar
            if record and k % output_every == 0:
                row = k // output_every
                for name, value in (
                        ("v_bar", state.v_bar), ("psi", state.psi), ("gamma", state.gamma),
                        ("x_bar", state.x_bar), ("y_bar", state.y_bar), ("h_bar", state.h_bar),
                        ("p_bar", u.p_bar), ("cl", u.cl), ("mu", u.mu),
                        ("v_bar_c", cmd.v_bar_c), ("psi_c", cmd.psi_c),
                        ("w_x", sample.w_x), ("w_y", sample.w_y), ("w_h", sample.w_h),
                        ("w_v_rate", rates.w_v_rate)):
                    columns[name][row] = value
            if k == n_steps:
                break
            state = step(state, u, wind_field, dt, params, t_bar=t, wind0=sample)
            if not np.isfinite(np.sum(state.v_bar)):
                raise FloatingPointError("non-finite airspeed")
            wind_field.advance(dt)
            prev = u
    except (SingularStateError, SingularTrackingError, DegenerateHorizonError,
            FloatingPointError, ValueError) as exc:
        raise SimulationError(k, exc) from exc

    p_avg = power_sum / n_steps
    extrema = {
        "p_bar_rate_max": float(np.max(rate_p)) / dt,
        "cl_rate_max": float(np.max(rate_cl)) / dt,
        "mu_rate_max": float(np.max(rate_mu)) / dt,
        "p_bar_min": float(np.min(lo_p)), "p_bar_max": float(np.max(hi_p)),
        "cl_min": float(np.min(lo_cl)), "cl_max": float(np.max(hi_cl)),
        "mu_min": float(np.min(lo_mu)), "mu_max": float(np.max(hi_mu)),
    }
    traj = None
    if record:
        times = np.arange(n_out) * output_every / spec.sim_rate
        traj = Trajectory(time=times, columns=columns)
    p_avg = p_avg if np.ndim(p_avg) else float(p_avg)
    return RunMetrics(p_bar_avg=p_avg, trajectory_summary=traj, control_extrema=extrema,
                      headings=np.asarray(psi0) if shape else None)


def run(spec: ScenarioSpec, record: bool = True) -> RunMetrics:
    """Fly one scenario from ``spec.initial_state``."""
    return simulate(spec, record=record)


def sweep_headings(d_psi0: float) -> np.ndarray:
    """Initial headings ``0, d, 2d, ..., 2*pi - d``."""
    if not d_psi0 > 0:
        raise ValueError("heading increment must be positive")
    count = 2 * math.pi / d_psi0
    if abs(count - round(count)) > 1e-9:
        raise ValueError(f"heading increment {d_psi0!r} does not divide 2*pi")
    return np.arange(round(count)) * d_psi0


def heading_sweep(spec: ScenarioSpec, d_psi0: float = math.radians(5.0),
                  record: bool = False) -> RunMetrics:
    """Fly the scenario from every initial heading and average the mean power."""
    headings = sweep_headings(d_psi0)
    metrics = simulate(spec, psi0=headings, record=record)
    metrics.p_bar_heading_avg = float(np.mean(metrics.p_bar_avg))
    metrics.headings = headings
    return metrics


def _mean_power(metrics) -> float:
    if isinstance(metrics, RunMetrics):
        value = metrics.p_bar_heading_avg
        if value is None:
            value = metrics.p_bar_avg
        return float(value)
    return float(metrics)


def benefit(reference, candidate) -> float:
    """Relative power saving ``(P0 - P1) / P0`` of ``candidate`` over ``reference``."""
    p0, p1 = _mean_power(reference), _mean_power(candidate)
    if not p0 > 0:
        raise ValueError(f"reference mean power must be positive, got {p0!r}")
    return (p0 - p1) / p0


@dataclass
class FrequencySweep:
    """Benefit table, one row per spatial frequency (ascending).

    ``power`` maps scenario kind to heading-averaged power per frequency;
    ``benefit`` maps each non-reference kind to its relative benefit. Failed
    frequencies hold NaN and are listed in ``errors``. ``control_extrema``
    maps each kind to the control extrema over all of its flights.
    """

    omegas: np.ndarray
    power: dict
    benefit: dict
    errors: dict = field(default_factory=dict)
    control_extrema: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.omegas)


def merge_extrema(records) -> dict:
    """Combine ``control_extrema`` dicts, keeping the widest range and largest rate."""
    out = {}
    for record in records:
        for key, value in record.items():
            pick = min if key.endswith("_min") else max
            out[key] = value if key not in out else pick(out[key], value)
    return out


def _sweep_field(spec: ScenarioSpec, omegas: np.ndarray, n_headings: int) -> WindField:
    basis = spec.basis
    if spec.wind.kind == "constant":
        raise ValueError("frequency sweeps need a sinusoidal wind field")
    shape = (len(omegas), n_headings)
    base = SinusoidalWindField(
        amplitude=spec.wind.w_m / basis.v_n,
        direction=spec.wind.psi_w,
        frequency=(np.asarray(omegas, dtype=float) * basis.length_unit)[:, None],
        phase=spec.wind.phase,
    )
    if spec.wind.kind == "sinusoidal+stochastic":
        return make_stochastic_layer(base, spec.wind, basis, size=shape)
    return base


def frequency_sweep(spec: ScenarioSpec, omegas, d_psi0: float = math.radians(5.0),
                    kinds=("adjusted",)) -> FrequencySweep:
    """Heading-averaged benefit of each scenario kind over the reference, per ``omega_w``."""
    omegas = np.sort(np.asarray(omegas, dtype=float))
    if omegas.size == 0:
        raise ValueError("need at least one frequency")
    headings = sweep_headings(d_psi0)
    grid = np.broadcast_to(headings, (len(omegas), len(headings)))
    kinds = ("reference",) + tuple(k for k in kinds if k != "reference")
    power, errors, extrema = {}, {}, {}
    for kind in kinds:
        kspec = replace(spec, kind=kind)
        try:
            metrics = simulate(kspec, psi0=grid, wind_field=_sweep_field(kspec, omegas, len(headings)),
                               record=False)
            power[kind] = np.mean(metrics.p_bar_avg, axis=1)
            extrema[kind] = metrics.control_extrema
        except SimulationError:
            # retry frequency by frequency so one failure leaves a gap, not an empty table
            power[kind] = np.full(len(omegas), np.nan)
            records = []
            for i, omega in enumerate(omegas):
                try:
                    m = heading_sweep(replace(kspec, wind=replace(kspec.wind, omega_w=float(omega))), d_psi0)
                    power[kind][i] = m.p_bar_heading_avg
                    records.append(m.control_extrema)
                except SimulationError as exc:
                    errors[(kind, float(omega))] = str(exc)
            extrema[kind] = merge_extrema(records)
    p0 = power["reference"]
    benefits = {kind: (p0 - power[kind]) / p0 for kind in kinds if kind != "reference"}
    return FrequencySweep(omegas=omegas, power=power, benefit=benefits, errors=errors,
                          control_extrema=extrema)
