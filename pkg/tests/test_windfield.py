import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from windguide.airframe import NormalizationBasis
from windguide.dynamics import State, step, trim_controls
from windguide.windfield import (ConstantWindField, SinusoidalWindField, StochasticWindLayer,
                                 WindFieldParams, advect, make_field, make_sinusoidal,
                                 make_stochastic_layer, sample)

import oracles

PARTIALS = ("dwx_dx", "dwx_dy", "dwx_dh", "dwy_dx", "dwy_dy", "dwy_dh", "dwh_dx", "dwh_dy", "dwh_dh")


def test_constant_field():
    w = sample(ConstantWindField(0.1, -0.2, 0.0), (1.0, 2.0, 3.0), 0.5)
    assert (w.w_x, w.w_y, w.w_h) == (0.1, -0.2, 0.0)
    assert all(getattr(w, name) == 0.0 for name in PARTIALS)
    r = advect(ConstantWindField(0.1, -0.2, 0.0), State(0.5, 1.0, 0.0, 0.0, 0.0, 1.0))
    assert (r.w_x_rate, r.w_y_rate, r.w_h_rate) == (0.0, 0.0, 0.0)


def test_sinusoidal_extremum_and_zero_crossing():
    amp, psi_w, freq = 0.02, 0.6, 5.0
    # magnitude extremum: phase pi/2, slope zero
    crest = SinusoidalWindField(amp, psi_w, freq, phase=math.pi / 2)
    w = crest.sample(0.0, 0.0, 0.0, 0.0)
    assert w.w_x == pytest.approx(amp * math.sin(psi_w), rel=1e-15)
    assert w.dwx_dx == pytest.approx(0.0, abs=1e-15)
    # zero crossing: phase 0, slope largest
    node = SinusoidalWindField(amp, psi_w, freq, phase=0.0)
    w = node.sample(0.0, 0.0, 0.0, 0.0)
    assert w.w_x == 0.0
    assert w.dwx_dx == pytest.approx(amp * freq * math.sin(psi_w) ** 2, rel=1e-14)
    fd = oracles.central_difference(lambda x: oracles.sinusoidal_wind(x, 0.0, amp, psi_w, freq)[0], 0.0, 1e-6)
    assert w.dwx_dx == pytest.approx(fd, rel=1e-8)


coord = st.floats(-20, 20, allow_nan=False)


@settings(max_examples=150, deadline=None)
@given(x=coord, y=coord, psi_w=st.floats(0, 2 * math.pi), freq=st.floats(0.5, 30.0),
       phase=st.floats(0, 2 * math.pi))
def test_partials_match_finite_differences(x, y, psi_w, freq, phase):
    field = SinusoidalWindField(0.03, psi_w, freq, phase)
    w = field.sample(x, y, 0.0, 0.0)
    h = 1e-5
    scale = 0.03 * freq  # largest possible partial
    for comp, idx in (("x", 0), ("y", 1)):
        fx = oracles.central_difference(lambda q: oracles.sinusoidal_wind(q, y, 0.03, psi_w, freq, phase)[idx], x, h)
        fy = oracles.central_difference(lambda q: oracles.sinusoidal_wind(x, q, 0.03, psi_w, freq, phase)[idx], y, h)
        assert abs(getattr(w, f"dw{comp}_dx") - fx) <= 1e-6 * scale
        assert abs(getattr(w, f"dw{comp}_dy") - fy) <= 1e-6 * scale
    assert w.w_h == 0.0 and w.dwh_dx == 0.0 and w.dwx_dh == 0.0


def test_zero_amplitude_is_zero_field(basis):
    f = make_sinusoidal(WindFieldParams(w_m=0.0), basis)
    w = f.sample(0.3, 0.7, 1.0, 0.0)
    assert (w.w_x, w.w_y) == (0.0, 0.0)
    assert all(getattr(w, name) == 0.0 for name in PARTIALS)


def test_zero_frequency_limits(basis):
    w = make_sinusoidal(WindFieldParams(omega_w=0.0), basis).sample(5.0, 3.0, 0.0, 0.0)
    assert (w.w_x, w.w_y) == (0.0, 0.0)
    f = make_sinusoidal(WindFieldParams(omega_w=0.0, phase=math.pi / 2, psi_w=0.4, w_m=3.0), basis)
    w = f.sample(5.0, 3.0, 0.0, 0.0)
    assert math.hypot(w.w_x, w.w_y) == pytest.approx(3.0 / basis.v_n, rel=1e-15)
    assert w.dwx_dx == 0.0


def test_frequency_normalization(basis):
    f = make_sinusoidal(WindFieldParams(omega_w=0.05), basis)
    assert f.frequency == pytest.approx(0.05 * 134.5**2 / 32.174, rel=1e-12)
    assert f.frequency == pytest.approx(28.1, abs=0.05)


def test_advect_single_gradient():
    # field varying only along x, flying east: rate = dWx/dx * (V + Wx)
    field = SinusoidalWindField(0.02, math.pi / 2, 4.0, 0.3)
    s = State(0.5, math.pi / 2, 0.0, 0.1, 0.0, 1.0)
    w = advect(field, s)
    assert w.w_x_rate == pytest.approx(w.dwx_dx * (0.5 + w.w_x), rel=1e-13)


def test_advect_matches_trajectory_differences(params, basis):
    field = make_sinusoidal(WindFieldParams(w_m=5.0, omega_w=0.02, psi_w=0.7), basis)
    dt = 0.02 / basis.time_unit
    s = State(params.endurance_speed, 0.3, 0.0, 0.0, 0.0, 5.0)
    u = trim_controls(s.v_bar, params)
    states = [s]
    for _ in range(200):
        s = step(s, u, field, dt, params)
        states.append(s)
    for k in range(1, 200, 13):
        before = field.sample(states[k - 1].x_bar, states[k - 1].y_bar, 0.0, 0.0)
        after = field.sample(states[k + 1].x_bar, states[k + 1].y_bar, 0.0, 0.0)
        rate = advect(field, states[k])
        assert abs((after.w_x - before.w_x) / (2 * dt) - rate.w_x_rate) <= 1e-4
        assert abs((after.w_y - before.w_y) / (2 * dt) - rate.w_y_rate) <= 1e-4


def test_params_validation():
    with pytest.raises(ValueError):
        WindFieldParams(kind="tornado")
    with pytest.raises(ValueError):
        WindFieldParams(omega_w=-0.1)
    with pytest.raises(ValueError):
        WindFieldParams(ou_tau=0.0)
    with pytest.raises(ValueError):
        WindFieldParams(kind="sinusoidal+stochastic")


def test_zero_sigma_layer_is_identity(basis):
    base = make_sinusoidal(WindFieldParams(), basis)
    layer = make_stochastic_layer(base, WindFieldParams(kind="sinusoidal+stochastic", seed=1, ou_sigma=0.0), basis)
    for k in range(20):
        layer.advance(0.005)
        a = layer.sample(0.1 * k, 0.2, 1.0, 0.0)
        b = base.sample(0.1 * k, 0.2, 1.0, 0.0)
        assert a == b


def _sequence(seed, n=500):
    layer = StochasticWindLayer(ConstantWindField(), sigma=0.01, tau=0.5, seed=seed)
    out = []
    for _ in range(n):
        w = layer.sample(0.0, 0.0, 0.0, 0.0)
        out.append((w.w_x, w.w_y, w.dwx_dt))
        layer.advance(0.005)
    return np.array(out)


def test_seed_determinism():
    assert _sequence(7).tobytes() == _sequence(7).tobytes()
    assert _sequence(7).tobytes() != _sequence(8).tobytes()


def test_ou_stationary_std():
    layer = StochasticWindLayer(ConstantWindField(), sigma=0.02, tau=0.2, seed=11, size=(8,))
    dt = 0.02 / NormalizationBasis().time_unit
    n = 100_000
    values = np.empty((n, 8))
    for k in range(n):
        values[k] = layer.eta_x
        layer.advance(dt)
    assert np.std(values) == pytest.approx(0.02, rel=0.05)


def test_ou_time_partial_is_drift():
    layer = StochasticWindLayer(ConstantWindField(), sigma=0.01, tau=0.5, seed=3)
    w = layer.sample(0.0, 0.0, 0.0, 0.0)
    assert w.dwx_dt == pytest.approx(-layer.eta_x / 0.5)
    r = advect(layer, State(0.5, 0.0, 0.0, 0.0, 0.0, 0.0))
    assert r.w_x_rate == pytest.approx(w.dwx_dt)


def test_make_field_kinds(basis):
    assert isinstance(make_field(WindFieldParams(kind="constant"), basis), ConstantWindField)
    assert isinstance(make_field(WindFieldParams(), basis), SinusoidalWindField)
    f = make_field(WindFieldParams(kind="sinusoidal+stochastic", seed=4, ou_sigma=1.0), basis, size=(3,))
    assert isinstance(f, StochasticWindLayer) and np.shape(f.eta_x) == (3,)


def test_constant_kind_uses_direction(basis):
    f = make_field(WindFieldParams(kind="constant", w_m=2.0, psi_w=math.pi / 2), basis)
    assert f.w_x == pytest.approx(2.0 / basis.v_n)
    assert f.w_y == pytest.approx(0.0, abs=1e-17)


def test_jacobian_layout():
    w = SinusoidalWindField(0.02, 0.3, 4.0, 0.1).sample(0.2, 0.1, 0.0, 0.0)
    jac = w.jacobian()
    assert jac.shape == (3, 3)
    assert jac[0, 1] == w.dwx_dy and jac[1, 0] == w.dwy_dx
