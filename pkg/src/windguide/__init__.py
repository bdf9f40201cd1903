"""Real-time in-situ wind-energy harvesting guidance for a fixed-wing UAV in level flight.

Modules
-------
airframe   normalization basis, aircraft and guidance parameters
dynamics   normalized point-mass equations of motion, RK4 step
windfield  parametric wind fields with analytic gradients, OU gust layer
guidance   projected-power objective and second-order adjustment solver
tracking   feedback-linearizing autopilot with control saturation
scenario   reference/adjusted flights, heading and frequency sweeps
config     INI configuration schema
cli        batch command-line front end
"""

from .airframe import (AircraftParams, GuidanceConfig, NormalizationBasis, PhysicalState,
                       denormalize_state, normalize_state)
from .dynamics import Controls, State, StateRates, WindRates, state_derivative, step, trim_controls, wind_rates
from .guidance import (Adjustment, DegenerateHorizonError, ProjectedPowerInputs, optimal_adjustment,
                       position_increment, projected_power, projected_wind_rate, steady_level_power)
from .scenario import (RunMetrics, ScenarioSpec, SimulationError, benefit, frequency_sweep,
                       heading_sweep, run)
from .tracking import TrackingGains, VelocityCommand, control_commands, saturate
from .windfield import (WindFieldParams, WindSample, advect, make_field, make_sinusoidal,
                        make_stochastic_layer, sample)

__version__ = "0.1.0"
