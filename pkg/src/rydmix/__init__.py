"""Simulator and optimizer for a quantum-mixer Rydberg microwave sensor.

Submodules:
    bessel        integer-order Bessel functions of the first kind
    system        parameter containers and the RF-tuning algebra
    hamiltonian   the original / sideband-expanded / effective models
    lindblad      master-equation steady states and time propagation
    spectroscopy  probe-detuning sweeps and splitting extraction
    heterodyne    adiabatic beat-signal synthesis
    optimizer     constrained sensitivity optimisation
    cli           CSV-emitting command-line front end
"""

from .bessel import bessel_j, bessel_j_argmax, bessel_j_many
from .hamiltonian import (ModelVariant, build_effective, build_effective_generator,
                          build_original, build_rotated, control_rotation)
from .heterodyne import HeterodyneTrace, amplitude, default_probe_point, synthesize
from .lindblad import (DecayRates, Trajectory, dissipator, liouvillian, propagate,
                       steady_state, time_averaged_observable)
from .optimizer import (ConstraintBox, InfeasibleError, OptimizationResult, optimize,
                        sensitivity_in_field_units, sensitivity_map)
from .spectroscopy import (SpectrumTrace, extract_at_splitting, sweep_spectrum,
                           transparency_trace)
from .system import (EffectiveDetunings, RfTuning, SystemParams, second_order_bound,
                     second_order_shift, solve_rf_resonance)

__version__ = "0.1.0"

__all__ = [
    "bessel_j", "bessel_j_argmax", "bessel_j_many",
    "ModelVariant", "build_effective", "build_effective_generator",
    "build_original", "build_rotated", "control_rotation",
    "HeterodyneTrace", "amplitude", "default_probe_point", "synthesize",
    "DecayRates", "Trajectory", "dissipator", "liouvillian", "propagate",
    "steady_state", "time_averaged_observable",
    "ConstraintBox", "InfeasibleError", "OptimizationResult", "optimize",
    "sensitivity_in_field_units", "sensitivity_map",
    "SpectrumTrace", "extract_at_splitting", "sweep_spectrum", "transparency_trace",
    "EffectiveDetunings", "RfTuning", "SystemParams", "second_order_bound",
    "second_order_shift", "solve_rf_resonance",
    "__version__",
]
