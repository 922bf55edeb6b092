"""heatrod: forward and inverse 1D rod heat conduction.

Analytic series temperature and diffusivity-sensitivity evaluation,
explicit finite-difference solvers with a hard stability gate, scalar
least-squares diffusivity estimation, and material identification against
a catalog.  The ``heatrod`` console script exposes the same machinery on
the command line.
"""

__version__ = "0.1.0"

from .estimator import (
    EstimationResult,
    MaterialMatch,
    MeasurementSet,
    estimate_diffusivity,
    forward_values,
    identify_material,
    objective,
    rank_materials,
    simulate_measurements,
)
from .fdsolver import (
    Field,
    GridSpec,
    StabilityError,
    StabilityReport,
    demo_blowup,
    sample_field,
    solve_sensitivity,
    solve_temperature,
    stability_report,
)
from .model import (
    InitialProfile,
    ProblemSpec,
    SeriesControl,
    SeriesTruncationWarning,
    analytic_sensitivity,
    analytic_temperature,
    fourier_coefficients,
    steady_state,
)

__all__ = [
    "EstimationResult",
    "Field",
    "GridSpec",
    "InitialProfile",
    "MaterialMatch",
    "MeasurementSet",
    "ProblemSpec",
    "SeriesControl",
    "SeriesTruncationWarning",
    "StabilityError",
    "StabilityReport",
    "analytic_sensitivity",
    "analytic_temperature",
    "demo_blowup",
    "estimate_diffusivity",
    "forward_values",
    "fourier_coefficients",
    "identify_material",
    "objective",
    "rank_materials",
    "sample_field",
    "simulate_measurements",
    "solve_sensitivity",
    "solve_temperature",
    "stability_report",
    "steady_state",
    "__version__",
]
