"""Exact-rational computation and convergence certification of Hill's variational orbit."""

from .exactnum import (
    Rational,
    RationalInterval,
    TaggedDecimal,
    interval_cbrt,
    interval_sqrt,
    parse_rational,
    render_interval,
    render_tagged,
)
from .hill_coeffs import (
    CoeffTable,
    ModelParams,
    build_table,
    closed_form_order2,
    first_order,
    forcing_order,
    fourier_coefficients,
    hill_bracket,
    hill_bracket_rd,
    hill_bracket_sq,
    ode_residual,
    periodicity_determinant,
    solve_order,
)
from .majorant_cert import (
    Certificate,
    ConvergenceParams,
    MajorantTable,
    complex_disc_certify,
    critical_m,
    exact_condition,
    majorant_root,
    majorant_table,
    quadratic_majorant,
    reduce_params,
    sufficient_check,
    unit_interval_root_count,
)
from .error_bounds import (
    ErrorBoundReport,
    RefinedParams,
    fixed_point_root,
    l_series,
    order_magnitude,
    reference_report,
    refined_params,
    truncation_bound,
)
from .orbit import OrbitSample, evaluate_xi_eta, evaluate_xy, export_orbit
from .series_core import (
    FourierSlice,
    GradedSeries,
    binomial_power,
    graded_mul,
    reflect,
    remainder_series,
    slice_mul,
)

__version__ = "0.1.0"

__all__ = [
    "Rational",
    "RationalInterval",
    "TaggedDecimal",
    "parse_rational",
    "render_tagged",
    "render_interval",
    "interval_sqrt",
    "interval_cbrt",
    "FourierSlice",
    "GradedSeries",
    "slice_mul",
    "graded_mul",
    "binomial_power",
    "remainder_series",
    "reflect",
    "ModelParams",
    "CoeffTable",
    "first_order",
    "forcing_order",
    "solve_order",
    "build_table",
    "closed_form_order2",
    "hill_bracket",
    "hill_bracket_sq",
    "hill_bracket_rd",
    "fourier_coefficients",
    "ode_residual",
    "periodicity_determinant",
    "ConvergenceParams",
    "Certificate",
    "MajorantTable",
    "reduce_params",
    "sufficient_check",
    "quadratic_majorant",
    "exact_condition",
    "majorant_table",
    "majorant_root",
    "critical_m",
    "complex_disc_certify",
    "unit_interval_root_count",
    "RefinedParams",
    "ErrorBoundReport",
    "order_magnitude",
    "refined_params",
    "l_series",
    "fixed_point_root",
    "truncation_bound",
    "reference_report",
    "OrbitSample",
    "evaluate_xi_eta",
    "evaluate_xy",
    "export_orbit",
    "__version__",
]
