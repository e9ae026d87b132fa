"""Entropy-modulated density transforms on quadrature grids.

Three transforms act on a probability density f with distribution function F:

* type1 attenuates mass where the Bernoulli entropy of F is high,
* type2 amplifies it there instead,
* type3 modulates by the phase factor 2 sin^2(pi F).

Each produces a new density after renormalization, so the transforms can be
iterated. The package provides the grid/quadrature layer, the transforms and
their iteration traces, governing-equation residual checks, characteristic
function tooling, and repeated-type3 Gaussianization diagnostics. The `dlab`
console script exposes all of it as deterministic file outputs.
"""

from .distributions import (
    FAMILIES,
    DistributionSpec,
    cdf,
    effective_support,
    has_singular_endpoint,
    median,
    pdf,
)
from .grid import (
    GridCdf,
    GridDensity,
    cdf_of,
    cumulative_simpson,
    density_csv,
    format_value,
    from_analytic,
    integrate,
    median_of,
    moment,
    simpson,
    variance,
)
from .residuals import (
    IcCheck,
    ResidualReport,
    report_json,
    residual_type1,
    residual_type2,
    residual_type3,
)
from .spectral import (
    CharFunction,
    ConvergenceDiagnostics,
    cf_csv,
    cf_of_values,
    char_function,
    diagnostics_csv,
    gaussian_convergence,
    modulated_char,
    t_operator,
    type3_cf_identity_gap,
    uniform_closed_form_cf,
)
from .transforms import (
    TYPE1_CONSTANT,
    TYPE2_CONSTANT,
    IterationTrace,
    StepDiagnostics,
    TransformKind,
    TransformStep,
    bernoulli_entropy,
    iterate,
    kernel,
    log_derivative,
    log_derivative_grid,
    log_odds,
    trace_csv,
    trace_diagnostics_json,
    transform,
    transform_step,
    transform_values,
)

__version__ = "0.1.0"

__all__ = [
    "FAMILIES",
    "DistributionSpec",
    "cdf",
    "effective_support",
    "has_singular_endpoint",
    "median",
    "pdf",
    "GridCdf",
    "GridDensity",
    "cdf_of",
    "cumulative_simpson",
    "density_csv",
    "format_value",
    "from_analytic",
    "integrate",
    "median_of",
    "moment",
    "simpson",
    "variance",
    "IcCheck",
    "ResidualReport",
    "report_json",
    "residual_type1",
    "residual_type2",
    "residual_type3",
    "CharFunction",
    "ConvergenceDiagnostics",
    "cf_csv",
    "cf_of_values",
    "char_function",
    "diagnostics_csv",
    "gaussian_convergence",
    "modulated_char",
    "t_operator",
    "type3_cf_identity_gap",
    "uniform_closed_form_cf",
    "TYPE1_CONSTANT",
    "TYPE2_CONSTANT",
    "IterationTrace",
    "StepDiagnostics",
    "TransformKind",
    "TransformStep",
    "bernoulli_entropy",
    "iterate",
    "kernel",
    "log_derivative",
    "log_derivative_grid",
    "log_odds",
    "trace_csv",
    "trace_diagnostics_json",
    "transform",
    "transform_step",
    "transform_values",
    "__version__",
]
