"""Numerical laboratory for the rotation Camassa-Holm equation and Besov-space diagnostics."""

__version__ = "0.1.0"

from .spectral import (  # noqa: E402
    Field, OffgridEvaluator, TorusGrid, dealias, differentiate, evaluate_offgrid, helmholtz_inverse,
)
from .littlewood_paley import (  # noqa: E402
    BesovIndex, DyadicFilterBank, besov_log_norm, besov_norm, block, build_filter_bank, low_pass,
)
from .model import (  # noqa: E402
    ModelCoefficients, compute_E, compute_F, compute_H, compute_coefficients, rhs,
)
from .solver import (  # noqa: E402
    SolverConfig, Trajectory, flow_gradient, flow_gradient_variational, flow_map, integrate,
)
from .inflation import (  # noqa: E402
    InflationConfig, InflationReport, build_initial_data, commutator_diag, run_single, run_sweep,
)
