"""Corrected trapezoidal rules for near-singular and finite-part integrals.

Evaluates integrals of g(x)/(d^2 + c^2 (x - x_s)^2) over [-a, a] to machine
precision uniformly in the near-singularity strength d, by adding closed-form
or finite-difference corrections to the punctured trapezoidal rule, plus the
associated Hadamard finite-part (d = 0) quadrature rules.
"""

from .corrections import (
    CorrectionBreakdown,
    GEval,
    correction_centered_closed,
    correction_offmesh_closed,
    correction_series_truncated,
    fd_derivatives,
    hypersingular_offmesh,
)
from .emcoeff import (
    CoeffParams,
    CoeffTable,
    coeff_table,
    fk_series_oracle,
    pks_closed,
    pks_table,
    zk_table,
    zks_table,
)
from .integrator import (
    KernelParams,
    QuadResult,
    SelfCheckReport,
    integrate_finite_part,
    integrate_near_singular,
    puncture_split,
    self_check,
)
from .meshrule import (
    EdgeScheme,
    Mesh,
    gregory_weights,
    left_rule,
    plain_trapezoid,
    punctured_trapezoid,
    right_rule,
    shifted_trapezoid,
)
from .oracle import (
    ReferenceResult,
    complex_ei,
    exact_test1,
    exact_test2,
    finite_part_reference,
    reference_integral,
)
from .specfun import (
    bernoulli_number,
    bernoulli_poly,
    digamma,
    digamma_complex,
    hurwitz_zeta_nonpos,
    trigamma,
    zeta_h,
    zeta_h_hurwitz,
)

__version__ = "0.1.0"

__all__ = [
    "Mesh", "EdgeScheme", "gregory_weights", "punctured_trapezoid",
    "plain_trapezoid", "shifted_trapezoid", "left_rule", "right_rule",
    "CoeffParams", "CoeffTable", "coeff_table", "zk_table", "zks_table",
    "pks_table", "pks_closed", "fk_series_oracle",
    "GEval", "CorrectionBreakdown", "correction_centered_closed",
    "correction_offmesh_closed", "correction_series_truncated",
    "hypersingular_offmesh", "fd_derivatives",
    "KernelParams", "QuadResult", "SelfCheckReport",
    "integrate_near_singular", "integrate_finite_part", "self_check",
    "puncture_split",
    "ReferenceResult", "reference_integral", "exact_test1", "exact_test2",
    "complex_ei", "finite_part_reference",
    "bernoulli_number", "bernoulli_poly", "digamma", "digamma_complex",
    "trigamma", "hurwitz_zeta_nonpos", "zeta_h", "zeta_h_hurwitz",
]
