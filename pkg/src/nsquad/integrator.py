"""High-level API: corrected near-singular and finite-part integration.

Given the smooth numerator g, the kernel parameters (a, c, d, x_s) and a
mesh half-count n, these routines build the punctured trapezoidal sum,
select the matching correction (centered or off-mesh, closed-form or
finite-difference series) and return the corrected value with a breakdown.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corrections import (
    FD_DERIV_MAX,
    FD_STENCIL,
    CorrectionBreakdown,
    GEval,
    _breakdown,
    correction_centered_closed,
    correction_offmesh_closed,
    correction_series_truncated,
    fd_derivatives,
    hypersingular_offmesh,
)
from .emcoeff import (CoeffParams, coeff_table, conditioning_warnings,
                      pks_closed, pks_seeds, zks_table)
from .meshrule import DEFAULT_SCHEME, EdgeScheme, Mesh, punctured_trapezoid
from .specfun import hurwitz_zeta_nonpos

METHODS = ("auto", "closed-form", "fd-series")

_EPS = np.finfo(float).eps
# When s^2 + lam^2 is this small the off-mesh closed form loses too many
# digits to cancellation; the equivalent high-order series is used instead.
_CLOSED_FORM_DENOM_MIN = 1e-6


@dataclass(frozen=True)
class KernelParams:
    """Kernel 1/(d^2 + c^2 (x - x_s)^2) on [-a, a]."""

    a: float
    c: float = 1.0
    d: float = 0.0
    x_s: float = 0.0

    def __post_init__(self):
        if self.a <= 0.0 or self.c <= 0.0:
            raise ValueError("a and c must be positive")
        if self.d < 0.0:
            raise ValueError("d must be nonnegative (the kernel depends on d^2; "
                             "negate the jump part for the d < 0 operator limit)")
        if not abs(self.x_s) < self.a:
            raise ValueError("x_s must lie strictly inside (-a, a)")


@dataclass(frozen=True)
class MeshSummary:
    a: float
    n: int
    h: float
    puncture: int
    s: float


@dataclass
class QuadResult:
    """Corrected integral value with its uncorrected base and correction breakdown."""

    value: float
    uncorrected: float
    breakdown: CorrectionBreakdown
    mesh: MeshSummary
    method: str
    warnings: list[str] = field(default_factory=list)


def puncture_split(x_s: float, h: float) -> tuple[int, float]:
    """Nearest-node index j and off-mesh fraction s = x_s/h - j in (-1/2, 1/2].

    An exact tie (x_s halfway between nodes) resolves to the left node,
    i.e. s = +1/2, so results are reproducible bit-for-bit.
    """
    t = x_s / h
    j = math.ceil(t - 0.5)
    return j, t - j


def _kernel_samples(g: GEval, params: KernelParams, mesh: Mesh,
                    puncture: int) -> tuple[np.ndarray, np.ndarray]:
    nodes = mesh.nodes()
    gvals = np.array([g.real_eval(x) for x in nodes])
    denom = params.d ** 2 + params.c ** 2 * (nodes - params.x_s) ** 2
    denom[mesh.n + puncture] = 1.0  # punctured entry is never summed
    f = gvals / denom
    f[mesh.n + puncture] = np.nan
    return gvals, f


def _validate(params: KernelParams, n: int, mesh: Mesh) -> None:
    if n < 16:
        raise ValueError("n must be at least 16")
    h = mesh.h
    if not abs(params.x_s) < params.a - 10.0 * h:
        raise ValueError("x_s too close to an endpoint for the correction "
                         "stencils (need |x_s| < a - 10h)")


def _stencil_derivs(gvals: np.ndarray, mesh: Mesh, puncture: int,
                    x_s: float) -> np.ndarray:
    i0 = mesh.n + puncture - FD_STENCIL // 2
    window = gvals[i0:i0 + FD_STENCIL]
    return fd_derivatives(window, mesh.h, x_s - mesh.node(puncture))


def integrate_near_singular(g: GEval, params: KernelParams, n: int,
                            method: str = "auto",
                            scheme: EdgeScheme = DEFAULT_SCHEME) -> QuadResult:
    """Corrected punctured-trapezoidal value of the near-singular integral.

    The puncture is the mesh node nearest x_s; the correction is centered
    when x_s falls exactly on a node and off-mesh otherwise.  `method`
    selects the closed-form correction (requires g.complex_eval), the
    finite-difference series with derivatives through order 6, or `auto`
    (closed-form when a complex evaluator is available).

    d = 0 requests route to the finite-part formulas with the jump omitted.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    mesh = Mesh(params.a, n)
    _validate(params, n, mesh)
    h = mesh.h
    j, s = puncture_split(params.x_s, h)
    warnings: list[str] = []
    if g.complex_eval is not None:
        gap = g.consistency_gap(params.x_s)
        if gap > 4.0 * _EPS:
            warnings.append(f"complex_eval disagrees with real_eval at x_s "
                            f"(relative gap {gap:.2e})")
    gvals, f = _kernel_samples(g, params, mesh, j)
    uncorrected = punctured_trapezoid(mesh, f, puncture=j, scheme=scheme)

    c, d = params.c, params.d
    if d == 0.0:
        e_unit = hypersingular_offmesh(g, h, s, x_s=params.x_s)
        breakdown = _breakdown(e_unit / (c * c), 0.0, 0, "finite-part")
        used = "finite-part"
    else:
        use_closed = method == "closed-form" or (
            method == "auto" and g.complex_eval is not None)
        if use_closed:
            lam = d / (c * h)
            if s == 0.0:
                breakdown = correction_centered_closed(g, c, d, h, x_s=params.x_s)
            elif s * s + lam * lam < _CLOSED_FORM_DENOM_MIN:
                warnings.append("off-mesh closed form ill-conditioned for "
                                "tiny s and lam; used the series form")
                breakdown = correction_series_truncated(
                    g, c, d, h, s, params.x_s, K=10)
            else:
                breakdown = correction_offmesh_closed(g, c, d, h, s, params.x_s)
            used = "closed-form"
        else:
            derivs = _stencil_derivs(gvals, mesh, j, params.x_s)
            breakdown = correction_series_truncated(
                g, c, d, h, s, params.x_s, K=FD_DERIV_MAX, derivs=derivs)
            used = "fd-series"
            lam = d / (c * h)
            warnings.extend(conditioning_warnings(
                CoeffParams(lam=lam, s=abs(s), h=h, k_max=FD_DERIV_MAX)))

    summary = MeshSummary(params.a, n, h, j, s)
    return QuadResult(uncorrected + breakdown.total, uncorrected, breakdown,
                      summary, used, warnings)


def integrate_finite_part(g: GEval, a: float, x_s: float, n: int,
                          scheme: EdgeScheme = DEFAULT_SCHEME) -> QuadResult:
    """Hadamard finite part of the integral of g(x)/(x - x_s)^2 over [-a, a]."""
    params = KernelParams(a=a, c=1.0, d=0.0, x_s=x_s)
    return integrate_near_singular(g, params, n, method="auto", scheme=scheme)


@dataclass
class SelfCheckReport:
    """Identity residuals of the coefficient machinery at one (lam, s)."""

    lam: float
    s: float
    reflection_max: float
    symmetry_max: float
    closedform_max: float
    p1_h_invariance: float
    p0: float
    p1: float
    warnings: list[str]

    @property
    def max_deviation(self) -> float:
        return max(self.reflection_max, self.symmetry_max, self.closedform_max,
                   self.p1_h_invariance)


def self_check(params: KernelParams, n: int, k_max: int = 12) -> SelfCheckReport:
    """Run the coefficient identity suite at the (lam, s) implied by params.

    Checks the nonpositive-order zeta reflection identity, the symmetry
    p_{k,s} = z_{k,-s} + (-1)^k z_{k,s}, closed form vs recurrence for
    p_{k,s}, and h-independence of p_{1,s}; reports max deviations plus any
    conditioning warnings for lam > 1.
    """
    mesh = Mesh(params.a, n)
    h = mesh.h
    _, s = puncture_split(params.x_s, h)
    lam = params.d / (params.c * h)
    cp = CoeffParams(lam=lam, s=s, h=h, k_max=k_max)
    table = coeff_table(cp)

    reflection = 0.0
    for k in range(11):
        resid = (hurwitz_zeta_nonpos(k, 1.0 + s)
                 + (-1) ** k * hurwitz_zeta_nonpos(k, 1.0 - s) + s ** k)
        reflection = max(reflection, abs(resid))

    signs = (-1.0) ** np.arange(k_max + 1)
    combo = table.zk_minus_s + signs * table.zks
    scale = np.maximum(1.0, np.abs(table.pks))
    symmetry = float(np.max(np.abs(table.pks - combo) / scale))

    closed = pks_closed(cp)
    closedform = float(np.max(np.abs(closed - table.pks) / scale))

    cp2 = CoeffParams(lam=lam, s=s, h=2.0 * h, k_max=1)
    p1_a = (zks_table(CoeffParams(lam=lam, s=-s, h=h, k_max=1))[1]
            + (-1.0) * zks_table(CoeffParams(lam=lam, s=s, h=h, k_max=1))[1])
    p1_b = (zks_table(CoeffParams(lam=lam, s=-s, h=2.0 * h, k_max=1))[1]
            + (-1.0) * zks_table(cp2)[1])
    p0, p1 = pks_seeds(lam, s)

    return SelfCheckReport(
        lam=lam, s=s,
        reflection_max=reflection,
        symmetry_max=symmetry,
        closedform_max=closedform,
        p1_h_invariance=abs(p1_a - p1_b),
        p0=p0, p1=p1,
        warnings=list(table.warnings),
    )
