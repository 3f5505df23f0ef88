"""Correction-coefficient engines.

Three families of numbers drive the trapezoidal corrections: z_k for an
on-mesh near singularity, the shifted z_{k,s} for an off-mesh one, and
their symmetric combination p_{k,s} = z_{k,-s} + (-1)^k z_{k,s}.  Each is
seeded by digamma values at 1 +/- s - i*lambda and extended downward by a
two-term recurrence; closed forms and truncated-series oracles are kept
alongside for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .specfun import (
    EULER_GAMMA,
    ZETA_2,
    digamma,
    digamma_complex,
    hurwitz_zeta_nonpos,
    trigamma,
    zeta_nonpos,
)

K_MAX_DEFAULT = 12
K_MAX_LIMIT = 32

_EPS = np.finfo(float).eps
# Conditioning: each recurrence step multiplies prior rounding by lambda^2.
_LOSS_WARN_THRESHOLD = 1e-10


@dataclass(frozen=True)
class CoeffParams:
    """Parameters of a coefficient table: lam = d/(c h), off-mesh fraction s."""

    lam: float
    s: float = 0.0
    h: float = 1.0
    k_max: int = K_MAX_DEFAULT

    def __post_init__(self):
        if self.lam < 0.0:
            raise ValueError("lam must be nonnegative")
        if not -0.5 <= self.s <= 0.5:
            raise ValueError("s must lie in [-1/2, 1/2]")
        if self.h <= 0.0:
            raise ValueError("h must be positive")
        if not 0 <= self.k_max <= K_MAX_LIMIT:
            raise ValueError(f"k_max must lie in [0, {K_MAX_LIMIT}]")


@dataclass(frozen=True)
class CoeffTable:
    """z_k, z_{k,+s}, z_{k,-s} and p_{k,s} for k = 0..k_max at fixed (lam, s, h)."""

    params: CoeffParams
    zk: np.ndarray
    zks: np.ndarray
    zk_minus_s: np.ndarray
    pks: np.ndarray
    warnings: tuple[str, ...] = ()


def loss_estimate(lam: float, k: int) -> float:
    """Documented loss-of-significance bound ~ lam^(2 floor(k/2)) ulp for the recurrences."""
    growth = max(1.0, lam) ** (2 * (k // 2))
    return growth * _EPS


def conditioning_warnings(params: CoeffParams) -> tuple[str, ...]:
    if params.lam <= 1.0:
        return ()
    bad = [k for k in range(params.k_max + 1)
           if loss_estimate(params.lam, k) > _LOSS_WARN_THRESHOLD]
    if not bad:
        return ()
    return (f"recurrence loss of significance may exceed {_LOSS_WARN_THRESHOLD:g} "
            f"for k >= {bad[0]} at lam = {params.lam:g}",)


def zk_table(params: CoeffParams) -> np.ndarray:
    """Coefficients z_0..z_k_max for the on-mesh near-singular correction.

    Seeds: z_0 = -Im psi(1 - i lam)/lam, z_1 = -Re psi(1 - i lam) - log h;
    then z_k = zeta(2 - k) - lam^2 z_{k-2}.  At lam = 0 the analytic limits
    z_k = zeta_h(2 - k) are used instead of dividing by lam.
    """
    lam, h, kmax = params.lam, params.h, params.k_max
    z = np.empty(kmax + 1)
    if lam == 0.0:
        vals = [ZETA_2, EULER_GAMMA - math.log(h)]
        z[:len(vals[:kmax + 1])] = vals[:kmax + 1]
        for k in range(2, kmax + 1):
            z[k] = zeta_nonpos(k - 2)
        return z
    psi = digamma_complex(complex(1.0, -lam))
    z[0] = -psi.imag / lam
    if kmax >= 1:
        z[1] = -psi.real - math.log(h)
    lam2 = lam * lam
    for k in range(2, kmax + 1):
        z[k] = zeta_nonpos(k - 2) - lam2 * z[k - 2]
    return z


def zks_table(params: CoeffParams) -> np.ndarray:
    """Shifted coefficients z_{0,s}..z_{k_max,s} (Hurwitz offset 1 + s).

    Seeds from psi(1 + s - i lam); recurrence
    z_{k,s} = zeta(2-k, 1+s) - lam^2 z_{k-2,s}.
    """
    lam, s, h, kmax = params.lam, params.s, params.h, params.k_max
    offset = 1.0 + s
    z = np.empty(kmax + 1)
    if lam == 0.0:
        z[0] = trigamma(offset)
        if kmax >= 1:
            z[1] = -digamma(offset) - math.log(h)
        for k in range(2, kmax + 1):
            z[k] = hurwitz_zeta_nonpos(k - 2, offset)
        return z
    psi = digamma_complex(complex(offset, -lam))
    z[0] = -psi.imag / lam
    if kmax >= 1:
        z[1] = -psi.real - math.log(h)
    lam2 = lam * lam
    for k in range(2, kmax + 1):
        z[k] = hurwitz_zeta_nonpos(k - 2, offset) - lam2 * z[k - 2]
    return z


def pks_seeds(lam: float, s: float) -> tuple[float, float]:
    """p_{0,s} and p_{1,s}, with the lam -> 0 limits on the lam = 0 path."""
    if lam == 0.0:
        p0 = trigamma(1.0 - s) + trigamma(1.0 + s)
        p1 = -digamma(1.0 - s) + digamma(1.0 + s)
        return p0, p1
    psi_m = digamma_complex(complex(1.0 - s, -lam))
    psi_p = digamma_complex(complex(1.0 + s, -lam))
    p0 = -(psi_m.imag + psi_p.imag) / lam
    p1 = -(psi_m.real - psi_p.real)
    return p0, p1


def pks_table(params: CoeffParams) -> np.ndarray:
    """Coefficients p_{0,s}..p_{k_max,s} for the off-mesh correction.

    Recurrence p_{k,s} = -(-s)^(k-2) - lam^2 p_{k-2,s} on top of the digamma
    seeds; note p_{1,s} carries no log h term (the logs of z_{1,+/-s} cancel).
    """
    lam, s, kmax = params.lam, params.s, params.k_max
    p = np.empty(kmax + 1)
    p0, p1 = pks_seeds(lam, s)
    p[0] = p0
    if kmax >= 1:
        p[1] = p1
    lam2 = lam * lam
    for k in range(2, kmax + 1):
        p[k] = -((-s) ** (k - 2)) - lam2 * p[k - 2]
    return p


def pks_closed(params: CoeffParams) -> np.ndarray:
    """Closed-form p_{k,s} from the seeds alone.

    p_{2k,s}   = -(s^2k - (-lam^2)^k)/(s^2 + lam^2) + (-lam^2)^k p_{0,s}
    p_{2k+1,s} =  (s^(2k+1) - (-lam^2)^k s)/(s^2 + lam^2) + (-lam^2)^k p_{1,s}

    The rational prefactors are evaluated through the exact polynomial
    quotient of s^2k - (-lam^2)^k by s^2 + lam^2, which keeps the expression
    finite and stable as (s, lam) -> (0, 0).
    """
    lam, s, kmax = params.lam, params.s, params.k_max
    p0, p1 = pks_seeds(lam, s)
    mlam2 = -lam * lam
    s2 = s * s
    p = np.empty(kmax + 1)
    p[0] = p0
    if kmax >= 1:
        p[1] = p1
    for k in range(2, kmax + 1):
        m, odd = divmod(k, 2)
        # quotient = (s^2m - (-lam^2)^m) / (s^2 + lam^2), expanded exactly
        quotient = 0.0
        for i in range(m):
            quotient += s2 ** i * mlam2 ** (m - 1 - i)
        if odd:
            p[k] = s * quotient + mlam2 ** m * p1
        else:
            p[k] = -quotient + mlam2 ** m * p0
    return p


def coeff_table(params: CoeffParams) -> CoeffTable:
    """All coefficient families at (lam, s, h), with conditioning diagnostics."""
    zks = zks_table(params)
    zk_minus = zks_table(replace(params, s=-params.s))
    return CoeffTable(
        params=params,
        zk=zk_table(params),
        zks=zks,
        zk_minus_s=zk_minus,
        pks=pks_table(params),
        warnings=conditioning_warnings(params),
    )


def _zeta_h_general(order: int, offset: float, h: float):
    """Modified (Hurwitz) zeta at arbitrary integer order, via mpmath.

    Test-oracle helper: deliberately routed through an independent library
    rather than the package's own zeta values.
    """
    import mpmath as mp

    if order == 1:
        return -mp.digamma(offset) - mp.log(h)
    return mp.zeta(order, offset)


def fk_series_oracle(k: int, z: complex, h: float, m_max: int | None = None,
                     s: float = 0.0) -> complex:
    """Truncated rational zeta series sum_m z^(2m) zeta_h(2m + 2 - k, 1 + s).

    Test-only oracle for the z_k / z_{k,s} recurrences (s = 0 gives the
    Riemann-case series).  Converges for |z| < 1 + s; raises outside.
    Summation runs in extended precision so the truncation, not rounding,
    sets the error.
    """
    import mpmath as mp

    if k < 0:
        raise ValueError("k must be nonnegative")
    radius = 1.0 + s
    az = abs(z)
    if az >= radius:
        raise ValueError(f"series diverges for |z| >= {radius} (got |z| = {az:g})")
    if m_max is None:
        if az == 0.0:
            m_max = 1
        else:
            m_max = min(200000, max(10, int(40.0 / -math.log(az / radius)) + 10))
    offset = 1.0 + s
    with mp.workdps(30):
        zz = mp.mpc(z) ** 2
        acc = mp.mpc(0)
        zpow = mp.mpc(1)
        for m in range(m_max + 1):
            term = zpow * _zeta_h_general(2 * m + 2 - k, offset, h)
            acc += term
            if m > k and abs(term) < 1e-22 * max(1.0, abs(acc)):
                break
            zpow *= zz
        return complex(acc)
