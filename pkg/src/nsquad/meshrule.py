"""Uniform meshes on [-a, a] and the punctured / shifted trapezoidal rules.

The rules here carry only *endpoint* corrections (Gregory weights by
default, Bernoulli-derivative corrections as an alternative).  Interior
singular corrections are assembled elsewhere; a rule in this module treats
its samples as those of a smooth function except possibly at one punctured
node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _interp
from .specfun import bernoulli_fraction, bernoulli_number, bernoulli_poly_fraction

GREGORY_ORDERS = (2, 4, 6, 8, 10)
BERNOULLI_ORDERS = (2, 4, 6, 8, 10, 12, 14, 16)


@dataclass(frozen=True)
class Mesh:
    """Uniform grid of 2n+1 nodes k*h, k = -n..n, with h = a/n."""

    a: float
    n: int

    def __post_init__(self):
        if self.a <= 0.0:
            raise ValueError("half-width a must be positive")
        if self.n < 1:
            raise ValueError("n must be a positive integer")

    @property
    def h(self) -> float:
        return self.a / self.n

    def nodes(self) -> np.ndarray:
        return np.arange(-self.n, self.n + 1) * self.h

    def node(self, k: int) -> float:
        if not -self.n <= k <= self.n:
            raise ValueError(f"node index {k} outside [-{self.n}, {self.n}]")
        return k * self.h


@dataclass(frozen=True)
class EdgeScheme:
    """Endpoint-correction scheme: Gregory weights or Bernoulli-derivative terms.

    For the Gregory kind, ``order`` is the polynomial degree the corrected
    rule integrates exactly; for the Bernoulli kind it is the highest h^{2k}
    power retained (derivatives f', f''', ..., f^(order-1) at the ends).
    """

    kind: str = "gregory"
    order: int = 8

    def __post_init__(self):
        if self.kind == "gregory":
            if self.order not in GREGORY_ORDERS:
                raise ValueError(f"gregory order must be one of {GREGORY_ORDERS}")
        elif self.kind == "bernoulli":
            if self.order not in BERNOULLI_ORDERS:
                raise ValueError(f"bernoulli order must be one of {BERNOULLI_ORDERS}")
        else:
            raise ValueError(f"unknown edge scheme kind {self.kind!r}")


DEFAULT_SCHEME = EdgeScheme("gregory", 8)


def _solve_moments(nodes: list[Fraction], rho: list[Fraction]) -> list[Fraction]:
    """Solve sum_j w_j nodes[j]^m = rho[m] exactly over the rationals."""
    m = len(nodes)
    aug = [[nodes[j] ** i for j in range(m)] + [rho[i]] for i in range(m)]
    for col in range(m):
        piv = next(r for r in range(col, m) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][m] for r in range(m)]


@lru_cache(maxsize=32)
def _gregory_weight_tuple(order: int) -> tuple[float, ...]:
    q = order + 1
    rho = []
    for m in range(q):
        if m % 2 == 1:
            rho.append(bernoulli_fraction(m + 1) / (m + 1))
        else:
            rho.append(Fraction(0))
    nodes = [Fraction(j) for j in range(q)]
    return tuple(float(w) for w in _solve_moments(nodes, rho))


def gregory_weights(order: int) -> np.ndarray:
    """Boundary weight adjustments for the Gregory-corrected trapezoid.

    Returns ``order + 1`` adjustments applied at the nodes nearest each
    endpoint (on top of the half-weighted trapezoidal sum).  The moment
    system is solved exactly over the rationals, so the corrected rule
    integrates polynomials of degree <= order exactly on a uniform grid;
    the symmetric pairing of the two ends makes degree order + 1 exact as
    well.
    """
    if order not in GREGORY_ORDERS:
        raise ValueError(f"gregory order must be one of {GREGORY_ORDERS}")
    return np.array(_gregory_weight_tuple(order))


@lru_cache(maxsize=256)
def _offset_weight_tuple(order: int, q_num: int, q_den: int) -> tuple[float, ...]:
    # Moments B_{m+1}(q)/(m+1) absorb both the half-weight adjustment and the
    # fractional offset q of the outermost node relative to the true endpoint.
    q = Fraction(q_num, q_den)
    rho = [bernoulli_poly_fraction(m + 1, q) / (m + 1) for m in range(order + 1)]
    nodes = [q + j for j in range(order + 1)]
    return tuple(float(w) for w in _solve_moments(nodes, rho))


def _offset_edge_weights(order: int, q: float) -> np.ndarray:
    frac = Fraction(q)  # floats are exact rationals
    return np.array(_offset_weight_tuple(order, frac.numerator, frac.denominator))


def _bernoulli_edge_sum(order: int, derivs: np.ndarray, h: float) -> float:
    # sum_{k=1}^{order/2} B_{2k}/(2k)! f^{(2k-1)} h^{2k}
    acc = 0.0
    for k in range(order // 2, 0, -1):
        acc += bernoulli_number(2 * k) / math.factorial(2 * k) * derivs[k - 1] * h ** (2 * k)
    return acc


def _onesided_odd_derivs(samples: np.ndarray, h: float, order: int,
                         at_left: bool) -> np.ndarray:
    """Odd derivatives f', f''', ..., f^(order-1) at an endpoint, one-sided.

    Uses the degree-9 interpolant through the outermost 10 samples.
    """
    if order > 10:
        raise ValueError("one-sided estimates support bernoulli order <= 10; "
                         "supply analytic endpoint derivatives instead")
    if at_left:
        t = np.arange(10.0)
        y = samples[:10]
        u = 0.0
    else:
        t = np.arange(10.0)
        y = samples[-10:]
        u = 9.0
    d = _interp.stencil_derivatives(t, y, u, order - 1)
    k = np.arange(1, order, 2)
    return d[k] / h ** k.astype(float)


def _check_finite(values: np.ndarray) -> None:
    if not np.all(np.isfinite(values)):
        raise ValueError("non-finite sample at a summed node")


def left_rule(mesh: Mesh, samples: np.ndarray, scheme: EdgeScheme = DEFAULT_SCHEME,
              end_derivs=None) -> float:
    """L_h[f]: sum over k = -n..-1 plus the edge correction at -a."""
    samples = np.asarray(samples, dtype=float)
    h = mesh.h
    part = samples[:mesh.n]
    _check_finite(part)
    corr = -0.5 * h * part[0]
    if scheme.kind == "gregory":
        w = gregory_weights(scheme.order)
        if len(part) < len(w):
            raise ValueError(f"mesh too small for gregory order {scheme.order} "
                             f"(need n >= {len(w)})")
        corr += h * np.dot(w, part[:len(w)])
    else:
        if end_derivs is not None:
            dleft = np.asarray(end_derivs, dtype=float)
        else:
            dleft = _onesided_odd_derivs(part, h, scheme.order, at_left=True)
        corr += _bernoulli_edge_sum(scheme.order, dleft, h)
    return float(h * float(np.sum(part)) + corr)


def right_rule(mesh: Mesh, samples: np.ndarray, scheme: EdgeScheme = DEFAULT_SCHEME,
               end_derivs=None) -> float:
    """R_h[f]: sum over k = 1..n plus the edge correction at +a."""
    samples = np.asarray(samples, dtype=float)
    h = mesh.h
    part = samples[mesh.n + 1:]
    _check_finite(part)
    corr = -0.5 * h * part[-1]
    if scheme.kind == "gregory":
        w = gregory_weights(scheme.order)
        if len(part) < len(w):
            raise ValueError(f"mesh too small for gregory order {scheme.order} "
                             f"(need n >= {len(w)})")
        corr += h * np.dot(w, part[::-1][:len(w)])
    else:
        if end_derivs is not None:
            dright = np.asarray(end_derivs, dtype=float)
        else:
            dright = _onesided_odd_derivs(part, h, scheme.order, at_left=False)
        corr -= _bernoulli_edge_sum(scheme.order, dright, h)
    return float(h * float(np.sum(part)) + corr)


def punctured_trapezoid(mesh: Mesh, samples: np.ndarray, puncture: int | None = None,
                        scheme: EdgeScheme = DEFAULT_SCHEME, end_derivs=None) -> float:
    """Trapezoidal rule with edge corrections, skipping one interior node.

    Parameters
    ----------
    samples : array of f at all 2n+1 mesh nodes (the punctured entry may be
        non-finite; it is never touched).
    puncture : mesh index k in (-n, n) to omit, or None for the ordinary rule.
    scheme : endpoint correction scheme.
    end_derivs : optional pair (left, right) of odd-derivative arrays
        [f', f''', ...] at -a and +a for the Bernoulli scheme.

    The rule is assembled as L_h + R_h + (center and puncture adjustments),
    so ``punctured_trapezoid(..., puncture=0)`` equals
    ``left_rule(...) + right_rule(...)`` identically.
    """
    samples = np.asarray(samples, dtype=float)
    if len(samples) != 2 * mesh.n + 1:
        raise ValueError("sample count does not match the mesh")
    stencil = scheme.order + 1 if scheme.kind == "gregory" else 10
    if puncture is not None:
        if abs(puncture) >= mesh.n:
            raise ValueError("puncture must be an interior node")
        if abs(puncture) > mesh.n - stencil:
            raise ValueError("puncture overlaps the edge-correction stencil")
    h = mesh.h
    vals = samples
    if puncture is not None and puncture != 0:
        vals = samples.copy()
        vals[mesh.n + puncture] = 0.0  # excluded node; value never consumed
    if scheme.kind == "bernoulli" and end_derivs is not None:
        dl, dr = end_derivs
        lr = (left_rule(mesh, vals, scheme, dl)
              + right_rule(mesh, vals, scheme, dr))
    else:
        lr = left_rule(mesh, vals, scheme) + right_rule(mesh, vals, scheme)
    if puncture == 0:
        return lr
    center = vals[mesh.n]
    _check_finite(np.array([center]))
    return float(lr + h * center)


def plain_trapezoid(mesh: Mesh, samples: np.ndarray) -> float:
    """Classical trapezoidal rule: all nodes, half end weights, no corrections."""
    samples = np.asarray(samples, dtype=float)
    if len(samples) != 2 * mesh.n + 1:
        raise ValueError("sample count does not match the mesh")
    _check_finite(samples)
    return float(mesh.h * (float(np.sum(samples)) - 0.5 * (samples[0] + samples[-1])))


def shifted_trapezoid(mesh: Mesh, f_eval, s: float,
                      scheme: EdgeScheme = DEFAULT_SCHEME,
                      include_center: bool = False) -> float:
    """Trapezoidal rule on the shifted grid (k + s)h targeting integral over [-a, a].

    The node k = 0 (at x = s h) is omitted by default, mirroring the
    punctured rule; ``include_center=True`` gives the ordinary (non-punctured)
    shifted rule.  Endpoint corrections use offset-aware Gregory weights:
    the outermost nodes sit at -a + s h and a + s h, and the moment system
    is built for the fractional offsets s and -s so that the corrected rule
    still integrates polynomials over exactly [-a, a].

    With s = 0 and the center excluded this reduces to
    ``punctured_trapezoid(..., puncture=0)``.
    """
    if not -0.5 <= s <= 0.5:
        raise ValueError("shift fraction s must lie in [-1/2, 1/2]")
    if scheme.kind != "gregory":
        raise ValueError("shifted rules support only the gregory scheme")
    h = mesh.h
    n = mesh.n
    xs = (np.arange(-n, n + 1) + s) * h
    vals = np.array([float(f_eval(x)) for x in xs])
    idx = np.arange(2 * n + 1)
    keep = idx != n if not include_center else np.ones(2 * n + 1, dtype=bool)
    _check_finite(vals[keep])
    total = h * float(np.sum(vals[keep]))
    wl = _offset_edge_weights(scheme.order, s)
    wr = _offset_edge_weights(scheme.order, -s)
    m = len(wl)
    total += h * float(np.dot(wl, vals[:m]))
    total += h * float(np.dot(wr, vals[::-1][:m]))
    return float(total)
