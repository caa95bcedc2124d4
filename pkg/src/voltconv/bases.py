"""Orthogonal-polynomial basis descriptors and their recurrence machinery.

Every finite-interval basis here (Chebyshev T_n, Legendre P_n, Gegenbauer
C_n^(lam), Jacobi P_n^(alpha,beta)) satisfies a three-term recurrence

    p_{n+1}(x) = (A_n x + B_n) p_n(x) + C_n p_{n-1}(x),   p_0 = 1, p_{-1} = 0,

which drives Clenshaw evaluation, Vandermonde assembly and quadrature.  The
half-line basis is the weighted Laguerre function w(x) L_n(x).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BasisParameterError, UnsupportedBasisError

CHEBYSHEV = "Chebyshev"
LEGENDRE = "Legendre"
GEGENBAUER = "Gegenbauer"
JACOBI = "Jacobi"
WEIGHTED_LAGUERRE = "WeightedLaguerre"

_KINDS = (CHEBYSHEV, LEGENDRE, GEGENBAUER, JACOBI, WEIGHTED_LAGUERRE)

# Degenerate-line guard for Jacobi (alpha + beta = -1 is excluded: the
# integration coefficient A_1 vanishes there and S_1 divides by it).
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class BasisSpec:
    """Tagged basis selector; parameters are present only where meaningful."""

    kind: str
    lam: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise BasisParameterError(f"unknown basis kind {self.kind!r}")
        if self.kind == GEGENBAUER:
            if self.lam is None:
                raise BasisParameterError("Gegenbauer basis needs lambda")
            if not (self.lam > -0.5) or self.lam == 0.0:
                raise BasisParameterError(
                    f"Gegenbauer lambda must satisfy lambda > -1/2, lambda != 0 "
                    f"(got {self.lam})")
        elif self.lam is not None:
            raise BasisParameterError("lambda is only valid for Gegenbauer")
        if self.kind == JACOBI:
            if self.alpha is None or self.beta is None:
                raise BasisParameterError("Jacobi basis needs alpha and beta")
            if not (self.alpha > -1.0 and self.beta > -1.0):
                raise BasisParameterError(
                    f"Jacobi needs alpha, beta > -1 (got {self.alpha}, {self.beta})")
            if abs(self.alpha + self.beta + 1.0) <= DEGENERATE_TOL:
                raise BasisParameterError(
                    "Jacobi with alpha + beta = -1 is degenerate here; use the "
                    "Chebyshev or Gegenbauer builders instead")
        elif self.alpha is not None or self.beta is not None:
            raise BasisParameterError("alpha/beta are only valid for Jacobi")

    @property
    def finite_interval(self) -> bool:
        return self.kind != WEIGHTED_LAGUERRE

    def label(self) -> str:
        if self.kind == GEGENBAUER:
            return f"Gegenbauer(lambda={self.lam:g})"
        if self.kind == JACOBI:
            return f"Jacobi(alpha={self.alpha:g}, beta={self.beta:g})"
        return self.kind


def chebyshev() -> BasisSpec:
    return BasisSpec(CHEBYSHEV)


def legendre() -> BasisSpec:
    return BasisSpec(LEGENDRE)


def gegenbauer(lam: float) -> BasisSpec:
    return BasisSpec(GEGENBAUER, lam=float(lam))


def jacobi(alpha: float, beta: float) -> BasisSpec:
    return BasisSpec(JACOBI, alpha=float(alpha), beta=float(beta))


def weighted_laguerre() -> BasisSpec:
    return BasisSpec(WEIGHTED_LAGUERRE)


def raw_jacobi(alpha: float, beta: float) -> BasisSpec:
    """Jacobi descriptor without the convolution-specific exclusions.

    Quadrature rules are well defined on the whole range alpha, beta > -1,
    including the alpha + beta = -1 line that the convolution recurrences
    reject, so the quadrature module builds its descriptors through here.
    """
    if not (alpha > -1.0 and beta > -1.0):
        raise BasisParameterError("Jacobi weight needs alpha, beta > -1")
    b = object.__new__(BasisSpec)
    object.__setattr__(b, "kind", JACOBI)
    object.__setattr__(b, "lam", None)
    object.__setattr__(b, "alpha", float(alpha))
    object.__setattr__(b, "beta", float(beta))
    return b


def recurrence_abc(basis: BasisSpec, n: int, dtype=float):
    """(A_n, B_n, C_n) of p_{n+1} = (A_n x + B_n) p_n + C_n p_{n-1}.

    With dtype=np.longdouble the coefficients are formed in extended
    precision (the oracle's quadrature pipeline needs that; coefficient
    rounding feeds straight into recurrence accuracy).
    """
    one = dtype(1.0)
    nn = dtype(n)
    if basis.kind == CHEBYSHEV:
        return (one, 0.0 * one, 0.0 * one) if n == 0 else (2 * one, 0.0 * one, -one)
    if basis.kind == LEGENDRE:
        return ((2 * nn + 1) / (nn + 1), 0.0 * one, -nn / (nn + 1))
    if basis.kind == GEGENBAUER:
        lam = dtype(basis.lam)
        return (2 * (nn + lam) / (nn + 1), 0.0 * one,
                -(nn + 2 * lam - 1) / (nn + 1))
    if basis.kind == JACOBI:
        a, b = dtype(basis.alpha), dtype(basis.beta)
        if n == 0:
            return ((a + b + 2) / 2, (a - b) / 2, 0.0 * one)
        s = 2 * nn + a + b
        denom = 2 * (nn + 1) * (nn + a + b + 1) * s
        return ((s + 1) * (s + 2) * s / denom,
                (s + 1) * (a * a - b * b) / denom,
                -2 * (nn + a) * (nn + b) * (s + 2) / denom)
    if basis.kind == WEIGHTED_LAGUERRE:
        return (-one / (nn + 1), (2 * nn + 1) / (nn + 1), -nn / (nn + 1))
    raise UnsupportedBasisError(basis.kind)


def poly_vandermonde(basis: BasisSpec, x: np.ndarray, degree: int) -> np.ndarray:
    """Matrix V with V[..., k] = p_k(x), k = 0..degree (no Laguerre weight)."""
    x = np.asarray(x, dtype=float)
    V = np.empty(x.shape + (degree + 1,))
    V[..., 0] = 1.0
    if degree == 0:
        return V
    pm1 = np.ones_like(x)
    A0, B0, _ = recurrence_abc(basis, 0)
    p = A0 * x + B0
    V[..., 1] = p
    for k in range(1, degree):
        A, B, C = recurrence_abc(basis, k)
        p, pm1 = (A * x + B) * p + C * pm1, p
        V[..., k + 1] = p
    return V


def poly_values(basis: BasisSpec, x: np.ndarray, n: int) -> np.ndarray:
    """p_n(x) by forward recurrence (no Laguerre weight)."""
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.ones_like(x)
    pm1 = np.ones_like(x)
    A0, B0, _ = recurrence_abc(basis, 0)
    p = A0 * x + B0
    for k in range(1, n):
        A, B, C = recurrence_abc(basis, k)
        p, pm1 = (A * x + B) * p + C * pm1, p
    return p


def value_at_minus_one(basis: BasisSpec, n: int) -> float:
    """p_n(-1), accumulated multiplicatively (no factorials, no overflow).

    Chebyshev/Legendre: (-1)^n.  Gegenbauer: (-1)^n (2 lam)_n / n!.
    Jacobi: (-1)^n (beta+1)_n / n!.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if not basis.finite_interval:
        raise UnsupportedBasisError("value_at_minus_one needs a finite-interval basis")
    sign = -1.0 if n % 2 else 1.0
    if basis.kind in (CHEBYSHEV, LEGENDRE):
        return sign
    shift = 2.0 * basis.lam if basis.kind == GEGENBAUER else basis.beta + 1.0
    mag = 1.0
    for j in range(n):
        mag *= (shift + j) / (j + 1.0)
    return sign * mag


def values_at_minus_one(basis: BasisSpec, nmax: int) -> np.ndarray:
    """Vector [p_0(-1), ..., p_nmax(-1)]."""
    if basis.kind in (CHEBYSHEV, LEGENDRE):
        out = np.ones(nmax + 1)
        out[1::2] = -1.0
        return out
    if not basis.finite_interval:
        raise UnsupportedBasisError("values_at_minus_one needs a finite-interval basis")
    shift = 2.0 * basis.lam if basis.kind == GEGENBAUER else basis.beta + 1.0
    j = np.arange(nmax, dtype=float)
    mags = np.concatenate([[1.0], np.cumprod((shift + j) / (j + 1.0))])
    signs = np.ones(nmax + 1)
    signs[1::2] = -1.0
    return signs * mags


def boundary_weights(basis: BasisSpec, nmax: int) -> np.ndarray:
    """w_j = (-1)^(j+1) |p_j(-1)| for the row-0 boundary sum, j = 0..nmax.

    These satisfy p_j(-1) = -w_j, so sum_k R_{k,n} p_k(-1) = 0 is equivalent
    to R_{0,n} = sum_{j>=1} w_j R_{j,n}.
    """
    return -values_at_minus_one(basis, nmax)


def weight_parameters(basis: BasisSpec):
    """(alpha, beta) of the orthogonality weight (1-x)^a (1+x)^b."""
    if basis.kind == CHEBYSHEV:
        return (-0.5, -0.5)
    if basis.kind == LEGENDRE:
        return (0.0, 0.0)
    if basis.kind == GEGENBAUER:
        return (basis.lam - 0.5, basis.lam - 0.5)
    if basis.kind == JACOBI:
        return (basis.alpha, basis.beta)
    raise UnsupportedBasisError("no finite-interval weight for " + basis.kind)


def gegenbauer_S(lam: float, n: int) -> float:
    """Inhomogeneous term S_n = 2 (-1)^(n+1) (lam+n) (2 lam - 1)_n / (n+1)!.

    The Pochhammer ratio is a running product of O(1) factors.  Note
    S_0 = -2 lam (the empty product is 1), which is nonzero even at
    lam = 1/2 where S_n vanishes for all n >= 1.
    """
    r = 1.0
    for i in range(n):
        r *= (2.0 * lam - 1.0 + i) / (i + 2.0)
    sign = 1.0 if n % 2 else -1.0
    return 2.0 * sign * (lam + n) * r


def gegenbauer_S_array(lam: float, nmax: int) -> np.ndarray:
    """[S_0, ..., S_nmax] via one cumulative product."""
    n = np.arange(nmax + 1, dtype=float)
    r = np.concatenate([[1.0],
                        np.cumprod((2.0 * lam - 1.0 + n[:-1]) / (n[:-1] + 2.0))])
    signs = np.where(np.arange(nmax + 1) % 2 == 1, 1.0, -1.0)
    return 2.0 * signs * (lam + n) * r
