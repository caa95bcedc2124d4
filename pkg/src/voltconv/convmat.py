"""Stable construction of Volterra convolution matrices.

The matrix R maps coefficients of g to coefficients of h = integral of
f(x-t) g(t) dt (left-sided, canonical interval), in a fixed basis.  R is
almost banded: rows 0..M are dense, rows M+1..M+N+1 carry a band of M+1
sub- and M+1 superdiagonals.  Construction is region-wise per column /
diagonal / row:

  column 0        antiderivative coefficients of the kernel
  region A        main diagonal and M+1 subdiagonals, forward column
                  recursion (stable: error multipliers <= 1 there)
  region B        superdiagonal band, mirrored from region A through the
                  rescaling symmetry of the (N-M) x (N-M) inner submatrix
  region C        dense top rows including row 0, recast recursion swept
                  upward row by row, extended into a triangular padding
                  strip beyond column N so each row's domain of dependence
                  is complete; only column 1's top entry comes from the
                  endpoint boundary sum (the recast forms are singular at
                  n = 1 for Chebyshev)

The naive single-recursion builder is kept for error-growth studies; above
the main diagonal its multipliers exceed 1 and roundoff snowballs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import bases
from .bases import BasisSpec
from .errors import (ArgumentError, DegenerateParameterError, DimensionError,
                     UnsupportedBasisError)
from .series import indefinite_integral_cheb

__all__ = [
    "ConvMatrix", "RecurrenceTables", "cheb_column0", "build_chebyshev",
    "build_legendre", "build_gegenbauer", "build_jacobi", "build",
    "build_chebyshev_naive", "gegenbauer_S", "jacobi_tables",
    "symmetry_ratio", "apply", "to_dense",
]

gegenbauer_S = bases.gegenbauer_S


@dataclass(frozen=True)
class ConvMatrix:
    """Packed almost-banded convolution matrix, immutable after build.

    top[k, n]          = R_{k,n} for rows k = 0..M (dense block)
    band[k-n+M+1, n]   = R_{k,n} for rows k >= M+1 with |k-n| <= M+1
    Everything else is a structural zero.  ``scale`` is the domain-length
    Jacobian applied by apply()/to_dense(); the stored entries are always
    for the canonical interval.
    """

    basis: BasisSpec
    M: int
    N: int
    scale: float
    top: np.ndarray = field(repr=False)
    band: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.top.setflags(write=False)
        self.band.setflags(write=False)

    @property
    def shape(self):
        return (self.M + self.N + 2, self.N + 1)

    @property
    def bandwidth(self) -> int:
        return self.M + 1

    def entry(self, k: int, n: int) -> float:
        """Scaled entry R_{k,n} (0 outside the stored structure)."""
        if not (0 <= k <= self.M + self.N + 1 and 0 <= n <= self.N):
            raise DimensionError(f"index ({k}, {n}) outside {self.shape}")
        if k <= self.M:
            return self.scale * self.top[k, n]
        o = k - n
        if abs(o) <= self.M + 1:
            return self.scale * self.band[o + self.M + 1, n]
        return 0.0


@dataclass(frozen=True)
class RecurrenceTables:
    """Precomputed Jacobi integration-recurrence coefficient arrays.

    A[j] holds A_j for j >= 1 (A[0] is padding), B[j] and C[j] are valid
    from j = 0, S[j] from j = 0.  Slot conventions: B[0] = 0 and S[0] =
    S_0 - B_0 = -2(beta+1)/(alpha+beta+2); the two constants only ever
    appear through that difference (both are singular on alpha + beta = 0
    while the difference is not), and storing the merged value keeps the
    tables finite and the column recursion uniform in n.
    """

    alpha: float
    beta: float
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    S: np.ndarray


def jacobi_tables(alpha: float, beta: float, nmax: int) -> RecurrenceTables:
    """Tables A_1..A_{nmax+1}, B_0..B_{nmax+1}, C_0..C_{nmax+1}, S_0..S_{nmax}."""
    ab = alpha + beta
    if abs(ab + 1.0) <= bases.DEGENERATE_TOL:
        raise DegenerateParameterError(
            "alpha + beta = -1 zeroes the A_1 denominator; this line is not "
            "supported (use the Chebyshev or Gegenbauer builders)")
    bases.jacobi(alpha, beta)  # remaining parameter validation
    if nmax < 0:
        raise ArgumentError("nmax must be >= 0")
    for name, vals in (("A", ab + 2.0 * np.arange(1, nmax + 2) - 1.0),
                       ("S", ab + np.arange(1, nmax + 1))):
        bad = np.abs(vals) < bases.DEGENERATE_TOL
        if np.any(bad):
            raise DegenerateParameterError(
                f"zero denominator in {name} table for alpha+beta={ab}")
    j = np.arange(nmax + 2, dtype=float)
    A = np.zeros(nmax + 2)
    A[1:] = 2.0 * (ab + j[1:]) / ((ab + 2.0 * j[1:] - 1.0) * (ab + 2.0 * j[1:]))
    B = np.zeros(nmax + 2)
    B[1:] = 2.0 * (alpha - beta) / ((ab + 2.0 * j[1:]) * (ab + 2.0 * j[1:] + 2.0))
    C = -2.0 * (alpha + j + 1.0) * (beta + j + 1.0) / (
        (ab + j + 1.0) * (ab + 2.0 * j + 2.0) * (ab + 2.0 * j + 3.0))
    S = np.zeros(nmax + 1)
    S[0] = -2.0 * (beta + 1.0) / (ab + 2.0)
    if nmax >= 1:
        i = np.arange(1, nmax + 1, dtype=float)
        poch = np.cumprod((beta + np.arange(nmax + 1, dtype=float))
                          / (np.arange(nmax + 1, dtype=float) + 1.0))
        signs = np.where(np.arange(1, nmax + 1) % 2 == 1, 1.0, -1.0)
        S[1:] = 2.0 * signs * poch[1:] / (ab + i)
    return RecurrenceTables(alpha, beta, A, B, C, S)


class _Tables:
    """Internal per-build coefficient arrays for the generic recursion.

    shat[n] is the coefficient of R_{k,0} in the column n -> n+1 step,
    i.e. S_n / A_{n+1} in the Jacobi normalization (for Gegenbauer the
    inhomogeneous constant already comes in that form).
    """

    def __init__(self, A, B, C, shat):
        self.A, self.B, self.C, self.shat = A, B, C, shat


def _gegenbauer_tables(lam: float, nmax: int) -> _Tables:
    j = np.arange(nmax + 2, dtype=float)
    A = np.zeros(nmax + 2)
    A[1:] = 1.0 / (2.0 * (j[1:] - 1.0 + lam))
    C = -1.0 / (2.0 * (j + 1.0 + lam))
    return _Tables(A, np.zeros(nmax + 2), C, bases.gegenbauer_S_array(lam, nmax))


def _jacobi_internal_tables(alpha: float, beta: float, nmax: int) -> _Tables:
    t = jacobi_tables(alpha, beta, nmax)
    shat = t.S / t.A[1:nmax + 2]
    return _Tables(t.A, t.B, t.C, shat)


# ---------------------------------------------------------------------------
# column 0

def cheb_column0(a) -> np.ndarray:
    """Rows 0..M+1 of the Chebyshev R's column 0 (antiderivative coefficients)."""
    return indefinite_integral_cheb(a)


def _column0(basis: BasisSpec, a: np.ndarray, tables: Optional[_Tables]) -> np.ndarray:
    """Rows 0..M+1 of column 0: coefficients of the kernel's antiderivative."""
    M = a.size - 1
    col = np.zeros(M + 2)
    ap = np.concatenate([a, [0.0, 0.0]])
    k = np.arange(1, M + 2)
    if basis.kind == bases.CHEBYSHEV:
        col[1] = ap[0] - ap[2] / 2.0
        if M >= 1:
            kk = k[1:]
            col[2:] = (ap[kk - 1] - ap[kk + 1]) / (2.0 * kk)
    elif basis.kind == bases.GEGENBAUER or basis.kind == bases.LEGENDRE:
        lam = 0.5 if basis.kind == bases.LEGENDRE else basis.lam
        col[1:] = ap[k - 1] / (2.0 * (k + lam - 1.0)) - ap[k + 1] / (2.0 * (k + lam + 1.0))
    elif basis.kind == bases.JACOBI:
        col[1:] = tables.A[k] * ap[k - 1] + tables.B[k] * ap[k] + tables.C[k] * ap[k + 1]
    else:
        raise UnsupportedBasisError(basis.kind)
    w = bases.boundary_weights(basis, M + 1)
    col[0] = math.fsum(w[1:] * col[1:])
    return col


# ---------------------------------------------------------------------------
# the stable four-phase build

def build(basis: BasisSpec, a, N: int, scale: float = 1.0) -> ConvMatrix:
    """Stable construction of the convolution matrix for any supported basis."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ArgumentError("kernel coefficient array must be nonempty")
    if N < 0:
        raise ArgumentError("N must be >= 0")
    if not basis.finite_interval:
        raise UnsupportedBasisError("use laguerre.build_laguerre for the half line")
    M = a.size - 1
    W = max(N, M + 2)        # internal column count (symmetry mirrors need M+2)
    Wp = W + M + 1           # widest padded column touched by the region-C sweep
    banded = basis.kind == bases.LEGENDRE

    if basis.kind == bases.CHEBYSHEV:
        tables = None
    elif basis.kind == bases.LEGENDRE:
        tables = _gegenbauer_tables(0.5, Wp + 1)
    elif basis.kind == bases.GEGENBAUER:
        tables = _gegenbauer_tables(basis.lam, Wp + 1)
    elif basis.kind == bases.JACOBI:
        tables = _jacobi_internal_tables(basis.alpha, basis.beta, Wp + 1)
    else:
        raise UnsupportedBasisError(basis.kind)

    col0 = _column0(basis, a, tables)
    top = np.zeros((M + 1, Wp + 1))
    strip = np.zeros((2, Wp + 1))        # rows M+1, M+2 across all padded columns
    band = np.zeros((2 * M + 3, W + 1))  # rows >= M+1, |k-n| <= M+1, cols 0..W

    def scatter(c, vec):
        # vec holds rows c..c+M+1 of column c
        ktop = min(M, c + M + 1)
        if c <= M:
            top[c:ktop + 1, c] = vec[:ktop - c + 1]
        lo = max(c, M + 1)
        band[lo - c + M + 1: 2 * M + 3, c] = vec[lo - c:]
        for r in (M + 1, M + 2):
            if c <= r <= c + M + 1:
                strip[r - M - 1, c] = vec[r - c]
    # column 0 occupies rows 0..M+1 only
    top[:, 0] = col0[:M + 1]
    band[2 * M + 2, 0] = col0[M + 1]   # row M+1, column 0 (offset M+1)
    strip[0, 0] = col0[M + 1]

    # region A: columns 1..W, rows c..c+M+1, forward recursion
    prev2 = None     # rows c-2 .. c+M-1 of column c-2
    prev = col0      # rows c-1 .. c+M   of column c-1 (col 0 is rows 0..M+1)
    z2 = np.zeros(2)
    for c in range(1, W + 1):
        km1 = prev                                  # rows c-1..c+M
        kp1 = np.concatenate([prev[2:], z2])        # rows c+1..c+M+2
        if basis.kind == bases.CHEBYSHEV:
            k = np.arange(c, c + M + 2, dtype=float)
            c0s = col0[c:c + M + 2] if c <= M + 1 else np.zeros(M + 2)
            if c0s.size < M + 2:
                c0s = np.concatenate([c0s, np.zeros(M + 2 - c0s.size)])
            if c == 1:
                km1 = km1.copy()
                km1[0] *= 2.0                       # term doubled when k = 1
                cur = -c0s + (km1 - kp1) / (2.0 * k)
            elif c == 2:
                cur = c0s + (2.0 / k) * (km1 - kp1)
            else:
                n = c - 1.0
                cur = (2.0 * (-1.0) ** (c - 1) / (n - 1.0)) * c0s \
                    + (c / (n - 1.0)) * _shift2(prev2, M) \
                    + (c / k) * (km1 - kp1)
        else:
            A, B, C, shat = tables.A, tables.B, tables.C, tables.shat
            k = np.arange(c, c + M + 2)
            c0s = col0[c:c + M + 2] if c <= M + 1 else np.zeros(M + 2)
            if c0s.size < M + 2:
                c0s = np.concatenate([c0s, np.zeros(M + 2 - c0s.size)])
            invAc = 1.0 / A[c]
            curk = np.concatenate([prev[1:], z2[:1]])   # rows c..c+M+1 of col c-1
            cur = ((B[k] - B[c - 1]) * invAc) * curk \
                + (A[k] * invAc) * km1 \
                + (C[k] * invAc) * kp1 \
                + shat[c - 1] * c0s
            if c >= 2:
                cur = cur - (C[c - 2] * invAc) * _shift2(prev2, M)
        scatter(c, cur)
        prev2, prev = prev, cur

    # region B: superdiagonal band by symmetry, including the strip extension
    _fill_region_b(basis, M, W, Wp, band, strip)

    # region C: dense top rows swept upward by the recast recursion.  The
    # sweep includes row 0 (the k = 1 step, with the Chebyshev halving rule):
    # reconstructing row 0 from the boundary sum instead would amplify band
    # roundoff by the boundary weights, ~n^(2 lam - 1) for Gegenbauer.
    _sweep_region_c(basis, tables, M, N, col0, top, strip, banded)

    # the recast forms are singular at n = 1 for Chebyshev, so column 1's
    # top entry comes from the boundary sum over its nonzero rows 1..M+2
    if N >= 1:
        wts = bases.boundary_weights(basis, M + 2)
        col1 = np.array([_entry_internal(top, band, strip, M, j, 1)
                         for j in range(1, M + 3)])
        top[0, 1] = math.fsum(wts[1:] * col1)

    return ConvMatrix(basis, M, N, float(scale),
                      np.ascontiguousarray(top[:, :N + 1]),
                      np.ascontiguousarray(band[:, :N + 1]))


def _shift2(prev2: np.ndarray, M: int) -> np.ndarray:
    # rows c..c+M+1 of column c-2 (whose own range is rows c-2..c+M-1)
    return np.concatenate([prev2[2:], np.zeros(2)])


def _fill_region_b(basis, M, W, Wp, band, strip):
    kfull = np.arange(W + 1, dtype=float)
    ratiof = _ratio_factors(basis, kfull)
    for o in range(1, M + 2):                  # superdiagonal offset n - k
        klo, khi = M + 1, W - o
        if khi >= klo:
            mirror = band[o + M + 1, klo:khi + 1]          # R_{k+o, k}
            rho = ratiof(klo, khi, o)
            band[M + 1 - o, klo + o:khi + o + 1] = rho * mirror
    # strip rows M+1 / M+2 beyond the band storage (padded columns)
    for r in (M + 1, M + 2):
        strip[r - M - 1, :W + 1] = _band_row(band, M, W, r)
        for c in range(W + 1, Wp + 1):
            if c - r <= M + 1 and c >= r + 1:
                mirror = band[c - r + M + 1, r]            # R_{c, r}
                strip[r - M - 1, c] = _ratio_scalar(basis, r, c) * mirror


def _ratio_factors(basis, kfull):
    """Closure giving R_{k,k+o}/R_{k+o,k} over k slices, shared precompute."""
    W = len(kfull) - 1
    if basis.kind == bases.CHEBYSHEV:
        def fac(klo, khi, o):
            k = kfull[klo:khi + 1]
            sgn = 1.0 if o % 2 == 0 else -1.0
            return sgn * (k + o) / k
        return fac
    if basis.kind in (bases.LEGENDRE, bases.GEGENBAUER):
        lam = 0.5 if basis.kind == bases.LEGENDRE else basis.lam
        kl = kfull + lam

        def fac(klo, khi, o):
            sgn = 1.0 if o % 2 == 0 else -1.0
            return sgn * kl[klo:khi + 1] / kl[klo + o:khi + o + 1]
        return fac
    al, be = basis.alpha, basis.beta
    ab = al + be
    f = (kfull + al + 1.0) * (kfull + be + 1.0) / (kfull + ab + 1.0) ** 2
    F = np.concatenate([[1.0], np.cumprod(f)])
    sig = ab + 2.0 * kfull + 1.0

    def fac(klo, khi, o):
        sgn = 1.0 if o % 2 == 0 else -1.0
        prods = F[klo + o:khi + o + 1] / F[klo:khi + 1]
        return sgn * sig[klo:khi + 1] / sig[klo + o:khi + o + 1] * prods
    return fac


def _band_row(band, M, W, k):
    """Row k (>= M+1) of the banded part as a length W+1 dense vector."""
    out = np.zeros(W + 1)
    nlo = max(0, k - (M + 1))
    nhi = min(W, k + M + 1)
    if nlo <= nhi:
        n = np.arange(nlo, nhi + 1)
        out[nlo:nhi + 1] = band[k - n + M + 1, n]
    return out


def _entry_internal(top, band, strip, M, k, n):
    if k <= M:
        return top[k, n]
    if k in (M + 1, M + 2):
        return strip[k - M - 1, n]
    if abs(k - n) <= M + 1:
        return band[k - n + M + 1, n]
    return 0.0


def _sweep_region_c(basis, tables, M, N, col0, top, strip, banded):
    nmax = N + M  # largest column index any row's sweep can touch
    nfull = np.arange(nmax + 2, dtype=float)
    cheb = basis.kind == bases.CHEBYSHEV
    if cheb:
        inv_m = np.zeros(nmax + 2)
        inv_m[2:] = 1.0 / (nfull[2:] - 1.0)              # 1/(n-1)
        inv_p = 1.0 / (nfull + 1.0)                      # 1/(n+1)
        sgn_sq = np.zeros(nmax + 2)
        sgn_sq[2:] = np.where(np.arange(2, nmax + 2) % 2 == 0, -2.0, 2.0) \
            / (nfull[2:] * nfull[2:] - 1.0)              # -2(-1)^n/(n^2-1)
    else:
        A, B, C, shat = tables.A, tables.B, tables.C, tables.shat
    for k in range(M + 1, 0, -1):
        r = k - 1
        nlo = max(k, 2)         # column 1 of row 0 is handled separately
        nhi = N + r if not banded else min(N + r, r + M + 1)
        if nhi < nlo:
            continue
        sl = slice(nlo, nhi + 1)
        slm = slice(nlo - 1, nhi)
        slp = slice(nlo + 1, nhi + 2)
        rowk = top[k] if k <= M else strip[k - M - 1]
        rowk1 = top[k + 1] if k + 1 <= M else strip[k + 1 - M - 1]
        rk0 = col0[k] if k <= M + 1 else 0.0
        if cheb:
            vals = (k * rk0) * sgn_sq[sl] \
                - k * (inv_m[sl] * rowk[slm]) \
                + k * (inv_p[sl] * rowk[slp]) \
                + rowk1[sl]
            if k == 1:
                vals *= 0.5     # the recast term is halved when k = 1
        else:
            invAk = 1.0 / A[k]
            rhoA = invAk * A[nlo + 1:nhi + 2]
            vals = rhoA * (rowk[slp] - shat[sl] * rk0) \
                + (invAk * (B[sl] - B[k])) * rowk[sl] \
                + (invAk * C[nlo - 1:nhi]) * rowk[slm] \
                - (invAk * C[k]) * rowk1[sl]
        top[r, sl] = vals


def _ratio_vec(basis, nrow, ncol):
    """Vector of R_{nrow,ncol} / R_{ncol,nrow} over equal-offset diagonals."""
    sgn = np.where((nrow + ncol) % 2 == 0, 1.0, -1.0)
    if basis.kind == bases.CHEBYSHEV:
        return sgn * ncol / nrow
    if basis.kind in (bases.LEGENDRE, bases.GEGENBAUER):
        lam = 0.5 if basis.kind == bases.LEGENDRE else basis.lam
        return sgn * (nrow + lam) / (ncol + lam)
    al, be = basis.alpha, basis.beta
    ab = al + be
    d = ncol[0] - nrow[0]
    # product form, updated incrementally along the diagonal: the ratio for
    # k+1 multiplies by f(k+d)/f(k) with f(j) = (j+a+1)(j+b+1)/(j+a+b+1)^2
    j = np.arange(nrow[0], ncol[-1], dtype=float)
    f = (j + al + 1.0) * (j + be + 1.0) / (j + ab + 1.0) ** 2
    F = np.concatenate([[1.0], np.cumprod(f)])
    prods = F[nrow - nrow[0] + d] / F[nrow - nrow[0]]
    return sgn * (ab + 2.0 * nrow + 1.0) / (ab + 2.0 * ncol + 1.0) * prods


def _ratio_scalar(basis, nrow, ncol):
    arr = _ratio_vec(basis, np.array([nrow]), np.array([ncol]))
    return arr[0]


def symmetry_ratio(basis: BasisSpec, n: int, k: int) -> float:
    """Factor rho with R_{n,k} = rho * R_{k,n} in the symmetric submatrix.

    Jacobi uses the cancellation-matched product form; the raw Pochhammer
    quotient overflows for large indices.
    """
    if not basis.finite_interval:
        raise UnsupportedBasisError("symmetry ratio needs a finite-interval basis")
    if basis.kind == bases.CHEBYSHEV and n == 0:
        raise ArgumentError("Chebyshev symmetry ratio needs n >= 1")
    if n < 1 or k < 1:
        raise ArgumentError("symmetry ratio needs n, k >= 1")
    if n == k:
        return 1.0
    if n < k or basis.kind != bases.JACOBI:
        return _ratio_scalar(basis, n, k)
    return 1.0 / _ratio_scalar(basis, k, n)


def build_chebyshev(a, N: int, scale: float = 1.0) -> ConvMatrix:
    return build(bases.chebyshev(), a, N, scale)


def build_legendre(a, N: int, scale: float = 1.0) -> ConvMatrix:
    return build(bases.legendre(), a, N, scale)


def build_gegenbauer(a, lam: float, N: int, scale: float = 1.0) -> ConvMatrix:
    return build(bases.gegenbauer(lam), a, N, scale)


def build_jacobi(a, alpha: float, beta: float, N: int, scale: float = 1.0) -> ConvMatrix:
    return build(bases.jacobi(alpha, beta), a, N, scale)


# ---------------------------------------------------------------------------
# deliberately unstable reference construction

def build_chebyshev_naive(a, N: int) -> np.ndarray:
    """Column-by-column forward recursion only; unstable above the diagonal.

    Returns a dense array.  Non-finite values are possible by design (the
    multipliers (n+1)/k exceed 1 above the diagonal and roundoff compounds
    factorially); callers inspect rather than trap.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ArgumentError("kernel coefficient array must be nonempty")
    M = a.size - 1
    R = np.zeros((M + N + 2, N + 1))
    col0 = _column0(bases.chebyshev(), a, None)
    R[:M + 2, 0] = col0
    wts = bases.boundary_weights(bases.chebyshev(), M + N + 2)
    for c in range(1, N + 1):
        hi = min(M + c + 1, M + N + 1)
        k = np.arange(1, hi + 1, dtype=float)
        km1 = R[0:hi, c - 1].copy()
        km1[0] *= 2.0                               # doubled when k = 1
        kp1 = np.zeros(hi)
        take = min(hi + 2, M + N + 2) - 2
        kp1[:take] = R[2:2 + take, c - 1]
        c0s = np.zeros(hi)
        m = min(M + 1, hi)
        c0s[:m] = col0[1:m + 1]
        if c == 1:
            R[1:hi + 1, 1] = -c0s + (km1 - kp1) / (2.0 * k)
        elif c == 2:
            R[1:hi + 1, 2] = c0s + (2.0 / k) * (km1 - kp1)
        else:
            n = c - 1.0
            R[1:hi + 1, c] = (2.0 * (-1.0) ** (c - 1) / (n - 1.0)) * c0s \
                + (c / (n - 1.0)) * R[1:hi + 1, c - 2] \
                + (c / k) * (km1 - kp1)
        R[0, c] = np.dot(wts[1:hi + 1], R[1:hi + 1, c])
    return R


# ---------------------------------------------------------------------------
# application and export

def apply(R: ConvMatrix, b) -> np.ndarray:
    """c = scale * (R b); touches only stored entries.

    b may be shorter than N+1 (implicitly zero-padded), never longer.
    """
    b = np.asarray(b, dtype=float)
    if b.ndim != 1:
        raise DimensionError("b must be a vector")
    if b.size > R.N + 1:
        raise DimensionError(f"b has {b.size} entries; at most {R.N + 1} allowed")
    M, N = R.M, R.N
    Lb = b.size
    out = np.zeros(M + N + 2)
    out[:M + 1] = R.top[:, :Lb] @ b
    for o in range(-(M + 1), M + 2):
        nlo = max(0, M + 1 - o)
        nhi = min(Lb - 1, M + N + 1 - o)
        if nlo > nhi:
            continue
        out[nlo + o:nhi + o + 1] += R.band[o + M + 1, nlo:nhi + 1] * b[nlo:nhi + 1]
    return R.scale * out


def to_dense(R: ConvMatrix) -> np.ndarray:
    """Dense (M+N+2) x (N+1) array with exact zeros outside the structure."""
    M, N = R.M, R.N
    out = np.zeros((M + N + 2, N + 1))
    out[:M + 1] = R.top
    for o in range(-(M + 1), M + 2):
        nlo = max(0, M + 1 - o)
        nhi = min(N, M + N + 1 - o)
        if nlo > nhi:
            continue
        n = np.arange(nlo, nhi + 1)
        out[n + o, n] = R.band[o + M + 1, nlo:nhi + 1]
    return R.scale * out
