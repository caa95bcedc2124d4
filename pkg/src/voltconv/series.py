"""Finite orthogonal-polynomial series: evaluation, fitting, integration, I/O.

A PolySeries is immutable: basis + domain + coefficient vector (index = degree).
Finite-interval series live on [a, b] and are evaluated after the affine map
to [-1, 1]; weighted-Laguerre series live on [0, inf) and include the e^{-x}
weight factor when evaluated.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np
import scipy.fft

from . import bases
from .bases import BasisSpec
from .errors import ArgumentError, DomainError, NonResolutionError

_DOMAIN_RELTOL = 1e-12


@dataclass(frozen=True)
class ChopRule:
    """Plateau-chopping parameters for adaptive fitting."""

    rel_tol: float = 1e-15
    max_degree: int = 65536

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0):
            raise ArgumentError("rel_tol must lie in (0, 1)")
        if self.max_degree < 1:
            raise ArgumentError("max_degree must be >= 1")


@dataclass(frozen=True)
class PolySeries:
    """Coefficient vector in a fixed basis on a fixed domain."""

    basis: BasisSpec
    domain: Tuple[float, float]
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ArgumentError("coeffs must be a nonempty 1-D array")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        a, b = self.domain
        if self.basis.finite_interval:
            if not (math.isfinite(a) and math.isfinite(b) and a < b):
                raise DomainError(f"domain must be a finite ordered pair, got {self.domain}")
        else:
            if a != 0.0 or not math.isinf(b):
                raise DomainError("WeightedLaguerre series live on [0, inf)")
        object.__setattr__(self, "domain", (float(a), float(b)))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, points):
        return evaluate(self, points)


def _to_canonical(series: PolySeries, points: np.ndarray) -> np.ndarray:
    a, b = series.domain
    lo = a - _DOMAIN_RELTOL * (b - a)
    hi = b + _DOMAIN_RELTOL * (b - a)
    if np.any(points < lo) or np.any(points > hi):
        raise DomainError(f"point outside series domain [{a}, {b}]")
    y = (2.0 * points - (a + b)) / (b - a)
    return np.clip(y, -1.0, 1.0)


def clenshaw(basis: BasisSpec, coeffs: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Backward-recurrence summation of sum_k c_k p_k(y) for any basis."""
    K = len(coeffs) - 1
    bk1 = np.zeros_like(y)
    bk2 = np.zeros_like(y)
    for k in range(K, -1, -1):
        A, B, _ = bases.recurrence_abc(basis, k)
        _, _, Cn = bases.recurrence_abc(basis, k + 1)
        bk1, bk2 = coeffs[k] + (A * y + B) * bk1 + Cn * bk2, bk1
    return bk1


def evaluate(series: PolySeries, points) -> np.ndarray:
    """Series values s(x_i); WeightedLaguerre includes the decay weight."""
    pts = np.asarray(points, dtype=float)
    scalar = pts.ndim == 0
    pts = np.atleast_1d(pts)
    if series.basis.finite_interval:
        y = _to_canonical(series, pts)
        out = clenshaw(series.basis, series.coeffs, y)
    else:
        if np.any(pts < 0.0):
            raise DomainError("WeightedLaguerre series are defined for x >= 0")
        out = clenshaw(series.basis, series.coeffs, pts) * np.exp(-pts)
    return out[0] if scalar else out


def chebyshev_points(n: int) -> np.ndarray:
    """Chebyshev points of the second kind, cos(pi*j/n), j = 0..n."""
    return np.cos(np.pi * np.arange(n + 1) / n)


def vals2coeffs(values: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients interpolating values at second-kind points."""
    v = np.asarray(values, dtype=float)
    n = v.size - 1
    if n == 0:
        return v.copy()
    c = scipy.fft.dct(v, type=1) / n
    c[0] *= 0.5
    c[-1] *= 0.5
    return c


def indefinite_integral_cheb(coeffs) -> np.ndarray:
    """Coefficients of int_{-1}^x phi, phi a Chebyshev series; length J+2.

    alpha~_j = (alpha_{j-1} - alpha_{j+1}) / (2j) for j >= 2,
    alpha~_1 = alpha_0 - alpha_2 / 2, and alpha~_0 makes the result vanish
    at x = -1.
    """
    a = np.asarray(coeffs, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ArgumentError("coefficient array must be nonempty")
    J = a.size - 1
    ap = np.concatenate([a, [0.0, 0.0]])  # alpha_{J+1} = alpha_{J+2} = 0
    out = np.empty(J + 2)
    out[1] = ap[0] - ap[2] / 2.0
    j = np.arange(2, J + 2)
    out[2:] = (ap[j - 1] - ap[j + 1]) / (2.0 * j)
    signs = np.where(np.arange(1, J + 2) % 2 == 1, 1.0, -1.0)
    out[0] = np.dot(signs, out[1:])
    return out


def basis_value_at_minus_one(basis: BasisSpec, n: int) -> float:
    """p_n(-1) for the finite-interval bases."""
    return bases.value_at_minus_one(basis, n)


def _chop(c: np.ndarray, rel_tol: float) -> np.ndarray:
    mx = np.max(np.abs(c))
    if mx == 0.0:
        return c[:1].copy()
    keep = np.nonzero(np.abs(c) > rel_tol * mx)[0]
    return c[:keep[-1] + 1].copy()


def fit_chebyshev(f: Callable[[np.ndarray], np.ndarray],
                  domain: Tuple[float, float],
                  rule: ChopRule = ChopRule()) -> PolySeries:
    """Adaptive Chebyshev fit of a continuous function on [a, b].

    Samples at second-kind points with doubling counts 16, 32, ... until the
    trailing coefficient envelope drops below rel_tol * max|coeff|, then chops
    the negligible tail.  A small off-grid spot check guards against aliasing
    false positives (a high harmonic folding exactly onto a coarse grid).
    """
    a, b = float(domain[0]), float(domain[1])
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise DomainError(f"fit domain must be finite with a < b, got {domain}")
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    probe = mid + half * np.cos(np.linspace(0.31, 2.87, 23))
    f_probe = np.asarray(f(probe), dtype=float)
    fscale = max(1.0, np.max(np.abs(f_probe)))

    n = 16
    best = None
    while True:
        x = mid + half * chebyshev_points(n)
        c = vals2coeffs(np.asarray(f(x), dtype=float))
        mx = np.max(np.abs(c))
        if mx == 0.0:
            return PolySeries(bases.chebyshev(), (a, b), np.zeros(1))
        tail_ok = np.max(np.abs(c[-3:])) <= rule.rel_tol * mx
        if tail_ok:
            candidate = PolySeries(bases.chebyshev(), (a, b), _chop(c, rule.rel_tol))
            resid = np.max(np.abs(evaluate(candidate, probe) - f_probe))
            if resid <= 50.0 * max(rule.rel_tol, 1e-15) * fscale:
                return candidate
            best = candidate
        else:
            best = PolySeries(bases.chebyshev(), (a, b), _chop(c, rule.rel_tol))
        if 2 * n > rule.max_degree:
            raise NonResolutionError(
                f"no coefficient plateau below degree {rule.max_degree}", series=best)
        n *= 2


def fit_fixed_chebyshev(f, domain, degree: int) -> PolySeries:
    """Non-adaptive interpolation at degree+1 second-kind points."""
    a, b = float(domain[0]), float(domain[1])
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    x = mid + half * chebyshev_points(max(degree, 1))
    c = vals2coeffs(np.asarray(f(x), dtype=float))
    return PolySeries(bases.chebyshev(), (a, b), c[:degree + 1])


# ---------------------------------------------------------------------------
# serialization

def _basis_to_json(basis: BasisSpec) -> dict:
    d = {"kind": basis.kind}
    if basis.kind == bases.GEGENBAUER:
        d["lambda"] = basis.lam
    elif basis.kind == bases.JACOBI:
        d["alpha"] = basis.alpha
        d["beta"] = basis.beta
    return d


def _basis_from_json(d: dict) -> BasisSpec:
    kind = d["kind"]
    if kind == bases.GEGENBAUER:
        return bases.gegenbauer(d["lambda"])
    if kind == bases.JACOBI:
        return bases.jacobi(d["alpha"], d["beta"])
    return BasisSpec(kind)


def series_to_json(series: PolySeries) -> str:
    a, b = series.domain
    dom = [a, None] if math.isinf(b) else [a, b]
    return json.dumps({
        "basis": _basis_to_json(series.basis),
        "domain": dom,
        "coeffs": list(series.coeffs),
    })


def series_from_json(text: str) -> PolySeries:
    d = json.loads(text)
    basis = _basis_from_json(d["basis"])
    a, b = d["domain"]
    dom = (float(a), math.inf if b is None else float(b))
    return PolySeries(basis, dom, np.asarray(d["coeffs"], dtype=float))


def series_to_csv(series: PolySeries) -> str:
    lines = [f"# basis: {series.basis.kind}"]
    if series.basis.kind == bases.GEGENBAUER:
        lines.append(f"# lambda: {series.basis.lam:.17g}")
    elif series.basis.kind == bases.JACOBI:
        lines.append(f"# alpha: {series.basis.alpha:.17g}")
        lines.append(f"# beta: {series.basis.beta:.17g}")
    a, b = series.domain
    dom = "0 inf" if math.isinf(b) else f"{a:.17g} {b:.17g}"
    lines.append(f"# domain: {dom}")
    lines.extend(f"{c:.17g}" for c in series.coeffs)
    return "\n".join(lines) + "\n"


def series_from_csv(text: str) -> PolySeries:
    meta = {}
    coeffs = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].partition(":")
            meta[key.strip()] = val.strip()
        else:
            coeffs.append(float(line))
    kind = meta.get("basis")
    if kind is None:
        raise ArgumentError("CSV series is missing the '# basis:' header")
    if kind == bases.GEGENBAUER:
        basis = bases.gegenbauer(float(meta["lambda"]))
    elif kind == bases.JACOBI:
        basis = bases.jacobi(float(meta["alpha"]), float(meta["beta"]))
    else:
        basis = BasisSpec(kind)
    a_str, b_str = meta.get("domain", "-1 1").split()
    dom = (float(a_str), math.inf if b_str == "inf" else float(b_str))
    return PolySeries(basis, dom, np.asarray(coeffs, dtype=float))
