"""Weighted Bergman spaces: monomial norms, radial Toeplitz operators, q-trace, covariant symbols.

Every operator here is constant on each homogeneous component of degree d,
so it is stored as the vector of those constants (DegreeDiagonalOperator).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .lattice import (
    RadialFunction,
    radial_weights,
    simplex_array,
    weighted_point_weights,
    weighted_tail,
)
from .qcore import AccuracyError, DomainError, QContext, qgamma, qpoch, qpoch_exp

__all__ = [
    "WeightParam",
    "DegreeDiagonalOperator",
    "monomial_norm",
    "monomial_norm_product",
    "monomial_norm_integral",
    "toeplitz_radial",
    "toeplitz_fk_values",
    "toeplitz_quotient",
    "projection",
    "trq",
    "trq_enumerated",
    "trq_degree_weights",
    "covariant_symbol",
    "sigma_projection",
]


@dataclass(frozen=True)
class WeightParam:
    """Weight exponent alpha together with its q and t = q^(2 alpha)."""

    alpha: float
    q: float
    boundary: bool = False

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise DomainError("q must lie in (0,1)")
        ok = self.alpha >= 0 if self.boundary else self.alpha > 0
        if not (ok and math.isfinite(self.alpha)):
            raise DomainError("alpha must be a finite positive real")

    @classmethod
    def from_t(cls, t: float, q: float) -> "WeightParam":
        if not (0.0 < t < 1.0):
            raise DomainError("t must lie in (0,1)")
        return cls(math.log(t) / (2 * math.log(q)), q)

    @property
    def t(self) -> float:
        return self.q ** (2 * self.alpha)


def _check(ctx: QContext, w: WeightParam):
    if ctx.q != w.q:
        raise DomainError(f"weight built for q={w.q}, context has q={ctx.q}")


class DegreeDiagonalOperator:
    """Operator acting as values[d] on the degree-d homogeneous component, d < D."""

    def __init__(self, ctx: QContext, w: WeightParam, values):
        _check(ctx, w)
        self.ctx = ctx
        self.weight = w
        v = np.array(values, dtype=float)
        v.setflags(write=False)
        self.values = v

    @property
    def D(self) -> int:
        return len(self.values)

    def _other(self, other):
        if not isinstance(other, DegreeDiagonalOperator):
            return None
        if other.ctx.q != self.ctx.q or other.ctx.n != self.ctx.n or other.weight != self.weight:
            raise DomainError("operators on different spaces")
        D = max(self.D, other.D)
        a = np.zeros(D)
        b = np.zeros(D)
        a[: self.D] = self.values
        b[: other.D] = other.values
        return a, b

    def __add__(self, other):
        a, b = self._other(other)
        return DegreeDiagonalOperator(self.ctx, self.weight, a + b)

    def __sub__(self, other):
        a, b = self._other(other)
        return DegreeDiagonalOperator(self.ctx, self.weight, a - b)

    def __mul__(self, c):
        return DegreeDiagonalOperator(self.ctx, self.weight, c * self.values)

    __rmul__ = __mul__

    def __matmul__(self, other):
        a, b = self._other(other)
        return DegreeDiagonalOperator(self.ctx, self.weight, a * b)

    def __repr__(self):
        return f"DegreeDiagonalOperator(q={self.ctx.q}, n={self.ctx.n}, alpha={self.weight.alpha}, D={self.D})"


def monomial_norm(m, w: WeightParam) -> float:
    """||z^m||^2 = G(n+a+1) prod G(m_i+1) / G(|m|+n+a+1), G the q^2-Gamma function."""
    m = [int(v) for v in m]
    if any(v < 0 for v in m):
        raise DomainError("multi-index entries must be nonnegative")
    n = len(m)
    p = w.q**2
    a = w.alpha
    num = qgamma(n + a + 1, p)
    for mi in m:
        num *= qgamma(mi + 1, p)
    return num / qgamma(sum(m) + n + a + 1, p)


def monomial_norm_product(m, w: WeightParam) -> float:
    """Same norm as a Pochhammer quotient prod (q^2;q^2)_(m_i) / (q^(2n+2a+2);q^2)_|m|."""
    m = [int(v) for v in m]
    q = w.q
    num = 1.0
    for mi in m:
        num *= qpoch(q * q, q * q, mi)
    return num / float(qpoch_exp(2 * len(m) + 2 * w.alpha + 2, q, sum(m)))


def _sum_formula(m, y, q):
    """z^(*m) z^m as a function on the simplex; y has shape (count, n)."""
    n = len(m)
    out = np.ones(len(y))
    for j in range(n - 1):
        for i in range(m[j]):
            out *= y[:, j + 1] - q ** (2 + 2 * i) * y[:, j]
    for i in range(m[n - 1]):
        out *= 1.0 - q ** (2 + 2 * i) * y[:, n - 1]
    return out


@functools.lru_cache(maxsize=32)
def _simplex_measure(n, q, alpha, K):
    ctx = QContext(q, n, K=max(K, 8))
    keys = simplex_array(n, K)
    return (q * q) ** keys, weighted_point_weights(ctx, alpha, keys), weighted_tail(ctx, alpha, K)


def _tail_cutoff(q, alpha, eps=1e-14):
    # smallest K with q^(2K(alpha+1)) below eps
    return max(8, math.ceil(math.log(eps) / (2 * (alpha + 1) * math.log(q))))


def monomial_norm_integral(m, w: WeightParam, K: int | None = None, *, full_output: bool = False):
    """||z^m||^2 as the weighted integral of z^(*m) z^m over the truncated simplex.

    z^(*m) z^m is expanded by its normal-ordering formula (checked against
    the Fock matrices in module fock). The function lies in [0, 1], so the
    dropped region k_1 >= K contributes at most the weighted tail mass, which
    is returned with ``full_output``. By default K makes that tail < 1e-14.
    """
    m = tuple(int(v) for v in m)
    n = len(m)
    K = _tail_cutoff(w.q, w.alpha) if K is None else K
    y, wts, tail = _simplex_measure(n, w.q, w.alpha, K)
    val = math.fsum(_sum_formula(m, y, w.q) * wts)
    if not full_output:
        return val
    return val, tail


def toeplitz_fk_values(k: int, w: WeightParam, n: int, D: int) -> np.ndarray:
    """Spectrum of T_(f_k) on degrees 0..D-1.

    q^(2(k-m)(a+1)) (q^(2a+2);q^2)_(n+m) (q^(2k-2m+2);q^2)_(n+m-1) / (q^2;q^2)_(n+m-1),
    which is exactly zero for m > k.
    """
    if k < 0:
        raise DomainError("lattice index must be nonnegative")
    q, a = w.q, w.alpha
    out = np.zeros(D)
    for m in range(min(D, k + 1)):
        out[m] = (q ** (2 * (k - m) * (a + 1)) * float(qpoch_exp(2 * a + 2, q, n + m))
                  * float(qpoch_exp(2 * k - 2 * m + 2, q, n + m - 1))
                  / qpoch(q * q, q * q, n + m - 1))
    return out


def toeplitz_radial(symbol, w: WeightParam, ctx: QContext, D: int | None = None) -> DegreeDiagonalOperator:
    """T_f for a radial symbol: a lattice index k (f = f_k) or a RadialFunction.

    T_(f_k) vanishes above degree k, so the default cutoff (at least 48) keeps
    the whole spectrum; an explicit D that would cut it raises DomainError.
    """
    _check(ctx, w)
    if isinstance(symbol, RadialFunction):
        coeffs = symbol.coeffs
    else:
        k = int(symbol)
        if k < 0:
            raise DomainError("lattice index must be nonnegative")
        coeffs = np.zeros(k + 1)
        coeffs[k] = 1.0
    support = np.flatnonzero(coeffs)
    top = int(support[-1]) + 1 if support.size else 0
    if D is None:
        D = max(48, top)
    elif D < top:
        raise DomainError(f"degree cutoff D={D} drops part of the spectrum (symbol reaches k={top - 1})")
    vals = np.zeros(D)
    for k in support:
        vals += coeffs[k] * toeplitz_fk_values(int(k), w, ctx.n, D)
    return DegreeDiagonalOperator(ctx, w, vals)


def projection(m: int, w: WeightParam, ctx: QContext, D: int | None = None) -> DegreeDiagonalOperator:
    """Orthogonal projection P_m onto the degree-m component."""
    D = max(48 if D is None else D, m + 1)
    v = np.zeros(D)
    v[m] = 1.0
    return DegreeDiagonalOperator(ctx, w, v)


def trq_degree_weights(ctx: QContext, w: WeightParam, D: int) -> np.ndarray:
    """Tr_q(P_d) = ((q^2;q^2)_n/(q^(2a+2);q^2)_n) q^(-2nd) (q^(2d+2);q^2)_(n-1)/(q^2;q^2)_(n-1)."""
    q, n = ctx.q, ctx.n
    d = np.arange(D)
    pref = qpoch(q * q, q * q, n) / float(qpoch_exp(2 * w.alpha + 2, q, n))
    return pref * q ** (-2.0 * n * d) * qpoch_exp(2 * d + 2, q, n - 1) / qpoch(q * q, q * q, n - 1)


def trq(op: DegreeDiagonalOperator) -> float:
    """Normalized q-trace: sum_d values[d] Tr_q(P_d).

    The stored spectrum is complete (zero beyond D), so this is a finite sum;
    an overflowing result raises AccuracyError.
    """
    wts = trq_degree_weights(op.ctx, op.weight, op.D)
    val = math.fsum(op.values * wts)
    if not math.isfinite(val):
        raise AccuracyError("q-trace overflowed")
    return val


def trq_enumerated(op: DegreeDiagonalOperator, dmax: int | None = None) -> float:
    """q-trace from the monomial sum: prod over j >= 2 of q^(2(m_j+...+m_n)), times q^(-2n|m|)."""
    ctx, w = op.ctx, op.weight
    q, n = ctx.q, ctx.n
    dmax = op.D - 1 if dmax is None else dmax
    pref = qpoch(q * q, q * q, n) / float(qpoch_exp(2 * w.alpha + 2, q, n))
    terms = []
    for d in range(dmax + 1):
        if op.values[d] == 0:
            continue
        for m in fock._compositions(d, n):
            tails = fock.y_spectrum_indices(m)
            terms.append(op.values[d] * q ** (-2 * n * d + 2 * sum(tails[1:])))
    return pref * math.fsum(terms)


def covariant_symbol(op: DegreeDiagonalOperator, K: int | None = None) -> RadialFunction:
    """sigma(op)(q^(2l)) = Tr_q(op T_(f_l)) / w_l for l < K.

    T_(f_l) lives on degrees <= l, so each trace is a finite sum.
    """
    ctx, w = op.ctx, op.weight
    K = ctx.K if K is None else K
    wl = radial_weights(ctx, K)
    dw = trq_degree_weights(ctx, w, max(op.D, K))
    vals = np.zeros(K)
    for l in range(K):
        D = min(op.D, l + 1)
        t = toeplitz_fk_values(l, w, ctx.n, D)
        vals[l] = math.fsum(op.values[:D] * t * dw[:D]) / wl[l]
    return RadialFunction(ctx, vals)


def sigma_projection(m: int, w: WeightParam, ctx: QContext, K: int | None = None) -> RadialFunction:
    """Closed form of sigma(P_m):

    q^(-2m(a+n+1)) (q^(2a+2n+2);q^2)_m / (q^2;q^2)_m y^(a+n+1) (y q^(-2m+2);q^2)_m.
    """
    _check(ctx, w)
    K = ctx.K if K is None else K
    q, n, a = ctx.q, ctx.n, w.alpha
    l = np.arange(K)
    pref = float(qpoch_exp(2 * a + 2 * n + 2, q, m)) / qpoch(q * q, q * q, m)
    # combine q^(-2m(a+n+1)) with y^(a+n+1) to keep exponents small
    vals = pref * q ** (2.0 * (l - m) * (a + n + 1)) * qpoch_exp(2 * l - 2 * m + 2, q, m)
    return RadialFunction(ctx, vals)


def toeplitz_quotient(k: int, m: int, w: WeightParam, n: int, N_deg: int | None = None) -> float:
    """T_(f_k) on degree m from first principles: (f_k z_n^m, z_n^m) / ||z_n^m||^2.

    The numerator is the weighted integral of the Fock diagonal of
    z_n^(*m) f_k(y_1) z_n^m, read off on the joint spectrum of the y_j; the
    denominator is the Gram entry forced by the finite-alpha adjoint.
    """
    q = w.q
    N = max(k, m) + 2 if N_deg is None else N_deg
    if N < max(k, m) + 2:
        raise DomainError("degree cutoff too small for this k")
    basis = fock.MonomialBasis(n, N)
    ys = fock.y_operators(basis, q)
    spec = np.array([y.diagonal().real for y in ys]).T
    kidx = np.rint(np.log(spec) / (2 * math.log(q))).astype(int)
    # f_k(y_1) is the indicator of the eigenvalue q^(2k) of y_1
    fk = np.where(kidx[:, 0] == k, 1.0, 0.0)
    F = fock.FockOperator(basis, np.diag(fk), N, 0)
    zn = fock.build_creation(n, math.inf, basis, q)
    zns = fock.build_annihilation(n, math.inf, basis, q)
    op = (zns ** m) @ F @ (zn ** m)
    diag = op.diagonal().real
    keep = basis.degrees <= op.safe_degree
    # the support |mu| = k - m must lie in the safe block
    if np.any(kidx[~keep, 0] == k - m):
        raise AccuracyError("degree cutoff truncates the support")
    ctx = QContext(q, n, K=max(8, k + 1))
    keys = kidx[keep]
    vals = diag[keep]
    num = math.fsum(vals * weighted_point_weights(ctx, w.alpha, keys))
    G = fock.gram_from_matrices(w.alpha, basis, q)
    target = (0,) * (n - 1) + (m,)
    return num / G[basis.index[target]]
