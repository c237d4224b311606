"""Radial and multi-radial functions on the q-lattice and their integrals.

A radial function is a coefficient vector over the points y = q^(2k),
k = 0..K-1; coefficient k multiplies the indicator f_k. Multi-radial
functions live on the truncated q-simplex

    P(n) = {(k_1, ..., k_n) : k_1 >= k_2 >= ... >= k_n >= 0},  k_1 < K,

which is the joint spectrum of (y_1, ..., y_n) written as y_j = q^(2 k_j).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .qcore import AccuracyError, DomainError, QContext, qpoch, qpoch_exp

__all__ = [
    "RadialFunction",
    "MultiRadialFunction",
    "simplex_indices",
    "simplex_array",
    "jackson_integral",
    "radial_weights",
    "invariant_integral_radial",
    "invariant_integral_multi",
    "weighted_integral",
    "weighted_tail",
    "weighted_radial_weights",
    "weighted_point_weights",
    "l2_inner_radial",
    "ordered_sum",
    "ordered_sum_closed",
]


def _same_space(c1: QContext, c2: QContext) -> None:
    if c1.q != c2.q or c1.n != c2.n:
        raise DomainError(f"context mismatch: (q={c1.q}, n={c1.n}) vs (q={c2.q}, n={c2.n})")


@dataclass(frozen=True, eq=False)
class RadialFunction:
    """f = sum_k coeffs[k] f_k; coeffs[k] is the value at y = q^(2k)."""

    ctx: QContext
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, copy=True)
        if c.ndim != 1:
            raise DomainError("coefficients must be a 1-d vector")
        if not np.iscomplexobj(c):
            c = c.astype(float)
        if not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, ctx: QContext, K: int | None = None) -> "RadialFunction":
        return cls(ctx, np.zeros(ctx.K if K is None else K))

    @classmethod
    def basis(cls, ctx: QContext, k: int, K: int | None = None) -> "RadialFunction":
        """The indicator f_k of the lattice point y = q^(2k)."""
        K = ctx.K if K is None else K
        if not 0 <= k < K:
            raise DomainError(f"lattice index {k} outside [0, {K})")
        c = np.zeros(K)
        c[k] = 1.0
        return cls(ctx, c)

    @classmethod
    def from_callable(cls, ctx: QContext, fn, K: int | None = None) -> "RadialFunction":
        """Sample fn(y) on y = q^(2k)."""
        K = ctx.K if K is None else K
        y = ctx.q ** (2.0 * np.arange(K))
        return cls(ctx, np.asarray(fn(y)))

    @property
    def K(self) -> int:
        return len(self.coeffs)

    @property
    def points(self) -> np.ndarray:
        return self.ctx.q ** (2.0 * np.arange(self.K))

    def resized(self, K: int) -> "RadialFunction":
        """Zero-pad or cut to length K."""
        c = np.zeros(K, dtype=self.coeffs.dtype)
        m = min(K, self.K)
        c[:m] = self.coeffs[:m]
        return RadialFunction(self.ctx, c)

    def _coerce(self, other):
        if isinstance(other, RadialFunction):
            _same_space(self.ctx, other.ctx)
            K = max(self.K, other.K)
            return self.resized(K).coeffs, other.resized(K).coeffs
        return self.coeffs, other

    def __add__(self, other):
        a, b = self._coerce(other)
        return RadialFunction(self.ctx, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        return RadialFunction(self.ctx, a - b)

    def __neg__(self):
        return RadialFunction(self.ctx, -self.coeffs)

    def __mul__(self, other):
        # pointwise, so f_k f_l = delta_kl f_k
        a, b = self._coerce(other)
        return RadialFunction(self.ctx, a * b)

    __rmul__ = __mul__

    def __repr__(self):
        return f"RadialFunction(q={self.ctx.q}, n={self.ctx.n}, K={self.K})"


def simplex_indices(n: int, K: int):
    """P(n) truncated to k_1 < K, lexicographically descending."""
    if n < 1:
        raise DomainError("n must be a positive integer")

    def rec(dim, top):
        if dim == 0:
            yield ()
            return
        for k in range(top, -1, -1):
            for rest in rec(dim - 1, k):
                yield (k,) + rest

    for k1 in range(K - 1, -1, -1):
        for rest in rec(n - 1, k1):
            yield (k1,) + rest


def simplex_array(n: int, K: int) -> np.ndarray:
    """The truncated simplex as an integer array of shape (count, n), same order."""
    out = np.array(list(simplex_indices(n, K)), dtype=np.int64)
    return out.reshape(-1, n)


class MultiRadialFunction:
    """Function on the truncated q-simplex, stored sparsely by multi-index."""

    def __init__(self, ctx: QContext, entries: dict, K: int | None = None):
        self.ctx = ctx
        self.K = ctx.K if K is None else K
        clean = {}
        for key, val in entries.items():
            key = tuple(int(v) for v in key)
            if len(key) != ctx.n:
                raise DomainError(f"multi-index {key} does not have length n={ctx.n}")
            if key[-1] < 0 or any(key[i] < key[i + 1] for i in range(len(key) - 1)):
                raise DomainError(f"multi-index {key} is not in P(n): need k1 >= ... >= kn >= 0")
            if key[0] >= self.K:
                raise DomainError(f"multi-index {key} outside truncation k1 < {self.K}")
            if not np.isfinite(val):
                raise DomainError("values must be finite")
            if val != 0:
                clean[key] = val
        self.entries = clean

    @classmethod
    def indicator(cls, ctx, key, K=None):
        return cls(ctx, {tuple(key): 1.0}, K)

    @classmethod
    def from_callable(cls, ctx, fn, K=None):
        """Dense evaluation of fn(y_1, ..., y_n) on the truncated simplex."""
        K = ctx.K if K is None else K
        q2 = ctx.q**2
        ent = {k: fn(*(q2**kj for kj in k)) for k in simplex_indices(ctx.n, K)}
        return cls(ctx, ent, K)

    @classmethod
    def from_radial(cls, g: RadialFunction):
        """Embed g as the function with value g(q^(2 k_1)) at every k."""
        ent = {}
        for k in simplex_indices(g.ctx.n, g.K):
            v = g.coeffs[k[0]]
            if v != 0:
                ent[k] = v
        return cls(g.ctx, ent, g.K)

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return f"MultiRadialFunction(q={self.ctx.q}, n={self.ctx.n}, K={self.K}, nnz={len(self)})"


def jackson_integral(samples, base2: float, *, full_output: bool = False):
    """(1 - p) sum_l samples[l] p^l with p = base2; samples taken at t = p^l.

    With ``full_output`` also returns a tail estimate |samples[-1]| p^L for
    the terms dropped beyond the supplied samples.
    """
    if not 0.0 < base2 < 1.0:
        raise DomainError("base must lie in (0,1)")
    s = np.asarray(samples)
    if not np.all(np.isfinite(s)):
        raise DomainError("samples must be finite")
    L = len(s)
    w = (1.0 - base2) * base2 ** np.arange(L)
    terms = s * w
    if np.iscomplexobj(terms):
        val = complex(math.fsum(terms.real), math.fsum(terms.imag))
    else:
        val = math.fsum(terms)
    if not full_output:
        return val
    tail = abs(s[-1]) * base2**L if L else 0.0
    return val, tail


def radial_weights(ctx: QContext, K: int | None = None) -> np.ndarray:
    """w_k = (1 - q^(2n)) q^(-2nk) (q^(2k+2); q^2)_(n-1): the measure of f_k."""
    K = ctx.K if K is None else K
    q, n = ctx.q, ctx.n
    k = np.arange(K)
    return (1.0 - q ** (2 * n)) * q ** (-2.0 * n * k) * qpoch_exp(2 * k + 2, q, n - 1)


def _fsum(terms):
    terms = np.asarray(terms)
    if np.iscomplexobj(terms):
        return complex(math.fsum(terms.real), math.fsum(terms.imag))
    return math.fsum(terms)


def invariant_integral_radial(f: RadialFunction):
    """Invariant integral of a finite radial function: sum_k f(q^2k) w_k."""
    return _fsum(f.coeffs * radial_weights(f.ctx, f.K))


def _multi_weight(ctx, key, lead_exp):
    q2 = ctx.q**2
    return q2 ** (lead_exp * key[0] + sum(key[1:]))


def invariant_integral_multi(f: MultiRadialFunction):
    """(q^2;q^2)_n sum_{k in P(n)} f(k) q^(-2n k_1) q^(2 k_2) ... q^(2 k_n)."""
    ctx = f.ctx
    pref = qpoch(ctx.q**2, ctx.q**2, ctx.n)
    keys = sorted(f.entries, reverse=True)
    return pref * _fsum([f.entries[k] * _multi_weight(ctx, k, -ctx.n) for k in keys])


def _check_alpha(alpha):
    if not (alpha >= 0 and math.isfinite(alpha)):
        raise DomainError("alpha must be a finite nonnegative real")


def weighted_tail(ctx: QContext, alpha: float, K: int | None = None) -> float:
    """Weighted mass of the region k_1 >= K, i.e. the integral of the constant 1 there.

    The inner simplex sum is done in closed form so this is a 1-d series.
    """
    _check_alpha(alpha)
    K = ctx.K if K is None else K
    q, n = ctx.q, ctx.n
    q2 = q * q
    pref = qpoch_exp(2 * alpha + 2, q, n) / qpoch(q2, q2, n - 1)
    r = q2 ** (alpha + 1)
    total = []
    k = K
    while k < K + ctx.N_inf:
        term = r**k * float(qpoch_exp(2 * k + 2, q, n - 1))
        total.append(term)
        if term <= ctx.eps_tail * max(total[0], 1e-300) * (1 - r):
            break
        k += 1
    else:
        raise AccuracyError("weighted tail did not converge within N_inf terms")
    return pref * math.fsum(total)


def weighted_integral(f: MultiRadialFunction, alpha: float, *, fill: float = 0.0):
    """(q^(2a+2);q^2)_n sum_{k in P(n)} f(k) q^(2 k_1 (a+1)) q^(2 k_2) ... q^(2 k_n).

    ``fill`` is the constant value assumed by f beyond the truncation k_1 >= K;
    its contribution is added through ``weighted_tail``.
    """
    _check_alpha(alpha)
    ctx = f.ctx
    pref = qpoch_exp(2 * alpha + 2, ctx.q, ctx.n)
    keys = sorted(f.entries, reverse=True)
    val = pref * _fsum([f.entries[k] * _multi_weight(ctx, k, alpha + 1) for k in keys])
    if fill:
        val += fill * weighted_tail(ctx, alpha, f.K)
    return val


def weighted_point_weights(ctx: QContext, alpha: float, keys: np.ndarray) -> np.ndarray:
    """Weighted measure of each simplex point in ``keys`` (rows k_1 >= ... >= k_n)."""
    _check_alpha(alpha)
    keys = np.asarray(keys)
    q2 = ctx.q**2
    expo = (alpha + 1) * keys[:, 0] + keys[:, 1:].sum(axis=1)
    return qpoch_exp(2 * alpha + 2, ctx.q, ctx.n) * q2**expo


def weighted_radial_weights(ctx: QContext, alpha: float, K: int | None = None) -> np.ndarray:
    """Weighted measure of the slice k_1 = l, summed over the remaining indices.

    (q^(2a+2);q^2)_n q^(2l(a+1)) (q^(2l+2);q^2)_(n-1) / (q^2;q^2)_(n-1)
    """
    _check_alpha(alpha)
    K = ctx.K if K is None else K
    q, n = ctx.q, ctx.n
    l = np.arange(K)
    return (qpoch_exp(2 * alpha + 2, q, n) * q ** (2.0 * l * (alpha + 1))
            * qpoch_exp(2 * l + 2, q, n - 1) / qpoch(q * q, q * q, n - 1))


def l2_inner_radial(f: RadialFunction, g: RadialFunction):
    """(f, g) = sum_k f(q^2k) conj(g(q^2k)) w_k."""
    a, b = f._coerce(g)
    return _fsum(a * np.conj(b) * radial_weights(f.ctx, len(a)))


def ordered_sum(n: int, a: int, b: int, q: float) -> float:
    """Brute force sum of q^(2(l_1+...+l_n)) over a <= l_n <= ... <= l_1 <= b."""
    q2 = q * q
    terms = []
    for ls in itertools.combinations_with_replacement(range(a, b + 1), n):
        terms.append(q2 ** sum(ls))
    return math.fsum(terms)


def ordered_sum_closed(n: int, a: int, b: int, q: float) -> float:
    """q^(2an) (q^(2b-2a+2); q^2)_n / (q^2; q^2)_n."""
    return q ** (2 * a * n) * float(qpoch_exp(2 * b - 2 * a + 2, q, n)) / qpoch(q * q, q * q, n)
