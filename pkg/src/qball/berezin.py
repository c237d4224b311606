"""Radial q-Berezin transform, its spectral multiplier and the expansion in t = q^(2 alpha).

B f_k is a finite sum over degrees m <= k of the covariant symbols of the
projections P_m, so on lattice indicators it is the explicit double sum

    B f_k = sum_(m <= k) sum_(r >= 0) beta(k, m, r) f_(m+r),

with beta given in _kernel_block. Only the r sum needs truncation.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .bergman import WeightParam, _check, sigma_projection, trq_degree_weights
from .laplace import TridiagonalOperator, _jacobi_coeffs, rho_grid
from .lattice import RadialFunction
from .qcore import (
    AccuracyError,
    DomainError,
    QContext,
    alsalam_chihara_all,
    cont_dual_qhahn_all,
    qpoch,
    qpoch_exp,
)
from .spherical import _measure, _real, forward

__all__ = [
    "BerezinCoefficients",
    "berezin_radial",
    "berezin_f0",
    "symbol_b",
    "symbol_b_partial",
    "symbol_b_lower_bound",
    "pj_newton_coeffs",
    "pj_newton",
    "pj_scalar",
    "expansion_apply",
    "expansion_weights",
    "expansion_partial_sum",
    "remainder_norms",
    "laplacian_from_limit",
    "qhahn_spectrum",
    "qhahn_spectrum_route",
    "qhahn_gram",
    "qhahn_gram_diagonal",
    "covariant_gram",
]

B_IMAG_TOL = 1e-12


class BerezinCoefficients:
    """Kernel of B on the lattice indicators, truncated to Kout output points."""

    def __init__(self, ctx: QContext, w: WeightParam, Kout: int | None = None):
        _check(ctx, w)
        self.ctx = ctx
        self.weight = w
        self.Kout = ctx.K if Kout is None else Kout
        if self.Kout < 1:
            raise DomainError("Kout must be positive")

    def block(self, k: int, m: int) -> np.ndarray:
        """beta(k, m, r) for r = 0 .. Kout-m-1 (output points m .. Kout-1)."""
        return _kernel_block(self.ctx.q, self.ctx.n, self.weight.alpha, k, m, self.Kout - m)

    def column(self, k: int) -> np.ndarray:
        """Coefficients of B f_k on points 0 .. Kout-1."""
        out = np.zeros(self.Kout)
        for m in range(min(k, self.Kout - 1) + 1):
            out[m:] += self.block(k, m)
        return out

    def tail_bound(self, k: int) -> float:
        """Sup of the first dropped coefficient over m; the dropped tail decays geometrically past it."""
        q, n, a = self.ctx.q, self.ctx.n, self.weight.alpha
        worst = 0.0
        for m in range(k + 1):
            r = self.Kout - m
            if r < 0:
                # the whole block lies beyond Kout
                r = 0
            worst = max(worst, float(_kernel_block(q, n, a, k, m, r + 1)[r]))
        return worst

    def __repr__(self):
        return (f"BerezinCoefficients(q={self.ctx.q}, n={self.ctx.n}, "
                f"alpha={self.weight.alpha}, Kout={self.Kout})")


def _kernel_block(q, n, a, k, m, R):
    # beta(k, m, r) = q^(2(a+1)(k-m) + 2r(a+n+1)) (q^(2a+2))_(n+m) (q^(2k-2m+2))_(n+m-1)
    #                 (q^(2a+2n+2))_m (q^(2r+2))_m / ((q^2)_(n+m-1) (q^2)_m)
    if R <= 0:
        return np.zeros(0)
    r = np.arange(R)
    pref = (float(qpoch_exp(2 * a + 2, q, n + m)) * float(qpoch_exp(2 * k - 2 * m + 2, q, n + m - 1))
            * float(qpoch_exp(2 * a + 2 * n + 2, q, m))
            / (qpoch(q * q, q * q, n + m - 1) * qpoch(q * q, q * q, m)))
    return (pref * q ** (2.0 * (a + 1) * (k - m) + 2.0 * r * (a + n + 1))
            * qpoch_exp(2 * r + 2, q, m))


def berezin_radial(f: RadialFunction, w: WeightParam, Kout: int | None = None, *,
                   tol: float = 1e-13) -> RadialFunction:
    """B_(q,alpha) f on the first Kout lattice points.

    Raises AccuracyError when the part of B f beyond Kout is larger than
    tol times max |B f| (the output would be a visibly truncated function).
    """
    ctx = f.ctx
    kern = BerezinCoefficients(ctx, w, Kout)
    out = np.zeros(kern.Kout)
    tail = 0.0
    for k in np.flatnonzero(f.coeffs):
        c = f.coeffs[k]
        out += c * kern.column(int(k))
        tail = max(tail, abs(c) * kern.tail_bound(int(k)))
    scale = float(np.max(np.abs(out))) if out.size else 0.0
    if tail > tol * max(scale, 1e-300) and tail > 0.0:
        raise AccuracyError(f"Berezin output truncated at Kout={kern.Kout}: tail {tail:.3g} vs scale {scale:.3g}")
    return RadialFunction(ctx, out)


def berezin_f0(w: WeightParam, ctx: QContext, K: int | None = None) -> RadialFunction:
    """Closed form B f_0 = (q^(2a+2);q^2)_n y^(a+n+1)."""
    _check(ctx, w)
    K = ctx.K if K is None else K
    q, n, a = ctx.q, ctx.n, w.alpha
    k = np.arange(K)
    return RadialFunction(ctx, float(qpoch_exp(2 * a + 2, q, n)) * q ** (2.0 * k * (a + n + 1)))


def symbol_b(rho, w: WeightParam, ctx: QContext):
    """b(rho) = (q^(2+2a))(q^(2n+2+2a)) / ((q^(n+2+2a+i rho))(q^(n+2+2a-i rho))), infinite products in base q^2."""
    _check(ctx, w)
    q, n, a = ctx.q, ctx.n, w.alpha
    p = q * q
    kw = dict(eps_tail=ctx.eps_tail, n_max=ctx.N_inf)
    r = np.asarray(rho, dtype=float)
    num = float(qpoch_exp(2 + 2 * a, q, **kw)) * float(qpoch_exp(2 * n + 2 + 2 * a, q, **kw))
    z = q ** (n + 2 + 2 * a + 1j * r)
    den = qpoch(z, p, **kw) * qpoch(np.conj(z), p, **kw)
    val = np.asarray(num / den)
    if np.any(np.abs(val.imag) > B_IMAG_TOL * np.abs(val.real)):
        raise AccuracyError(f"multiplier: imaginary residue above {B_IMAG_TOL}")
    out = val.real
    return out[()] if out.ndim == 0 else out


def symbol_b_partial(rho, w: WeightParam, ctx: QContext, J: int):
    """(q^(2a+2);q^2)_n sum_(j <= J) q^(j(2a+n+2)) / (q^2;q^2)_j Q_j(cos(h rho/2); q^n, q^n | q^2)."""
    _check(ctx, w)
    q, n, a = ctx.q, ctx.n, w.alpha
    x = np.cos(ctx.h * np.asarray(rho, dtype=float) / 2)
    Q = alsalam_chihara_all(J, x, q**n, q**n, q * q)
    j = np.arange(J + 1)
    coef = q ** (j * (2 * a + n + 2.0)) / np.concatenate([[1.0], np.cumprod(1.0 - q ** (2.0 * j[1:]))])
    val = float(qpoch_exp(2 * a + 2, q, n)) * (Q @ coef)
    return val[()] if isinstance(val, np.ndarray) and val.ndim == 0 else val


def symbol_b_lower_bound(w: WeightParam, ctx: QContext) -> float:
    """(q^(2+2a))(q^(2n+2+2a)) / (-q^(n+2+2a);q^2)^2, all infinite products."""
    _check(ctx, w)
    q, n, a = ctx.q, ctx.n, w.alpha
    num = float(qpoch_exp(2 + 2 * a, q)) * float(qpoch_exp(2 * n + 2 + 2 * a, q))
    return num / qpoch(-(q ** (n + 2 + 2 * a)), q * q) ** 2


# ---- p_j: the degree-j polynomial with p_j(lambda(rho)) = phi_rho(q^(2j)) ----

@functools.lru_cache(maxsize=512)
def pj_newton_coeffs(j: int, n: int, q: float):
    """Newton form of p_j: c_l and the node factors (u_m, v_m) with

    p_j(lam) = sum_(l <= j) c_l prod_(m < l) (u_m - v_m lam),
    c_l = (q^(-2j);q^2)_l q^(2l) / ((q^(2n);q^2)_l (q^2;q^2)_l),
    u_m = (1-q^(2m))(1-q^(2m+2n)), v_m = q^(2m+2n-2)(1-q^2)^2.
    """
    if j < 0:
        raise DomainError("degree must be nonnegative")
    p = q * q
    c = [1.0]
    for l in range(1, j + 1):
        c.append(c[-1] * (1 - q ** (2 * (l - 1) - 2 * j)) * p / ((1 - q ** (2 * n + 2 * (l - 1))) * (1 - p**l)))
    m = np.arange(j)
    u = (1 - q ** (2.0 * m)) * (1 - q ** (2.0 * m + 2 * n))
    v = q ** (2.0 * m + 2 * n - 2) * (1 - p) ** 2
    return np.array(c), u, v


def pj_newton(j: int, lam, ctx: QContext):
    """p_j(lam) from its Newton form, nested from the top. Loses accuracy for small q and large j."""
    c, u, v = pj_newton_coeffs(j, ctx.n, ctx.q)
    lam = np.asarray(lam, dtype=float)
    acc = np.full(lam.shape, c[j])
    for l in range(j - 1, -1, -1):
        acc = c[l] + (u[l] - v[l] * lam) * acc
    return acc[()] if acc.ndim == 0 else acc


def pj_scalar(j: int, lam, ctx: QContext):
    """p_j(lam) through the three-term recurrence of the Jacobi matrix.

    p_0 = 1, c_1 p_1 = lam - b_0, c_(i+1) p_(i+1) = (lam - b_i) p_i - a_(i-1) p_(i-1).
    """
    if j < 0:
        raise DomainError("degree must be nonnegative")
    a, b, c = _jacobi_coeffs(ctx.q, ctx.n, j + 1)
    lam = np.asarray(lam, dtype=float)
    prev = np.zeros(lam.shape)
    cur = np.ones(lam.shape)
    for i in range(j):
        nxt = ((lam - b[i]) * cur - (a[i - 1] * prev if i else 0.0)) / c[i + 1]
        prev, cur = cur, nxt
    return cur[()] if cur.ndim == 0 else cur


def _support_len(f: RadialFunction) -> int:
    s = np.flatnonzero(f.coeffs)
    return int(s[-1]) + 1 if s.size else 1


def _expansion_iter(f: RadialFunction, J: int):
    # yields p_j(Delta) f for j = 0..J, each exact (support grows by one per step)
    ctx = f.ctx
    L = _support_len(f)
    a, b, c = _jacobi_coeffs(ctx.q, ctx.n, L + J + 1)
    op = TridiagonalOperator(ctx)
    prev = np.zeros(L)
    cur = f.coeffs[:L].astype(float)
    yield cur
    for i in range(J):
        nxt = op.apply(cur) - b[i] * np.append(cur, 0.0)
        if i:
            nxt[: len(prev)] -= a[i - 1] * prev
        nxt /= c[i + 1]
        prev, cur = cur, nxt
        yield cur


def expansion_apply(j: int, f: RadialFunction) -> RadialFunction:
    """p_j(Delta) f, exact on the lattice: the result has support up to len(f) + j."""
    if j < 0:
        raise DomainError("degree must be nonnegative")
    for i, g in enumerate(_expansion_iter(f, j)):
        if i == j:
            return RadialFunction(f.ctx, g)


def expansion_weights(t: float, q: float, n: int, J: int) -> np.ndarray:
    """(q^2 t;q^2)_n t^j q^(2j) (q^(2j+2);q^2)_(n-1) / (q^2;q^2)_(n-1), j = 0..J."""
    if not (0.0 < t < 1.0):
        raise DomainError("t must lie in (0,1)")
    j = np.arange(J + 1)
    return (qpoch(q * q * t, q * q, n) * t**j * q ** (2.0 * j)
            * qpoch_exp(2 * j + 2, q, n - 1) / qpoch(q * q, q * q, n - 1))


def expansion_partial_sum(f: RadialFunction, w: WeightParam, J: int) -> RadialFunction:
    """sum_(j <= J) of the expansion terms of B_(q,t) f with t = q^(2 alpha)."""
    _check(f.ctx, w)
    wts = expansion_weights(w.t, w.q, f.ctx.n, J)
    out = np.zeros(_support_len(f) + J)
    for j, g in enumerate(_expansion_iter(f, J)):
        out[: len(g)] += wts[j] * g
    return RadialFunction(f.ctx, out)


def _berezin_t(f, t, Kout):
    return berezin_radial(f, WeightParam.from_t(t, f.ctx.q), Kout)


def remainder_norms(f: RadialFunction, t_values, Kout: int | None = None) -> np.ndarray:
    """sup |B_(q,t) f - f - t (1-q^2) q^(2n) Delta f| for each t."""
    ctx = f.ctx
    q, n = ctx.q, ctx.n
    L = _support_len(f)
    Kout = max(ctx.K, L + 1) if Kout is None else Kout
    d = TridiagonalOperator(ctx).apply(f.coeffs[:L])
    out = []
    for t in t_values:
        Bf = _berezin_t(f, t, Kout).coeffs
        r = Bf.copy()
        r[:L] -= f.coeffs[:L]
        r[: L + 1] -= t * (1 - q * q) * q ** (2 * n) * d
        out.append(float(np.max(np.abs(r))))
    return np.array(out)


def laplacian_from_limit(f: RadialFunction, t_values, Kout: int | None = None, *,
                         full_output: bool = False):
    """(q^(-2n)/(1-q^2)) (B_(q,t) f - f)/t at the smallest t.

    With two or more t values the remainder is required to shrink with t and
    its log-log slope is fitted; full_output returns (result, slope, remainders).
    """
    ctx = f.ctx
    q, n = ctx.q, ctx.n
    ts = [float(t) for t in t_values]
    if not ts or any(not (0.0 < t <= 0.1) for t in ts):
        raise DomainError("t values must lie in (0, 0.1]")
    if any(b >= a for a, b in zip(ts, ts[1:])):
        raise DomainError("t values must be strictly descending")
    L = _support_len(f)
    Kout = max(ctx.K, L + 1) if Kout is None else Kout
    t = ts[-1]
    Bf = _berezin_t(f, t, Kout).coeffs
    diff = Bf.copy()
    diff[:L] -= f.coeffs[:L]
    result = RadialFunction(ctx, q ** (-2 * n) / (1 - q * q) * diff / t)
    slope = None
    rem = np.zeros(0)
    if len(ts) >= 2:
        rem = remainder_norms(f, ts, Kout)
        nz = rem > 0
        if np.any(np.diff(rem[nz]) >= 0):
            raise AccuracyError(f"remainder does not decrease with t: {rem}")
        if nz.sum() >= 2:
            slope = float(np.polyfit(np.log(np.array(ts)[nz]), np.log(rem[nz]), 1)[0])
    if full_output:
        return result, slope, rem
    return result


# ---- continuous dual q-Hahn spectra of the degree projections ----

def _qhahn_params(w, ctx):
    q, n, a = ctx.q, ctx.n, w.alpha
    return q ** (n + 2 + 2 * a), q**n, q**n, q * q


def qhahn_spectrum(m: int, rho, w: WeightParam, ctx: QContext):
    """F sigma(P_m)(rho) in closed form:

    (q^2;q^2)_n (q^(2n+2+2a))_inf (q^(2n+2m+2+2a))_inf q^(-mn) p_m(x)
        / ((q^(n+2+2a+i rho))_inf (q^(n+2+2a-i rho))_inf (q^2;q^2)_m),

    p_m the continuous dual q-Hahn polynomial with parameters
    (q^(n+2+2a), q^n, q^n) in base q^2 and x = cos(h rho / 2).
    """
    _check(ctx, w)
    if m < 0:
        raise DomainError("degree must be nonnegative")
    q, n, a = ctx.q, ctx.n, w.alpha
    A, Bp, Cp, p = _qhahn_params(w, ctx)
    r = np.asarray(rho, dtype=float)
    x = np.cos(ctx.h * r / 2)
    pm = cont_dual_qhahn_all(m, x, A, Bp, Cp, p)[..., m]
    z = q ** (n + 2 + 2 * a + 1j * r)
    den = _real(qpoch(z, p) * qpoch(np.conj(z), p), "q-Hahn prefactor")
    pref = (qpoch(p, p, n) * float(qpoch_exp(2 * n + 2 + 2 * a, q)) * float(qpoch_exp(2 * n + 2 * m + 2 + 2 * a, q))
            * q ** (-m * n) / qpoch(p, p, m))
    val = pref * pm / den
    return val[()] if isinstance(val, np.ndarray) and val.ndim == 0 else val


def qhahn_spectrum_route(m: int, w: WeightParam, ctx: QContext, M: int | None = None,
                         K: int | None = None):
    """F sigma(P_m) on the rho grid through forward(sigma(P_m)), the independent route."""
    K = ctx.K if K is None else K
    return forward(sigma_projection(m, w, ctx, K), M)


def _qhahn_weight(rho, w, ctx):
    # (q^(2i rho), q^(-2i rho))_inf / ((q^(n+2+2a +- i rho))_inf (q^(n +- i rho))_inf^2)
    q, n, a = ctx.q, ctx.n, w.alpha
    p = q * q
    r = np.asarray(rho, dtype=float)
    e2 = q ** (2j * r)
    za = q ** (n + 2 + 2 * a + 1j * r)
    zn = q ** (n + 1j * r)
    num = qpoch(e2, p) * qpoch(np.conj(e2), p)
    den = qpoch(za, p) * qpoch(np.conj(za), p) * (qpoch(zn, p) * qpoch(np.conj(zn), p)) ** 2
    return _real(num / den, "q-Hahn weight")


def qhahn_gram(mmax: int, w: WeightParam, ctx: QContext, M: int | None = None) -> np.ndarray:
    """G[m, l] = (1/4pi) int p_m p_l (weight) d rho over [0, 2pi/h], trapezoid on M+1 nodes."""
    _check(ctx, w)
    if mmax > 10:
        raise DomainError("mmax must be at most 10")
    M = ctx.M if M is None else M
    rho = rho_grid(ctx, M)
    A, Bp, Cp, p = _qhahn_params(w, ctx)
    P = cont_dual_qhahn_all(mmax, np.cos(ctx.h * rho / 2), A, Bp, Cp, p)
    wt = np.full(M + 1, ctx.rho_max / M)
    wt[[0, -1]] *= 0.5
    mu = wt * _qhahn_weight(rho, w, ctx)
    return (P * mu[:, None]).T @ P / (4 * math.pi)


def qhahn_gram_diagonal(mmax: int, w: WeightParam, ctx: QContext) -> np.ndarray:
    """1 / (h (q^(2n+2m+2+2a))_inf^2 (q^(2m+2))_inf (q^(2n+2m))_inf), m = 0..mmax."""
    _check(ctx, w)
    q, n, a = ctx.q, ctx.n, w.alpha
    out = []
    for m in range(mmax + 1):
        d = (float(qpoch_exp(2 * n + 2 * m + 2 + 2 * a, q)) ** 2 * float(qpoch_exp(2 * m + 2, q))
             * float(qpoch_exp(2 * n + 2 * m, q)))
        out.append(1.0 / (ctx.h * d))
    return np.array(out)


def covariant_gram(mmax: int, w: WeightParam, ctx: QContext, M: int | None = None):
    """Plancherel Gram of F sigma(P_m) / sqrt(b) and the q-traces Tr_q(P_m) it should reproduce."""
    M = ctx.M if M is None else M
    rho = rho_grid(ctx, M)
    F = np.array([qhahn_spectrum(m, rho, w, ctx) for m in range(mmax + 1)]).T
    b = symbol_b(rho, w, ctx)
    const = ctx.h / (4 * math.pi * (1.0 - ctx.q ** (2 * ctx.n)))
    mu = _measure(ctx, M) / b
    G = const * (F * mu[:, None]).T @ F
    return G, trq_degree_weights(ctx, w, mmax + 1)
