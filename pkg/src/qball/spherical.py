"""q-spherical transform, Plancherel density and inversion by quadrature.

The spectral variable rho runs over [0, 2 pi / h] on a uniform grid with
M+1 nodes. Integrands against d rho / |c(rho)|^2 are smooth, even and
periodic in h rho / 2 and vanish at both ends, so the composite trapezoid
rule converges spectrally.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .laplace import phi_table, rho_grid
from .lattice import RadialFunction, l2_inner_radial
from .qcore import (
    AccuracyError,
    AccuracyWarning,
    DomainError,
    QContext,
    alsalam_chihara_all,
    qgamma,
    qpoch,
    qpoch_exp,
)

__all__ = [
    "SpectralFunction",
    "forward",
    "forward_closed",
    "plancherel_weight",
    "plancherel_weight_gamma",
    "trapezoid_weights",
    "inverse",
    "plancherel_residual",
    "asc_gram",
    "asc_gram_diagonal",
]

IMAG_TOL = 1e-11


class SpectralFunction:
    """Samples over the M+1 uniform nodes on [0, 2 pi / h]."""

    def __init__(self, ctx: QContext, values, M: int | None = None):
        v = np.array(values)
        M = len(v) - 1 if M is None else M
        if v.shape != (M + 1,):
            raise DomainError(f"expected {M + 1} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise DomainError("samples must be finite")
        v.setflags(write=False)
        self.ctx = ctx
        self.M = M
        self.values = v

    @property
    def nodes(self) -> np.ndarray:
        return rho_grid(self.ctx, self.M)

    def __add__(self, other):
        if isinstance(other, SpectralFunction):
            if other.M != self.M or other.ctx.q != self.ctx.q or other.ctx.n != self.ctx.n:
                raise DomainError("spectral functions on different grids")
            other = other.values
        return SpectralFunction(self.ctx, self.values + other, self.M)

    def __mul__(self, other):
        if isinstance(other, SpectralFunction):
            other = other.values
        return SpectralFunction(self.ctx, self.values * other, self.M)

    __rmul__ = __mul__

    def __repr__(self):
        return f"SpectralFunction(q={self.ctx.q}, n={self.ctx.n}, M={self.M})"


def _weights_ld(ctx, L):
    # lattice weights in long double, matching the precision of phi_table
    ld = np.longdouble
    q, n = ld(ctx.q), ctx.n
    k = np.arange(L).astype(ld)
    w = (1 - q ** (2 * n)) * q ** (-2 * n * k)
    for j in range(1, n):
        w = w * (1 - q ** (2 * k + 2 * j))
    return w


def forward(f: RadialFunction, M: int | None = None, *, table=None) -> SpectralFunction:
    """F f(rho) = sum_k f(q^(2k)) phi_rho(q^(2k)) w_k on the rho grid."""
    ctx = f.ctx
    M = ctx.M if M is None else M
    support = np.flatnonzero(f.coeffs)
    L = int(support[-1]) + 1 if support.size else 1
    if table is None:
        table = phi_table(ctx, rho_grid(ctx, M), L)
    w = _weights_ld(ctx, L)
    vals = (table[:, :L] * (f.coeffs[:L].astype(w.dtype) * w)).sum(axis=1)
    return SpectralFunction(ctx, vals.astype(float), M)


def forward_closed(k: int, rho, ctx: QContext):
    """F f_k(rho) = (1-q^(2n)) q^(-kn) (q^(2k+2);q^2)_(n-1) / (q^(2n);q^2)_k Q_k(cos(h rho/2); q^n, q^n | q^2)."""
    q, n = ctx.q, ctx.n
    x = np.cos(ctx.h * np.asarray(rho, dtype=float) / 2)
    Q = alsalam_chihara_all(k, x, q**n, q**n, q * q)[..., k]
    pref = ((1.0 - q ** (2 * n)) * q ** (-k * n) * float(qpoch_exp(2 * k + 2, q, n - 1))
            / float(qpoch_exp(2 * n, q, k)))
    return (pref * Q)[()]


def _real(z, what):
    z = np.asarray(z)
    scale = np.maximum(np.abs(z.real), 1e-300)
    if np.any(np.abs(z.imag) > IMAG_TOL * np.maximum(scale, 1.0)):
        raise AccuracyError(f"{what}: imaginary residue above {IMAG_TOL}")
    return z.real


def plancherel_weight(rho, ctx: QContext):
    """1/|c(rho)|^2 in product form.

    (q^(2n);q^2)^2 (q^(2i rho);q^2)(q^(-2i rho);q^2) / ((q^(n+i rho);q^2)^2 (q^(n-i rho);q^2)^2),
    all products infinite.
    """
    q, n = ctx.q, ctx.n
    r = np.asarray(rho, dtype=float)
    p = q * q
    kw = dict(eps_tail=ctx.eps_tail, n_max=ctx.N_inf)
    e2 = q ** (2j * r)
    en = q ** (n + 1j * r)
    num = qpoch(p**n, p, math.inf, **kw) ** 2 * qpoch(e2, p, **kw) * qpoch(np.conj(e2), p, **kw)
    den = qpoch(en, p, **kw) ** 2 * qpoch(np.conj(en), p, **kw) ** 2
    val = _real(num / den, "plancherel weight")
    return val[()] if isinstance(val, np.ndarray) else val


def plancherel_weight_gamma(rho, ctx: QContext):
    """1/|c(rho)|^2 with c(rho) = G(n) G(i rho) / G(n/2 + i rho/2)^2, G the q^2-Gamma function.

    At the two endpoints G(i rho) has a pole and the weight is 0.
    """
    q, n = ctx.q, ctx.n
    p = q * q
    r = np.atleast_1d(np.asarray(rho, dtype=float))
    out = np.zeros(r.shape)
    for i, x in enumerate(r):
        if abs(1.0 - p ** complex(0, x)) < 1e-15:
            continue
        c = qgamma(n, p) * qgamma(complex(0, x), p) / qgamma(complex(n / 2, x / 2), p) ** 2
        out[i] = 1.0 / abs(c) ** 2
    return out[0] if np.ndim(rho) == 0 else out


def trapezoid_weights(ctx: QContext, M: int | None = None) -> np.ndarray:
    """Composite trapezoid weights on the M+1 node rho grid."""
    M = ctx.M if M is None else M
    w = np.full(M + 1, ctx.rho_max / M)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def _measure(ctx, M):
    # trapezoid weight times Plancherel density, node by node
    return trapezoid_weights(ctx, M) * plancherel_weight(rho_grid(ctx, M), ctx)


def inverse(F: SpectralFunction, Kout: int | None = None, *, tol: float = 1e-9,
            table=None) -> RadialFunction:
    """f(q^(2k)) = (1/4pi) (h/(1-q^(2n))) int F(rho) phi_rho(q^(2k)) d rho / |c(rho)|^2, k < Kout.

    The quadrature error is estimated by repeating the sum on every other
    node; if that estimate exceeds ``tol`` (relative to max |f|, floor 1) an
    AccuracyWarning is issued.
    """
    ctx = F.ctx
    Kout = ctx.K if Kout is None else Kout
    M = F.M
    if table is None:
        table = phi_table(ctx, rho_grid(ctx, M), Kout)
    const = ctx.h / (4 * math.pi * (1.0 - ctx.q ** (2 * ctx.n)))
    mu = _measure(ctx, M)
    vals = F.values
    fine = const * ((vals * mu).astype(table.dtype)[:, None] * table[:, :Kout]).sum(axis=0).astype(float)
    if M % 2 == 0 and M >= 4:
        half = SpectralFunction(ctx, vals[::2], M // 2)
        mu2 = _measure(ctx, M // 2)
        coarse = const * ((half.values * mu2).astype(table.dtype)[:, None] * table[::2, :Kout]).sum(axis=0).astype(float)
        est = float(np.max(np.abs(fine - coarse))) if Kout else 0.0
        scale = max(1.0, float(np.max(np.abs(fine)))) if Kout else 1.0
        if est > tol * scale:
            warnings.warn(f"inverse transform: quadrature error estimate {est:.3g} with M={M}",
                          AccuracyWarning, stacklevel=2)
    return RadialFunction(ctx, _real(fine, "inverse transform") if np.iscomplexobj(fine) else fine)


def plancherel_residual(f: RadialFunction, M: int | None = None) -> float:
    """|LHS - RHS| / |LHS| with LHS = ||f||^2 and RHS the spectral-side integral; 0 for f = 0."""
    ctx = f.ctx
    M = ctx.M if M is None else M
    lhs = float(np.real(l2_inner_radial(f, f)))
    if lhs == 0.0:
        return 0.0
    F = forward(f, M)
    const = ctx.h / (4 * math.pi * (1.0 - ctx.q ** (2 * ctx.n)))
    rhs = const * math.fsum(np.abs(F.values) ** 2 * _measure(ctx, M))
    return abs(lhs - rhs) / abs(lhs)


def asc_gram(kmax: int, ctx: QContext, M: int | None = None) -> np.ndarray:
    """G[k, m] = (1/4pi) int Q_k Q_m d rho / |c(rho)|^2 for k, m <= kmax."""
    M = ctx.M if M is None else M
    q, n = ctx.q, ctx.n
    x = np.cos(ctx.h * rho_grid(ctx, M) / 2)
    Q = alsalam_chihara_all(kmax, x, q**n, q**n, q * q)
    mu = _measure(ctx, M)
    return (Q * mu[:, None]).T @ Q / (4 * math.pi)


def asc_gram_diagonal(kmax: int, ctx: QContext) -> np.ndarray:
    """(q^(2n);q^2)_k^2 / (h (q^(2k+2);q^2)_(n-1)), k = 0..kmax."""
    q, n = ctx.q, ctx.n
    k = np.arange(kmax + 1)
    num = np.array([float(qpoch_exp(2 * n, q, int(j))) ** 2 for j in k])
    return num / (ctx.h * qpoch_exp(2 * k + 2, q, n - 1))
