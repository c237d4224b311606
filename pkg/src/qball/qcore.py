"""Scalar q-special-function kernel.

q-Pochhammer symbols, the q-Gamma function, terminating and convergent
3phi2 series, Al-Salam--Chihara and continuous dual q-Hahn polynomials.
Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from numbers import Integral

import numpy as np

__all__ = [
    "QContext",
    "DomainError",
    "AccuracyError",
    "AccuracyWarning",
    "qpoch",
    "qpoch_exp",
    "qgamma",
    "phi32",
    "phi32_terms",
    "alsalam_chihara",
    "alsalam_chihara_all",
    "alsalam_chihara_series",
    "cont_dual_qhahn",
    "cont_dual_qhahn_all",
    "cont_dual_qhahn_series",
]


class DomainError(ValueError):
    """Argument outside the domain of a q-special function or operator."""


class AccuracyError(ArithmeticError):
    """A truncated sum or product could not reach the requested tolerance."""


class AccuracyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class QContext:
    """Global parameters (q, n) plus truncation and tolerance policy.

    ``K`` is the number of lattice points y = q^(2k) kept, ``M`` the number of
    quadrature panels on [0, 2*pi/h] (M + 1 nodes), ``N_inf`` caps infinite
    products and ``eps_tail`` is their tail tolerance.
    """

    q: float
    n: int = 1
    K: int = 64
    M: int = 4096
    N_inf: int = 4096
    eps_tail: float = 1e-16

    def __post_init__(self):
        if not (isinstance(self.q, (int, float)) and math.isfinite(self.q) and 0.0 < self.q < 1.0):
            raise DomainError("q must lie in (0,1)")
        if not isinstance(self.n, Integral) or self.n < 1:
            raise DomainError("n must be a positive integer")
        if not isinstance(self.K, Integral) or self.K < 8:
            raise DomainError("K must be an integer >= 8")
        if not isinstance(self.M, Integral) or self.M < 64 or self.M % 2:
            raise DomainError("M must be an even integer >= 64")
        if not self.eps_tail > 0:
            raise DomainError("eps_tail must be positive")
        if not isinstance(self.N_inf, Integral) or self.N_inf < 1:
            raise DomainError("N_inf must be a positive integer")

    @property
    def h(self) -> float:
        return -2.0 * math.log(self.q)

    @property
    def p(self) -> float:
        """The lattice base q**2."""
        return self.q * self.q

    @property
    def rho_max(self) -> float:
        return 2.0 * math.pi / self.h

    def replace(self, **changes) -> "QContext":
        return replace(self, **changes)


def _check_base(base):
    if not (np.isfinite(base) and 0.0 < base < 1.0):
        raise DomainError(f"base must lie in (0,1), got {base!r}")


def _inf_terms(amax: float, base: float, eps_tail: float, n_max: int) -> int:
    # first N with |a| base^N / (1 - base) < eps_tail
    if amax == 0.0:
        return 0
    target = eps_tail * (1.0 - base) / amax
    if target >= 1.0:
        return 1
    N = math.ceil(math.log(target) / math.log(base)) + 1
    if N > n_max:
        raise AccuracyError(f"infinite product needs {N} factors, cap is {n_max}")
    return max(N, 1)


def _as_count(count):
    if count == math.inf:
        return math.inf
    if isinstance(count, Integral) or (isinstance(count, float) and count.is_integer()):
        c = int(count)
        if c < 0:
            raise DomainError("negative Pochhammer length")
        return c
    if isinstance(count, (float, np.floating)) and math.isfinite(count):
        return float(count)
    if isinstance(count, complex):
        raise DomainError("complex Pochhammer exponents are not supported")
    raise DomainError(f"invalid Pochhammer length {count!r}")


def qpoch(a, base: float, count=math.inf, *, eps_tail: float = 1e-16, n_max: int = 4096):
    """q-Pochhammer symbol (a; base)_count.

    ``a`` may be a complex scalar or an array (broadcast elementwise).
    ``count`` is a nonnegative integer, ``math.inf``, or a real number; the
    real case is the ratio (a;base)_inf / (a*base**count;base)_inf.
    """
    _check_base(base)
    arr = np.asarray(a)
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite Pochhammer argument")
    count = _as_count(count)
    if isinstance(count, float) and count != math.inf:
        num = qpoch(arr, base, math.inf, eps_tail=eps_tail, n_max=n_max)
        den = qpoch(arr * base**count, base, math.inf, eps_tail=eps_tail, n_max=n_max)
        if np.any(den == 0):
            raise DomainError("pole in (a;q)_gamma")
        return num / den
    if count == math.inf:
        amax = float(np.max(np.abs(arr))) if arr.size else 0.0
        count = _inf_terms(amax, base, eps_tail, n_max)
    if count == 0:
        return np.ones(arr.shape, dtype=np.result_type(arr.dtype, float))[()]
    powers = base ** np.arange(count)
    factors = 1.0 - arr[..., None] * powers
    return np.prod(factors, axis=-1)[()]


def qpoch_exp(e, q: float, count=math.inf, *, step: int = 2, eps_tail: float = 1e-16,
              n_max: int = 4096):
    """(q^e; q^step)_count with the exponent kept in exact arithmetic.

    Each factor is ``1 - q**(e + step*j)``, so a factor whose exponent is
    exactly zero gives an exact 0 (for instance (q^(2(k-m)+2); q^2)_r with
    k < m). ``e`` may be complex or an array.
    """
    if not (0.0 < q < 1.0):
        raise DomainError("q must lie in (0,1)")
    ea = np.asarray(e)
    if not np.all(np.isfinite(ea)):
        raise DomainError("non-finite exponent")
    count = _as_count(count)
    base = q**step
    if isinstance(count, float) and count != math.inf:
        num = qpoch_exp(ea, q, math.inf, step=step, eps_tail=eps_tail, n_max=n_max)
        den = qpoch_exp(ea + step * count, q, math.inf, step=step, eps_tail=eps_tail, n_max=n_max)
        return num / den
    if count == math.inf:
        amax = float(np.max(q ** np.real(ea))) if ea.size else 0.0
        count = _inf_terms(amax, base, eps_tail, n_max)
    j = np.arange(count)
    factors = 1.0 - q ** (ea[..., None] + step * j)
    return np.prod(factors, axis=-1)[()]


def qgamma(x, base: float, *, eps_tail: float = 1e-16):
    """q-Gamma function Gamma_base(x) = (b;b)_inf / (b^x;b)_inf * (1-b)^(1-x).

    Complex ``x`` is accepted (the Harish-Chandra function needs it).
    """
    _check_base(base)
    xc = complex(x)
    if xc.imag == 0.0 and xc.real <= 0.0 and float(xc.real).is_integer():
        raise DomainError(f"q-Gamma pole at x = {x!r}")
    num = qpoch(base, base, math.inf, eps_tail=eps_tail)
    den = qpoch(base**xc, base, math.inf, eps_tail=eps_tail)
    val = num / den * (1.0 - base) ** (1.0 - xc)
    if isinstance(x, (int, float, np.floating, np.integer)):
        return float(val.real)
    return complex(val)


def _terminating_length(a, base) -> int | None:
    """Return m if a == base**(-m) for an integer m >= 0, else None."""
    a = complex(a)
    if a.imag != 0.0 or a.real <= 0.0:
        return None
    m = -math.log(a.real) / math.log(base)
    mr = round(m)
    if mr >= 0 and abs(m - mr) < 1e-9 * max(1.0, abs(m)):
        return int(mr)
    return None


def phi32_terms(a1, a2, a3, b1, b2, base: float, z, *, nterms: int | None = None,
                eps_tail: float = 1e-16, max_terms: int = 100000) -> list[complex]:
    """The individual terms of the 3phi2 series, in ascending order.

    The series is cut exactly after ``m + 1`` terms when one of the upper
    parameters equals base**(-m); ``nterms`` forces that length explicitly.
    """
    _check_base(base)
    args = [complex(v) for v in (a1, a2, a3, b1, b2, z)]
    if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in args):
        raise DomainError("non-finite 3phi2 parameter")
    a1, a2, a3, b1, b2, z = args
    if nterms is None:
        lens = [m for m in (_terminating_length(a, base) for a in (a1, a2, a3)) if m is not None]
        if lens:
            nterms = min(lens) + 1
    terminating = nterms is not None
    if not terminating and abs(z) >= 1.0:
        raise DomainError("non-terminating 3phi2 diverges for |z| >= 1")
    limit = nterms if terminating else max_terms
    terms = [1.0 + 0.0j]
    t = 1.0 + 0.0j
    pl = 1.0
    small = 0
    for l in range(limit - 1):
        den = (1.0 - b1 * pl) * (1.0 - b2 * pl) * (1.0 - pl * base)
        if den == 0:
            raise DomainError("zero denominator factor before termination")
        t = t * (1.0 - a1 * pl) * (1.0 - a2 * pl) * (1.0 - a3 * pl) / den * z
        pl *= base
        terms.append(t)
        if not terminating:
            if abs(t) <= eps_tail * max(abs(sum(terms)), 1e-300):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
    else:
        if not terminating:
            raise AccuracyError("3phi2 series did not converge within max_terms")
    return terms


def _csum(values) -> complex:
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def phi32(a1, a2, a3, b1, b2, base: float, z, *, nterms: int | None = None,
          eps_tail: float = 1e-16) -> complex:
    """Basic hypergeometric series 3phi2(a1,a2,a3; b1,b2; base, z).

    ``b2 = 0`` is allowed, with (0;base)_l = 1 in the denominator. Summation
    is ascending and compensated.
    """
    return _csum(phi32_terms(a1, a2, a3, b1, b2, base, z, nterms=nterms, eps_tail=eps_tail))


def _unit_from_cos(x):
    x = np.asarray(x, dtype=float)
    return x + 1j * np.sqrt((1.0 - x * x).astype(complex))


def alsalam_chihara_all(mmax: int, x, a: float, b: float, base: float, *, dtype=float) -> np.ndarray:
    """Q_0..Q_mmax at every x by the three-term recurrence.

    Returns an array of shape ``x.shape + (mmax + 1,)``; ``dtype`` selects
    the working precision (np.longdouble buys a few digits at large m).
    """
    _check_base(base)
    x = np.asarray(x, dtype=dtype)
    a, b, base = dtype(a), dtype(b), dtype(base)
    out = np.empty(x.shape + (mmax + 1,), dtype=dtype)
    out[..., 0] = 1.0
    if mmax == 0:
        return out
    out[..., 1] = 2.0 * x - (a + b)
    pm = base  # base**m for m = 1
    for m in range(1, mmax):
        out[..., m + 1] = ((2.0 * x - (a + b) * pm) * out[..., m]
                           - (1.0 - pm) * (1.0 - a * b * pm / base) * out[..., m - 1])
        pm *= base
    return out


def alsalam_chihara(m: int, x, a: float, b: float, base: float):
    """Al-Salam--Chihara polynomial Q_m(x; a, b | base) via forward recurrence."""
    if m < 0:
        raise DomainError("polynomial degree must be nonnegative")
    return alsalam_chihara_all(m, x, a, b, base)[..., m][()]


def alsalam_chihara_series(m: int, x: float, a: float, b: float, base: float) -> float:
    """Q_m through its terminating 3phi2 representation (independent of the recurrence)."""
    e = complex(_unit_from_cos(x))
    s = phi32(base ** (-m), a * e, a / e, a * b, 0.0, base, base, nterms=m + 1)
    return float(((qpoch(a * b, base, m) / a**m) * s).real)


def _terminating_phi32_vec(m: int, a2, a3, b1, b2, base: float, z):
    # upper parameter base**(-m); a2, a3 arrays; factor (1 - base^(l-m)) kept exact
    a2 = np.asarray(a2, dtype=complex)
    a3 = np.asarray(a3, dtype=complex)
    t = np.ones(np.broadcast(a2, a3).shape, dtype=complex)
    terms = [t]
    for l in range(m):
        pl = base**l
        den = (1.0 - b1 * pl) * (1.0 - b2 * pl) * (1.0 - pl * base)
        if den == 0:
            raise DomainError("zero denominator factor before termination")
        t = t * (1.0 - base ** (l - m)) * (1.0 - a2 * pl) * (1.0 - a3 * pl) / den * z
        terms.append(t)
    return np.sum(terms, axis=0)


def cont_dual_qhahn_all(mmax: int, x, a: float, b: float, c: float, base: float) -> np.ndarray:
    """p_0..p_mmax of the continuous dual q-Hahn family by the three-term recurrence.

    Monic in 2x. The diagonal coefficient is expanded so that no 1/a appears.
    Returns an array of shape ``x.shape + (mmax + 1,)``.
    """
    _check_base(base)
    x = np.asarray(x, dtype=float)
    abc = a * b * c
    out = np.empty(x.shape + (mmax + 1,))
    out[..., 0] = 1.0
    if mmax == 0:
        return out
    out[..., 1] = 2.0 * x - (a + b + c) + abc
    for m in range(1, mmax):
        pm = base**m
        pm1 = pm / base
        diag = (a + b + c) * pm + abc * pm1 - abc * pm * pm - abc * pm * pm1
        off = (1.0 - pm) * (1.0 - a * b * pm1) * (1.0 - a * c * pm1) * (1.0 - b * c * pm1)
        out[..., m + 1] = (2.0 * x - diag) * out[..., m] - off * out[..., m - 1]
    return out


def cont_dual_qhahn(m: int, x, a: float, b: float, c: float, base: float):
    """Continuous dual q-Hahn polynomial p_m(x; a, b, c | base), recurrence evaluation."""
    if m < 0:
        raise DomainError("polynomial degree must be nonnegative")
    return cont_dual_qhahn_all(m, x, a, b, c, base)[..., m][()]


def cont_dual_qhahn_series(m: int, x, a: float, b: float, c: float, base: float):
    """Same polynomial from a^(-m) (ab, ac)_m 3phi2(base^-m, a e^{it}, a e^{-it}; ab, ac; base, base).

    Loses digits to cancellation once a^(-m) base^(-m(m-1)/2) is large; fine
    for moderate degree with base close to 1.
    """
    _check_base(base)
    if m < 0:
        raise DomainError("polynomial degree must be nonnegative")
    e = _unit_from_cos(x)
    s = _terminating_phi32_vec(m, a * e, a / e, a * b, a * c, base, base)
    pref = qpoch(a * b, base, m) * qpoch(a * c, base, m) / a**m
    return np.real(pref * s)[()]
