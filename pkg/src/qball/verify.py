"""Verification suites: every identity checked numerically at one (q, n, alpha).

Each suite returns a list of Check records; a check passes when its
residual is finite and at most its tolerance. Random inputs come from a
fixed seed so reports are reproducible.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import bergman, berezin, fock, laplace, lattice, qcore, spherical
from .bergman import WeightParam
from .lattice import RadialFunction
from .qcore import QContext

SUITES = ("qcore", "lattice", "fock", "bergman", "eigen", "spherical", "plancherel",
          "orthogonality", "berezin", "expansion")


@dataclass
class VerifyConfig:
    q: float = 0.5
    n: int = 1
    alpha: float = 1.0
    K: int = 64
    M: int = 4096
    tol: float | None = None
    seed: int = 0

    def ctx(self, **kw) -> QContext:
        return QContext(self.q, self.n, K=kw.get("K", self.K), M=kw.get("M", self.M))

    @property
    def weight(self) -> WeightParam:
        return WeightParam(self.alpha, self.q)

    @property
    def params(self) -> str:
        return f"q={self.q:g},n={self.n},alpha={self.alpha:g}"


@dataclass
class Check:
    suite: str
    check_id: str
    params: str
    residual: float
    tol: float
    lhs: float = math.nan
    rhs: float = math.nan
    note: str = field(default="")

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.suite} {self.check_id} {self.params} {self.residual:.3e} {self.tol:.1e} {status}"

    def detail(self) -> str:
        return f"  {self.check_id}: lhs={self.lhs!r} rhs={self.rhs!r}" + (f" ({self.note})" if self.note else "")


class _Report:
    def __init__(self, suite, cfg):
        self.suite = suite
        self.cfg = cfg
        self.checks = []

    def add(self, cid, residual, tol, lhs=math.nan, rhs=math.nan, note=""):
        if self.cfg.tol is not None:
            tol = self.cfg.tol
        self.checks.append(Check(self.suite, cid, self.cfg.params, float(residual), tol,
                                 float(lhs), float(rhs), note))

    def compare(self, cid, lhs, rhs, tol, scale=None, note=""):
        """Max |lhs - rhs| over the arrays, divided by scale (default max |rhs|, floor 1e-300)."""
        lhs = np.atleast_1d(np.asarray(lhs, dtype=float))
        rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
        d = np.abs(lhs - rhs)
        i = int(np.argmax(d)) if d.size else 0
        if scale is None:
            scale = float(np.max(np.abs(rhs))) if rhs.size else 1.0
        res = float(d[i]) / max(scale, 1e-300) if d.size else 0.0
        self.add(cid, res, tol, lhs[i] if d.size else 0.0, rhs[i] if d.size else 0.0, note)


def _rng(cfg):
    return np.random.default_rng(cfg.seed)


def _max_rel(pairs):
    worst, at = 0.0, (math.nan, math.nan)
    for a, b in pairs:
        r = abs(a - b) / max(abs(b), 1e-300)
        if r > worst:
            worst, at = r, (a, b)
    return worst, at


def _kout(q, n, alpha, extra=0, eps=1e-20):
    # lattice length past which B f_k is below eps relative
    return int(math.ceil(math.log(eps) / (2 * (alpha + n + 1) * math.log(q)))) + extra + 2


def _kspec(q, n, alpha, extra=0, eps=1e-28):
    # lattice length for spectral sums of functions decaying like y^(alpha+n+1):
    # the terms behave like q^(l(2 alpha+n+2)) times |phi| w_l q^(nl) <= ~1e7
    return int(math.ceil(math.log(eps) / ((2 * alpha + n + 2) * math.log(q)))) + extra


# ---------------------------------------------------------------- suites

def suite_qcore(cfg: VerifyConfig):
    rep = _Report("qcore", cfg)
    q = cfg.q
    p = q * q
    rng = _rng(cfg)
    pairs = []
    for a in rng.uniform(-1, 1, 6) + 1j * rng.uniform(-1, 1, 6):
        for m in range(21):
            pairs.append((qcore.qpoch(a, p, m + 1), (1 - a) * qcore.qpoch(a * p, p, m)))
    r, (x, y) = _max_rel(pairs)
    rep.add("qpoch-shift", r, 1e-13, abs(x), abs(y))
    pairs = [(qcore.qgamma(x + 1, p), (1 - p**x) / (1 - p) * qcore.qgamma(x, p))
             for x in np.arange(0.5, 6.01, 0.5)]
    r, (x, y) = _max_rel(pairs)
    rep.add("qgamma-feq", r, 1e-13, x, y)
    # cancellation-prone sums are compared against the size of their terms
    a = q**cfg.n
    worst, at = 0.0, (0, 0)
    for m in range(13):
        for x in (-1.0, -0.6, 0.37, 1.0):
            e = qcore._unit_from_cos(x)
            terms = qcore.phi32_terms(p**-m, a * e, a / e, a * a, 0.0, p, p, nterms=m + 1)
            scale = qcore.qpoch(a * a, p, m) / a**m * math.fsum(np.abs(terms))
            d = abs(qcore.alsalam_chihara(m, x, a, a, p) - qcore.alsalam_chihara_series(m, x, a, a, p))
            if d / scale > worst:
                worst, at = d / scale, (qcore.alsalam_chihara(m, x, a, a, p), qcore.alsalam_chihara_series(m, x, a, a, p))
    rep.add("asc-series", worst, 1e-11, *at, note="relative to the series term sum")
    worst, at = 0.0, (0, 0)
    for m in range(13):
        e = qcore._unit_from_cos(0.3)
        terms = qcore.phi32_terms(p**-m, a * e, a / e, a * a, 0.0, p, p, nterms=m + 1)
        fw = qcore._csum(terms)
        bw = qcore._csum(terms[::-1])
        r = abs(fw - bw) / math.fsum(np.abs(terms))
        if r > worst:
            worst, at = r, (fw.real, bw.real)
    rep.add("phi32-order", worst, 1e-12, *at, note="relative to the series term sum")
    A = q ** (cfg.n + 2 + 2 * cfg.alpha)
    worst, at = 0.0, (0, 0)
    for m in range(9):
        for x in (-1.0, -0.2, 0.5, 1.0):
            e = qcore._unit_from_cos(x)
            terms = qcore.phi32_terms(p**-m, A * e, A / e, A * a, A * a, p, p, nterms=m + 1)
            scale = qcore.qpoch(A * a, p, m) ** 2 / A**m * math.fsum(np.abs(terms))
            rec = qcore.cont_dual_qhahn(m, x, A, a, a, p)
            ser = qcore.cont_dual_qhahn_series(m, x, A, a, a, p)
            if abs(rec - ser) / scale > worst:
                worst, at = abs(rec - ser) / scale, (rec, ser)
    rep.add("cdqh-series", worst, 1e-11, *at, note="relative to the series term sum")
    return rep.checks


def suite_lattice(cfg: VerifyConfig):
    rep = _Report("lattice", cfg)
    rng = _rng(cfg)
    K = min(cfg.K, 40 if cfg.n <= 2 else 24)
    ctx = cfg.ctx().replace(K=max(K, 8))
    g = RadialFunction(ctx, rng.uniform(-1, 1, ctx.K))
    lhs = lattice.invariant_integral_multi(lattice.MultiRadialFunction.from_radial(g))
    rhs = lattice.invariant_integral_radial(g)
    scale = lattice.invariant_integral_radial(RadialFunction(ctx, np.abs(g.coeffs)))
    rep.add("multi-radial", abs(lhs - rhs) / scale, 1e-12, lhs, rhs)
    one = lattice.MultiRadialFunction.from_callable(ctx, lambda *y: 1.0)
    val = lattice.weighted_integral(one, cfg.alpha, fill=1.0)
    rep.add("weighted-one", abs(val - 1.0), 1e-10, val, 1.0)
    pairs = [(lattice.ordered_sum(cfg.n, a, b, cfg.q), lattice.ordered_sum_closed(cfg.n, a, b, cfg.q))
             for a in range(7) for b in range(a, 7)]
    r, (x, y) = _max_rel(pairs)
    rep.add("ordered-sum", r, 1e-13, x, y)
    w = lattice.radial_weights(cfg.ctx())
    rep.add("weights-positive", 0.0 if np.all(w > 0) else 1.0, 0.0, float(w.min()), 0.0)
    return rep.checks


def suite_fock(cfg: VerifyConfig):
    rep = _Report("fock", cfg)
    N = {1: 10, 2: 7, 3: 5}.get(cfg.n, 4)
    basis = fock.MonomialBasis(cfg.n, N)
    for key, val in sorted(fock.relation_residuals(math.inf, basis, cfg.q).items()):
        rep.add(f"fock-{key}", val, 1e-12)
    for key, val in sorted(fock.relation_residuals(cfg.alpha, basis, cfg.q).items()):
        rep.add(f"bergman-{key}", val, 1e-12)
    worst = 0.0
    for d in range(N // 2 + 1):
        for m in fock._compositions(d, cfg.n):
            worst = max(worst, fock.normal_order_residual(m, basis, cfg.q))
    rep.add("normal-order", worst, 1e-12)
    return rep.checks


def suite_bergman(cfg: VerifyConfig):
    rep = _Report("bergman", cfg)
    w = cfg.weight
    ctx = cfg.ctx()
    N = 8 if cfg.n <= 3 else 5
    basis = fock.MonomialBasis(cfg.n, N)
    G = fock.gram_from_matrices(cfg.alpha, basis, cfg.q)
    keep = basis.degrees <= N - 1
    pairs = [(G[i], bergman.monomial_norm(m, w)) for i, m in enumerate(basis.monomials) if keep[i]]
    r, (x, y) = _max_rel(pairs)
    rep.add("norms-gram", r, 1e-11, x, y)
    pairs = [(bergman.monomial_norm_integral(m, w), bergman.monomial_norm(m, w))
             for d in range(N - 1) for m in fock._compositions(d, cfg.n)]
    r, (x, y) = _max_rel(pairs)
    rep.add("norms-integral", r, 1e-11, x, y)
    pairs = [(bergman.toeplitz_quotient(k, m, w, cfg.n), bergman.toeplitz_fk_values(k, w, cfg.n, m + 1)[m])
             for k in range(9) for m in range(9)]
    r, (x, y) = _max_rel(pairs)
    rep.add("toeplitz-quotient", r, 1e-11, x, y)
    top = max(float(np.max(np.abs(bergman.toeplitz_fk_values(k, w, cfg.n, 40)[k + 1:]), initial=0.0))
              for k in range(9))
    rep.add("toeplitz-vanish", top, 0.0, top, 0.0)
    wl = lattice.radial_weights(ctx, 9)
    dw = bergman.trq_degree_weights(ctx, w, 9)
    pairs = []
    for m in range(9):
        s = bergman.sigma_projection(m, w, ctx, 9).coeffs
        for l in range(9):
            lhs = s[l] * wl[l]
            rhs = bergman.toeplitz_fk_values(l, w, cfg.n, 9)[m] * dw[m]
            if rhs != 0.0 or lhs != 0.0:
                pairs.append((lhs, rhs))
    r, (x, y) = _max_rel(pairs)
    rep.add("cov-defining", r, 1e-12, x, y)
    s0 = bergman.sigma_projection(0, w, ctx).coeffs
    y_ = ctx.q ** (2.0 * np.arange(ctx.K))
    rep.compare("sigma-p0", s0, y_ ** (cfg.alpha + cfg.n + 1), 1e-12,
                scale=None)
    pairs = []
    for m in range(6):
        op = bergman.projection(m, w, ctx, 8)
        pairs.append((bergman.trq_enumerated(op), bergman.trq(op)))
    r, (x, y) = _max_rel(pairs)
    rep.add("trq-enumerated", r, 1e-12, x, y)
    return rep.checks


def suite_eigen(cfg: VerifyConfig):
    rep = _Report("eigen", cfg)
    ctx = cfg.ctx()
    K = ctx.K
    op = laplace.laplace_jacobi(ctx)
    rho = laplace.rho_grid(ctx, 10)
    T = laplace.phi_table(ctx, rho, K + 1).astype(float)
    lam = laplace.lambda_eig(rho, ctx)
    worst = 0.0
    for i in range(len(rho)):
        phi = T[i]
        d = op.apply(phi[:K])[: K - 1] - lam[i] * phi[: K - 1]
        worst = max(worst, float(np.max(np.abs(d))) / float(np.max(np.abs(phi[:K]))))
    rep.add("eigenrelation", worst, 1e-10)
    rng = _rng(cfg)
    worst = 0.0
    for _ in range(20):
        f = RadialFunction(ctx, rng.uniform(-1, 1, K))
        a = op.apply(f.coeffs)[: K - 1]
        b = laplace.apply_difference_form(f).coeffs[: K - 1]
        worst = max(worst, float(np.max(np.abs(a - b))) / float(np.max(np.abs(b))))
    rep.add("jacobi-vs-difference", worst, 1e-12, note="sup norm relative")
    C = ctx.q**2 / (1 - ctx.q**2) ** 2 * ctx.q ** (-2 * ctx.n)
    rs = float(np.max(np.abs(op.row_sums())))
    rep.add("row-sums", rs / C, 1e-13)
    rep.add("weighted-symmetry", float(np.max(op.symmetry_defect())), 1e-13)
    worst = 0.0
    for _ in range(5):
        f = RadialFunction(ctx, np.append(rng.uniform(-1, 1, K - 2), [0.0, 0.0]))
        g = RadialFunction(ctx, np.append(rng.uniform(-1, 1, K - 2), [0.0, 0.0]))
        Df = RadialFunction(ctx, op.apply(f.coeffs)[:K])
        Dg = RadialFunction(ctx, op.apply(g.coeffs)[:K])
        lhs = float(np.real(lattice.l2_inner_radial(Df, g)))
        rhs = float(np.real(lattice.l2_inner_radial(f, Dg)))
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    rep.add("self-adjoint", worst, 1e-11)
    lo, hi = laplace.lambda_range(ctx)
    for KK in (40, 80):
        ev = op.eigenvalues(KK)
        out = max(0.0, lo - float(ev.min()), float(ev.max()) - hi)
        rep.add(f"spectrum-K{KK}", out, 1e-3, float(ev.min()), lo)
    worst = 0.0
    for k in range(13):
        for r in rho[1:-1]:
            terms = qcore.phi32_terms(ctx.q ** (-2.0 * k), ctx.q ** complex(ctx.n, r),
                                      ctx.q ** complex(ctx.n, -r), ctx.q ** (2 * ctx.n), 0.0,
                                      ctx.q**2, ctx.q**2, nterms=k + 1)
            ser = qcore._csum(terms).real
            d = abs(laplace.spherical_phi(r, k, ctx) - ser)
            worst = max(worst, d / math.fsum(np.abs(terms)))
    rep.add("phi-routes", worst, 1e-11, note="relative to the series term sum")
    return rep.checks


def suite_spherical(cfg: VerifyConfig):
    rep = _Report("spherical", cfg)
    ctx = cfg.ctx()
    M = 256
    rho = laplace.rho_grid(ctx, M)
    T = laplace.phi_table(ctx, rho, ctx.K + 1)
    worst = 0.0
    for k in range(11):
        direct = spherical.forward(RadialFunction.basis(ctx, k), M, table=T).values
        closed = spherical.forward_closed(k, rho, ctx)
        worst = max(worst, float(np.max(np.abs(direct - closed))) / float(np.max(np.abs(closed))))
    rep.add("forward-closed", worst, 1e-11)
    rng = _rng(cfg)
    lam = laplace.lambda_eig(rho, ctx)
    op = laplace.laplace_jacobi(ctx)
    worst = 0.0
    for S in (4, 8, ctx.K - 2):
        c = np.zeros(ctx.K)
        c[:S] = rng.uniform(-1, 1, S)
        f = RadialFunction(ctx, c)
        Ff = spherical.forward(f, M, table=T).values
        FD = spherical.forward(RadialFunction(ctx, op.apply(c[:S])), M, table=T).values
        worst = max(worst, float(np.max(np.abs(FD - lam * Ff))) / float(np.max(np.abs(lam * Ff))))
    rep.add("diagonalization", worst, 1e-10, note="sup norm relative to sup |lambda F f|")
    r = rho[1:-1]
    pw = spherical.plancherel_weight(r, ctx)
    pg = spherical.plancherel_weight_gamma(r, ctx)
    rep.add("c-function", float(np.max(np.abs(pw - pg) / pg)), 1e-10)
    ends = spherical.plancherel_weight(np.array([0.0, ctx.rho_max]), ctx)
    rep.add("weight-endpoints", float(np.max(np.abs(ends))) / float(np.max(pw)), 1e-12)
    rep.add("weight-positive", 0.0 if np.all(pw > 0) else 1.0, 0.0)
    return rep.checks


def suite_plancherel(cfg: VerifyConfig):
    rep = _Report("plancherel", cfg)
    ctx = cfg.ctx()
    M = ctx.M
    K = ctx.K
    rho = laplace.rho_grid(ctx, M)
    T = laplace.phi_table(ctx, rho, K)
    rng = _rng(cfg)
    w = lattice.radial_weights(ctx, K)
    worst = 0.0
    wrt = 0.0
    for _ in range(10):
        f = RadialFunction(ctx, rng.uniform(-1, 1, K))
        worst = max(worst, spherical.plancherel_residual(f, M))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", qcore.AccuracyWarning)
            g = spherical.inverse(spherical.forward(f, M, table=T), K, table=T)
        d = g.coeffs - f.coeffs
        wrt = max(wrt, math.sqrt(math.fsum(d * d * w) / math.fsum(f.coeffs**2 * w)))
    rep.add("plancherel-random", worst, 1e-8)
    f0 = RadialFunction.basis(ctx, 0)
    rep.add("plancherel-f0", spherical.plancherel_residual(f0, M), 1e-8)
    f03 = f0 + 2 * RadialFunction.basis(ctx, 3)
    rep.add("plancherel-f0+2f3", spherical.plancherel_residual(f03, M), 1e-8)
    rep.add("roundtrip-random-l2", wrt, 1e-8, note="weighted L2 norm")
    g = spherical.inverse(spherical.forward(f0, M, table=T), K, table=T)
    rep.compare("roundtrip-f0", g.coeffs, f0.coeffs, 1e-8, scale=1.0)
    const = spherical.SpectralFunction(ctx, np.full(M + 1, qcore.qpoch(ctx.q**2, ctx.q**2, ctx.n)), M)
    g = spherical.inverse(const, K, table=T)
    rep.compare("roundtrip-constant", g.coeffs, f0.coeffs, 1e-8, scale=1.0)
    # quadrature convergence: M/2 against M
    worst = 0.0
    for f in (f0, f03):
        a = spherical.inverse(spherical.forward(f, M, table=T), K, table=T).coeffs
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", qcore.AccuracyWarning)
            b = spherical.inverse(spherical.forward(f, M // 2, table=T[::2]), K, table=T[::2]).coeffs
        worst = max(worst, float(np.max(np.abs(a - b))))
    rep.add("quadrature-halving", worst, 1e-9)
    return rep.checks


def suite_orthogonality(cfg: VerifyConfig):
    rep = _Report("orthogonality", cfg)
    ctx = cfg.ctx()
    G = spherical.asc_gram(10, ctx)
    d = spherical.asc_gram_diagonal(10, ctx)
    rep.compare("asc-diagonal", np.diag(G) / d, np.ones(11), 1e-8)
    off = G - np.diag(np.diag(G))
    rep.add("asc-offdiagonal", float(np.max(np.abs(off))) / float(np.max(d)), 1e-8)
    rep.add("asc-symmetric", float(np.max(np.abs(G - G.T))) / float(np.max(d)), 1e-14)
    w = cfg.weight
    G = berezin.qhahn_gram(8, w, ctx)
    d = berezin.qhahn_gram_diagonal(8, w, ctx)
    rep.compare("qhahn-diagonal", np.diag(G) / d, np.ones(9), 1e-8)
    off = G - np.diag(np.diag(G))
    rep.add("qhahn-offdiagonal", float(np.max(np.abs(off))) / float(np.max(d)), 1e-8)
    Gc, tr = berezin.covariant_gram(6, w, ctx)
    rep.compare("unitarity-diagonal", np.diag(Gc) / tr, np.ones(7), 1e-8)
    off = Gc - np.diag(np.diag(Gc))
    rep.add("unitarity-offdiagonal", float(np.max(np.abs(off))) / float(np.max(np.diag(Gc))), 1e-8)
    return rep.checks


def suite_berezin(cfg: VerifyConfig):
    rep = _Report("berezin", cfg)
    w = cfg.weight
    q, n, a = cfg.q, cfg.n, cfg.alpha
    Kb = max(cfg.K, _kout(q, n, a, extra=10), _kspec(q, n, a, extra=10))
    ctx = cfg.ctx().replace(K=Kb)
    B0 = berezin.berezin_radial(RadialFunction.basis(ctx, 0), w, Kb).coeffs[:41]
    ref = berezin.berezin_f0(w, ctx, 41).coeffs
    rep.add("bf0", float(np.max(np.abs(B0 - ref) / ref)), 1e-12, B0[1], ref[1])
    pairs = []
    for k in range(7):
        fk = RadialFunction.basis(ctx, k)
        B = berezin.berezin_radial(fk, w, Kb).coeffs
        C = bergman.covariant_symbol(bergman.toeplitz_radial(fk, w, ctx), Kb).coeffs
        pairs.append((float(np.max(np.abs(B - C))) / float(np.max(np.abs(C))), 0.0))
    rep.add("double-sum-vs-symbol", max(p_[0] for p_ in pairs), 1e-12)
    M = 1024
    rho = laplace.rho_grid(ctx, M)
    T = laplace.phi_table(ctx, rho, Kb)
    b = berezin.symbol_b(rho, w, ctx)
    worst = 0.0
    for k in range(7):
        fk = RadialFunction.basis(ctx, k)
        FB = spherical.forward(berezin.berezin_radial(fk, w, Kb), M, table=T).values
        Ff = b * spherical.forward(fk, M, table=T).values
        worst = max(worst, float(np.max(np.abs(FB - Ff))) / float(np.max(np.abs(Ff))))
    rep.add("intertwining", worst, 1e-9)
    op = laplace.laplace_jacobi(ctx)
    worst = 0.0
    for k in range(7):
        fk = RadialFunction.basis(ctx, k)
        lhs = op.apply(berezin.berezin_radial(fk, w, Kb).coeffs)[: Kb - 1]
        Df = RadialFunction(ctx, op.apply(fk.coeffs[: k + 1]))
        rhs = berezin.berezin_radial(Df, w, Kb).coeffs[: Kb - 1]
        worst = max(worst, float(np.max(np.abs(lhs - rhs))) / float(np.max(np.abs(rhs))))
    rep.add("commutation", worst, 1e-10)
    z = q ** (n + 2 + 2 * a + 1j * rho)
    raw = qcore.qpoch(z, q * q) * qcore.qpoch(np.conj(z), q * q)
    rep.add("b-real", float(np.max(np.abs(raw.imag) / np.abs(raw.real))), 1e-12)
    lb = berezin.symbol_b_lower_bound(w, ctx)
    rep.add("b-lower-bound", max(0.0, float((lb - b.min()) / lb)), 1e-14, float(b.min()), lb)
    rep.compare("b-bound-endpoint", b[-1], lb, 1e-13)
    pinf = qcore.qpoch(q * q, q * q)
    # the tail is ~ J q^(J(2a+n+2)) / (q^2;q^2)_inf^2
    J = max(60, int(math.ceil(math.log(1e-14 * pinf**2) / ((2 * a + n + 2) * math.log(q)))))
    rep.compare("b-generating", berezin.symbol_b_partial(rho, w, ctx, J), b, 1e-9, note=f"J={J}")
    P0 = berezin.qhahn_spectrum(0, rho, w, ctx)
    ratio = qcore.qpoch(q * q, q * q, n) / float(qcore.qpoch_exp(2 * a + 2, q, n))
    rep.compare("fspm-m0", P0, b * ratio, 1e-10)
    worst = 0.0
    for m in range(7):
        Fr = spherical.forward(bergman.sigma_projection(m, w, ctx, Kb), M, table=T).values
        Fc = berezin.qhahn_spectrum(m, rho, w, ctx)
        worst = max(worst, float(np.max(np.abs(Fr - Fc))) / float(np.max(np.abs(Fc))))
    rep.add("fspm-two-route", worst, 1e-9)
    return rep.checks


def suite_expansion(cfg: VerifyConfig):
    rep = _Report("expansion", cfg)
    ctx = cfg.ctx()
    q, n = cfg.q, cfg.n
    rho = laplace.rho_grid(ctx, 10)
    lam = laplace.lambda_eig(rho, ctx)
    T = laplace.phi_table(ctx, rho, 11).astype(float)
    worst = 0.0
    for j in range(11):
        d = np.abs(berezin.pj_scalar(j, lam, ctx) - T[:, j]) / np.maximum(1.0, np.abs(T[:, j]))
        worst = max(worst, float(d.max()))
    rep.add("pj-phi", worst, 1e-10, note="relative to max(1, |phi|)")
    rep.compare("p0-identity", berezin.pj_scalar(0, lam, ctx), np.ones_like(lam), 0.0, scale=1.0)
    worst = 0.0
    f0 = RadialFunction.basis(ctx, 0)
    for j in range(11):
        g = berezin.expansion_apply(j, f0).coeffs
        tgt = np.zeros(len(g))
        tgt[j] = q ** (2 * j * n) * qcore.qpoch(q * q, q * q, n - 1) / float(qcore.qpoch_exp(2 * j + 2, q, n - 1))
        worst = max(worst, float(np.max(np.abs(g - tgt))))
    rep.add("pj-f0", worst, 1e-13, note="absolute")
    wt = WeightParam.from_t(0.1, q)
    Kb = _kout(q, n, wt.alpha, extra=24)
    worst = 0.0
    for k in (0, 2):
        f = RadialFunction.basis(ctx.replace(K=max(8, Kb)), k)
        S = berezin.expansion_partial_sum(f, wt, 20).coeffs
        B = berezin.berezin_radial(f, wt, Kb).coeffs
        L = min(len(S), len(B))
        worst = max(worst, float(np.max(np.abs(S[:L] - B[:L]))))
    rep.add("expansion-sum", worst, 1e-10, note="t=0.1, J=20")
    for k in range(4):
        f = RadialFunction.basis(ctx, k)
        _, slope, _ = berezin.laplacian_from_limit(f, [1e-2, 1e-3, 1e-4], full_output=True)
        rep.add(f"remainder-slope-f{k}", abs(slope - 2.0), 0.1, slope, 2.0)
    f = RadialFunction.basis(ctx, 0)
    L = berezin.laplacian_from_limit(f, [1e-6]).coeffs
    D = laplace.laplace_jacobi(ctx).apply(f.coeffs[:1])
    rep.compare("laplacian-limit", L[:2], D[:2], 1e-5)
    return rep.checks


_SUITES = {
    "qcore": suite_qcore,
    "lattice": suite_lattice,
    "fock": suite_fock,
    "bergman": suite_bergman,
    "eigen": suite_eigen,
    "spherical": suite_spherical,
    "plancherel": suite_plancherel,
    "orthogonality": suite_orthogonality,
    "berezin": suite_berezin,
    "expansion": suite_expansion,
}


def run_suite(name: str, cfg: VerifyConfig):
    if name == "all":
        out = []
        for s in SUITES:
            out.extend(_SUITES[s](cfg))
        return out
    if name not in _SUITES:
        raise KeyError(name)
    return _SUITES[name](cfg)
