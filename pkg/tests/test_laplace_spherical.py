import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from qball import laplace, lattice, qcore, spherical
from qball.lattice import RadialFunction
from qball.qcore import AccuracyWarning, DomainError, QContext

GRID = [(q, n) for q in (0.3, 0.6, 0.9) for n in (1, 2, 3)]


def test_lambda_endpoints():
    ctx = QContext(0.5, 1)
    assert laplace.lambda_eig(0.0, ctx) == pytest.approx(-4 / 9, rel=1e-15)
    assert laplace.lambda_eig(ctx.rho_max, ctx) == pytest.approx(-4.0, rel=1e-15)


@pytest.mark.parametrize("q,n", GRID)
def test_lambda_vs_mpmath(q, n):
    ctx = QContext(q, n)
    for r in np.linspace(0, ctx.rho_max, 7):
        assert laplace.lambda_eig(r, ctx) == pytest.approx(float(oracles.lam(r, q, n)), rel=1e-14)


def test_phi_examples():
    ctx = QContext(0.5, 1)
    assert laplace.spherical_phi(0.0, 1, ctx) == pytest.approx(2 / 3, rel=1e-15)
    assert np.all(laplace.phi_table(ctx, [0.0, 1.0, 3.0], 5)[:, 0] == 1)


@pytest.mark.parametrize("q,n", GRID)
def test_phi_vs_mpmath(q, n):
    ctx = QContext(q, n)
    for r in (0.0, 0.37 * ctx.rho_max, ctx.rho_max):
        row = laplace.phi_table(ctx, r, 13)[0].astype(float)
        for k in (1, 5, 12):
            ref = float(oracles.spherical_phi(r, k, q, n))
            assert abs(row[k] - ref) <= 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("q,n", GRID)
def test_eigenrelation(q, n):
    ctx = QContext(q, n)
    op = laplace.laplace_jacobi(ctx)
    K = ctx.K
    for r in np.linspace(0, ctx.rho_max, 11):
        phi = laplace.phi_table(ctx, r, K)[0].astype(float)
        res = op.apply_truncated(phi)[: K - 1] - laplace.lambda_eig(r, ctx) * phi[: K - 1]
        assert np.max(np.abs(res)) / np.max(np.abs(phi)) < 1e-10


@pytest.mark.parametrize("q,n", GRID)
def test_jacobi_matches_difference_form(q, n):
    ctx = QContext(q, n, K=30)
    op = laplace.laplace_jacobi(ctx)
    rng = np.random.default_rng(7)
    for _ in range(20):
        c = np.zeros(30)
        c[:20] = rng.standard_normal(20)
        f = RadialFunction(ctx, c)
        a = op.apply(f).coeffs
        b = laplace.apply_difference_form(f).coeffs
        assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(b))


@pytest.mark.parametrize("q,n", GRID)
def test_row_sums_and_symmetry(q, n):
    op = laplace.laplace_jacobi(QContext(q, n))
    C = q * q / (1 - q * q) ** 2
    assert np.max(np.abs(op.row_sums())) / (C * q ** (-2 * n)) < 1e-13
    assert np.max(op.symmetry_defect()) < 1e-13


@pytest.mark.parametrize("q,n", GRID)
@pytest.mark.parametrize("K", [40, 80])
def test_spectrum_containment(q, n, K):
    ctx = QContext(q, n, K=K)
    ev = laplace.laplace_jacobi(ctx).eigenvalues()
    lo, hi = laplace.lambda_range(ctx)
    assert ev.min() >= lo - 1e-3 and ev.max() <= hi + 1e-3


@given(c=st.lists(st.floats(-3, 3), min_size=5, max_size=15), d=st.lists(st.floats(-3, 3), min_size=5, max_size=15))
@settings(max_examples=40)
def test_laplacian_self_adjoint(c, d):
    ctx = QContext(0.6, 2)
    op = laplace.laplace_jacobi(ctx)
    f, g = RadialFunction(ctx, c), RadialFunction(ctx, d)
    lhs = lattice.l2_inner_radial(op.apply(f), g)
    rhs = lattice.l2_inner_radial(f, op.apply(g))

    def norm(u):
        return math.sqrt(lattice.l2_inner_radial(u, u).real)

    scale = norm(op.apply(f)) * norm(g) + norm(f) * norm(op.apply(g))
    assert abs(lhs - rhs) <= 1e-12 * scale


def test_laplacian_kills_constants_on_safe_rows():
    ctx = QContext(0.5, 2)
    op = laplace.laplace_jacobi(ctx)
    assert np.max(np.abs(op.apply_truncated(np.ones(20))[:19])) < 1e-12


def test_forward_f0_constant():
    ctx = QContext(0.5, 1)
    F = spherical.forward(RadialFunction.basis(ctx, 0), 64)
    assert np.allclose(F.values, 0.75, rtol=1e-15)


@pytest.mark.parametrize("q,n", GRID)
def test_forward_closed_form(q, n):
    ctx = QContext(q, n)
    rho = laplace.rho_grid(ctx, 64)
    for k in (0, 3, 10):
        F = spherical.forward(RadialFunction.basis(ctx, k), 64).values
        G = spherical.forward_closed(k, rho, ctx)
        assert np.max(np.abs(F - G)) <= 1e-11 * np.max(np.abs(G))


@pytest.mark.parametrize("q,n", GRID)
def test_plancherel_weight_routes(q, n):
    ctx = QContext(q, n)
    rho = np.linspace(0, ctx.rho_max, 17)[1:-1]
    a = spherical.plancherel_weight(rho, ctx)
    b = spherical.plancherel_weight_gamma(rho, ctx)
    assert np.all(a > 0)
    assert np.max(np.abs(a - b) / b) < 1e-10
    ends = spherical.plancherel_weight(np.array([0.0, ctx.rho_max]), ctx)
    assert np.max(np.abs(ends)) < 1e-12 * np.max(a)


@pytest.mark.parametrize("q,n", GRID)
def test_laplacian_diagonalized(q, n):
    ctx = QContext(q, n)
    op = laplace.laplace_jacobi(ctx)
    f = RadialFunction(ctx, np.r_[np.random.default_rng(1).standard_normal(6), np.zeros(58)])
    lhs = spherical.forward(op.apply(f).resized(64), 256).values
    F = spherical.forward(f, 256)
    rhs = laplace.lambda_eig(F.nodes, ctx) * F.values
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * np.max(np.abs(rhs))


@pytest.mark.parametrize("q,n", GRID)
def test_plancherel_random(q, n):
    ctx = QContext(q, n)
    rng = np.random.default_rng(11)
    for _ in range(3):
        f = RadialFunction(ctx, rng.uniform(-1, 1, 64))
        assert spherical.plancherel_residual(f, 4096) < 1e-8


@pytest.mark.parametrize("q,n", GRID)
def test_roundtrip_f0_and_constant(q, n):
    ctx = QContext(q, n)
    f0 = RadialFunction.basis(ctx, 0)
    g = spherical.inverse(spherical.forward(f0, 4096), 64)
    assert np.max(np.abs(g.coeffs - f0.coeffs)) < 1e-8
    const = spherical.SpectralFunction(ctx, np.full(4097, qcore.qpoch(q * q, q * q, n)))
    g = spherical.inverse(const, 64)
    assert np.max(np.abs(g.coeffs - f0.coeffs)) < 1e-8


def _roundtrip_errors(ctx, f):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        g = spherical.inverse(spherical.forward(f, 4096), f.K)
    d = g.coeffs - f.coeffs
    w = lattice.radial_weights(ctx, f.K)
    l2 = math.sqrt(math.fsum(d * d * w) / math.fsum(f.coeffs**2 * w))
    return l2, float(np.max(np.abs(d)) / np.max(np.abs(f.coeffs)))


@pytest.mark.parametrize("q,n", GRID)
def test_roundtrip_weighted_l2(q, n):
    ctx = QContext(q, n)
    rng = np.random.default_rng(3)
    f = RadialFunction(ctx, rng.uniform(-1, 1, 64))
    assert _roundtrip_errors(ctx, f)[0] < 1e-12


@pytest.mark.parametrize("q,n", [(0.3, 2), (0.3, 3), (0.6, 3)])
def test_roundtrip_sup_error_tracks_weight_ratio(q, n):
    # The transform is an isometry, so |F| ~ sqrt(w_(S-1)) |f| for support S
    # and rounding F to double costs ~eps sqrt(w_(S-1)) in L2; divided by the
    # weight sqrt(w_0) of the first point this is the sup error observed.
    ctx = QContext(q, n)
    rng = np.random.default_rng(5)
    for S in (6, 10, 14):
        c = np.zeros(64)
        c[:S] = rng.uniform(-1, 1, S)
        _, sup = _roundtrip_errors(ctx, RadialFunction(ctx, c))
        w = lattice.radial_weights(ctx, S)
        pred = np.finfo(float).eps * math.sqrt(w[S - 1] / w[0])
        assert pred / 100 < sup < pred * 10


@pytest.mark.parametrize("q,n", GRID)
def test_roundtrip_sup_random_full_support(q, n):
    # Sup-norm round trip on random functions supported on all 64 lattice
    # points. Unattainable in double precision for small q (see the weight
    # ratio test above): the error is ~eps sqrt(w_63/w_0), measured 2e82 at
    # q=0.3, n=3 and 7e-8 at q=0.9, n=3.
    ctx = QContext(q, n)
    rng = np.random.default_rng(0)
    worst = max(_roundtrip_errors(ctx, RadialFunction(ctx, rng.uniform(-1, 1, 64)))[1] for _ in range(3))
    assert worst < 1e-8


@pytest.mark.parametrize("q,n", [(0.3, 1), (0.6, 2), (0.9, 3)])
def test_asc_orthogonality(q, n):
    ctx = QContext(q, n)
    G = spherical.asc_gram(10, ctx, 4096)
    d = spherical.asc_gram_diagonal(10, ctx)
    assert np.allclose(np.diag(G) / d, 1.0, rtol=1e-8, atol=0)
    off = G - np.diag(np.diag(G))
    assert np.max(np.abs(off)) < 1e-8 * np.max(d)


def test_inverse_warns_on_coarse_grid():
    ctx = QContext(0.9, 3)
    f = RadialFunction(ctx, np.r_[np.ones(30), np.zeros(34)])
    F = spherical.forward(f, 64)
    with pytest.warns(AccuracyWarning):
        spherical.inverse(F, 64)


def test_spectral_function_shape():
    ctx = QContext(0.5)
    with pytest.raises(DomainError):
        spherical.SpectralFunction(ctx, np.ones(10), 64)
    with pytest.raises(DomainError):
        spherical.SpectralFunction(ctx, np.ones(10), 64) + spherical.SpectralFunction(ctx, np.ones(65))
