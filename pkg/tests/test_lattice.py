import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from qball import lattice
from qball.lattice import MultiRadialFunction, RadialFunction
from qball.qcore import DomainError, QContext, qgamma


def test_jackson_constant():
    assert lattice.jackson_integral(np.ones(200), 0.25) == pytest.approx(1.0, rel=1e-15)


def test_jackson_identity_function():
    # (1-p) sum p^(2l) = 1/(1+p) = 0.8 at p = 0.25
    p = 0.25
    t = p ** np.arange(200)
    assert lattice.jackson_integral(t, p) == pytest.approx(0.8, rel=1e-15)


@pytest.mark.parametrize("a,b", [(0, 0), (1, 2), (3, 1), (2.5, 4)])
def test_jackson_beta_integral(a, b):
    p = 0.36
    t = p ** np.arange(400)
    poch = np.array([np.prod(1 - p * ti * p ** np.arange(b)) for ti in t])
    val = lattice.jackson_integral(t**a * poch, p)
    ref = qgamma(a + 1, p) * qgamma(b + 1, p) / qgamma(a + b + 2, p)
    assert val == pytest.approx(ref, rel=1e-13)


def test_jackson_tail_and_errors():
    val, tail = lattice.jackson_integral(np.ones(10), 0.5, full_output=True)
    assert tail == pytest.approx(0.5**10)
    with pytest.raises(DomainError):
        lattice.jackson_integral([1.0, math.nan], 0.5)


def test_invariant_integral_examples():
    assert lattice.invariant_integral_radial(RadialFunction.basis(QContext(0.5, 1), 0)) == pytest.approx(0.75)
    assert lattice.invariant_integral_radial(RadialFunction.basis(QContext(0.5, 2), 1)) == pytest.approx(14.0625)
    assert lattice.invariant_integral_radial(RadialFunction.zeros(QContext(0.5, 2))) == 0.0


@pytest.mark.parametrize("key,val", [((0, 0), 0.703125), ((1, 0), 11.25), ((1, 1), 2.8125)])
def test_invariant_integral_multi_examples(key, val):
    f = MultiRadialFunction.indicator(QContext(0.5, 2), key)
    assert lattice.invariant_integral_multi(f) == pytest.approx(val, rel=1e-15)


@pytest.mark.parametrize("key", [(0, 1), (1, 2, 0), (-1, -1)])
def test_multi_rejects_keys(key):
    with pytest.raises(DomainError):
        MultiRadialFunction.indicator(QContext(0.5, 2), key)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("q", [0.3, 0.6, 0.9])
def test_radial_embedding_consistency(n, q):
    ctx = QContext(q, n, K=30)
    rng = np.random.default_rng(n)
    g = RadialFunction(ctx, rng.standard_normal(30))
    lhs = lattice.invariant_integral_multi(MultiRadialFunction.from_radial(g))
    rhs = lattice.invariant_integral_radial(g)
    scale = lattice.invariant_integral_radial(RadialFunction(ctx, np.abs(g.coeffs)))
    assert abs(lhs - rhs) <= 1e-12 * scale


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("q", [0.3, 0.6, 0.9])
@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_weighted_normalization(n, q, alpha):
    ctx = QContext(q, n, K=64)
    one = MultiRadialFunction.from_callable(ctx, lambda *y: 1.0, K=24 if q < 0.9 else 40)
    val = lattice.weighted_integral(one, alpha, fill=1.0)
    assert val == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_weighted_f0(n):
    q, alpha = 0.6, 1.5
    ctx = QContext(q, n)
    f0 = MultiRadialFunction.indicator(ctx, (0,) * n)
    ref = float(oracles.qpoch(q ** (2 * alpha + 2), q * q, n))
    assert lattice.weighted_integral(f0, alpha) == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("q", [0.3, 0.9])
def test_weights_positive_and_closed(n, q):
    ctx = QContext(q, n)
    w = lattice.radial_weights(ctx)
    assert np.all(w > 0)
    k = 5
    ref = (1 - q ** (2 * n)) * q ** (-2 * n * k) * float(oracles.qpoch(q ** (2 * k + 2), q * q, n - 1))
    assert w[k] == pytest.approx(ref, rel=1e-13)


def test_inner_product_examples():
    ctx = QContext(0.5, 1)
    f0, f1 = RadialFunction.basis(ctx, 0), RadialFunction.basis(ctx, 1)
    assert lattice.l2_inner_radial(f0, f0) == pytest.approx(0.75)
    assert lattice.l2_inner_radial(f0, f1) == 0.0
    with pytest.raises(DomainError):
        lattice.l2_inner_radial(f0, RadialFunction.basis(QContext(0.6, 1), 0))


@given(c=st.lists(st.floats(-5, 5), min_size=8, max_size=20), d=st.lists(st.floats(-5, 5), min_size=8, max_size=20))
@settings(max_examples=40)
def test_inner_product_hermitian_and_linear(c, d):
    ctx = QContext(0.6, 2)
    f, g = RadialFunction(ctx, c), RadialFunction(ctx, d)
    assert lattice.l2_inner_radial(f, g) == pytest.approx(np.conj(lattice.l2_inner_radial(g, f)), rel=1e-12, abs=1e-9)
    two = lattice.l2_inner_radial(f + f, g)
    assert two == pytest.approx(2 * lattice.l2_inner_radial(f, g), rel=1e-12, abs=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ordered_sum_closed_form(n):
    for a in range(5):
        for b in range(a, 5):
            assert lattice.ordered_sum(n, a, b, 0.7) == pytest.approx(lattice.ordered_sum_closed(n, a, b, 0.7), rel=1e-13)


def test_radial_function_arithmetic():
    ctx = QContext(0.5)
    f = RadialFunction.basis(ctx, 2) + 3.0 * RadialFunction.basis(ctx, 4, K=10)
    assert f.K == ctx.K and f.coeffs[4] == 3.0
    assert (RadialFunction.basis(ctx, 2) * RadialFunction.basis(ctx, 3)).coeffs.sum() == 0.0
    with pytest.raises(DomainError):
        RadialFunction(ctx, [1.0, math.inf])
    with pytest.raises(DomainError):
        RadialFunction.basis(ctx, 0) + RadialFunction.basis(QContext(0.5, 2), 0)
