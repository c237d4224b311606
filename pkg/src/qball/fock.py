"""Truncated matrix model of the quantum polynomial algebra.

Operators act on the span of monomials z^m = z_n^(m_n) ... z_1^(m_1) with
|m| <= N_deg. Creation and annihilation matrices are built from their
action on monomials; alpha = inf gives the Fock representation and finite
alpha the weighted Bergman space adjoint. Every product carries a
``safe_degree``: columns of degree <= safe_degree are exactly those of the
untruncated operator, and residuals are only measured there.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp

from .qcore import DomainError

__all__ = [
    "MonomialBasis",
    "FockOperator",
    "build_creation",
    "build_annihilation",
    "identity",
    "y_operators",
    "y_spectrum_indices",
    "relation_residuals",
    "normal_order_residual",
    "gram_from_matrices",
    "adjoint_residual",
]


class MonomialBasis:
    """Multi-indices with |m| <= N_deg, graded by degree then lexicographic."""

    def __init__(self, n: int, N_deg: int):
        if n < 1:
            raise DomainError("n must be a positive integer")
        if N_deg < 0:
            raise DomainError("degree cutoff must be nonnegative")
        self.n = n
        self.N_deg = N_deg
        mons = []
        for d in range(N_deg + 1):
            mons.extend(sorted(_compositions(d, n)))
        self.monomials = mons
        self.index = {m: i for i, m in enumerate(mons)}
        self.degrees = np.array([sum(m) for m in mons])

    def __len__(self):
        return len(self.monomials)

    def __repr__(self):
        return f"MonomialBasis(n={self.n}, N_deg={self.N_deg}, dim={len(self)})"


def _compositions(d, n):
    if n == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


class FockOperator:
    """Sparse matrix on a MonomialBasis with a degree shift and a safe degree."""

    def __init__(self, basis: MonomialBasis, matrix, safe_degree: int, shift: int | None):
        self.basis = basis
        self.matrix = sp.csr_matrix(matrix, dtype=complex)
        self.safe_degree = safe_degree
        self.shift = shift

    def _check(self, other):
        if not isinstance(other, FockOperator) or other.basis is not self.basis:
            raise DomainError("operators live on different bases")

    def __matmul__(self, other):
        self._check(other)
        safe = min(other.safe_degree, self.safe_degree - (other.shift or 0))
        shift = None if self.shift is None or other.shift is None else self.shift + other.shift
        return FockOperator(self.basis, self.matrix @ other.matrix, safe, shift)

    def _combine(self, other, sign):
        if isinstance(other, (int, float, complex)):
            other = other * identity(self.basis)
        self._check(other)
        shift = self.shift if self.shift == other.shift else None
        return FockOperator(self.basis, self.matrix + sign * other.matrix,
                            min(self.safe_degree, other.safe_degree), shift)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-1) * self + other

    def __mul__(self, c):
        return FockOperator(self.basis, c * self.matrix, self.safe_degree, self.shift)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = identity(self.basis)
        for _ in range(k):
            out = self @ out
        return out

    def safe_part(self):
        """Matrix restricted to columns of degree <= safe_degree."""
        keep = np.flatnonzero(self.basis.degrees <= self.safe_degree)
        return self.matrix[:, keep]

    def max_entry(self) -> float:
        """Largest |entry| on the safe columns (0 if there are none)."""
        m = self.safe_part()
        return float(abs(m).max()) if m.nnz else 0.0

    def diagonal(self):
        return self.matrix.diagonal()

    def __repr__(self):
        return f"FockOperator(dim={len(self.basis)}, safe={self.safe_degree}, shift={self.shift})"


def identity(basis: MonomialBasis) -> FockOperator:
    return FockOperator(basis, sp.identity(len(basis), format="csr"), basis.N_deg, 0)


def _check_index(i, basis):
    if not 1 <= i <= basis.n:
        raise DomainError(f"generator index {i} outside 1..{basis.n}")


def _check_alpha(alpha):
    if not (alpha > 0):
        raise DomainError("alpha must be positive or inf")


def build_creation(i: int, alpha, basis: MonomialBasis, q: float) -> FockOperator:
    """Left multiplication by z_i: z^m -> q^(m_(i+1)+...+m_n) z^(m+e_i).

    The formula does not depend on alpha.
    """
    _check_index(i, basis)
    _check_alpha(alpha)
    rows, cols, vals = [], [], []
    for col, m in enumerate(basis.monomials):
        if sum(m) == basis.N_deg:
            continue
        target = m[: i - 1] + (m[i - 1] + 1,) + m[i:]
        rows.append(basis.index[target])
        cols.append(col)
        vals.append(q ** sum(m[i:]))
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(len(basis),) * 2)
    return FockOperator(basis, mat, basis.N_deg - 1, 1)


def build_annihilation(i: int, alpha, basis: MonomialBasis, q: float) -> FockOperator:
    """Adjoint of z_i for the Fock (alpha = inf) or weighted Bergman scalar product.

    z^m -> q^(m_(i+1)+...+m_n) (1 - q^(2 m_i)) / (1 - q^(2|m|+2n+2 alpha)) z^(m-e_i),
    the denominator being 1 for alpha = inf.
    """
    _check_index(i, basis)
    _check_alpha(alpha)
    n = basis.n
    rows, cols, vals = [], [], []
    for col, m in enumerate(basis.monomials):
        if m[i - 1] == 0:
            continue
        target = m[: i - 1] + (m[i - 1] - 1,) + m[i:]
        v = q ** sum(m[i:]) * (1.0 - q ** (2 * m[i - 1]))
        if alpha != math.inf:
            v /= 1.0 - q ** (2 * sum(m) + 2 * n + 2 * alpha)
        rows.append(basis.index[target])
        cols.append(col)
        vals.append(v)
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(len(basis),) * 2)
    return FockOperator(basis, mat, basis.N_deg - 1, -1)


def _generators(alpha, basis, q):
    Z = [build_creation(i, alpha, basis, q) for i in range(1, basis.n + 1)]
    Zs = [build_annihilation(i, alpha, basis, q) for i in range(1, basis.n + 1)]
    return Z, Zs


def y_operators(basis: MonomialBasis, q: float, alpha=math.inf):
    """y_j = 1 - sum_(k>=j) z_k z_k^*, j = 1..n."""
    Z, Zs = _generators(alpha, basis, q)
    ys = []
    for j in range(basis.n):
        acc = identity(basis)
        for k in range(j, basis.n):
            acc = acc - Z[k] @ Zs[k]
        ys.append(acc)
    return ys


def y_spectrum_indices(m) -> tuple:
    """k_j = m_j + ... + m_n, the simplex point carried by z^m e_0."""
    return tuple(int(sum(m[j:])) for j in range(len(m)))


def _relation_terms(alpha, basis, q):
    """LHS - RHS of the three generator relations in the weighted form.

    With s = q^(2 alpha + 2n) = 0 these are the defining relations.
    """
    n = basis.n
    Z, Zs = _generators(alpha, basis, q)
    I = identity(basis)
    s = 0.0 if alpha == math.inf else q ** (2 * alpha + 2 * n)
    zzs = [Z[k] @ Zs[k] for k in range(n)]
    total = I * 0.0
    for t in zzs:
        total = total + t
    corr = q * q * I + (1 - q * q) * total

    out = {"zz": 0.0, "z*z": 0.0, "z*z1": 0.0}
    for i in range(n):
        for j in range(n):
            if i < j:
                r = Z[i] @ Z[j] - q * (Z[j] @ Z[i])
                out["zz"] = max(out["zz"], r.max_entry())
            if i != j:
                a = Zs[i] @ Z[j]
                b = Z[j] @ Zs[i]
                r = a - q * b - s * (a @ corr - q * b)
                out["z*z"] = max(out["z*z"], r.max_entry())
    for j in range(n):
        tail = I * 0.0
        for k in range(j + 1, n):
            tail = tail + zzs[k]
        head = I * 0.0
        for k in range(j + 1):
            head = head + zzs[k]
        a = Zs[j] @ Z[j]
        r = a - q * q * zzs[j] - (1 - q * q) * (I - tail)
        r = r - s * (a @ corr - q * q * zzs[j] - (1 - q * q) * head)
        out["z*z1"] = max(out["z*z1"], r.max_entry())
    return out


def relation_residuals(alpha, basis: MonomialBasis, q: float) -> dict:
    """Max residual of every algebra relation on safe degrees.

    For alpha = inf this covers the defining relations, the y_j shift
    relations, diagonality and pairwise commutation of the y_j, their joint
    spectrum, and adjointness under the Fock Gram matrix. For finite alpha
    the weighted commutation relations and Bergman adjointness are checked.
    """
    if basis.N_deg < 3:
        raise DomainError("relation checks need N_deg >= 3")
    out = _relation_terms(alpha, basis, q)
    out["adjoint"] = adjoint_residual(alpha, basis, q)
    if alpha != math.inf:
        return out
    n = basis.n
    Z, Zs = _generators(alpha, basis, q)
    ys = y_operators(basis, q)
    yi = 0.0
    for i in range(n):
        for j in range(n):
            # y_j contains z_i z_i^* exactly when j <= i; z_i commutes with z_k z_k^*, k != i
            f = q**-2 if j <= i else 1.0
            g = q**2 if j <= i else 1.0
            yi = max(yi, (Z[i] @ ys[j] - f * (ys[j] @ Z[i])).max_entry())
            yi = max(yi, (Zs[i] @ ys[j] - g * (ys[j] @ Zs[i])).max_entry())
    out["yi"] = yi
    offd = 0.0
    comm = 0.0
    spec = 0.0
    for j, y in enumerate(ys):
        d = sp.diags(y.diagonal())
        offd = max(offd, FockOperator(basis, y.matrix - d, y.safe_degree, 0).max_entry())
        for k in range(j + 1, n):
            comm = max(comm, (y @ ys[k] - ys[k] @ y).max_entry())
        diag = y.diagonal().real
        for pos, m in enumerate(basis.monomials):
            if basis.degrees[pos] > y.safe_degree:
                continue
            v = diag[pos]
            # nearest lattice point q^(2k)
            k = max(0, round(math.log(max(v, 1e-300)) / (2 * math.log(q))))
            spec = max(spec, abs(v - q ** (2 * k)))
    out["y_diag"] = offd
    out["y_commute"] = comm
    out["y_spectrum"] = spec
    return out


def _monomial_word(m, Z, Zs, basis):
    """z^(*m) z^m = z_1^(*m_1) ... z_n^(*m_n) z_n^(m_n) ... z_1^(m_1)."""
    op = identity(basis)
    for i in range(basis.n):
        op = (Z[i] ** m[i]) @ op
    for i in reversed(range(basis.n)):
        op = (Zs[i] ** m[i]) @ op
    return op


def normal_order_residual(m, basis: MonomialBasis, q: float) -> float:
    """Compare the Fock matrix of z^(*m) z^m with the y-product formula on the joint spectrum.

    The right-hand side is prod_(j<n) prod_(i<m_j) (y_(j+1) - q^(2+2i) y_j)
    times (q^2 y_n; q^2)_(m_n), evaluated at the diagonal of the y_j.
    """
    m = tuple(int(v) for v in m)
    if len(m) != basis.n:
        raise DomainError("multi-index length must equal n")
    if 2 * sum(m) > basis.N_deg:
        raise DomainError(f"degree overflow: need 2|m| <= N_deg = {basis.N_deg}")
    Z, Zs = _generators(math.inf, basis, q)
    lhs = _monomial_word(m, Z, Zs, basis)
    y = np.array([yj.diagonal().real for yj in y_operators(basis, q)])
    n = basis.n
    rhs = np.ones(len(basis))
    for j in range(n - 1):
        for i in range(m[j]):
            rhs = rhs * (y[j + 1] - q ** (2 + 2 * i) * y[j])
    for i in range(m[n - 1]):
        rhs = rhs * (1.0 - q ** (2 + 2 * i) * y[n - 1])
    r = lhs - FockOperator(basis, sp.diags(rhs), basis.N_deg, 0)
    return r.max_entry()


def gram_from_matrices(alpha, basis: MonomialBasis, q: float) -> np.ndarray:
    """Squared norms of monomials forced by adjointness, with ||e_0|| = 1.

    G(m + e_i) = G(m) Z*_i[m, m+e_i] / Z_i[m+e_i, m], walking from the
    lowest nonzero index.
    """
    Z, Zs = _generators(alpha, basis, q)
    Zc = [z.matrix.tocsc() for z in Z]
    Zsc = [z.matrix.tocsc() for z in Zs]
    G = np.zeros(len(basis))
    G[0] = 1.0
    for pos, m in enumerate(basis.monomials):
        if pos == 0:
            continue
        i = next(j for j, v in enumerate(m) if v)
        prev = m[:i] + (m[i] - 1,) + m[i + 1:]
        pp = basis.index[prev]
        G[pos] = G[pp] * Zsc[i][pp, pos].real / Zc[i][pos, pp].real
    return G


def adjoint_residual(alpha, basis: MonomialBasis, q: float) -> float:
    """max |G Z*_i - Z_i^H G| over i on safe degrees, relative to the Gram scale."""
    G = gram_from_matrices(alpha, basis, q)
    Gm = sp.diags(G)
    Z, Zs = _generators(alpha, basis, q)
    worst = 0.0
    for z, zs in zip(Z, Zs):
        r = FockOperator(basis, Gm @ zs.matrix - z.matrix.getH() @ Gm, z.safe_degree, None)
        worst = max(worst, r.max_entry())
    return worst / float(G.max())
