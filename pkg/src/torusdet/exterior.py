"""Finite-dimensional fiber calculus for (0,q)-form bundles on a complex fiber.

Beltrami matrices phi (maps from the (1,0)- to the (0,1)-cotangent fiber,
entries phi[i, l] meaning dz^i |-> sum_l phi[i,l] dzbar^l), the wedge
operators they induce on exterior powers, the Hodge star in a metric
orthonormal coframe, and the trace identities these satisfy.

Multi-index bases are always strictly increasing index tuples in
lexicographic order; every sign is the parity of the sorting permutation.
The orthonormal coframe used for metric computations is the deterministic
Gram factor of g: omega = S dz with g = S^H S and S upper triangular.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .report import VerificationReport


@dataclass
class BeltramiMatrix:
    """Constant Beltrami differential as an n x n complex matrix."""

    entries: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        M = np.asarray(self.entries, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise DomainError("Beltrami matrix must be square")
        self.entries = M
        self.n = M.shape[0]
        A = np.block([[np.eye(self.n), M], [M.conj(), np.eye(self.n)]])
        if abs(np.linalg.det(A)) < 1e-12:
            raise DomainError("det(A_phi) vanishes; complex structure degenerates")

    def lowered(self, g):
        """phi with the vector index lowered by g (entries sum_j g_{j k} phi[j, l])."""
        G = np.asarray(g, dtype=complex)
        return G.T @ self.entries

    def is_harmonic(self, g, tol=1e-9):
        """Whether the matrix is symmetric in a g-orthonormal coframe."""
        S = orthonormal_coframe(g)
        M = frame_transform(self.entries, S)
        return float(np.max(np.abs(M - M.T))) <= tol


def _as_matrix(phi):
    if isinstance(phi, BeltramiMatrix):
        return phi.entries
    return np.asarray(phi, dtype=complex)


class FiberBasis:
    """Lexicographically ordered strictly increasing q-multi-indices."""

    def __init__(self, n, q):
        if not 0 <= q <= n:
            raise DomainError(f"q={q} out of range for n={n}")
        self.n = n
        self.q = q
        self.index_list = list(itertools.combinations(range(n), q))
        self._rank = {J: r for r, J in enumerate(self.index_list)}

    def __len__(self):
        return len(self.index_list)

    def rank(self, J):
        return self._rank[tuple(J)]


@dataclass
class FiberOperator:
    matrix: np.ndarray
    domain: str
    codomain: str

    @property
    def shape(self):
        return self.matrix.shape


def sort_sign(seq):
    """(sign, sorted tuple) of a sequence with distinct entries, else (0, None)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    sign = 1
    arr = seq[:]
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)


def orthonormal_coframe(g):
    """Upper-triangular S with g = S^H S, so omega = S dz is orthonormal."""
    G = np.asarray(g, dtype=complex)
    if not np.allclose(G, G.conj().T, atol=1e-12):
        raise DomainError("metric must be Hermitian")
    try:
        L = np.linalg.cholesky(G)
    except np.linalg.LinAlgError as exc:
        raise DomainError("metric must be positive definite") from exc
    return L.conj().T


def frame_transform(phi, S):
    """Beltrami matrix rewritten in the coframe omega = S dz (and conj on the right)."""
    M = _as_matrix(phi)
    return S @ M @ np.linalg.inv(S.conj())


def wp_pointwise_trace(phi1, phi2, g):
    """Metric-contracted pointwise trace of phi1 against phi2.

    Equals the Frobenius pairing of the two matrices in a g-orthonormal
    coframe; for g = identity it is sum_(k,l) phi1[k,l] conj(phi2[k,l]).
    """
    P1, P2 = _as_matrix(phi1), _as_matrix(phi2)
    if P1.shape != P2.shape:
        raise DomainError("dimension mismatch")
    G = np.asarray(g, dtype=complex)
    Ginv = np.linalg.inv(G)
    return complex(np.trace(P1.T @ G.conj() @ P2.conj() @ Ginv))


def compose_beltrami(phi, psi, g):
    """Endomorphism (phi o psibar) of the antiholomorphic cotangent fiber.

    Indices are raised and lowered with g; its trace is the pointwise
    Weil-Petersson pairing, and for the identity metric the matrix reduces
    to phi^T conj(psi)^T-free plain product with conjugation on psi.
    """
    P, Q = _as_matrix(phi), _as_matrix(psi)
    if P.shape != Q.shape:
        raise DomainError("dimension mismatch")
    G = np.asarray(g, dtype=complex)
    Ginv = np.linalg.inv(G)
    E = P.T @ G.conj() @ Q.conj() @ Ginv
    n = P.shape[0]
    return FiberOperator(E, domain=f"(0,1) fiber dim {n}", codomain=f"(0,1) fiber dim {n}")


def endo_extend(B, q, n=None):
    """Derivation-style extension of a 1-form endomorphism to q-forms.

    Acts on dzbar^J by replacing each slot through B and resorting with
    signs; implemented as the contraction sum_(l,j) B[l,j] dzbar^l ^ (i_j w).
    """
    M = B.matrix if isinstance(B, FiberOperator) else np.asarray(B, dtype=complex)
    if n is None:
        n = M.shape[0]
    if not 1 <= q <= n:
        raise DomainError(f"q={q} out of range for n={n}")
    basis = FiberBasis(n, q)
    dim = len(basis)
    out = np.zeros((dim, dim), dtype=complex)
    for cK, K in enumerate(basis.index_list):
        for a, j in enumerate(K):
            for l in range(n):
                if M[l, j] == 0:
                    continue
                target = list(K)
                target[a] = l
                sign, sorted_t = sort_sign(target)
                if sign == 0:
                    continue
                out[basis.rank(sorted_t), cK] += sign * M[l, j]
    return FiberOperator(out, domain=f"(0,{q})", codomain=f"(0,{q})")


def extend_trace(B, q, n=None):
    """Trace of endo_extend(B, q); equals C(n-1, q-1) * tr(B)."""
    return complex(np.trace(endo_extend(B, q, n).matrix))


def f_operator(phi, q):
    """Wedge operator F(q, phi) from the (1, q-1)-fiber to the (0, q)-fiber.

    Domain basis is dz^i (x) dzbar^K with i major and K lexicographic; the
    action is dz^i (x) a |-> phi(dz^i) ^ a.
    """
    P = _as_matrix(phi)
    n = P.shape[0]
    if not 1 <= q <= n:
        raise DomainError(f"q={q} out of range for n={n}")
    dom = FiberBasis(n, q - 1)
    cod = FiberBasis(n, q)
    out = np.zeros((len(cod), n * len(dom)), dtype=complex)
    for i in range(n):
        for cK, K in enumerate(dom.index_list):
            col = i * len(dom) + cK
            for l in range(n):
                if P[i, l] == 0:
                    continue
                sign, sorted_t = sort_sign((l,) + K)
                if sign == 0:
                    continue
                out[cod.rank(sorted_t), col] += sign * P[i, l]
    return FiberOperator(out, domain=f"(1,{q-1})", codomain=f"(0,{q})")


def beltrami_insertion(psi, q, g):
    """g-adjoint insertion of psi, from the (0, q)- to the (1, q-1)-fiber.

    Sends dzbar^J to sum_a (-1)^(a-1) psi*(dzbar^(j_a)) (x) dzbar^(J \\ j_a),
    where psi* is the metric adjoint of psi.  Composing f_operator(phi, q)
    after this insertion reproduces endo_extend(compose_beltrami(phi, psi, g), q).
    """
    Q = _as_matrix(psi)
    n = Q.shape[0]
    if not 1 <= q <= n:
        raise DomainError(f"q={q} out of range for n={n}")
    G = np.asarray(g, dtype=complex)
    W = G.conj() @ Q.conj() @ np.linalg.inv(G)  # matrix of psi*: dzbar^m -> sum_k W[k,m] dz^k
    dom = FiberBasis(n, q)
    cod = FiberBasis(n, q - 1)
    out = np.zeros((n * len(cod), len(dom)), dtype=complex)
    for cJ, J in enumerate(dom.index_list):
        for a, j in enumerate(J):
            rest = J[:a] + J[a + 1 :]
            sgn = (-1) ** a
            for k in range(n):
                out[k * len(cod) + cod.rank(rest), cJ] += sgn * W[k, j]
    return FiberOperator(out, domain=f"(0,{q})", codomain=f"(1,{q-1})")


class HodgeStarFiber:
    """Conjugate-linear star from the (0,q)- to the (0,n-q)-fiber.

    In the g-orthonormal coframe, star(omegabar^K) = s_K omegabar^(K^c) with
    s_K the parity of (K, K^c); coefficients are conjugated.  Application to
    coordinate coefficients routes through the q-th compound of the frame
    matrix.  star o star = (-1)^(q (n-q)) id.
    """

    def __init__(self, g, q):
        G = np.asarray(g, dtype=complex)
        n = G.shape[0]
        if not 0 <= q <= n:
            raise DomainError(f"q={q} out of range for n={n}")
        self.n, self.q = n, q
        self.S = orthonormal_coframe(G)
        self.basis_in = FiberBasis(n, q)
        self.basis_out = FiberBasis(n, n - q)
        # omegabar^K = sum_U compound(conj(S))[K,U] dzbar^U; with coefficient
        # vectors this reads u = C_q(conj S)^T v, so v = solve(.., u)
        self._coord_to_on = _compound(self.S.conj(), q).T
        self._on_to_coord_out = _compound(self.S.conj(), n - q).T
        sign_perm = np.zeros((len(self.basis_out), len(self.basis_in)))
        for cK, K in enumerate(self.basis_in.index_list):
            comp = tuple(sorted(set(range(n)) - set(K)))
            sgn, _ = sort_sign(K + comp)
            sign_perm[self.basis_out.rank(comp), cK] = sgn
        self._sign_perm = sign_perm
        self.square_sign = (-1) ** (q * (n - q))

    def apply(self, coeffs):
        """Apply the star to a coefficient vector in the dzbar^J basis."""
        u = np.asarray(coeffs, dtype=complex)
        v = np.linalg.solve(self._coord_to_on, u)  # omegabar coefficients
        w = self._sign_perm @ v.conj()
        return self._on_to_coord_out @ w

    @property
    def matrix(self):
        """Matrix M with star(alpha) = M conj(u) for dzbar-coefficients u."""
        dim = len(self.basis_in)
        cols = [self.apply(np.eye(dim, dtype=complex)[:, j]) for j in range(dim)]
        return np.stack(cols, axis=1)


def _compound(M, q):
    """q-th compound matrix: entries det M[rows=J, cols=K] over q-index sets."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    basis = FiberBasis(n, q)
    dim = len(basis)
    out = np.zeros((dim, dim), dtype=complex)
    for rJ, J in enumerate(basis.index_list):
        for rK, K in enumerate(basis.index_list):
            out[rJ, rK] = np.linalg.det(M[np.ix_(J, K)]) if q > 0 else 1.0
    return out


def hodge_star_fiber(g, q):
    """Star operator on the (0,q)-fiber for the metric g (see HodgeStarFiber)."""
    return HodgeStarFiber(g, q)


def fiber_inner_product(g, q):
    """Hermitian Gram matrix of the dzbar^J basis of the (0,q)-fiber."""
    G = np.asarray(g, dtype=complex)
    n = G.shape[0]
    h_anti = np.linalg.inv(G).conj()  # <dzbar^j, dzbar^k>
    basis = FiberBasis(n, q)
    dim = len(basis)
    out = np.zeros((dim, dim), dtype=complex)
    for rJ, J in enumerate(basis.index_list):
        for rK, K in enumerate(basis.index_list):
            out[rJ, rK] = np.linalg.det(h_anti[np.ix_(J, K)]) if q > 0 else 1.0
    return out


def izs_matrix_check(phi, psi, g, tolerance=1e-11):
    """Fiberwise matrix equality behind the star-conjugated extension.

    In a g-orthonormal coframe, the matrix of psibar o phi on the
    holomorphic fiber (indices read in the upper/lower convention, i.e.
    transposed) must equal the matrix of the operator defined on the
    (0, n-1)-fiber by transporting phi o psibar through the star,
    lambda_k = star(omegabar^k) |-> star((phi o psibar)(omegabar^k)).
    The equality requires both matrices symmetric in the orthonormal
    coframe (harmonicity); non-symmetric input is reported as a distinct
    failure class and generically breaks the identity.
    """
    S = orthonormal_coframe(g)
    P = frame_transform(phi, S)
    Q = frame_transform(psi, S)
    n = P.shape[0]
    sym_dev = max(
        float(np.max(np.abs(P - P.T))),
        float(np.max(np.abs(Q - Q.T))),
    )
    # route 1: psibar o phi on the holomorphic fiber (apply phi, then psibar)
    holo = np.zeros((n, n), dtype=complex)
    for k in range(n):
        mid = P[k, :]  # phi(omega^k) = sum_l P[k,l] omegabar^l
        for l in range(n):
            holo[:, k] += mid[l] * Q[l, :].conj()  # psibar(omegabar^l) = sum_m conj(Q[l,m]) omega^m
    # route 2: phi o psibar on the antiholomorphic fiber (apply psibar, then phi),
    # transported through the star with linear coefficient passage
    anti = np.zeros((n, n), dtype=complex)
    for k in range(n):
        mid = Q[k, :].conj()  # psibar(omegabar^k) = sum_j conj(Q[k,j]) omega^j
        for j in range(n):
            anti[:, k] += mid[j] * P[j, :]
    resid = float(np.max(np.abs(holo.T - anti)))
    status = ""
    notes = f"symmetry deviation {sym_dev:.3e}"
    if sym_dev > 1e-9:
        status = "fail"
        notes = "symmetry precondition violated; " + notes
    return VerificationReport(
        "exterior.izs_fiber_matrix",
        f"n={n}",
        resid,
        tolerance,
        status=status,
        notes=notes,
    )
