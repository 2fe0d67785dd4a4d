"""Generalized spin matrices on H_d and their exact phase algebra.

The unitary basis is S_{j,k} = sum_m eta^{jm} |m><m+k| with eta = e^{2 pi i/d}
and index arithmetic mod d. Tensor products over n subsystems of dimension p
are indexed by vectors in V_{2n}(p). Products, powers and adjoints close on
the set {eta_p^a (-i)^b S_index}, so phases are carried as integer exponents
and matrices are only materialized for traces, eigenvalues and final output.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .fields import is_prime, FieldError


def eta(d: int) -> complex:
    if d == 1:
        return 1.0 + 0j
    if d == 2:
        return -1.0 + 0j
    return np.exp(2j * np.pi / d)


def spin_matrix(d: int, j: int, k: int) -> np.ndarray:
    """S_{j,k} = sum_m eta^{jm} |m><m+k| (unitary; S_{0,0} is the identity)."""
    j %= d
    k %= d
    S = np.zeros((d, d), dtype=complex)
    w = eta(d)
    for m in range(d):
        S[m, (m + k) % d] = w ** (j * m)
    return S


def alpha_factor(p: int, j: int, k: int) -> complex:
    """-i for the single awkward qubit index (1,1); 1 everywhere else.

    Needed because S_{1,1}^2 = -S_{0,0} at p=2 while S^p = S_{0,0} for odd p.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if p == 2 and (j % 2, k % 2) == (1, 1):
        return -1j
    return 1.0


def _binom2(m: int) -> int:
    # integer m(m-1)/2, evaluated before any reduction mod p
    return (m * (m - 1)) // 2


@dataclass(frozen=True)
class PhasedOperator:
    """eta_p^eta_exp * (-i)^i_exp * S_index on (C^p)^{tensor n}.

    index has length 2n, blocks (x^(j), y^(j)). i_exp is only ever nonzero
    for p = 2, where the alpha factors introduce quarter phases.
    """

    p: int
    n: int
    index: tuple
    eta_exp: int = 0
    i_exp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "index", tuple(c % self.p for c in self.index))
        object.__setattr__(self, "eta_exp", self.eta_exp % self.p)
        object.__setattr__(self, "i_exp", self.i_exp % 4)
        if len(self.index) != 2 * self.n:
            raise ValueError(f"index must have {2 * self.n} components")

    @property
    def phase(self) -> complex:
        if self.p == 2:  # keep qubit phases exact: eta_2 = -1 = (-i)^2
            return complex((-1j) ** ((2 * self.eta_exp + self.i_exp) % 4))
        return eta(self.p) ** self.eta_exp * (-1j) ** self.i_exp

    def __matmul__(self, other: "PhasedOperator") -> "PhasedOperator":
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("dimension mismatch")
        e = self.eta_exp + other.eta_exp
        for b in range(self.n):
            # per block: S_{j,k} S_{s,t} = eta^{ks} S_{j+s, k+t}
            e += self.index[2 * b + 1] * other.index[2 * b]
        idx = tuple(a + b for a, b in zip(self.index, other.index))
        return PhasedOperator(self.p, self.n, idx, e, self.i_exp + other.i_exp)

    def power(self, m: int) -> "PhasedOperator":
        if m < 0:
            raise ValueError("power must be non-negative")
        e = m * self.eta_exp
        for b in range(self.n):
            # S_{j,k}^m = eta^{m(m-1)jk/2} S_{mj,mk}; the binomial is an integer
            e += _binom2(m) * self.index[2 * b] * self.index[2 * b + 1]
        idx = tuple(m * c for c in self.index)
        return PhasedOperator(self.p, self.n, idx, e, m * self.i_exp)

    def adjoint(self) -> "PhasedOperator":
        e = -self.eta_exp
        for b in range(self.n):
            # S_{j,k}^dagger = eta^{jk} S_{-j,-k}
            e += self.index[2 * b] * self.index[2 * b + 1]
        idx = tuple(-c for c in self.index)
        return PhasedOperator(self.p, self.n, idx, e, -self.i_exp)

    def matrix(self) -> np.ndarray:
        M = np.eye(1, dtype=complex)
        for b in range(self.n):
            M = np.kron(M, spin_matrix(self.p, self.index[2 * b], self.index[2 * b + 1]))
        return self.phase * M


def phased_spin(p: int, index: tuple, with_alpha: bool = False) -> PhasedOperator:
    """Phase-free S_index, or the alpha-corrected version for p=2.

    With ``with_alpha`` every qubit block equal to (1,1) contributes one power
    of -i, so the resulting operator squares to the identity.
    """
    n = len(index) // 2
    if len(index) != 2 * n:
        raise ValueError("index must have even length")
    i_exp = 0
    if with_alpha and p == 2:
        i_exp = sum(
            1 for b in range(n) if (index[2 * b] % 2, index[2 * b + 1] % 2) == (1, 1)
        )
    return PhasedOperator(p, n, tuple(index), 0, i_exp)


def spin_product(p: int, a: tuple, b: tuple) -> PhasedOperator:
    """S_a S_b as an exact PhasedOperator; a, b in V_2(p) or V_{2n}(p)."""
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    return phased_spin(p, a) @ phased_spin(p, b)


def spin_power(p: int, idx: tuple, m: int) -> PhasedOperator:
    """S_idx^m as an exact PhasedOperator."""
    return phased_spin(p, idx).power(m)


def spin_projector(p: int, idx: tuple, r: int) -> np.ndarray:
    """Rank-1 projector P_{j,k}(r) = (1/p) sum_m (alpha_p eta^r S_{j,k})^m.

    Only defined for prime p and idx != (0,0); for composite d the same sum
    yields rank-1 operators that fail orthogonality, so it is not exposed.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    j, k = idx[0] % p, idx[1] % p
    if (j, k) == (0, 0):
        raise ValueError("projector requires a non-identity index")
    K = alpha_factor(p, j, k) * eta(p) ** (r % p) * spin_matrix(p, j, k)
    P = np.zeros((p, p), dtype=complex)
    M = np.eye(p, dtype=complex)
    for _ in range(p):
        P += M
        M = M @ K
    return P / p


def tensor_spin(p: int, iv: tuple) -> np.ndarray:
    """Kronecker product of single-subsystem spin matrices, block 0 leftmost."""
    return phased_spin(p, tuple(iv)).matrix()


def all_index_vectors(p: int, n: int) -> np.ndarray:
    """All p^{2n} vectors of V_{2n}(p), in lexicographic (big-endian) order."""
    return np.array(list(itertools.product(range(p), repeat=2 * n)), dtype=int)


def index_code(p: int, iv) -> int:
    code = 0
    for c in iv:
        code = code * p + int(c) % p
    return code


@functools.lru_cache(maxsize=32)
def spin_basis(p: int, n: int) -> "SpinBasis":
    return SpinBasis(p, n)


class SpinBasis:
    """Cached stack of all tensor spin matrices for one (p, n).

    trace_mat[i] is vec(S_i^T), so tr(rho S_i) for all i is one mat-vec.
    """

    def __init__(self, p: int, n: int):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.n = n
        self.dim = p**n
        self.vectors = all_index_vectors(p, n)
        N = len(self.vectors)
        d = self.dim
        self.stack = np.zeros((N, d, d), dtype=complex)
        for i, iv in enumerate(self.vectors):
            self.stack[i] = tensor_spin(p, tuple(iv))
        self.trace_mat = self.stack.transpose(0, 2, 1).reshape(N, d * d)

    def traces(self, A: np.ndarray) -> np.ndarray:
        """tr(A S_i) for every index vector i."""
        return self.trace_mat @ np.asarray(A, dtype=complex).ravel()

    def adjoint_traces(self, A: np.ndarray) -> np.ndarray:
        """tr(S_i^dagger A) for every index vector i."""
        return np.conj(self.trace_mat) @ np.asarray(A, dtype=complex).T.ravel()


def spin_decompose(A: np.ndarray, p: int, n: int) -> dict:
    """Coefficients s_u = tr(S_u^dagger A), so that A = (1/p^n) sum s_u S_u."""
    A = np.asarray(A, dtype=complex)
    d = p**n
    if A.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix, got {A.shape}")
    basis = spin_basis(p, n)
    coeffs = basis.adjoint_traces(A)
    return {tuple(int(c) for c in iv): coeffs[i] for i, iv in enumerate(basis.vectors)}


def spin_recompose(coeffs: dict, p: int, n: int) -> np.ndarray:
    """Inverse of spin_decompose."""
    basis = spin_basis(p, n)
    d = basis.dim
    A = np.zeros((d, d), dtype=complex)
    for i, iv in enumerate(basis.vectors):
        A += coeffs[tuple(int(c) for c in iv)] * basis.stack[i]
    return A / d
