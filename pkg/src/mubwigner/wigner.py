"""Characteristic functions and discrete Wigner functions on V_{2n}(p).

A convention fixes, for every index vector w, an exact unit phase phi(w) such
that the characteristic kernel is G(w) = phi(w) S_w with G(-w) = G(w)^dagger.
For the generator-route conventions the kernel is the phased product of
generator powers prod_r (eta^{r_r(alpha)} T_alpha,r)^{b_r} where w decomposes
as sum_r b_r g_r(alpha) (the index equation) and T are the alpha-corrected
generator operators. Conventions:

  plain      no shifts (r = 0 everywhere); the n=1 textbook choice
  separable  odd p; shifts r_r(alpha) = -2^{-1} sum_{j != r} y_j^{(r)}(alpha)
             and -2^{-1} on the vertical class, which make the kernel factor
             blockwise so Wigner functions of product states factor
  p2-left    p=2, n=2; shifts (0, a_0): the product law holds with the second
             factor transposed
  p2-right   p=2, n=2; shifts (a_1, 0): transpose lands on the first factor
  dynamics   closed form eta^{2^{-1}<w,w>} S_w (odd p) or (-i)^{<w,w>} S_w
             (p=2), the phase family used for Hamiltonian evolution

Wigner tables are the symplectic Fourier transform of characteristic tables,
W(v) = p^{-2n} sum_w eta^{v o w} chi(w); marginals over shifted isotropic
subspaces reproduce the MUB outcome probabilities in every convention.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .fields import FieldError, is_prime, prime_inverse
from .geometry import PhaseGeometry, phase_geometry
from .mub import mub_projector
from .spins import PhasedOperator, eta, index_code, phased_spin, spin_basis, spin_decompose

CONVENTIONS = ("plain", "separable", "p2-left", "p2-right", "dynamics")
ZERO_TOL = 1e-10


class ConventionError(ValueError):
    """Table built in one phase convention used where another is required."""


def default_convention(p: int, n: int) -> str:
    if n == 1:
        return "plain"
    if p % 2 == 1:
        return "separable"
    if n == 2:
        return "p2-left"
    return "plain"


def _validate_convention(p: int, n: int, convention: str) -> None:
    if convention not in CONVENTIONS:
        raise ConventionError(f"unknown convention {convention!r}")
    if convention == "separable" and p == 2:
        raise ConventionError("the separable convention needs an odd prime")
    if convention in ("p2-left", "p2-right") and (p, n) != (2, 2):
        raise ConventionError(f"{convention} is only defined for p=2, n=2")


@functools.lru_cache(maxsize=32)
def wigner_kernel(p: int, n: int, convention: str) -> "WignerKernel":
    return WignerKernel(p, n, convention)


class WignerKernel:
    """Cached phase tables, Fourier matrix and A operators for one convention."""

    def __init__(self, p: int, n: int, convention: str):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        _validate_convention(p, n, convention)
        self.p = p
        self.n = n
        self.convention = convention
        self.dim = p**n
        self.geom: PhaseGeometry = phase_geometry(p, n)
        self.basis = spin_basis(p, n)
        self.vectors = self.basis.vectors  # (N, 2n) in code order
        self.N = len(self.vectors)
        self.shifts = self._shift_table()
        self.ops = self._kernel_ops()
        self.phases = np.array([op.phase for op in self.ops])
        self._chi_mat = self.phases[:, None] * self.basis.trace_mat
        X = self.vectors[:, 0::2]
        Y = self.vectors[:, 1::2]
        self._vsym = (Y @ X.T - X @ Y.T) % p  # [i, j] = w_i o w_j
        self.ft = eta(p) ** self._vsym / self.N
        self._neg_perm = np.array(
            [index_code(p, (-self.vectors[i]) % p) for i in range(self.N)]
        )
        self._gen_outcomes: dict[int, np.ndarray] = {}
        self._a_stack: Optional[np.ndarray] = None

    # -- construction ---------------------------------------------------------

    def _shift_table(self) -> Optional[list[tuple[int, ...]]]:
        p, n = self.p, self.n
        geom = self.geom
        conv = self.convention
        if conv == "plain":
            return [(0,) * n for _ in range(geom.num_classes)]
        if conv == "separable":
            inv2 = prime_inverse(2, p)
            out = []
            for alpha in range(geom.dim):
                y = geom.y_table[alpha]
                out.append(
                    tuple((-inv2 * sum(y[j][r] for j in range(n) if j != r)) % p for r in range(n))
                )
            out.append(((-inv2) % p,) * n)
            return out
        if conv in ("p2-left", "p2-right"):
            out = []
            for alpha in range(geom.dim):
                a0, a1 = geom.field.from_int(alpha).coeffs
                out.append((0, a0) if conv == "p2-left" else (a1, 0))
            out.append((0, 0))
            return out
        if conv == "dynamics":
            if p == 2:
                # the closed-form kernel is not a generator-power product for
                # n >= 2, so no shift table exists there
                return [(0,) * n for _ in range(geom.num_classes)] if n == 1 else None
            inv2 = prime_inverse(2, p)
            out = []
            for alpha in range(geom.dim):
                y = geom.y_table[alpha]
                out.append(tuple((inv2 * y[r][r]) % p for r in range(n)))
            out.append((0,) * n)
            return out
        raise ConventionError(conv)

    def _kernel_ops(self) -> list[PhasedOperator]:
        p, n = self.p, self.n
        ops: list[Optional[PhasedOperator]] = [None] * self.N
        if self.convention == "dynamics":
            inv2 = prime_inverse(2, p) if p % 2 else 0
            for i, w in enumerate(self.vectors):
                ww = int(sum(w[0::2] * w[1::2]))
                if p == 2:
                    op = PhasedOperator(p, n, tuple(w), 0, ww)
                else:
                    op = PhasedOperator(p, n, tuple(w), inv2 * ww, 0)
                ops[i] = op
            return ops  # type: ignore[return-value]
        assert self.shifts is not None
        identity = PhasedOperator(p, n, (0,) * (2 * n))
        for alpha in range(self.geom.num_classes):
            gens = [phased_spin(p, g, with_alpha=True) for g in self.geom.generator_sets[alpha].gens]
            shifts = self.shifts[alpha]
            for b in itertools.product(range(p), repeat=n):
                acc = identity
                phase = 0
                for r, br in enumerate(b):
                    acc = acc @ gens[r].power(br)
                    phase += shifts[r] * br
                op = PhasedOperator(p, n, acc.index, acc.eta_exp + phase, acc.i_exp)
                code = index_code(p, op.index)
                if ops[code] is None:
                    ops[code] = op
        assert all(op is not None for op in ops)
        return ops  # type: ignore[return-value]

    # -- derived tables ---------------------------------------------------------

    def gen_outcome_codes(self, alpha: int) -> np.ndarray:
        """Per index vector u, the code of the shifted outcome vector
        (u o g_j(alpha) + r_j(alpha))_j; constant on translates of the
        alpha subspace."""
        if self.shifts is None:
            raise ConventionError(
                "no generator-route shifts exist for this convention"
            )
        if not 0 <= alpha <= self.geom.dim:
            raise ValueError(f"class label {alpha} out of range")
        if alpha not in self._gen_outcomes:
            gens = np.array(self.geom.generator_sets[alpha].gens)
            X, Y = self.vectors[:, 0::2], self.vectors[:, 1::2]
            gX, gY = gens[:, 0::2], gens[:, 1::2]
            symp = (Y @ gX.T - X @ gY.T) % self.p  # [u, j] = u o g_j(alpha)
            shifted = (symp + np.array(self.shifts[alpha])[None, :]) % self.p
            codes = np.zeros(self.N, dtype=int)
            for j in range(self.n):
                codes += shifted[:, j] * self.p**j
            self._gen_outcomes[alpha] = codes
        return self._gen_outcomes[alpha]

    def a_stack(self) -> np.ndarray:
        """All A operators: A(u) = (1/p^n)(-I + sum_alpha P_alpha(outcomes))."""
        if self._a_stack is None:
            if self.shifts is None:
                raise ConventionError(
                    "A operators need a generator-route convention"
                )
            d, p, n = self.dim, self.p, self.n
            stack = np.zeros((self.N, d, d), dtype=complex)
            stack -= np.eye(d)
            for alpha in range(self.geom.num_classes):
                projs = np.zeros((self.dim, d, d), dtype=complex)
                for s in itertools.product(range(p), repeat=n):
                    code = sum(sj * p**j for j, sj in enumerate(s))
                    projs[code] = mub_projector(self.geom, alpha, s).matrix
                stack += projs[self.gen_outcome_codes(alpha)]
            self._a_stack = stack / d
        return self._a_stack

    def char_values(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.dim, self.dim):
            raise ValueError(f"expected a {self.dim}x{self.dim} matrix, got {rho.shape}")
        return self._chi_mat @ rho.ravel()

    def code(self, w: Sequence[int]) -> int:
        return index_code(self.p, w)


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


@dataclass
class CharTable:
    """chi(w) = tr[rho G(w)] on V_{2n}(p), in index-code order."""

    p: int
    n: int
    convention: str
    values: np.ndarray

    def value(self, w: Sequence[int]) -> complex:
        return complex(self.values[index_code(self.p, w)])

    @property
    def kernel(self) -> WignerKernel:
        return wigner_kernel(self.p, self.n, self.convention)


@dataclass
class WignerTable:
    """W(v) on V_{2n}(p) in index-code order; real for Hermitian inputs."""

    p: int
    n: int
    convention: str
    values: np.ndarray

    def value(self, v: Sequence[int]) -> complex:
        return complex(self.values[index_code(self.p, v)])

    @property
    def kernel(self) -> WignerKernel:
        return wigner_kernel(self.p, self.n, self.convention)

    def real_values(self, tol: float = ZERO_TOL) -> np.ndarray:
        if np.abs(self.values.imag).max() > tol:
            raise ValueError("table has non-negligible imaginary part")
        return self.values.real


def char_function(
    rho: np.ndarray, p: int, n: int, convention: Optional[str] = None
) -> CharTable:
    """Characteristic table of any square matrix of size p^n (Hermiticity
    is not required; operators get operator-valued quasi-distributions)."""
    convention = convention or default_convention(p, n)
    k = wigner_kernel(p, n, convention)
    return CharTable(p, n, convention, k.char_values(rho))


def wigner_from_char(chi: CharTable) -> WignerTable:
    k = chi.kernel
    return WignerTable(chi.p, chi.n, chi.convention, k.ft @ chi.values)


def char_from_wigner(wt: WignerTable) -> CharTable:
    k = wt.kernel
    # inverse of the symplectic transform: chi = N * ft^dagger W
    return CharTable(wt.p, wt.n, wt.convention, k.N * (k.ft.conj().T @ wt.values))


def wigner_function(
    rho: np.ndarray, p: int, n: int, convention: Optional[str] = None
) -> WignerTable:
    return wigner_from_char(char_function(rho, p, n, convention))


def a_operator(p: int, n: int, u: Sequence[int], convention: Optional[str] = None) -> np.ndarray:
    """Hermitian A(u) with W_rho(u) = tr[rho A(u)]."""
    convention = convention or default_convention(p, n)
    k = wigner_kernel(p, n, convention)
    return k.a_stack()[k.code(u)]


def marginal_along(wt: WignerTable, alpha: int, s: Sequence[int]) -> float:
    """Sum of W over the shifted isotropic subspace with outcome vector s;
    equals tr[rho P_alpha(s)]."""
    k = wt.kernel
    scode = sum((sj % k.p) * k.p**j for j, sj in enumerate(s))
    mask = k.gen_outcome_codes(alpha) == scode
    total = complex(wt.values[mask].sum())
    if abs(total.imag) > 1e-8:
        raise ValueError("marginal of a non-Hermitian table is not a probability")
    return float(total.real)


def density_from_char(chi: CharTable) -> np.ndarray:
    """rho = (1/p^n) sum_w chi(w) G(w)^dagger (valid for any input matrix)."""
    k = chi.kernel
    coeff = chi.values * np.conj(k.phases)
    rho = np.tensordot(coeff, np.conj(k.basis.stack.transpose(0, 2, 1)), axes=(0, 0))
    return rho / k.dim


def reconstruct_density(wt: WignerTable) -> np.ndarray:
    """rho = sum_v W(v) A(v), computed through the kernel; exact inverse of
    the chi -> W pipeline for every convention."""
    return density_from_char(char_from_wigner(wt))


def plancherel_inner(w1: WignerTable, w2: WignerTable) -> float:
    """tr[rho1 rho2] = p^n sum_v W1(v) W2(v) (same convention on both sides)."""
    if (w1.p, w1.n, w1.convention) != (w2.p, w2.n, w2.convention):
        raise ConventionError("Plancherel inner products need matching conventions")
    val = complex(w1.p ** w1.n * np.sum(w1.values * w2.values))
    return float(val.real)


@dataclass
class SupportStats:
    support_size: int
    max_abs: float


def support_stats(wt: WignerTable, threshold: float = ZERO_TOL) -> SupportStats:
    """Support count and sup norm, with the density bounds enforced:
    |W| <= p^{-n/2} + tol and support >= p^n."""
    mags = np.abs(wt.values)
    stats = SupportStats(int((mags > threshold).sum()), float(mags.max()))
    bound = wt.p ** (-wt.n / 2) + threshold
    if stats.max_abs > bound:
        raise ValueError(f"|W| = {stats.max_abs} exceeds the bound {bound}")
    if stats.support_size < wt.p**wt.n:
        raise ValueError(
            f"support {stats.support_size} is below the bound {wt.p ** wt.n}"
        )
    return stats


# ---------------------------------------------------------------------------
# separability, partial transpose, positivity
# ---------------------------------------------------------------------------


@dataclass
class FactorizationReport:
    p: int
    n: int
    convention: str
    transpose_on: Optional[int]  # subsystem index carrying the transpose, p=2 only
    max_deviation: float

    @property
    def passed(self) -> bool:
        return self.max_deviation < ZERO_TOL


def check_product_factorization(
    tau: np.ndarray, mu: np.ndarray, p: int
) -> FactorizationReport:
    """Compare W_{tau (x) mu} against the pointwise product of one-subsystem
    tables on all p^4 points. Odd p uses the separable convention on both
    sides; p=2 uses the left convention, which transposes the second factor."""
    tau = np.asarray(tau, dtype=complex)
    mu = np.asarray(mu, dtype=complex)
    if tau.shape != (p, p) or mu.shape != (p, p):
        raise ValueError(f"factors must be {p}x{p}")
    rho = np.kron(tau, mu)
    if p % 2 == 1:
        conv = "separable"
        w2 = wigner_function(rho, p, 2, conv).values
        wt = wigner_function(tau, p, 1, conv).values
        wm = wigner_function(mu, p, 1, conv).values
        twist = None
    else:
        conv = "p2-left"
        w2 = wigner_function(rho, p, 2, conv).values
        wt = wigner_function(tau, p, 1, "plain").values
        wm = wigner_function(mu.T, p, 1, "plain").values
        twist = 1
    dev = float(np.abs(w2 - np.kron(wt, wm)).max())
    return FactorizationReport(p, 2, conv, twist, dev)


def check_complete_factorization(factors: Sequence[np.ndarray], p: int) -> FactorizationReport:
    """W of an n-fold product state against the product of n one-subsystem
    tables (odd p, any n; p=2 only n=2 via the transpose twist)."""
    n = len(factors)
    if p == 2:
        if n == 2:
            return check_product_factorization(factors[0], factors[1], p)
        raise ConventionError(
            "no separability-preserving convention is available for p=2 with "
            "more than two subsystems; only the n=2 transpose twist exists"
        )
    rho = np.eye(1, dtype=complex)
    for f in factors:
        rho = np.kron(rho, np.asarray(f, dtype=complex))
    w_full = wigner_function(rho, p, n, "separable").values
    prod = np.ones(1)
    for f in factors:
        prod = np.kron(prod, wigner_function(f, p, 1, "separable").values)
    dev = float(np.abs(w_full - prod).max())
    return FactorizationReport(p, n, "separable", None, dev)


def partial_transpose_matrix(rho: np.ndarray, p: int) -> np.ndarray:
    """Entrywise partial transpose on the second subsystem of H_p (x) H_p."""
    rho = np.asarray(rho, dtype=complex).reshape(p, p, p, p)
    return rho.transpose(0, 3, 2, 1).reshape(p * p, p * p)


def wigner_partial_transpose(wt: WignerTable) -> WignerTable:
    """Index action of the partial transpose on n=2 tables.

    Odd p (separable convention): (x0,y0,x1,y1) -> (x0,y0,p-1-x1,y1).
    p=2 (left/right conventions): sign flip of chi on second block (1,1).
    """
    if wt.n != 2:
        raise ValueError("partial transpose acts on n=2 tables")
    p = wt.p
    if p % 2 == 1:
        if wt.convention != "separable":
            raise ConventionError("odd-p partial transpose needs the separable convention")
        k = wt.kernel
        vecs = k.vectors.copy()
        vecs[:, 2] = (p - 1 - vecs[:, 2]) % p
        perm = np.array([index_code(p, v) for v in vecs])
        return WignerTable(p, 2, wt.convention, wt.values[perm])
    if wt.convention not in ("p2-left", "p2-right"):
        raise ConventionError("p=2 partial transpose needs a p2 convention")
    chi = char_from_wigner(wt)
    k = wt.kernel
    flip = np.where(
        (k.vectors[:, 2] == 1) & (k.vectors[:, 3] == 1), -1.0, 1.0
    )
    chi = CharTable(p, 2, wt.convention, chi.values * flip)
    return wigner_from_char(chi)


@dataclass
class PositivityResult:
    positive: bool
    min_eigenvalue: float
    witness: Optional[dict]  # spin coefficients of B with tr(rho B B^dagger) < 0


def positivity_check(rho: np.ndarray, p: int, n: int, tol: float = ZERO_TOL) -> PositivityResult:
    """Peres-style positivity: rho >= 0 iff tr(rho B B^dagger) >= 0 for all B.

    Returns the most negative eigenvalue; when negative, the witness B is the
    projector onto its eigenvector, reported in spin-matrix coefficients."""
    rho = np.asarray(rho, dtype=complex)
    if np.abs(rho - rho.conj().T).max() > 1e-8:
        raise ValueError("positivity check expects a Hermitian matrix")
    vals, vecs = np.linalg.eigh(rho)
    lam = float(vals[0])
    if lam >= -tol:
        return PositivityResult(True, lam, None)
    phi = vecs[:, 0]
    B = np.outer(phi, phi.conj())
    coeffs = spin_decompose(B, p, n)
    witness = {idx: c / p**n for idx, c in coeffs.items()}
    return PositivityResult(False, lam, witness)


# ---------------------------------------------------------------------------
# reference states and closed forms
# ---------------------------------------------------------------------------


def max_entangled_density(p: int) -> np.ndarray:
    """|Psi><Psi| for |Psi> = p^{-1/2} sum_j |jj>."""
    psi = np.zeros(p * p, dtype=complex)
    for j in range(p):
        psi[j * p + j] = 1.0
    psi /= np.sqrt(p)
    return np.outer(psi, psi.conj())


def wigner_maximally_entangled(p: int) -> WignerTable:
    """Closed form for the maximally entangled state, odd p, separable
    convention: (1/p^2) on the p^2 points with x1 = -1 - x0 and y1 = y0."""
    if p == 2 or not is_prime(p):
        raise ValueError("closed form is stated for odd primes")
    k = wigner_kernel(p, 2, "separable")
    vals = np.zeros(k.N, dtype=complex)
    for i, v in enumerate(k.vectors):
        if (1 + v[0] + v[2]) % p == 0 and v[1] == v[3]:
            vals[i] = 1.0 / p**2
    return WignerTable(p, 2, "separable", vals)


def random_density(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_density(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())
