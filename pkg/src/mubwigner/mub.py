"""Complete sets of p^n + 1 mutually unbiased bases from commuting classes.

Each class label alpha gives n generator index vectors; their alpha-corrected
spin operators commute, each one's p-th power is the identity, and the
products over generator powers make up the class. Projectors are products of
the n commuting rank-p^{n-1} spectral projectors of the generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .fields import is_prime, FieldError
from .geometry import PhaseGeometry, phase_geometry
from .spins import PhasedOperator, eta, phased_spin

UNBIASED_TOL = 1e-10


@dataclass(frozen=True)
class CommutingClass:
    alpha: int
    members: dict  # b-tuple -> PhasedOperator


@dataclass(frozen=True)
class MubProjector:
    alpha: int
    s: tuple
    matrix: np.ndarray


def class_generator_ops(geom: PhaseGeometry, alpha: int) -> list[PhasedOperator]:
    """The alpha-corrected generator operators T_r; each satisfies T_r^p = 1."""
    gs = geom.generator_sets[alpha]
    return [phased_spin(geom.p, g, with_alpha=True) for g in gs.gens]


def commuting_class(geom: PhaseGeometry, alpha: int) -> CommutingClass:
    """All products prod_r S_{g_r(alpha)}^{b_r} with exact phases."""
    ops = [phased_spin(geom.p, g) for g in geom.generator_sets[alpha].gens]
    members = {}
    for b in itertools.product(range(geom.p), repeat=geom.n):
        acc = PhasedOperator(geom.p, geom.n, (0,) * (2 * geom.n))
        for op, br in zip(ops, b):
            acc = acc @ op.power(br)
        members[b] = acc
    return CommutingClass(alpha, members)


def mub_projector(geom: PhaseGeometry, alpha: int, s: tuple) -> MubProjector:
    """P_alpha(s) = prod_r (1/p) sum_b (eta^{s_r} T_r)^b; rank one."""
    p = geom.p
    if len(s) != geom.n:
        raise ValueError(f"outcome vector must have {geom.n} components")
    d = geom.dim
    P = np.eye(d, dtype=complex)
    w = eta(p)
    for r, T in enumerate(class_generator_ops(geom, alpha)):
        Tm = T.matrix()
        acc = np.zeros((d, d), dtype=complex)
        M = np.eye(d, dtype=complex)
        for b in range(p):
            acc += w ** ((s[r] % p) * b) * M
            M = M @ Tm
        P = P @ (acc / p)
    return MubProjector(alpha, tuple(c % p for c in s), P)


def full_mub(p: int, n: int = 1, geom: PhaseGeometry | None = None) -> list[list[MubProjector]]:
    """The p^n + 1 bases, each as its p^n rank-1 projectors."""
    if geom is None:
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        geom = phase_geometry(p, n)
    bases = []
    for alpha in range(geom.num_classes):
        basis = [
            mub_projector(geom, alpha, s)
            for s in itertools.product(range(p), repeat=geom.n)
        ]
        bases.append(basis)
    return bases


@dataclass
class MubReport:
    p: int
    n: int
    num_bases: int
    max_projector_defect: float  # worst of hermiticity/idempotence/trace-one
    max_completeness_defect: float  # || sum_s P(s) - I ||_max per basis
    max_orthogonality_defect: float  # within-basis tr[P P'] vs delta
    max_unbiasedness_defect: float  # cross-basis tr[P P'] vs 1/p^n

    @property
    def passed(self) -> bool:
        return (
            max(
                self.max_projector_defect,
                self.max_completeness_defect,
                self.max_orthogonality_defect,
                self.max_unbiasedness_defect,
            )
            < UNBIASED_TOL
        )

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "num_bases": self.num_bases,
            "max_projector_defect": float(self.max_projector_defect),
            "max_completeness_defect": float(self.max_completeness_defect),
            "max_orthogonality_defect": float(self.max_orthogonality_defect),
            "max_unbiasedness_defect": float(self.max_unbiasedness_defect),
            "passed": bool(self.passed),
        }


def verify_mub(bases: list[list[MubProjector]], p: int, n: int) -> MubReport:
    """Check hermiticity, idempotence, completeness, orthogonality, unbiasedness."""
    d = p**n
    proj_defect = 0.0
    complete_defect = 0.0
    ortho_defect = 0.0
    cross_defect = 0.0
    flat = []
    for basis in bases:
        total = np.zeros((d, d), dtype=complex)
        for P in basis:
            M = P.matrix
            proj_defect = max(
                proj_defect,
                np.abs(M - M.conj().T).max(),
                np.abs(M @ M - M).max(),
                abs(np.trace(M) - 1.0),
            )
            total += M
            flat.append((P.alpha, M.ravel()))
        complete_defect = max(complete_defect, np.abs(total - np.eye(d)).max())
    mats = np.array([m for _, m in flat])
    overlaps = (mats @ mats.conj().T).real  # tr[P P'] since projectors are Hermitian
    k = d  # projectors per basis
    for i in range(len(flat)):
        for j in range(len(flat)):
            if i // k == j // k:
                want = 1.0 if i == j else 0.0
                ortho_defect = max(ortho_defect, abs(overlaps[i, j] - want))
            else:
                cross_defect = max(cross_defect, abs(overlaps[i, j] - 1.0 / d))
    return MubReport(
        p,
        n,
        len(bases),
        float(proj_defect),
        float(complete_defect),
        float(ortho_defect),
        float(cross_defect),
    )
