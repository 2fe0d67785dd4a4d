import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SIGMA
from mubwigner.spins import (
    alpha_factor,
    eta,
    phased_spin,
    spin_decompose,
    spin_matrix,
    spin_power,
    spin_product,
    spin_projector,
    spin_recompose,
    tensor_spin,
)

TOL = 1e-12


def test_spin_matrix_qubit_examples():
    assert np.allclose(spin_matrix(2, 0, 0), SIGMA["I"], atol=TOL)
    assert np.allclose(spin_matrix(2, 1, 0), SIGMA["z"], atol=TOL)
    assert np.allclose(spin_matrix(2, 0, 1), SIGMA["x"], atol=TOL)
    assert np.allclose(spin_matrix(2, 1, 1), 1j * SIGMA["y"], atol=TOL)


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_spin_matrices_unitary_and_traceless(d):
    for j, k in itertools.product(range(d), repeat=2):
        S = spin_matrix(d, j, k)
        assert np.allclose(S @ S.conj().T, np.eye(d), atol=TOL)
        if (j, k) != (0, 0):
            assert abs(np.trace(S)) < TOL


@pytest.mark.parametrize("d", [2, 3, 5, 7, 9])
def test_orthogonality(d):
    mats = {
        (j, k): spin_matrix(d, j, k) for j, k in itertools.product(range(d), repeat=2)
    }
    for (a, Sa), (b, Sb) in itertools.product(mats.items(), repeat=2):
        want = d if a == b else 0.0
        assert abs(np.trace(Sa.conj().T @ Sb) - want) < 1e-9


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_product_phases_match_numerics(d):
    for a in itertools.product(range(d), repeat=2):
        Sa = spin_matrix(d, *a)
        for b in itertools.product(range(d), repeat=2):
            op = spin_product(d, a, b)
            assert np.abs(op.matrix() - Sa @ spin_matrix(d, *b)).max() < TOL


def test_product_examples_d2():
    op = spin_product(2, (1, 0), (0, 1))
    assert op.index == (1, 1) and op.phase == 1
    # numeric oracle: S_{0,1} S_{1,0} = -S_{1,1}
    prod = spin_matrix(2, 0, 1) @ spin_matrix(2, 1, 0)
    assert np.allclose(prod, -spin_matrix(2, 1, 1), atol=TOL)
    op = spin_product(2, (0, 1), (1, 0))
    assert op.index == (1, 1) and op.phase == -1


@pytest.mark.parametrize("d", [2, 3, 5])
def test_adjoint_closes_to_identity(d):
    for a in itertools.product(range(d), repeat=2):
        op = phased_spin(d, a) @ phased_spin(d, a).adjoint()
        assert op.index == (0, 0)
        assert abs(op.phase - 1) < TOL
        # unitarity oracle
        S = spin_matrix(d, *a)
        assert np.allclose(S @ S.conj().T, np.eye(d), atol=TOL)


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_power_phases_match_numerics(d):
    for a in itertools.product(range(d), repeat=2):
        S = spin_matrix(d, *a)
        M = np.eye(d, dtype=complex)
        for m in range(d + 1):
            assert np.abs(spin_power(d, a, m).matrix() - M).max() < TOL
            M = M @ S


def test_power_examples():
    assert spin_power(3, (1, 2), 0).index == (0, 0)
    assert spin_power(3, (1, 2), 0).phase == 1
    op = spin_power(3, (1, 2), 1)
    assert op.index == (1, 2) and op.phase == 1
    # S_{1,1}^2 = -S_{0,0} at d=2
    op = spin_power(2, (1, 1), 2)
    assert op.index == (0, 0)
    assert abs(op.phase + 1) < TOL


def test_conjugation_covariance():
    # S_u S_v S_u^dagger = eta^{u o v} S_v
    for d in (2, 3, 5):
        w = eta(d)
        for u in itertools.product(range(d), repeat=2):
            Su = spin_matrix(d, *u)
            for v in itertools.product(range(d), repeat=2):
                Sv = spin_matrix(d, *v)
                sym = (u[1] * v[0] - u[0] * v[1]) % d
                assert np.abs(Su @ Sv @ Su.conj().T - w**sym * Sv).max() < 1e-10


def test_commutation_iff_symplectic_zero():
    for d in (2, 3, 5):
        for u, v in itertools.product(itertools.product(range(d), repeat=2), repeat=2):
            Su, Sv = spin_matrix(d, *u), spin_matrix(d, *v)
            commute = np.abs(Su @ Sv - Sv @ Su).max() < 1e-10
            assert commute == ((u[1] * v[0] - u[0] * v[1]) % d == 0)


def test_alpha_factor():
    assert alpha_factor(2, 1, 1) == -1j
    assert alpha_factor(2, 1, 0) == 1
    assert alpha_factor(3, 1, 1) == 1


def test_projector_qubit_example():
    assert np.allclose(
        spin_projector(2, (1, 0), 0), (SIGMA["I"] + SIGMA["z"]) / 2, atol=TOL
    )
    assert np.allclose(
        spin_projector(2, (1, 0), 1), (SIGMA["I"] - SIGMA["z"]) / 2, atol=TOL
    )


@pytest.mark.parametrize("p", [2, 3, 5])
def test_projector_family_properties(p):
    for idx in itertools.product(range(p), repeat=2):
        if idx == (0, 0):
            continue
        projs = [spin_projector(p, idx, r) for r in range(p)]
        assert np.allclose(sum(projs), np.eye(p), atol=1e-10)
        for r, Pr in enumerate(projs):
            assert np.allclose(Pr, Pr.conj().T, atol=1e-10)
            assert abs(np.trace(Pr) - 1) < 1e-10
            for s, Ps in enumerate(projs):
                want = Pr if r == s else np.zeros((p, p))
                assert np.abs(Pr @ Ps - want).max() < 1e-10


def test_projector_rejects_identity_index():
    with pytest.raises(ValueError):
        spin_projector(3, (0, 0), 0)


def test_tensor_spin():
    assert np.allclose(tensor_spin(2, (0, 0, 0, 0)), np.eye(4), atol=TOL)
    # direct Kronecker oracle
    want = np.kron(SIGMA["z"], SIGMA["x"])
    assert np.allclose(tensor_spin(2, (1, 0, 0, 1)), want, atol=TOL)
    T = tensor_spin(3, (1, 2, 0, 1))
    assert np.allclose(T @ T.conj().T, np.eye(9), atol=TOL)


def test_decompose_identity():
    coeffs = spin_decompose(np.eye(9, dtype=complex), 3, 2)
    for idx, c in coeffs.items():
        want = 9 if idx == (0, 0, 0, 0) else 0.0
        assert abs(c - want) < TOL


def test_decompose_single_spin():
    # numeric trace oracle: tr(S_u^dagger S_v) = d delta(u,v)
    d = 5
    v = (2, 3)
    coeffs = spin_decompose(spin_matrix(d, *v), d, 1)
    for idx, c in coeffs.items():
        want = d if idx == v else 0.0
        assert abs(c - want) < 1e-10


def test_decompose_qubit_bloch():
    rho = 0.5 * (SIGMA["I"] + 0.7 * SIGMA["z"])
    coeffs = spin_decompose(rho, 2, 1)
    assert abs(coeffs[(1, 0)] - 0.7) < TOL


@settings(deadline=None, max_examples=60)
@given(data=st.data())
def test_decompose_recompose_round_trip(data):
    p, n = data.draw(st.sampled_from([(2, 1), (3, 1), (2, 2), (3, 2), (5, 1)]))
    d = p**n
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    back = spin_recompose(spin_decompose(A, p, n), p, n)
    assert np.abs(back - A).max() < 1e-12 * max(1.0, np.abs(A).max())
