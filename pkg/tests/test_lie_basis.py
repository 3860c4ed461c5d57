import itertools

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from ddsynth.lie_basis import (DimensionError, PauliString, adjoint_action,
                               coefficients, commutator, is_hermitian,
                               orthonormal_basis, pauli, realize)


def test_single_z_matrix():
    m = realize(PauliString(("Z",)), 1)
    assert np.allclose(m, np.diag([1.0, -1.0]))


def test_orthonormal_weight_unit_trace_square():
    m = realize(PauliString(("X", "Z"), weight=0.5), 2)
    assert np.isclose(np.trace(m @ m).real, 1.0)


def test_zz_eigenvalues():
    m = realize(PauliString(("Z", "Z")), 2)
    vals = np.sort(np.linalg.eigvalsh(m))
    assert np.allclose(vals, [-1.0, -1.0, 1.0, 1.0])


def test_realize_validations():
    with pytest.raises(DimensionError):
        realize(PauliString(("X",)), 2)
    with pytest.raises(DimensionError):
        realize(PauliString(("I",) * 13), 13)
    with pytest.raises(ValueError):
        PauliString(("Q",))


def test_commutator_pauli_algebra():
    assert np.allclose(commutator(pauli("X"), pauli("X")), 0.0)
    assert np.allclose(commutator(pauli("X"), pauli("Y")), 2j * pauli("Z"))
    xi = realize(PauliString(("X", "I")), 2)
    iy = realize(PauliString(("I", "Y")), 2)
    assert np.allclose(commutator(xi, iy), 0.0)


def test_commutator_shape_guard():
    with pytest.raises(DimensionError):
        commutator(np.eye(2), np.eye(4))


def test_adjoint_action_rotates_z_to_y():
    u = scipy.linalg.expm(1j * np.pi / 4 * pauli("X"))
    out = adjoint_action(u, pauli("Z"))
    assert np.allclose(out, pauli("Y")) or np.allclose(out, -pauli("Y"))


def test_adjoint_action_rejects_non_unitary():
    with pytest.raises(ValueError):
        adjoint_action(2.0 * np.eye(2, dtype=complex), pauli("Z"))


def test_adjoint_action_preserves_spectrum(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    a = a + a.conj().T
    h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    u = scipy.linalg.expm(1j * (h + h.conj().T))
    out = adjoint_action(u, a)
    assert np.allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(a))
    assert np.isclose(np.trace(out), np.trace(a))
    assert np.isclose(np.linalg.norm(out), np.linalg.norm(a))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_basis_orthonormality(n):
    basis = orthonormal_basis(n)
    assert len(basis) == 4 ** n
    mats = np.stack([m for _, m in basis])
    gram = np.einsum("aji,bji->ab", mats.conj(), mats).real  # Tr[A^dag B]
    assert np.max(np.abs(gram - np.eye(4 ** n))) < 1e-12


def test_basis_lexicographic_order():
    labels = [p.label() for p, _ in orthonormal_basis(1)]
    assert labels == ["I", "X", "Y", "Z"]
    labels2 = [p.label() for p, _ in orthonormal_basis(2, include_identity=False)]
    assert labels2[0] == "IX" and "II" not in labels2


def test_all_strings_hermitian():
    for sites in itertools.product("IXYZ", repeat=2):
        assert is_hermitian(realize(PauliString(sites), 2))


def test_coefficients_round_trip(rng):
    basis = orthonormal_basis(2)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    a = a + a.conj().T
    c = coefficients(a, basis)
    recon = sum(ci * m for ci, (_, m) in zip(c, basis))
    assert np.allclose(recon, a)
    assert np.max(np.abs(c.imag)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 16 - 1))
def test_commutator_antisymmetry_and_jacobi(seed):
    rng = np.random.default_rng(seed)
    mats = []
    for _ in range(3):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        mats.append(a + a.conj().T)
    a, b, c = mats
    assert np.allclose(commutator(a, b), -commutator(b, a))
    jac = (commutator(a, commutator(b, c))
           + commutator(b, commutator(c, a))
           + commutator(c, commutator(a, b)))
    assert np.max(np.abs(jac)) < 1e-10 * max(1.0, np.linalg.norm(a))
    assert is_hermitian(1j * commutator(a, b), atol=1e-10)
