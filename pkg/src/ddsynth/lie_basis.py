"""Pauli-string operator algebra on dense matrices.

Operators are tensor products of single-site Pauli/identity factors with a
real weight.  With weight ``2**(-n/2)`` the strings form an orthonormal
Hermitian basis under the trace inner product, which is the basis every
average-Hamiltonian coefficient in this package is expressed in.  Dense
matrices only; the supported system sizes (n <= 12) make sparsity pointless.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 12

PAULI_LABELS = ("I", "X", "Y", "Z")

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


class DimensionError(ValueError):
    """Operator dimensions do not match the requested operation."""


def pauli(label: str) -> np.ndarray:
    """Single-site Pauli (or identity) matrix for label in I, X, Y, Z."""
    return _PAULI[label].copy()


@dataclass(frozen=True)
class PauliString:
    """Weighted tensor product of single-site Pauli factors.

    ``sites`` is an ordered tuple over {I, X, Y, Z}; ``weight`` a real
    scalar.  ``orthonormal(sites)`` picks the weight 2**(-n/2) that makes
    distinct strings trace-orthonormal.
    """

    sites: tuple[str, ...]
    weight: float = 1.0

    def __post_init__(self):
        sites = tuple(self.sites)
        for s in sites:
            if s not in PAULI_LABELS:
                raise ValueError(f"unknown Pauli label {s!r}")
        object.__setattr__(self, "sites", sites)

    @classmethod
    def orthonormal(cls, sites) -> "PauliString":
        sites = tuple(sites)
        return cls(sites, weight=2.0 ** (-len(sites) / 2.0))

    @property
    def n_qubits(self) -> int:
        return len(self.sites)

    def label(self) -> str:
        return "".join(self.sites)


def realize(p: PauliString, n_qubits: int) -> np.ndarray:
    """Dense matrix of a Pauli string: weighted Kronecker product of its sites."""
    if n_qubits < 1:
        raise DimensionError("need at least one qubit")
    if n_qubits > MAX_QUBITS:
        raise DimensionError(f"n_qubits={n_qubits} exceeds dense-matrix guard {MAX_QUBITS}")
    if p.n_qubits != n_qubits:
        raise DimensionError(f"string has {p.n_qubits} sites, expected {n_qubits}")
    m = np.array([[p.weight]], dtype=complex)
    for s in p.sites:
        m = np.kron(m, _PAULI[s])
    return m


def orthonormal_basis(n_qubits: int, include_identity: bool = True):
    """All 4**n orthonormal Pauli strings in lexicographic site order (I<X<Y<Z).

    Returns a list of (PauliString, matrix) pairs.  Deterministic ordering so
    coefficient vectors index consistently across the package.
    """
    out = []
    for sites in itertools.product(PAULI_LABELS, repeat=n_qubits):
        if not include_identity and all(s == "I" for s in sites):
            continue
        ps = PauliString.orthonormal(sites)
        out.append((ps, realize(ps, n_qubits)))
    return out


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """AB - BA.  Anti-Hermitian when both arguments are Hermitian."""
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return a @ b - b @ a


def adjoint_action(u: np.ndarray, a: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    """U A U^dag.  Raises unless u is unitary to within atol."""
    if u.shape != a.shape:
        raise DimensionError(f"shape mismatch {u.shape} vs {a.shape}")
    resid = np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])))
    if resid > atol:
        raise ValueError(f"operator is not unitary (residual {resid:.2e})")
    return u @ a @ u.conj().T


def is_hermitian(a: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(a - a.conj().T)) < atol)


def coefficients(a: np.ndarray, basis) -> np.ndarray:
    """Expansion coefficients of a matrix in an orthonormal operator basis."""
    return np.array([np.trace(m.conj().T @ a) for _, m in basis])
