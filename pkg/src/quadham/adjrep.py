"""Adjoint (regular) matrix representation of a quadratic Hamiltonian.

For the ordered basis O = (x1..xK, p1..pK) the matrix H is defined column by
column through ``[H, O_i] = sum_j H_ji O_j``.  U is the commutator Gram matrix
``[O_i, O_j] = U_ij``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, InhomogeneousHamiltonian, NonClosure
from .opcore import OperatorPoly, basis, commutator

CLOSURE_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class AdjointRep:
    K: int
    matrixH: np.ndarray
    matrixU: np.ndarray
    basis: tuple = field(repr=False)
    constant: complex = 0.0
    hamiltonian: Optional[OperatorPoly] = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return 2 * self.K

    @classmethod
    def from_matrix(cls, matrixH, hamiltonian: Optional[OperatorPoly] = None, constant=0.0):
        """Wrap an already computed 2K x 2K matrix."""
        H = np.asarray(matrixH, dtype=complex)
        if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] % 2:
            raise DimensionMismatch(f"adjoint matrix must be 2K x 2K, got {H.shape}")
        K = H.shape[0] // 2
        return cls(K, _frozen(H), _frozen(build_U(K)), tuple(basis(K)), complex(constant), hamiltonian)


@dataclass(frozen=True)
class StructureReport:
    uh_symmetric: bool
    uh_error: float
    entries_antireal: Optional[bool] = None
    antireal_error: Optional[float] = None
    pseudo_hermitian: Optional[bool] = None
    pseudo_error: Optional[float] = None

    def ok(self) -> bool:
        return all(v is not False for v in (self.uh_symmetric, self.entries_antireal, self.pseudo_hermitian))


def build_U(K: int) -> np.ndarray:
    """i [[0, I], [-I, 0]] for the canonical basis."""
    if K < 1:
        raise ValueError("K must be >= 1")
    eye = np.eye(K)
    zero = np.zeros((K, K))
    return 1j * np.block([[zero, eye], [-eye, zero]])


def commutator_U(K: int) -> np.ndarray:
    """U recomputed entry by entry from operator commutators."""
    ops = basis(K)
    n = 2 * K
    U = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            U[i, j] = commutator(ops[i], ops[j]).scalar_part()
    return U


def build_adjoint(H: OperatorPoly, K: Optional[int] = None) -> AdjointRep:
    """Adjoint matrix of a homogeneous quadratic H (plus optional constant)."""
    K = H.K if K is None else K
    if K != H.K:
        raise DimensionMismatch(f"Hamiltonian has K={H.K}, requested K={K}")
    if not H.part(1).is_zero(CLOSURE_TOL):
        raise InhomogeneousHamiltonian("Hamiltonian has degree-1 terms; [H, O_i] leaves span{O}")
    if H.degree() > 2:
        raise NonClosure(f"Hamiltonian has degree {H.degree()} terms; only quadratics close on span{{O}}")
    ops = basis(K)
    n = 2 * K
    mat = np.zeros((n, n), dtype=complex)
    for i, op in enumerate(ops):
        comm = commutator(H, op)
        col = comm.linear_coeffs()
        residual = (comm - OperatorPoly.from_linear(col)).norm()
        if residual > CLOSURE_TOL:
            raise NonClosure(f"[H, {op}] has residual {residual:.3g} outside span{{O}}")
        mat[:, i] = col
    return AdjointRep(K, _frozen(mat), _frozen(build_U(K)), tuple(ops), H.scalar_part(), H)


def gamma_to_adjoint(gamma, constant: complex = 0.0) -> AdjointRep:
    """(gamma + gamma^T) U, the shortcut that skips the operator algebra."""
    g = np.asarray(gamma, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2:
        raise DimensionMismatch(f"gamma must be 2K x 2K, got {g.shape}")
    K = g.shape[0] // 2
    mat = (g + g.T) @ build_U(K)
    return AdjointRep(K, _frozen(mat), _frozen(build_U(K)), tuple(basis(K)), complex(constant), None)


def check_structure(rep: AdjointRep, hermitian_input: bool, tol: float = 1e-12) -> StructureReport:
    H, U = rep.matrixH, rep.matrixU
    uh = U @ H
    uh_err = float(np.abs(uh.T - uh).max(initial=0.0))
    report = dict(uh_symmetric=uh_err <= tol, uh_error=uh_err)
    if hermitian_input:
        anti = float(np.abs(H.conj() + H).max(initial=0.0))
        pseudo = float(np.abs(H.conj().T - U @ H @ U).max(initial=0.0))
        report.update(
            entries_antireal=anti <= tol,
            antireal_error=anti,
            pseudo_hermitian=pseudo <= tol,
            pseudo_error=pseudo,
        )
    return StructureReport(**report)
