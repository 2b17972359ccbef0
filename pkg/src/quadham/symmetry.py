"""Unitary and antiunitary symmetries acting on the operator basis.

A symmetry is a 2K x 2K matrix whose column i expands the transformed
operator S O_i S^-1 (or A O_i A^-1) in the basis.  Antiunitary symmetries
keep the complex conjugation implicit: applying one to a coefficient vector
means ``v -> A @ conj(v)``.

Defining relations checked here:

* unitary:     S H = H S,   S^T U S = U
* antiunitary: A H* = H A,  A^T U A = -U

PT-pseudo-Hermiticity is intentionally not offered: PT is antilinear, so it
cannot serve as the Hermitian metric of a pseudo-Hermiticity relation.  The
matrix-level U-pseudo-Hermiticity lives in ``adjrep.check_structure``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .adjrep import AdjointRep
from .errors import DimensionMismatch, UnsupportedDimension
from .spectra import REAL_TOL, SpectrumReport, clusters, eigen


class Kind(str, Enum):
    UNITARY = "unitary"
    ANTIUNITARY = "antiunitary"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class SymmetrySpec:
    kind: Kind
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise DimensionMismatch(f"symmetry matrix must be 2K x 2K, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def K(self) -> int:
        return self.matrix.shape[0] // 2

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        return self.matrix @ (v.conj() if self.kind is Kind.ANTIUNITARY else v)

    def u_error(self, U: np.ndarray) -> float:
        target = -U if self.kind is Kind.ANTIUNITARY else U
        return float(np.abs(self.matrix.T @ U @ self.matrix - target).max())


@dataclass(frozen=True)
class SymmetryCheckReport:
    label: str
    kind: Kind
    commutes: bool
    commute_error: float
    u_relation: bool
    u_error: float
    conjugation_closed: Optional[bool] = None  # antiunitary only
    eigvecs_invariant: Optional[bool] = None  # unitary with simple spectrum only

    @property
    def holds(self) -> bool:
        return self.commutes and self.u_relation


@dataclass(frozen=True)
class ExactnessVerdict:
    eigenvalue: complex
    verdict: str  # "exact" | "broken" | "skipped"
    scalar: Optional[complex] = None
    mismatch: Optional[float] = None


def multiset_close(a, b, tol: float) -> bool:
    """True when the two multisets match one-to-one within tol (greedy)."""
    a, b = list(np.asarray(a)), list(np.asarray(b))
    if len(a) != len(b):
        return False
    for z in a:
        dists = [abs(z - w) for w in b]
        k = int(np.argmin(dists))
        if dists[k] > tol:
            return False
        b.pop(k)
    return True


def check_symmetry(rep: AdjointRep, sym: SymmetrySpec, tol: float = 1e-12,
                   spectrum: Optional[SpectrumReport] = None) -> SymmetryCheckReport:
    if sym.matrix.shape != rep.matrixH.shape:
        raise DimensionMismatch(
            f"symmetry is {sym.matrix.shape}, adjoint matrix is {rep.matrixH.shape}"
        )
    H, S = np.asarray(rep.matrixH), sym.matrix
    if sym.kind is Kind.ANTIUNITARY:
        comm = float(np.abs(S @ H.conj() - H @ S).max())
    else:
        comm = float(np.abs(S @ H - H @ S).max())
    uerr = sym.u_error(rep.matrixU)
    report = dict(
        label=sym.label, kind=sym.kind,
        commutes=comm <= tol, commute_error=comm,
        u_relation=uerr <= tol, u_error=uerr,
    )
    spectrum = eigen(rep) if spectrum is None else spectrum
    lams = spectrum.eigenvalues
    if sym.kind is Kind.ANTIUNITARY:
        report["conjugation_closed"] = multiset_close(lams, lams.conj(), 1e-9 * spectrum.scale)
    elif spectrum.min_gap > 0 and all(len(g) == 1 for g in clusters(lams, spectrum.scale)):
        ok = True
        for j in range(len(lams)):
            c = spectrum.eigenvectors[:, j]
            sc = S @ c
            s = np.vdot(c, sc)
            ok &= bool(np.abs(sc - s * c).max() <= 1e-9)
        report["eigvecs_invariant"] = ok
    return SymmetryCheckReport(**report)


def exactness(rep: AdjointRep, sym: SymmetrySpec, spectrum: Optional[SpectrumReport] = None,
              tol: float = 1e-8) -> list:
    """Per-eigenvector verdict: exact iff A C* = b C for a scalar b.

    Eigenvalues inside a collision cluster get "skipped"; the verdict is
    undefined at exceptional points.
    """
    if sym.kind is not Kind.ANTIUNITARY:
        raise ValueError("exactness applies to antiunitary symmetries")
    spectrum = eigen(rep) if spectrum is None else spectrum
    lams = spectrum.eigenvalues
    verdicts = []
    clustered = {i for g in clusters(lams, spectrum.scale) if len(g) > 1 for i in g}
    for j, lam in enumerate(lams):
        if j in clustered:
            verdicts.append(ExactnessVerdict(complex(lam), "skipped"))
            continue
        c = spectrum.eigenvectors[:, j]
        w = sym.apply(c)
        k = int(np.argmax(np.abs(c)))
        b = w[k] / c[k]
        mismatch = float(np.abs(w - b * c).max())
        verdicts.append(
            ExactnessVerdict(complex(lam), "exact" if mismatch <= tol else "broken", complex(b), mismatch)
        )
    return verdicts


def exact_implies_real(verdicts, scale: float) -> bool:
    return all(abs(v.eigenvalue.imag) <= REAL_TOL * scale for v in verdicts if v.verdict == "exact")


def builtin_symmetries(K: int) -> list:
    """Parities, time reversal and their composites for K = 1 or 2.

    Only one of the two sign representatives (A and -A) is stored per
    symmetry; both satisfy the same relations.
    """
    if K == 1:
        return [
            SymmetrySpec(Kind.UNITARY, -np.eye(2), "P"),
            SymmetrySpec(Kind.ANTIUNITARY, np.diag([1.0, -1.0]), "T"),
            SymmetrySpec(Kind.ANTIUNITARY, np.diag([-1.0, 1.0]), "PT"),
        ]
    if K == 2:
        # basis order (x, y, px, py)
        return [
            SymmetrySpec(Kind.UNITARY, -np.eye(4), "P"),
            SymmetrySpec(Kind.UNITARY, np.diag([-1.0, 1.0, -1.0, 1.0]), "S_x"),
            SymmetrySpec(Kind.UNITARY, np.diag([1.0, -1.0, 1.0, -1.0]), "S_y"),
            SymmetrySpec(Kind.ANTIUNITARY, np.diag([1.0, 1.0, -1.0, -1.0]), "T"),
            SymmetrySpec(Kind.ANTIUNITARY, np.diag([-1.0, 1.0, 1.0, -1.0]), "A_x"),
            SymmetrySpec(Kind.ANTIUNITARY, np.diag([1.0, -1.0, -1.0, 1.0]), "A_y"),
            SymmetrySpec(Kind.ANTIUNITARY, np.diag([-1.0, -1.0, 1.0, 1.0]), "PT"),
        ]
    raise UnsupportedDimension(f"no builtin symmetry catalog for K={K}")


def builtin_symmetry(K: int, label: str) -> SymmetrySpec:
    for sym in builtin_symmetries(K):
        if sym.label == label:
            return sym
    raise KeyError(label)
