"""Eigen-analysis of the adjoint matrix.

Eigenvalues come from the characteristic polynomial.  Because UH is
symmetric, P(lambda) is even, so it is solved as a polynomial in
mu = lambda^2 and every root mu yields the exact pair -sqrt(mu), +sqrt(mu).
This keeps the +/- pairing exact and keeps coalescing roots at exceptional
points accurate to working precision, which eigenvalue routines working on H
directly do not (they lose half the digits at a defective eigenvalue).
Isolated roots are then polished with a two-sided Rayleigh correction.
When roots cluster, double-precision coefficients can no longer tell a
tiny genuine split from a true multiple root, so clustered spectra are
recomputed in mpmath from the (exact) binary matrix entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import mpmath
import numpy as np

from . import kernels
from .adjrep import AdjointRep
from .errors import (
    ConvergenceFailure,
    DegenerateSigma,
    IllConditioned,
    LadderIdentityError,
    NotApplicable,
    NotDefective,
    UnsupportedJordanStructure,
)
from .opcore import OperatorPoly, adjoint, commutator, multiply

PAIRING_TOL = 1e-8
REAL_TOL = 1e-8
COLLISION_TOL = 1e-6
RANK_TOL = 1e-8
SIGMA_TOL = 1e-10
IDENTITY_TOL = 1e-10
LADDER_TOL = 1e-10


class Classification(str, Enum):
    ALL_REAL = "AllReal"
    COMPLEX = "Complex"
    EXCEPTIONAL = "ExceptionalCandidate"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Defect:
    eigenvalue: complex
    algebraic: int
    geometric: int


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns; NaN columns where a defective cluster lacks vectors
    pairs: list
    classification: Classification
    charpoly: np.ndarray
    defects: list
    min_gap: float
    scale: float
    residuals: np.ndarray = field(repr=False)

    @property
    def is_real(self) -> bool:
        return float(np.abs(self.eigenvalues.imag).max(initial=0.0)) < REAL_TOL * self.scale

    @property
    def is_defective(self) -> bool:
        return any(d.geometric < d.algebraic for d in self.defects)


@dataclass(frozen=True, eq=False)
class DefectInfo:
    algebraic: int
    geometric: int
    eigenvectors: np.ndarray  # orthonormal basis of the eigenspace, as columns

    def __iter__(self):
        yield self.algebraic
        yield self.geometric


@dataclass(frozen=True, eq=False)
class JordanResult:
    P: np.ndarray
    J: np.ndarray
    residual: float
    condition: float
    blocks: list  # (eigenvalue, size)


@dataclass(frozen=True, eq=False)
class LadderSystem:
    eigenvalues: np.ndarray
    Z: list
    sigma: np.ndarray
    E0: complex
    identity_residual: float
    coefficients: np.ndarray  # column j holds the coefficients of Z_j
    hamiltonian: OperatorPoly = field(repr=False)


# ---------------------------------------------------------------------------
# characteristic polynomial and roots


def char_poly(rep: AdjointRep) -> np.ndarray:
    """Coefficients of det(H - lambda I), highest degree first (monic, 2K even)."""
    return kernels.charpoly_batch(rep.matrixH)[0]


def _stable_quadratic(e1, e2):
    # mu^2 + e1 mu + e2 = 0
    disc = np.sqrt(e1 * e1 - 4.0 * e2 + 0j)
    if abs(-e1 + disc) >= abs(-e1 - disc):
        q = (-e1 + disc) / 2.0
    else:
        q = (-e1 - disc) / 2.0
    if q == 0:
        return np.array([0.0j, 0.0j])
    return np.array([q, e2 / q])


def mu_roots_batch(coeffs: np.ndarray) -> np.ndarray:
    """Roots mu = lambda^2 of the even part of each characteristic polynomial.

    ``coeffs`` is ``(B, 2K+1)``; returns ``(B, K)``.
    """
    coeffs = np.atleast_2d(coeffs)
    even = coeffs[:, 0::2]
    K = even.shape[1] - 1
    if K == 1:
        return -even[:, 1:2] / even[:, :1]
    if K == 2:
        return np.array([_stable_quadratic(e[1] / e[0], e[2] / e[0]) for e in even])
    roots, converged = kernels.poly_roots_batch(even)
    roots = np.array([_newton_polish(even[b], roots[b]) for b in range(len(roots))])
    if not converged.all():
        bad = np.flatnonzero(~converged)
        # Aberth stalls only at clustered roots; those are accurate enough
        # to be classified, so only flag roots that do not satisfy P(mu)~0.
        for b in bad:
            val = np.abs(np.polyval(even[b], roots[b])).max()
            scale = np.abs(even[b]).max()
            if val > 1e-8 * scale:
                raise ConvergenceFailure(
                    "root iteration did not converge", batch_index=int(b), residual=float(val)
                )
    return roots


def _newton_polish(coeffs, roots, steps=3):
    dcoeffs = np.polyder(coeffs)
    out = roots.copy()
    for k in range(len(out)):
        z = out[k]
        for _ in range(steps):
            dp = np.polyval(dcoeffs, z)
            if dp == 0:
                break
            step = np.polyval(coeffs, z) / dp
            if not np.isfinite(step) or abs(step) > 1e-3 * (1 + abs(z)):
                break
            z = z - step
        out[k] = z
    return out


def order_eigenvalues(lams: np.ndarray) -> np.ndarray:
    """Sort by (Re, Im).

    For an exactly negation-symmetric multiset this yields lambda_j =
    -lambda_{2K-j+1}, and for real spectra the ascending order
    lambda_1 < ... < lambda_K < 0 < lambda_{K+1} < ... < lambda_2K.
    Real parts within 1e-10 of the spectral scale count as equal, and
    components below 1e-14 of it as zero, so that rounding noise cannot
    reorder a conjugate pair.
    """
    lams = np.asarray(lams)
    scale = spectral_scale(lams)
    eps = 1e-14 * scale
    re = np.where(np.abs(lams.real) < eps, 0.0, lams.real)
    im = np.where(np.abs(lams.imag) < eps, 0.0, lams.imag)
    order = np.argsort(re, kind="stable")
    # replace each real part by the first one of its run of near-equal values
    key = re[order].copy()
    for k in range(1, len(key)):
        if key[k] - key[k - 1] < 1e-10 * scale:
            key[k] = key[k - 1]
    re_key = np.empty_like(key)
    re_key[order] = key
    return lams[np.lexsort((im, re_key))]


def eigenvalues_from_charpoly(coeffs: np.ndarray) -> np.ndarray:
    """All 2K eigenvalues (unpolished) for a batch of characteristic polynomials."""
    mu = mu_roots_batch(coeffs)
    root = np.sqrt(mu.astype(complex))
    lams = np.concatenate([-root, root], axis=1)
    return np.array([order_eigenvalues(row) for row in lams])


EXTENDED_DPS = 50


def _mp_mu_roots(even, dps):
    K = len(even) - 1
    if K == 1:
        return [-even[1] / even[0]]
    if K == 2:
        disc = mpmath.sqrt(even[1] ** 2 - 4 * even[0] * even[2])
        return [(-even[1] + disc) / (2 * even[0]), (-even[1] - disc) / (2 * even[0])]
    return mpmath.polyroots(even, maxsteps=200, extraprec=2 * dps)


def eigenvalues_extended(H: np.ndarray, dps: int = EXTENDED_DPS) -> np.ndarray:
    """Eigenvalues of the binary matrix H, correct to double precision near coalescence.

    Faddeev-LeVerrier and the roots in mu run at ``dps`` digits, so a split
    of size sqrt(eps) that double arithmetic rounds to a double root (or the
    reverse) is resolved.  Raises ConvergenceFailure if the root finder fails.
    """
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    with mpmath.workdps(dps):
        A = mpmath.matrix(H.tolist())
        coeffs = [mpmath.mpc(1)]
        M = mpmath.zeros(n, n)
        for k in range(1, n + 1):
            M = A * M + coeffs[-1] * mpmath.eye(n)
            coeffs.append(-sum((A * M)[i, i] for i in range(n)) / k)
        try:
            mu = _mp_mu_roots(coeffs[0::2], dps)
        except mpmath.libmp.NoConvergence as exc:
            raise ConvergenceFailure("extended-precision root iteration did not converge") from exc
        root = np.array([complex(mpmath.sqrt(m)) for m in mu])
    return order_eigenvalues(np.concatenate([-root, root]))


def refine_clustered(H: np.ndarray, lams: np.ndarray) -> np.ndarray:
    """``lams`` unchanged unless two of them collide, else the extended-precision spectrum."""
    if all(len(g) == 1 for g in clusters(lams)):
        return lams
    return eigenvalues_extended(H)


def spectral_scale(lams) -> float:
    return max(1.0, float(np.abs(lams).max(initial=0.0)))


def min_pairwise_gap(lams) -> float:
    lams = np.asarray(lams)
    if len(lams) < 2:
        return np.inf
    diff = np.abs(lams[:, None] - lams[None, :])
    diff[np.diag_indices(len(lams))] = np.inf
    return float(diff.min())


def classify(lams) -> Classification:
    scale = spectral_scale(lams)
    if min_pairwise_gap(lams) < COLLISION_TOL * scale:
        return Classification.EXCEPTIONAL
    if float(np.abs(np.asarray(lams).imag).max(initial=0.0)) < REAL_TOL * scale:
        return Classification.ALL_REAL
    return Classification.COMPLEX


def is_real_spectrum(lams) -> bool:
    """Reality predicate, independent of eigenvalue collisions."""
    return float(np.abs(np.asarray(lams).imag).max(initial=0.0)) < REAL_TOL * spectral_scale(lams)


def clusters(lams, scale: Optional[float] = None) -> list:
    """Group indices of eigenvalues closer than the collision tolerance."""
    scale = spectral_scale(lams) if scale is None else scale
    tol = COLLISION_TOL * scale
    groups: list = []
    for i, lam in enumerate(lams):
        for g in groups:
            if any(abs(lam - lams[j]) < tol for j in g):
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


# ---------------------------------------------------------------------------
# eigenvectors


def null_space(A: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical null space of A."""
    _, s, vh = np.linalg.svd(A)
    smax = s[0] if len(s) else 0.0
    if smax == 0.0:
        return np.eye(A.shape[1], dtype=complex)
    rank = int((s > RANK_TOL * smax).sum())
    return vh[rank:].conj().T


def normalize_vector(v: np.ndarray) -> np.ndarray:
    """Unit norm, first largest-magnitude component rotated to positive real."""
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() * (1 - 1e-9))[0])
    return v * (abs(v[k]) / v[k])


def _smallest_singular_pair(A):
    u, s, vh = np.linalg.svd(A)
    return u[:, -1], vh[-1].conj(), s[-1]


def _polish(H, lam, steps=2):
    """Two-sided Rayleigh correction for a simple eigenvalue."""
    n = H.shape[0]
    for _ in range(steps):
        y, x, _ = _smallest_singular_pair(H - lam * np.eye(n))
        denom = np.vdot(y, x)
        if abs(denom) < 1e-8:
            break
        lam = lam + np.vdot(y, (H - lam * np.eye(n)) @ x) / denom
    return lam


def eigen(rep: AdjointRep, tol: float = 1e-10) -> SpectrumReport:
    """Eigenvalues, eigenvectors, pairing, classification and defect data."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    H = np.asarray(rep.matrixH)
    n = H.shape[0]
    coeffs = char_poly(rep)
    if not np.all(np.isfinite(coeffs)):
        raise ConvergenceFailure("characteristic polynomial is not finite")
    lams = refine_clustered(H, eigenvalues_from_charpoly(coeffs[None])[0])
    scale = spectral_scale(lams)

    # polish isolated roots on the positive half and mirror them
    K = n // 2
    groups = clusters(lams, scale)
    isolated = {g[0] for g in groups if len(g) == 1}
    for j in range(K, n):
        partner = n - 1 - j
        if j in isolated and partner in isolated:
            lam = _polish(H, lams[j])
            lams[j], lams[partner] = lam, -lam
    lams = order_eigenvalues(lams)
    scale = spectral_scale(lams)
    groups = clusters(lams, scale)

    vecs = np.full((n, n), np.nan + 0j)
    residuals = np.zeros(n)
    defects = []
    hnorm = np.abs(H).sum(axis=1).max(initial=0.0)
    for g in groups:
        center = lams[g].mean()
        ns = null_space(H - center * np.eye(n))
        defects.append(Defect(complex(center), len(g), ns.shape[1]))
        if len(g) == 1:
            _, x, _ = _smallest_singular_pair(H - lams[g[0]] * np.eye(n))
            ns = x[:, None]
        for slot, idx in enumerate(g[: ns.shape[1]]):
            v = normalize_vector(ns[:, slot])
            vecs[:, idx] = v
            residuals[idx] = np.abs(H @ v - lams[idx] * v).max()
        if len(g) == 1 and residuals[g[0]] > tol * max(hnorm, 1e-300):
            raise ConvergenceFailure(
                "eigenpair residual above tolerance",
                eigenvalue=complex(lams[g[0]]),
                residual=float(residuals[g[0]]),
                bound=tol * hnorm,
            )

    pairs = [(j, n - 1 - j) for j in range(K)]
    return SpectrumReport(
        eigenvalues=lams,
        eigenvectors=vecs,
        pairs=pairs,
        classification=classify(lams),
        charpoly=coeffs,
        defects=defects,
        min_gap=min_pairwise_gap(lams),
        scale=scale,
        residuals=residuals,
    )


def defect_info(rep: AdjointRep, lam: complex, tol: float = COLLISION_TOL,
                spectrum: Optional[SpectrumReport] = None) -> DefectInfo:
    """(algebraic, geometric) multiplicity of an eigenvalue, plus its eigenvectors."""
    spectrum = eigen(rep) if spectrum is None else spectrum
    lams = spectrum.eigenvalues
    near = np.abs(lams - lam) < tol * spectrum.scale
    algebraic = int(near.sum())
    if algebraic == 0:
        raise ValueError(f"{lam} is not an eigenvalue within tolerance")
    center = lams[near].mean()
    ns = null_space(rep.matrixH - center * np.eye(rep.n))
    vecs = np.column_stack([normalize_vector(v) for v in ns.T]) if ns.shape[1] else ns
    return DefectInfo(algebraic, ns.shape[1], vecs)


def jordan_form(rep: AdjointRep, tol: float = 1e-9,
                spectrum: Optional[SpectrumReport] = None) -> JordanResult:
    """Jordan canonical form P^-1 H P = J at an exceptional point.

    Chains are built from a null vector v1 by solving (H - lambda I) v_{k+1}
    = v_k with a rank-truncated pseudoinverse.  Only single-chain clusters
    are supported when a cluster is defective.
    """
    spectrum = eigen(rep) if spectrum is None else spectrum
    H = np.asarray(rep.matrixH)
    n = rep.n
    if not spectrum.is_defective:
        raise NotDefective("matrix is diagonalizable within tolerance")
    lams = spectrum.eigenvalues
    cols, blocks = [], []
    scale = spectrum.scale
    for g in clusters(lams, scale):
        lam = complex(lams[g].mean())
        shifted = H - lam * np.eye(n)
        ns = null_space(shifted)
        if ns.shape[1] >= len(g):
            for k in range(len(g)):
                cols.append(normalize_vector(ns[:, k]))
                blocks.append((lam, 1))
            continue
        if ns.shape[1] != 1:
            raise UnsupportedJordanStructure(
                f"cluster at {lam} has {len(g)} roots and {ns.shape[1]} eigenvectors"
            )
        pinv = np.linalg.pinv(shifted, rcond=RANK_TOL)
        chain = [normalize_vector(ns[:, 0])]
        for _ in range(len(g) - 1):
            nxt = pinv @ chain[-1]
            res = np.abs(shifted @ nxt - chain[-1]).max()
            if res > tol * scale:
                raise IllConditioned(f"Jordan chain residual {res:.3g} at eigenvalue {lam}")
            chain.append(nxt)
        cols.extend(chain)
        blocks.append((lam, len(g)))
    P = np.column_stack(cols)
    J = np.zeros((n, n), dtype=complex)
    pos = 0
    for lam, size in blocks:
        for k in range(size):
            J[pos + k, pos + k] = lam
            if k + 1 < size:
                J[pos + k, pos + k + 1] = 1.0
        pos += size
    cond = float(np.linalg.cond(P))
    if not np.isfinite(cond):
        raise IllConditioned("change of basis is singular")
    residual = float(np.abs(np.linalg.solve(P, H @ P) - J).max())
    return JordanResult(P=P, J=J, residual=residual, condition=cond, blocks=blocks)


# ---------------------------------------------------------------------------
# ladder operators and ground energy


def _ladder_coefficients(rep: AdjointRep, spectrum: SpectrumReport) -> np.ndarray:
    """Eigenvector columns arranged so that only partners (j, 2K-j+1) pair."""
    H, U = np.asarray(rep.matrixH), rep.matrixU
    n = rep.n
    lams = spectrum.eigenvalues
    C = np.zeros((n, n), dtype=complex)
    for g in clusters(lams, spectrum.scale):
        if g[0] >= n // 2:
            continue
        partner = [n - 1 - j for j in g]
        lam = lams[g].mean()
        neg = null_space(H - lam * np.eye(n))[:, : len(g)]
        pos = null_space(H + lam * np.eye(n))[:, : len(g)]
        if neg.shape[1] < len(g) or pos.shape[1] < len(g):
            raise NotApplicable("spectrum is defective")
        neg = np.column_stack([normalize_vector(v) for v in neg.T])
        if len(g) > 1:
            # scalar parts of [Z_neg_i, Z_pos_k] are neg^T U pos; make that diagonal
            gram = neg.T @ U @ pos
            pos = pos @ np.linalg.inv(gram)
        pos = np.column_stack([normalize_vector(v) for v in pos.T])
        C[:, g] = neg
        C[:, partner] = pos
    return C


def ladder_system(rep: AdjointRep, H: Optional[OperatorPoly] = None,
                  spectrum: Optional[SpectrumReport] = None) -> LadderSystem:
    """Ladder operators Z_j, scalars sigma_j and the ground energy E0.

    Writes H = -sum_j (lambda_j / sigma_j) Z_{2K-j+1} Z_j + E0 with
    sigma_j = [Z_j, Z_{2K-j+1}], and checks that nothing but a constant is
    left over.
    """
    H = rep.hamiltonian if H is None else H
    if H is None:
        raise ValueError("ladder_system needs the Hamiltonian polynomial")
    spectrum = eigen(rep) if spectrum is None else spectrum
    if not spectrum.is_real:
        raise NotApplicable("ladder construction needs a real spectrum")
    if spectrum.is_defective:
        raise NotApplicable("ladder construction needs a diagonalizable adjoint matrix")
    n, K = rep.n, rep.K
    lams = spectrum.eigenvalues
    if np.any(np.abs(lams) < COLLISION_TOL * spectrum.scale):
        raise NotApplicable("zero frequency: lambda and -lambda cannot be separated")
    C = _ladder_coefficients(rep, spectrum)
    Z = [OperatorPoly.from_linear(C[:, j]) for j in range(n)]

    for j in range(n):
        lhs = commutator(H, Z[j])
        if not lhs.allclose(lams[j] * Z[j], LADDER_TOL * spectrum.scale):
            raise ConvergenceFailure("[H, Z_j] != lambda_j Z_j", index=j)

    sigma = np.zeros(K, dtype=complex)
    rewritten = H
    for j in range(K):
        partner = n - 1 - j
        sigma[j] = commutator(Z[j], Z[partner]).scalar_part()
        if abs(sigma[j]) < SIGMA_TOL:
            raise DegenerateSigma(f"sigma_{j + 1} = {sigma[j]:.3g}")
        rewritten = rewritten + (lams[j] / sigma[j]) * multiply(Z[partner], Z[j])
    residual = rewritten.without_constant().norm()
    if residual > IDENTITY_TOL:
        raise LadderIdentityError(f"non-constant remainder {residual:.3g}")
    return LadderSystem(
        eigenvalues=lams,
        Z=Z,
        sigma=sigma,
        E0=rewritten.scalar_part(),
        identity_residual=residual,
        coefficients=C,
        hamiltonian=H,
    )


def hermitian_ladder_check(ladders: LadderSystem, tol: float = 1e-10) -> bool:
    """[H, Z_j^dagger] = -conj(lambda_j) Z_j^dagger for every j (H Hermitian)."""
    H = ladders.hamiltonian
    for lam, z in zip(ladders.eigenvalues, ladders.Z):
        zd = adjoint(z)
        if not commutator(H, zd).allclose(-np.conj(lam) * zd, tol):
            return False
    return True
