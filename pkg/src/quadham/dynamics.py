"""Heisenberg-picture evolution of x and p.

Convention: the basis is a row vector O = (O_1 .. O_2K) with
dO/dt = i O H, so O(t) = O exp(itH), i.e. O_j(t) = sum_k O_k exp(itH)_kj.
``TrajectorySample.coefficients`` stores row j = expansion of O_j(t), which is
exp(itH) transposed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .adjrep import AdjointRep
from .errors import ConvergenceFailure
from .spectra import COLLISION_TOL, SpectrumReport, char_poly, eigen


@dataclass(frozen=True, eq=False)
class TrajectorySample:
    t: float
    coefficients: np.ndarray


def propagators(rep: AdjointRep, times, spectrum: Optional[SpectrumReport] = None,
                method: str = "auto") -> np.ndarray:
    """exp(i t H) for every t, shape (len(times), 2K, 2K).

    ``method='auto'`` diagonalises when the eigenvalues are well separated
    and falls back to scaling and squaring near exceptional points, where the
    eigenvector matrix is ill-conditioned.
    """
    times = np.asarray(list(times) if not isinstance(times, np.ndarray) else times, dtype=float)
    if not np.all(np.isfinite(times)):
        raise ValueError("times must be finite")
    H = np.asarray(rep.matrixH)
    if method == "auto":
        spectrum = eigen(rep) if spectrum is None else spectrum
        method = "eig" if spectrum.min_gap >= COLLISION_TOL * spectrum.scale else "series"
    if method == "eig":
        spectrum = eigen(rep) if spectrum is None else spectrum
        C = spectrum.eigenvectors
        Cinv = np.linalg.inv(C)
        phases = np.exp(1j * np.outer(times, spectrum.eigenvalues))
        out = np.einsum("ij,tj,jk->tik", C, phases, Cinv)
    elif method == "series":
        out = kernels.expm_batch(1j * times[:, None, None] * H[None])
    else:
        raise ValueError(f"unknown method {method!r}")
    if not np.all(np.isfinite(out)):
        raise ConvergenceFailure("matrix exponential overflowed", max_time=float(np.abs(times).max()))
    return out


def evolve(rep: AdjointRep, times: Iterable[float], method: str = "auto") -> list:
    times = np.asarray(list(times), dtype=float)
    props = propagators(rep, times, method=method)
    return [TrajectorySample(float(t), props[k].T.copy()) for k, t in enumerate(times)]


def matrix_polynomial(coeffs, A: np.ndarray) -> np.ndarray:
    """Horner evaluation of sum_k coeffs[k] A^(deg-k)."""
    n = A.shape[0]
    out = np.zeros_like(A, dtype=complex)
    for c in coeffs:
        out = out @ A + c * np.eye(n)
    return out


def ode_residual(rep: AdjointRep, t: float) -> float:
    """||P(H) exp(itH)||_inf with P the characteristic polynomial.

    Zero by Cayley-Hamilton; it ties char_poly and the propagator together.
    """
    PH = matrix_polynomial(char_poly(rep), np.asarray(rep.matrixH))
    return float(np.abs(PH @ propagators(rep, [t])[0]).sum(axis=1).max())


def _central_weights(order: int, h: float) -> tuple:
    """Second-order accurate central stencil for the ``order``-th derivative."""
    r = (order + 1) // 2
    offsets = np.arange(-r, r + 1)
    # Taylor matching: sum_j w_j offset_j^m / m! = delta_{m,order}
    vander = np.array([offsets ** m for m in range(len(offsets))], dtype=float)
    rhs = np.zeros(len(offsets))
    rhs[order] = np.prod(np.arange(1, order + 1))
    return offsets, np.linalg.solve(vander, rhs) / h ** order


def fd_ode_residual(rep: AdjointRep, t: float, h: float, dps: Optional[int] = None) -> float:
    """Apply P(-i d/dt) to the sampled trajectory with central differences.

    The truncation error is O(h^2).  In double precision rounding adds about
    eps / h^(2K), which swamps the truncation term for small h once K = 2;
    passing ``dps`` samples and differences the trajectory with mpmath at
    that many decimal digits instead.
    """
    coeffs = char_poly(rep)
    deg = len(coeffs) - 1
    r = (deg + 1) // 2
    if dps is not None:
        return _fd_residual_mp(np.asarray(rep.matrixH), coeffs, t, h, dps)
    grid = t + h * np.arange(-r, r + 1)
    traj = np.array([s.coefficients for s in evolve(rep, grid)])
    total = np.zeros_like(traj[r])
    for k, c in enumerate(coeffs):
        order = deg - k
        if order == 0:
            deriv = traj[r]
        else:
            offsets, weights = _central_weights(order, h)
            deriv = np.tensordot(weights, traj[offsets + r], axes=1)
        total = total + c * (-1j) ** order * deriv
    return float(np.abs(total).max())


def _fd_residual_mp(H, coeffs, t, h, dps):
    import mpmath

    deg = len(coeffs) - 1
    r = (deg + 1) // 2
    with mpmath.workdps(dps):
        A = mpmath.matrix(H.tolist())
        t, h = mpmath.mpf(t), mpmath.mpf(h)
        traj = {k: mpmath.expm(1j * (t + k * h) * A) for k in range(-r, r + 1)}
        total = mpmath.zeros(*H.shape)
        for k, c in enumerate(coeffs):
            order = deg - k
            if order == 0:
                deriv = traj[0]
            else:
                rr = (order + 1) // 2
                offs = list(range(-rr, rr + 1))
                vander = mpmath.matrix([[mpmath.mpf(o) ** m for o in offs] for m in range(len(offs))])
                rhs = mpmath.matrix([mpmath.factorial(order) if m == order else 0 for m in range(len(offs))])
                w = mpmath.lu_solve(vander, rhs)
                deriv = sum((w[i] * traj[o] for i, o in enumerate(offs)), mpmath.zeros(*H.shape)) / h ** order
            total += mpmath.mpc(c) * (-1j) ** order * deriv
        return float(max(abs(total[i, j]) for i in range(H.shape[0]) for j in range(H.shape[1])))


def growth_exponent(rep: AdjointRep, times) -> float:
    """Slope of log ||coefficients(t)|| from a least-squares line fit."""
    times = np.asarray(times, dtype=float)
    norms = np.array([np.linalg.norm(p, 2) for p in propagators(rep, times)])
    slope, _ = np.polyfit(times, np.log(norms), 1)
    return float(slope)
