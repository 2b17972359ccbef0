"""Batched numeric kernels.

Every kernel exists twice: an explicit-loop version compiled with numba and a
vectorised numpy version.  ``BACKEND`` (see ``_accel``) picks which one the
public names dispatch to; both are importable so tests and the benchmark can
compare them directly.

All batch arguments are ``(B, n, n)`` complex128 stacks; polynomial
coefficients are stored highest degree first.
"""

import math

import numpy as np

from ._accel import BACKEND, njit

__all__ = [
    "BACKEND",
    "charpoly_batch",
    "poly_roots_batch",
    "expm_batch",
]

_ROOT_MAXITER = 800
_TAYLOR_MAXTERMS = 40


# ---------------------------------------------------------------------------
# characteristic polynomial (Faddeev-LeVerrier)


@njit
def _charpoly_nb(mats):
    nb, n, _ = mats.shape
    out = np.zeros((nb, n + 1), dtype=np.complex128)
    M = np.zeros((n, n), dtype=np.complex128)
    AM = np.zeros((n, n), dtype=np.complex128)
    for s in range(nb):
        A = mats[s]
        out[s, 0] = 1.0
        for i in range(n):
            for j in range(n):
                M[i, j] = 0.0
        for k in range(1, n + 1):
            # M_k = A M_{k-1} + c_{k-1} I
            for i in range(n):
                for j in range(n):
                    acc = 0.0j
                    for l in range(n):
                        acc += A[i, l] * M[l, j]
                    AM[i, j] = acc
            for i in range(n):
                for j in range(n):
                    M[i, j] = AM[i, j]
                M[i, i] += out[s, k - 1]
            tr = 0.0j
            for i in range(n):
                for l in range(n):
                    tr += A[i, l] * M[l, i]
            out[s, k] = -tr / k
    return out


def _charpoly_np(mats):
    nb, n, _ = mats.shape
    out = np.zeros((nb, n + 1), dtype=np.complex128)
    out[:, 0] = 1.0
    eye = np.eye(n, dtype=np.complex128)
    M = np.zeros_like(mats)
    for k in range(1, n + 1):
        M = mats @ M + out[:, k - 1, None, None] * eye
        out[:, k] = -np.einsum("bil,bli->b", mats, M) / k
    return out


# ---------------------------------------------------------------------------
# polynomial roots (Aberth-Ehrlich vs. companion-matrix eigenvalues)


@njit
def _roots_nb(coeffs):
    nb, m = coeffs.shape
    d = m - 1
    roots = np.zeros((nb, d), dtype=np.complex128)
    converged = np.zeros(nb, dtype=np.bool_)
    if d == 0:
        converged[:] = True
        return roots, converged
    c = np.zeros(m, dtype=np.complex128)
    z = np.zeros(d, dtype=np.complex128)
    for s in range(nb):
        for j in range(m):
            c[j] = coeffs[s, j] / coeffs[s, 0]
        bound = 0.0
        for j in range(1, m):
            bound = max(bound, abs(c[j]))
        radius = abs(c[d]) ** (1.0 / d) if abs(c[d]) > 0.0 else 0.5 * (1.0 + bound)
        radius = max(radius, 1e-3)
        for k in range(d):
            z[k] = radius * np.exp(1j * (2.0 * np.pi * k / d + 0.4))
        ok = False
        for _ in range(_ROOT_MAXITER):
            worst = 0.0
            for k in range(d):
                p = c[0]
                dp = 0.0j
                for j in range(1, m):
                    dp = dp * z[k] + p
                    p = p * z[k] + c[j]
                if p == 0.0:
                    continue
                repulsion = 0.0j
                for j in range(d):
                    if j != k:
                        diff = z[k] - z[j]
                        if diff != 0.0:
                            repulsion += 1.0 / diff
                if dp == 0.0:
                    step = 1e-8 * (1.0 + abs(z[k]))
                else:
                    ratio = p / dp
                    step = ratio / (1.0 - ratio * repulsion)
                z[k] -= step
                worst = max(worst, abs(step) / max(1.0, abs(z[k])))
            if worst < 1e-15:
                ok = True
                break
        for k in range(d):
            roots[s, k] = z[k]
        converged[s] = ok
    return roots, converged


def _roots_np(coeffs):
    nb, m = coeffs.shape
    d = m - 1
    if d == 0:
        return np.zeros((nb, 0), dtype=np.complex128), np.ones(nb, dtype=bool)
    monic = coeffs[:, 1:] / coeffs[:, :1]
    comp = np.zeros((nb, d, d), dtype=np.complex128)
    comp[:, 0, :] = -monic
    if d > 1:
        comp[:, np.arange(1, d), np.arange(d - 1)] = 1.0
    roots = np.linalg.eigvals(comp)
    return roots, np.ones(nb, dtype=bool)


# ---------------------------------------------------------------------------
# matrix exponential (scaling and squaring with a truncated Taylor series)


@njit
def _expm_nb(mats):
    nb, n, _ = mats.shape
    out = np.zeros((nb, n, n), dtype=np.complex128)
    A = np.zeros((n, n), dtype=np.complex128)
    term = np.zeros((n, n), dtype=np.complex128)
    tmp = np.zeros((n, n), dtype=np.complex128)
    total = np.zeros((n, n), dtype=np.complex128)
    for s in range(nb):
        norm1 = 0.0
        for j in range(n):
            col = 0.0
            for i in range(n):
                col += abs(mats[s, i, j])
            norm1 = max(norm1, col)
        squarings = 0
        if norm1 > 0.5:
            squarings = int(math.ceil(math.log2(norm1 / 0.5)))
        scale = 2.0 ** (-squarings)
        for i in range(n):
            for j in range(n):
                A[i, j] = mats[s, i, j] * scale
                term[i, j] = 1.0 if i == j else 0.0
                total[i, j] = term[i, j]
        for k in range(1, _TAYLOR_MAXTERMS):
            tnorm = 0.0
            for i in range(n):
                for j in range(n):
                    acc = 0.0j
                    for l in range(n):
                        acc += term[i, l] * A[l, j]
                    tmp[i, j] = acc / k
            for i in range(n):
                for j in range(n):
                    term[i, j] = tmp[i, j]
                    total[i, j] += tmp[i, j]
                    tnorm = max(tnorm, abs(tmp[i, j]))
            if tnorm < 1e-18:
                break
        for _ in range(squarings):
            for i in range(n):
                for j in range(n):
                    acc = 0.0j
                    for l in range(n):
                        acc += total[i, l] * total[l, j]
                    tmp[i, j] = acc
            for i in range(n):
                for j in range(n):
                    total[i, j] = tmp[i, j]
        for i in range(n):
            for j in range(n):
                out[s, i, j] = total[i, j]
    return out


def _expm_np(mats):
    nb, n, _ = mats.shape
    norm1 = np.abs(mats).sum(axis=1).max(axis=1)
    squarings = np.where(norm1 > 0.5, np.ceil(np.log2(np.maximum(norm1, 0.5) / 0.5)), 0).astype(int)
    A = mats * (2.0 ** -squarings)[:, None, None]
    term = np.broadcast_to(np.eye(n, dtype=np.complex128), mats.shape).copy()
    total = term.copy()
    for k in range(1, _TAYLOR_MAXTERMS):
        term = term @ A / k
        total += term
        if np.abs(term).max() < 1e-18:
            break
    for level in range(int(squarings.max(initial=0))):
        need = squarings > level
        total[need] = total[need] @ total[need]
    return total


# ---------------------------------------------------------------------------
# dispatch

if BACKEND == "numba":
    _charpoly, _roots, _expm = _charpoly_nb, _roots_nb, _expm_nb
else:
    _charpoly, _roots, _expm = _charpoly_np, _roots_np, _expm_np


def _as_stack(mats):
    arr = np.ascontiguousarray(mats, dtype=np.complex128)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ValueError(f"expected a stack of square matrices, got shape {arr.shape}")
    return arr


def charpoly_batch(mats):
    """Coefficients of det(lambda*I - A) for each matrix, highest degree first."""
    return _charpoly(_as_stack(mats))


def poly_roots_batch(coeffs):
    """Roots of each row of ``coeffs`` (leading coefficient must be nonzero).

    Returns ``(roots, converged)``; ``converged`` is all-True on the numpy path.
    """
    arr = np.ascontiguousarray(np.atleast_2d(coeffs), dtype=np.complex128)
    return _roots(arr)


def expm_batch(mats):
    """Matrix exponential of every matrix in the stack."""
    return _expm(_as_stack(mats))
