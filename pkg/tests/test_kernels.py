import json
import os
import subprocess
import sys

import numpy as np
import pytest
import scipy.linalg

from quadham import kernels
from quadham._accel import HAS_NUMBA

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba not importable")


def _stack(rng, batch, n):
    return rng.normal(size=(batch, n, n)) + 1j * rng.normal(size=(batch, n, n))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_charpoly_numpy_matches_np_poly(rng, n):
    mats = _stack(rng, 20, n)
    got = kernels._charpoly_np(mats)
    for m, c in zip(mats, got):
        np.testing.assert_allclose(c, np.poly(m), rtol=1e-10, atol=1e-10)


@needs_numba
@pytest.mark.parametrize("n", [2, 4, 6])
def test_charpoly_backends_agree(rng, n):
    mats = _stack(rng, 50, n)
    np.testing.assert_allclose(kernels._charpoly_nb(mats), kernels._charpoly_np(mats), atol=1e-10)


def _match(a, b):
    # compare root multisets independent of order
    return max(np.abs(np.sort_complex(a) - np.sort_complex(b)))


@pytest.mark.parametrize("backend", ["numpy", pytest.param("numba", marks=needs_numba)])
def test_roots_against_np_roots(rng, backend):
    fn = kernels._roots_np if backend == "numpy" else kernels._roots_nb
    coeffs = np.concatenate([np.ones((30, 1)), rng.normal(size=(30, 3)) + 1j * rng.normal(size=(30, 3))], axis=1)
    roots, converged = fn(np.ascontiguousarray(coeffs, dtype=complex))
    assert converged.all()
    for c, r in zip(coeffs, roots):
        assert _match(r, np.roots(c)) < 1e-10


@needs_numba
def test_aberth_double_root_flags_or_converges():
    # (z - 1)^2 (z + 2): Aberth converges slowly at the double root, accuracy ~ sqrt(eps)
    coeffs = np.array([np.poly([1.0, 1.0, -2.0])], dtype=complex)
    roots, _ = kernels._roots_nb(coeffs)
    assert _match(roots[0], np.array([1.0, 1.0, -2.0])) < 1e-6


@pytest.mark.parametrize("backend", ["numpy", pytest.param("numba", marks=needs_numba)])
@pytest.mark.parametrize("n", [2, 4, 6])
def test_expm_against_scipy(rng, backend, n):
    fn = kernels._expm_np if backend == "numpy" else kernels._expm_nb
    mats = 0.8 * _stack(rng, 10, n)
    got = fn(np.ascontiguousarray(mats))
    for m, e in zip(mats, got):
        ref = scipy.linalg.expm(m)
        assert np.abs(e - ref).max() <= 1e-12 * max(1.0, np.abs(ref).max())


def test_expm_large_norm_scales(rng):
    m = 1j * 30.0 * np.diag([1.0, -1.0, 2.0, -2.0]).astype(complex)
    got = kernels.expm_batch(m)[0]
    np.testing.assert_allclose(got, np.diag(np.exp(np.diag(m))), atol=1e-10)


def test_expm_nilpotent_exact():
    m = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    np.testing.assert_allclose(kernels.expm_batch(3.0 * m)[0], [[1, 3], [0, 1]], atol=1e-14)


def test_stack_validation():
    with pytest.raises(ValueError):
        kernels.charpoly_batch(np.zeros((2, 3)))


def test_backend_flag_selects_numpy():
    env = dict(os.environ, QUADHAM_BACKEND="numpy")
    code = (
        "import json, numpy as np; from quadham import kernels, eigen, gamma_to_adjoint;"
        "print(kernels.BACKEND);"
        "r = eigen(gamma_to_adjoint(np.diag([1.0, 2.0, 1.0, 1.0])));"
        "print(json.dumps(r.eigenvalues.real.tolist()))"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    lines = out.stdout.split("\n")
    assert lines[0] == "numpy"
    from quadham import eigen, gamma_to_adjoint

    here = eigen(gamma_to_adjoint(np.diag([1.0, 2.0, 1.0, 1.0]))).eigenvalues.real
    np.testing.assert_allclose(json.loads(lines[1]), here, atol=1e-12)
