import numpy as np
import pytest

from quadham.adjrep import build_adjoint, build_U, gamma_to_adjoint
from quadham.errors import DimensionMismatch, UnsupportedDimension
from quadham.models import ModelSpec, hamiltonian
from quadham.spectra import REAL_TOL, eigen
from quadham.symmetry import (
    Kind,
    SymmetrySpec,
    builtin_symmetries,
    builtin_symmetry,
    check_symmetry,
    exact_implies_real,
    exactness,
    multiset_close,
)


def rep_of(name, **kw):
    return build_adjoint(hamiltonian(ModelSpec(name, **kw)))


@pytest.mark.parametrize("K", [1, 2])
def test_catalog_u_relations_exact(K):
    U = build_U(K)
    for sym in builtin_symmetries(K):
        assert sym.u_error(U) == 0.0, sym.label


def test_catalog_entries():
    np.testing.assert_array_equal(builtin_symmetry(1, "PT").matrix, np.diag([-1, 1]))
    np.testing.assert_array_equal(builtin_symmetry(2, "A_x").matrix, np.diag([-1, 1, 1, -1]))
    np.testing.assert_array_equal(builtin_symmetry(2, "A_y").matrix, np.diag([1, -1, -1, 1]))
    with pytest.raises(UnsupportedDimension):
        builtin_symmetries(3)
    with pytest.raises(KeyError):
        builtin_symmetry(2, "nope")


def test_oned_pt_for_imaginary_b():
    rep = rep_of("oned", b=0.8j)
    A = builtin_symmetry(1, "PT")
    rpt = check_symmetry(rep, A)
    assert rpt.holds and rpt.conjugation_closed
    np.testing.assert_array_equal(A.matrix @ A.matrix, np.eye(2))
    # the negated representative satisfies the same relations
    neg = SymmetrySpec(Kind.ANTIUNITARY, -A.matrix, "-PT")
    assert check_symmetry(rep, neg).holds


def test_oned_pt_fails_for_real_b():
    assert not check_symmetry(rep_of("oned", b=0.5), builtin_symmetry(1, "PT")).commutes


@pytest.mark.parametrize("name", ["coupled_xy", "coupled_pp"])
@pytest.mark.parametrize("label", ["A_x", "A_y"])
def test_partial_pt_for_imaginary_b(name, label):
    rep = rep_of(name, a=2.0, b=0.9j)
    assert check_symmetry(rep, builtin_symmetry(2, label)).holds
    # full T fails: the coupling term is odd under it
    assert not check_symmetry(rep, builtin_symmetry(2, "PT")).commutes


def test_angular_time_reversal_for_imaginary_b():
    rep = rep_of("angular", a=1.5, b=0.4j)
    assert check_symmetry(rep, builtin_symmetry(2, "T")).holds
    assert check_symmetry(rep, builtin_symmetry(2, "PT")).holds


def test_unitary_eigvecs_invariant_for_simple_spectrum():
    rep = rep_of("coupled_xy", a=2.0, b=0.0)
    for label in ("S_x", "S_y", "P"):
        rpt = check_symmetry(rep, builtin_symmetry(2, label))
        assert rpt.holds and rpt.eigvecs_invariant


def test_unitary_broken_by_coupling():
    rpt = check_symmetry(rep_of("coupled_xy", a=2.0, b=0.5), builtin_symmetry(2, "S_x"))
    assert not rpt.commutes
    assert rpt.u_relation


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        check_symmetry(rep_of("oned"), builtin_symmetry(2, "P"))
    with pytest.raises(DimensionMismatch):
        SymmetrySpec(Kind.UNITARY, np.eye(3))


def test_exactness_real_and_broken():
    rep = rep_of("oned", b=0.5j)
    verdicts = exactness(rep, builtin_symmetry(1, "PT"))
    assert [v.verdict for v in verdicts] == ["exact", "exact"]
    np.testing.assert_allclose([v.eigenvalue for v in verdicts], [-np.sqrt(5), np.sqrt(5)], atol=1e-12)

    rep = rep_of("coupled_xy", a=1.0, b=1j)
    verdicts = exactness(rep, builtin_symmetry(2, "A_x"))
    assert all(v.verdict == "broken" for v in verdicts)


def test_exactness_skips_clusters():
    rep = rep_of("oned", b=0.0)  # Hermitian, simple
    assert all(v.verdict == "exact" for v in exactness(rep, builtin_symmetry(1, "T")))
    rep = rep_of("coupled_xy", a=1.0, b=0.0)  # doubly degenerate
    assert all(v.verdict == "skipped" for v in exactness(rep, builtin_symmetry(2, "A_x")))


def test_exactness_requires_antiunitary():
    with pytest.raises(ValueError):
        exactness(rep_of("oned"), builtin_symmetry(1, "P"))


def test_exact_implies_real_on_random_pt_models(rng):
    # K=2 with x<->x, y<->y, px<->-px, py<->-py symmetry: gamma entries real on
    # xx/pp blocks, imaginary on xp blocks
    A = builtin_symmetry(2, "T")
    for _ in range(30):
        g = np.zeros((4, 4), dtype=complex)
        g[:2, :2] = rng.normal(size=(2, 2))
        g[2:, 2:] = rng.normal(size=(2, 2))
        g[:2, 2:] = 1j * rng.normal(size=(2, 2))
        g = 0.5 * (g + g.T)
        rep = gamma_to_adjoint(g)
        rpt = check_symmetry(rep, A, tol=1e-12)
        assert rpt.holds and rpt.conjugation_closed
        spectrum = eigen(rep)
        verdicts = exactness(rep, A, spectrum)
        assert exact_implies_real(verdicts, spectrum.scale)
        for v in verdicts:
            if v.verdict == "broken":
                assert abs(v.eigenvalue.imag) > REAL_TOL * spectrum.scale


def test_multiset_close():
    assert multiset_close([1, 2, 2], [2, 1, 2], 1e-12)
    assert not multiset_close([1, 1, 2], [1, 2, 2], 1e-12)
    assert not multiset_close([1], [1, 2], 1.0)
