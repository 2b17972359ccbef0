import numpy as np
import pytest
import sympy as sp

from quadham.adjrep import build_adjoint, gamma_to_adjoint
from quadham.errors import DimensionMismatch, InvalidParam, NotAvailable
from quadham.models import (
    ModelSpec,
    angular_xi_misprint,
    classify_reality,
    closed_form,
    closed_form_is_real,
    exceptional_points,
    expected_charpoly,
    hamiltonian,
    instantiate,
    model_gamma,
    xi_values,
)
from quadham.spectra import char_poly, eigen

TWO_D = ["coupled_xy", "coupled_pp", "angular"]


def test_spec_validation():
    with pytest.raises(InvalidParam):
        ModelSpec("coupled_xy", a=0.0)
    with pytest.raises(InvalidParam):
        ModelSpec("nonsense")
    with pytest.raises(DimensionMismatch):
        ModelSpec("oned", K=2)
    with pytest.raises(InvalidParam):
        ModelSpec("custom")
    with pytest.raises(DimensionMismatch):
        ModelSpec("custom", gamma=np.eye(3))
    with pytest.raises(DimensionMismatch):
        ModelSpec("custom", K=1, gamma=np.eye(4))
    assert ModelSpec("custom", gamma=np.eye(6)).K == 3
    assert ModelSpec("oned", a=-1.0).K == 1  # a is unused by the 1D model


def test_with_param():
    spec = ModelSpec("coupled_xy", a=2.0, b=1 + 2j)
    assert spec.with_param("b_real", 3.0).b == 3 + 2j
    assert spec.with_param("b_imag", -1.0).b == 1 - 1j
    assert spec.with_param("a", 5.0).a == 5.0
    with pytest.raises(InvalidParam):
        spec.with_param("a", -1.0)
    with pytest.raises(InvalidParam):
        spec.with_param("c", 0.0)


def test_closed_form_examples():
    np.testing.assert_allclose(closed_form(ModelSpec("oned", b=0.5)).eigenvalues, [-np.sqrt(3), np.sqrt(3)])
    xi = xi_values(ModelSpec("coupled_pp", a=2.0, b=1j))
    np.testing.assert_allclose(sorted(xi, key=lambda z: z.imag), [6 - 2j, 6 + 2j])
    np.testing.assert_allclose(closed_form(ModelSpec("angular", a=1.0, b=1.0)).eigenvalues, [-3, -1, 1, 3])
    with pytest.raises(NotAvailable):
        xi_values(ModelSpec("custom", gamma=np.eye(2)))


def _symbolic_matrix(name):
    # adjoint matrices derived by hand from the commutators, as sympy objects
    a, b, lam = sp.symbols("a b lam")
    I = sp.I
    if name == "coupled_xy":
        H = sp.Matrix([[0, 0, 2 * I, I * b], [0, 0, I * b, 2 * I * a], [-2 * I, 0, 0, 0], [0, -2 * I, 0, 0]])
    else:
        H = sp.Matrix([[0, 0, 2 * I, 0], [0, 0, 0, 2 * I * a], [-2 * I, -I * b, 0, 0], [-I * b, -2 * I, 0, 0]])
    return H, (a, b, lam)


@pytest.mark.parametrize("name", ["coupled_xy", "coupled_pp"])
def test_charpoly_against_symbolic_matrix(name):
    H, (a, b, lam) = _symbolic_matrix(name)
    poly = sp.Poly((H - lam * sp.eye(4)).det(), lam)
    for av, bv in [(2.0, 1.0), (0.5, 0.7j), (3.0, 1.5)]:
        coeffs = [complex(c.subs({a: av, b: bv})) for c in poly.all_coeffs()]
        np.testing.assert_allclose(coeffs, expected_charpoly(ModelSpec(name, a=av, b=bv)), atol=1e-12)


def test_angular_charpoly_symbolic_from_commutators():
    # matrix entries are linear in (a, b), so three samples give the symbolic matrix
    a, b = sp.symbols("a b")
    rep_num = build_adjoint(hamiltonian(ModelSpec("angular", a=2.0, b=0.5)))

    def mat(av, bv):
        return np.asarray(build_adjoint(hamiltonian(ModelSpec("angular", a=av, b=bv))).matrixH)

    M0 = mat(1.0, 0.0)
    Ma = mat(2.0, 0.0) - M0
    Mb = mat(1.0, 1.0) - M0
    Hs = sp.Matrix(4, 4, lambda i, j: sp.nsimplify(M0[i, j]) + (a - 1) * sp.nsimplify(Ma[i, j]) + b * sp.nsimplify(Mb[i, j]))
    np.testing.assert_allclose(
        np.array(Hs.subs({a: 2.0, b: 0.5})).astype(complex), rep_num.matrixH, atol=1e-14
    )
    lam = sp.symbols("lam")
    p = sp.Poly(sp.expand((Hs - lam * sp.eye(4)).det()), lam)
    c = p.all_coeffs()
    assert sp.simplify(c[4] - (b**2 - 4) * (b**2 - 4 * a)) == 0
    assert sp.simplify(c[2] + (4 * a + 2 * b**2 + 4)) == 0


def test_angular_printed_form_disagrees():
    spec = ModelSpec("angular", a=1.0, b=1.0)
    printed = np.sort(np.sqrt(angular_xi_misprint(1.0, 1.0)).real)
    np.testing.assert_allclose(printed, [np.sqrt(3), np.sqrt(7)])
    got = eigen(build_adjoint(hamiltonian(spec))).eigenvalues
    assert np.abs(got[2:].real - printed).max() > 0.1
    # uncoupled oscillators (b = 0) need xi = {4a, 4}; the printed form only gets this at a = 1
    np.testing.assert_allclose(xi_values(ModelSpec("angular", a=2.0, b=0.0)), [8, 4])
    np.testing.assert_allclose(angular_xi_misprint(2.0, 0.0), [7, 5])
    np.testing.assert_allclose(angular_xi_misprint(1.0, 0.0), [4, 4])


@pytest.mark.parametrize("name", TWO_D)
def test_grid_closed_forms(name):
    for a in np.linspace(0.5, 4.0, 8):
        for b in list(np.linspace(0, 4, 6)) + list(1j * np.linspace(0, 2, 6)):
            spec = ModelSpec(name, a=a, b=b)
            got = eigen(gamma_to_adjoint(model_gamma(spec))).eigenvalues
            expected = closed_form(spec).eigenvalues
            assert np.abs(got - expected).max() <= 1e-9 * np.abs(expected).max()
            np.testing.assert_allclose(
                char_poly(gamma_to_adjoint(model_gamma(spec))), expected_charpoly(spec), rtol=1e-9, atol=1e-9
            )


@pytest.mark.parametrize("name", ["oned"] + TWO_D)
def test_reality_windows_match_numerics(name):
    for a in (0.5, 1.0, 2.0, 4.0):
        for b in list(np.linspace(0, 5, 21)) + list(1j * np.linspace(0, 3, 21)) + [0.7 + 0.7j]:
            spec = ModelSpec(name, a=a, b=b)
            loci = [abs(l.b_squared - (spec.b**2).real) for l in exceptional_points(spec)]
            if min(loci) < 1e-6:
                continue  # on a locus both answers are tolerance-dependent
            assert classify_reality(spec).agrees, (name, a, b)


def test_exceptional_points():
    assert [l.value for l in exceptional_points(ModelSpec("oned"))] == [1.0]
    xy = exceptional_points(ModelSpec("coupled_xy", a=4.0))
    assert xy[0].axis == "b_real" and xy[0].value == 4.0
    pp = exceptional_points(ModelSpec("coupled_pp", a=3.0))
    assert pp[1].axis == "b_imag" and abs(pp[1].value - 2 / np.sqrt(3)) < 1e-15
    ang1 = exceptional_points(ModelSpec("angular", a=1.0))
    assert [l.b_squared for l in ang1] == [4.0, 0.0]
    assert len(exceptional_points(ModelSpec("angular", a=2.0))) == 3
    with pytest.raises(NotAvailable):
        exceptional_points(ModelSpec("custom", gamma=np.eye(2)))


def test_closed_form_is_real_boundaries_inclusive():
    assert closed_form_is_real(ModelSpec("oned", b=1.0))
    assert closed_form_is_real(ModelSpec("coupled_xy", a=4.0, b=4.0))
    assert not closed_form_is_real(ModelSpec("coupled_xy", a=4.0, b=4.01))
    # angular at a=1: touching point at b=2, real on both sides
    assert closed_form_is_real(ModelSpec("angular", a=1.0, b=1.9))
    assert closed_form_is_real(ModelSpec("angular", a=1.0, b=2.1))


def test_instantiate_and_custom_roundtrip(rng):
    H, cf = instantiate(ModelSpec("oned", b=0.5))
    assert cf is not None and H.degree() == 2
    g = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    g = 0.5 * (g + g.T)
    spec = ModelSpec("custom", gamma=g, constant=1.5)
    H, cf = instantiate(spec)
    assert cf is None
    assert H.scalar_part() != 0
    np.testing.assert_allclose(gamma_to_adjoint(g).matrixH, build_adjoint(H).matrixH, atol=1e-12)
