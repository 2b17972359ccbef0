"""Reproduction suite behind ``quadham verify``.

Every check compares a computed quantity with a closed-form or published
value and records (name, expected, got, tolerance, passed).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .adjrep import build_adjoint, build_U, check_structure, commutator_U, gamma_to_adjoint
from .dynamics import ode_residual, propagators
from .models import (
    ModelSpec,
    angular_xi_misprint,
    closed_form,
    exceptional_points,
    expected_charpoly,
    hamiltonian,
    model_gamma,
)
from .spectra import char_poly, defect_info, eigen, jordan_form, ladder_system
from .sweep import EpFindConfig, SweepConfig, ep_find, run_sweep
from .symmetry import builtin_symmetries, builtin_symmetry, check_symmetry, exactness


@dataclass(frozen=True)
class Check:
    name: str
    expected: str
    got: str
    tol: float
    passed: bool


def _rep(spec):
    return build_adjoint(hamiltonian(spec))


def _fmt(z) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-15:
        return f"{z.real:.10g}"
    return f"{z.real:.10g}{z.imag:+.10g}j"


def _vec(v) -> str:
    return "[" + ", ".join(_fmt(z) for z in v) + "]"


def _close(name, expected, got, tol, rel=False):
    expected, got = np.atleast_1d(np.asarray(expected, complex)), np.atleast_1d(np.asarray(got, complex))
    err = np.abs(expected - got)
    if rel:
        err = err / np.maximum(np.abs(expected), 1e-300)
    return Check(name, _vec(expected), _vec(got), tol, bool(err.max() <= tol))


def _flag(name, expected, got, tol=0.0):
    return Check(name, str(expected), str(got), tol, expected == got)


def _bound(name, value, tol):
    return Check(name, f"< {tol:g}", f"{value:.3g}", tol, bool(value < tol))


# ---------------------------------------------------------------------------


def check_oned_spectrum():
    spec = ModelSpec("oned", b=0.5)
    yield _close("oned b=0.5 eigenvalues", [-np.sqrt(3), np.sqrt(3)], eigen(_rep(spec)).eigenvalues, 1e-10)
    spec = ModelSpec("oned", b=0.5j)
    yield _close("oned b=0.5i eigenvalues", [-np.sqrt(5), np.sqrt(5)], eigen(_rep(spec)).eigenvalues, 1e-10)


def check_oned_ep():
    for b in (1.0, -1.0):
        rep = _rep(ModelSpec("oned", b=b))
        spectrum = eigen(rep)
        yield _flag(f"oned b={b:g} classification", "ExceptionalCandidate", str(spectrum.classification))
        info = defect_info(rep, 0.0, spectrum=spectrum)
        yield _flag(f"oned b={b:g} (algebraic, geometric)", (2, 1), (info.algebraic, info.geometric))
        v = info.eigenvectors[:, 0]
        yield _close(f"oned b={b:g} eigenvector", np.array([1, b]) / np.sqrt(2), v, 1e-8)
        jf = jordan_form(rep, spectrum=spectrum)
        yield _close(f"oned b={b:g} Jordan J", [0, 1, 0, 0], jf.J.ravel(), 1e-12)
        yield _bound(f"oned b={b:g} Jordan residual", jf.residual, 1e-9)


def check_ground_energy():
    for b in (0.6, 0.5, 0.5j):
        lad = ladder_system(_rep(ModelSpec("oned", b=b)))
        yield _close(f"oned b={_fmt(b)} E0 = sqrt(1-b^2)", np.sqrt(1 - complex(b) ** 2), lad.E0, 1e-9)
    for name in ("coupled_xy", "coupled_pp", "angular"):
        lad = ladder_system(_rep(ModelSpec(name, a=1.0, b=0.0)))
        yield _close(f"{name} a=1 b=0 E0", 2.0, lad.E0, 1e-9)


def check_closed_forms():
    cases = [
        ModelSpec("coupled_xy", a=2.0, b=1.0),
        ModelSpec("coupled_xy", a=1.0, b=1j),
        ModelSpec("coupled_pp", a=2.0, b=1j),
        ModelSpec("coupled_pp", a=3.0, b=0.5),
        ModelSpec("angular", a=1.0, b=1.0),
        ModelSpec("angular", a=2.5, b=0.3j),
    ]
    for spec in cases:
        got = eigen(_rep(spec)).eigenvalues
        yield _close(f"{spec.name} a={spec.a:g} b={_fmt(spec.b)} eigenvalues", closed_form(spec).eigenvalues, got,
                     1e-9, rel=True)
        yield _close(f"{spec.name} a={spec.a:g} b={_fmt(spec.b)} quartic charpoly",
                     expected_charpoly(spec), char_poly(_rep(spec)), 1e-9)
    spec = ModelSpec("coupled_pp", a=2.0, b=1j)
    yield _close("coupled_pp a=2 b=i squared frequencies", [6 + 2j, 6 - 2j],
                 sorted(np.square(eigen(_rep(spec)).eigenvalues[2:]), key=lambda z: -z.imag), 1e-9)
    spec = ModelSpec("coupled_xy", a=1.0, b=1j)
    yield _flag("coupled_xy a=1 b=i classification", "Complex", str(eigen(_rep(spec)).classification))


def check_errata():
    for b in (0.7, 1.3j):
        xy = _rep(ModelSpec("coupled_xy", a=2.0, b=b)).matrixH
        pp_spec = ModelSpec("coupled_pp", a=2.0, b=b)
        pp = _rep(pp_spec).matrixH
        diff = float(np.abs(xy - pp).max())
        yield Check(f"coupled_pp matrix differs from coupled_xy (b={_fmt(b)})", "> 0", f"{diff:.3g}", 0.0, diff > 0)
        yield _close(f"coupled_pp b={_fmt(b)} eigenvalues vs xi formula", closed_form(pp_spec).eigenvalues,
                     eigen(_rep(pp_spec)).eigenvalues, 1e-9, rel=True)
    got = eigen(_rep(ModelSpec("angular", a=1.0, b=1.0))).eigenvalues
    yield _close("angular a=1 b=1 eigenvalues (corrected xi)", [-3, -1, 1, 3], got, 1e-10)
    printed = np.sort(np.sqrt(angular_xi_misprint(1.0, 1.0)).real)
    miss = float(np.abs(printed - np.array([1.0, 3.0])).max())
    yield Check("angular printed xi does not reproduce the spectrum", "mismatch", f"{miss:.3g}", 1e-9, miss > 1e-9)


def check_exceptional_points():
    cases = [
        (ModelSpec("oned"), "b_real", 0.5, 1.5, 1.0),
        (ModelSpec("coupled_xy", a=4.0), "b_real", 3.0, 5.0, 4.0),
        (ModelSpec("coupled_xy", a=2.0), "b_real", 2.0, 3.5, 2 * np.sqrt(2)),
        (ModelSpec("coupled_pp", a=3.0), "b_imag", 0.5, 2.0, 2 / np.sqrt(3)),
        (ModelSpec("coupled_pp", a=2.0), "b_imag", 0.0, 1.5, 1 / np.sqrt(2)),
        (ModelSpec("angular", a=2.0), "b_real", 1.5, 2.5, 2.0),
    ]
    for spec, axis, lo, hi, expected in cases:
        res = ep_find(EpFindConfig(spec, axis, lo, hi, 1e-8))
        yield _close(f"ep-find {spec.name} a={spec.a:g} {axis} in [{lo:g},{hi:g}]", expected, res.value, 1e-7)
    loci = exceptional_points(ModelSpec("coupled_xy", a=4.0))
    yield _close("coupled_xy a=4 real-side EP locus", 4.0, loci[0].value, 1e-12)


def check_sweeps():
    rows = run_sweep(SweepConfig(ModelSpec("coupled_xy", a=4.0), "b_real", 0.0, 5.0, 51))
    flips = [r.param for r, s in zip(rows, rows[1:]) if (r.classification == "Complex") != (s.classification == "Complex")]
    yield Check("sweep coupled_xy a=4: single flip near b=4", "b in [3.9, 4.2]", str(flips), 0.1,
                len(flips) == 1 and 3.9 <= flips[0] <= 4.2)
    rows = run_sweep(SweepConfig(ModelSpec("oned"), "b_imag", -3.0, 3.0, 61))
    nonreal = sum(r.classification != "AllReal" for r in rows)
    yield _flag("sweep oned b_imag in [-3,3]: all AllReal", 0, nonreal)


def check_symmetries():
    for K in (1, 2):
        U = build_U(K)
        worst = max(s.u_error(U) for s in builtin_symmetries(K))
        yield _bound(f"K={K} catalog U relations", worst, 1e-12)
    yield _bound("U from commutators (K=2)", float(np.abs(commutator_U(2) - build_U(2)).max()), 1e-15)
    rep = _rep(ModelSpec("oned", b=0.7j))
    pt = builtin_symmetry(1, "PT")
    yield _flag("oned b=0.7i PT commutes", True, check_symmetry(rep, pt).commutes)
    yield _close("oned PT squares to identity", np.eye(2).ravel(), (pt.matrix @ pt.matrix).ravel(), 0.0)
    verdicts = exactness(rep, pt)
    yield _flag("oned b=0.7i PT exact on both eigenvectors", ["exact", "exact"], [v.verdict for v in verdicts])
    for label in ("A_x", "A_y"):
        rep = _rep(ModelSpec("coupled_xy", a=2.0, b=0.8j))
        yield _flag(f"coupled_xy b=0.8i {label} holds", True, check_symmetry(rep, builtin_symmetry(2, label)).holds)
    rep = _rep(ModelSpec("angular", a=1.5, b=0.4j))
    yield _flag("angular b=0.4i T holds", True, check_symmetry(rep, builtin_symmetry(2, "T")).holds)
    rep = _rep(ModelSpec("coupled_xy", a=1.0, b=1j))
    verdicts = exactness(rep, builtin_symmetry(2, "A_x"))
    yield _flag("coupled_xy a=1 b=i A_x broken", True, all(v.verdict == "broken" for v in verdicts))


def check_structure_invariants():
    for spec in (ModelSpec("oned", b=0.3), ModelSpec("coupled_xy", a=2.0, b=1.0), ModelSpec("angular", a=3.0, b=0.5)):
        rep = _rep(spec)
        st = check_structure(rep, hermitian_input=True)
        yield _flag(f"{spec.name} structure (UH symmetric, antireal, pseudo-Hermitian)", True, st.ok())
        fast = gamma_to_adjoint(model_gamma(spec)).matrixH
        yield _bound(f"{spec.name} gamma shortcut vs commutators", float(np.abs(fast - rep.matrixH).max()), 1e-12)


def check_dynamics():
    rep = _rep(ModelSpec("oned", b=0.0))
    t = 0.9
    coeffs = propagators(rep, [t])[0].T
    yield _close("oned b=0 x(t) = cos(2t) x + sin(2t) p", [np.cos(2 * t), np.sin(2 * t)], coeffs[0], 1e-12)
    for spec in (ModelSpec("oned", b=0.4), ModelSpec("coupled_pp", a=2.0, b=1.0), ModelSpec("angular", a=1.0, b=1.0)):
        rep = _rep(spec)
        worst = max(ode_residual(rep, t) for t in (0.1, 1.0, 10.0))
        yield _bound(f"{spec.name} Cayley-Hamilton residual", worst, 1e-9)


SUITE: list[Callable] = [
    check_oned_spectrum,
    check_oned_ep,
    check_ground_energy,
    check_closed_forms,
    check_errata,
    check_exceptional_points,
    check_sweeps,
    check_symmetries,
    check_structure_invariants,
    check_dynamics,
]


def run_suite() -> list:
    results = []
    for group in SUITE:
        try:
            results.extend(group())
        except Exception as exc:  # a crashing group is a failed check, not a crash of verify
            results.append(Check(group.__name__, "no exception", f"{type(exc).__name__}: {exc}", 0.0, False))
    return results


def format_table(results) -> str:
    w = max(len(r.name) for r in results)
    lines = [f"{'check':<{w}}  status  tol       expected / got"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:<{w}}  {status}    {r.tol:<8.2g}  {r.expected} / {r.got}")
    npass = sum(r.passed for r in results)
    lines.append(f"{npass}/{len(results)} checks passed")
    return "\n".join(lines)
