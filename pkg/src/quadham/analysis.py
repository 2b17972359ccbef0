"""Single-model report assembled from the library pieces (used by ``analyze``)."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .adjrep import build_adjoint, check_structure
from .errors import NotApplicable, QuadhamError
from .modelfile import ModelFile, encode_array, encode_complex
from .models import hamiltonian
from .opcore import is_hermitian
from .spectra import eigen, ladder_system
from .symmetry import Kind, builtin_symmetries, check_symmetry, exactness


def default_symmetries(K: int) -> list:
    return builtin_symmetries(K) if K in (1, 2) else []


def analyze(model: ModelFile, symmetries: Optional[list] = None) -> dict:
    spec = model.spec
    H = hamiltonian(spec)
    rep = build_adjoint(H)
    spectrum = eigen(rep)
    hermitian = is_hermitian(H)
    structure = check_structure(rep, hermitian_input=hermitian)

    report = {
        "model": spec.name,
        "K": spec.K,
        "a": spec.a,
        "b": encode_complex(spec.b),
        "hermitian": hermitian,
        "matrixH": encode_array(rep.matrixH),
        "matrixU": encode_array(rep.matrixU),
        "charpoly": encode_array(spectrum.charpoly),
        "eigenvalues": encode_array(spectrum.eigenvalues),
        "pairing": [[i + 1, j + 1] for i, j in spectrum.pairs],
        "classification": str(spectrum.classification),
        "min_gap": spectrum.min_gap,
        "defects": [
            {"eigenvalue": encode_complex(d.eigenvalue), "algebraic": d.algebraic, "geometric": d.geometric}
            for d in spectrum.defects
            if d.algebraic > 1
        ],
        "structure": {
            "uh_symmetric": structure.uh_symmetric,
            "uh_error": structure.uh_error,
            "entries_antireal": structure.entries_antireal,
            "pseudo_hermitian": structure.pseudo_hermitian,
        },
    }

    syms = (model.symmetries or default_symmetries(spec.K)) if symmetries is None else symmetries
    report["symmetries"] = [symmetry_verdict(rep, s, spectrum) for s in syms]

    try:
        ladders = ladder_system(rep, H, spectrum=spectrum)
        report["E0"] = encode_complex(ladders.E0)
        report["sigma"] = encode_array(ladders.sigma)
        report["ladder_identity_residual"] = ladders.identity_residual
    except NotApplicable as exc:
        report["E0"] = None
        report["E0_note"] = str(exc)
    except QuadhamError as exc:
        report["E0"] = None
        report["E0_note"] = f"{type(exc).__name__}: {exc}"
    return report


def symmetry_verdict(rep, sym, spectrum) -> dict:
    chk = check_symmetry(rep, sym, spectrum=spectrum)
    out = {
        "label": sym.label,
        "kind": str(sym.kind),
        "holds": chk.holds,
        "commutes": chk.commutes,
        "commute_error": chk.commute_error,
        "u_relation": chk.u_relation,
        "u_error": chk.u_error,
    }
    if chk.conjugation_closed is not None:
        out["conjugation_closed"] = chk.conjugation_closed
    if chk.eigvecs_invariant is not None:
        out["eigvecs_invariant"] = chk.eigvecs_invariant
    if sym.kind is Kind.ANTIUNITARY and chk.holds:
        out["exactness"] = [
            {"eigenvalue": encode_complex(v.eigenvalue), "verdict": v.verdict} for v in exactness(rep, sym, spectrum)
        ]
    return out


def to_jsonable(obj):
    """Replace non-finite floats, which JSON cannot carry, by None."""
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if np.isfinite(obj) else None
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj
