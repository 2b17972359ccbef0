"""Spectral analysis of quadratic Hamiltonians through their adjoint matrix.

A Hamiltonian quadratic in x_1..x_K, p_1..p_K acts on span{x, p} by
commutation; the resulting 2K x 2K matrix carries the natural frequencies,
exceptional points, symmetries and Heisenberg dynamics of the model.
"""

__version__ = "0.1.0"

from ._accel import BACKEND
from .adjrep import AdjointRep, StructureReport, build_adjoint, build_U, check_structure, gamma_to_adjoint
from .dynamics import TrajectorySample, evolve, fd_ode_residual, growth_exponent, ode_residual, propagators
from .errors import *  # noqa: F401,F403
from .modelfile import ModelFile, load_model, parse_model
from .models import (
    ModelSpec,
    classify_reality,
    closed_form,
    exceptional_points,
    expected_charpoly,
    hamiltonian,
    instantiate,
    model_gamma,
)
from .opcore import OperatorPoly, adjoint, basis, commutator, is_hermitian, multiply
from .spectra import (
    Classification,
    SpectrumReport,
    char_poly,
    defect_info,
    eigen,
    hermitian_ladder_check,
    jordan_form,
    ladder_system,
)
from .sweep import EpFindConfig, SweepConfig, ep_find, run_sweep
from .symmetry import Kind, SymmetrySpec, builtin_symmetries, check_symmetry, exactness
