"""Builtin Hamiltonians with closed-form spectra, plus user-defined ones.

    oned        p^2 + x^2 + b (xp + px)
    coupled_xy  px^2 + py^2 + x^2 + a y^2 + b x y
    coupled_pp  px^2 + py^2 + x^2 + a y^2 + b px py
    angular     px^2 + py^2 + x^2 + a y^2 + b (x py - y px)
    custom      sum_ij gamma_ij O_i O_j + constant

The closed forms give the squared frequencies xi (eigenvalues are +/-sqrt(xi)).
For the angular model the widely reproduced form
``2a + b^2 + 2 +/- sqrt((a-1)^2 + 2(a+1) b^2)`` does not match the adjoint
matrix: the square root needs a factor 2.  The corrected expression is the
one whose product xi+ xi- = (b^2-4)(b^2-4a) yields the known reality window,
and it is what ``xi_values`` returns; ``angular_xi_misprint`` keeps the other
form for the erratum checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import mpmath
import numpy as np

from .errors import DimensionMismatch, InvalidParam, NotAvailable
from .opcore import OperatorPoly

BUILTINS = ("oned", "coupled_xy", "coupled_pp", "angular")
MODEL_NAMES = BUILTINS + ("custom",)


@dataclass(frozen=True, eq=False)
class ModelSpec:
    name: str
    K: Optional[int] = None
    a: float = 1.0
    b: complex = 0.0
    gamma: Optional[np.ndarray] = field(default=None, repr=False)
    constant: float = 0.0

    def __post_init__(self):
        if self.name not in MODEL_NAMES:
            raise InvalidParam(f"unknown model {self.name!r}; expected one of {MODEL_NAMES}")
        object.__setattr__(self, "b", complex(self.b))
        object.__setattr__(self, "a", float(self.a))
        if self.name == "custom":
            if self.gamma is None:
                raise InvalidParam("custom model needs a gamma matrix")
            g = np.array(self.gamma, dtype=complex)
            if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2:
                raise DimensionMismatch(f"gamma must be 2K x 2K, got {g.shape}")
            if self.K is not None and g.shape[0] != 2 * self.K:
                raise DimensionMismatch(f"gamma is {g.shape} but K={self.K}")
            g.setflags(write=False)
            object.__setattr__(self, "gamma", g)
            object.__setattr__(self, "K", g.shape[0] // 2)
        else:
            expected = 1 if self.name == "oned" else 2
            if self.K is not None and self.K != expected:
                raise DimensionMismatch(f"{self.name} has K={expected}, got K={self.K}")
            object.__setattr__(self, "K", expected)
            if self.name != "oned" and not self.a > 0:
                raise InvalidParam(f"{self.name} needs a > 0, got a={self.a}")

    def with_param(self, axis: str, value: float) -> "ModelSpec":
        """Copy with one sweep axis ('a', 'b_real', 'b_imag') replaced."""
        if axis == "a":
            return replace(self, a=value)
        if axis == "b_real":
            return replace(self, b=complex(value, self.b.imag))
        if axis == "b_imag":
            return replace(self, b=complex(self.b.real, value))
        raise InvalidParam(f"unknown parameter axis {axis!r}")

    def param(self, axis: str) -> float:
        return {"a": self.a, "b_real": self.b.real, "b_imag": self.b.imag}[axis]


@dataclass(frozen=True, eq=False)
class ClosedFormSpectrum:
    xi: np.ndarray
    eigenvalues: np.ndarray  # sorted by (Re, Im)


def model_gamma(spec: ModelSpec) -> np.ndarray:
    """The symmetric gamma matrix with H = sum_ij gamma_ij O_i O_j."""
    a, b = spec.a, spec.b
    if spec.name == "custom":
        return np.array(spec.gamma)
    if spec.name == "oned":
        return np.array([[1.0, b], [b, 1.0]], dtype=complex)
    g = np.diag([1.0, a, 1.0, 1.0]).astype(complex)
    if spec.name == "coupled_xy":
        g[0, 1] = g[1, 0] = b / 2
    elif spec.name == "coupled_pp":
        g[2, 3] = g[3, 2] = b / 2
    elif spec.name == "angular":
        g[0, 3] = g[3, 0] = b / 2
        g[1, 2] = g[2, 1] = -b / 2
    return g


def hamiltonian(spec: ModelSpec) -> OperatorPoly:
    return OperatorPoly.from_gamma(model_gamma(spec), spec.constant)


def _xi(name, a, b, sqrt):
    b2 = b * b
    if name == "oned":
        return [4 * (1 - b2)]
    if name == "coupled_xy":
        root = sqrt(b2 + (a - 1) ** 2)
        return [2 * (a + 1 + root), 2 * (a + 1 - root)]
    if name == "coupled_pp":
        root = sqrt(a * b2 + (a - 1) ** 2)
        return [2 * (a + 1 + root), 2 * (a + 1 - root)]
    if name == "angular":
        root = 2 * sqrt((a - 1) ** 2 + 2 * (a + 1) * b2)
        return [2 * a + b2 + 2 + root, 2 * a + b2 + 2 - root]
    raise NotAvailable("no closed form for custom models")


def xi_values(spec: ModelSpec, dps: Optional[int] = None) -> np.ndarray:
    """Closed-form squared frequencies (complex arithmetic throughout).

    On an exceptional locus the square root amplifies the rounding of its
    argument to ~sqrt(eps); pass ``dps`` to evaluate in mpmath at that many
    digits for the exact binary values of a and b.
    """
    if dps is None:
        return np.array(_xi(spec.name, complex(spec.a), complex(spec.b), np.sqrt))
    with mpmath.workdps(dps):
        xi = _xi(spec.name, mpmath.mpc(spec.a), mpmath.mpc(spec.b), mpmath.sqrt)
        return np.array([complex(x) for x in xi])


def angular_xi_misprint(a: float, b: complex) -> np.ndarray:
    """The angular-model xi without the factor 2 on the square root."""
    a, b2 = complex(a), complex(b) ** 2
    root = np.sqrt((a - 1) ** 2 + 2 * (a + 1) * b2)
    return np.array([2 * a + b2 + 2 + root, 2 * a + b2 + 2 - root])


def closed_form(spec: ModelSpec, dps: Optional[int] = None) -> ClosedFormSpectrum:
    from .spectra import order_eigenvalues

    xi = xi_values(spec, dps)
    root = np.sqrt(xi.astype(complex))
    return ClosedFormSpectrum(xi=xi, eigenvalues=order_eigenvalues(np.concatenate([-root, root])))


def instantiate(spec: ModelSpec):
    """(Hamiltonian polynomial, closed-form spectrum or None for custom)."""
    H = hamiltonian(spec)
    return H, (closed_form(spec) if spec.name in BUILTINS else None)


def expected_charpoly(spec: ModelSpec) -> np.ndarray:
    """lambda^4 - (xi+ + xi-) lambda^2 + xi+ xi- (or lambda^2 - xi for oned)."""
    xi = xi_values(spec)
    if spec.name == "oned":
        return np.array([1.0, 0.0, -xi[0]], dtype=complex)
    return np.array([1.0, 0.0, -(xi[0] + xi[1]), 0.0, xi[0] * xi[1]], dtype=complex)


# ---------------------------------------------------------------------------
# reality windows and exceptional points


def closed_form_is_real(spec: ModelSpec) -> bool:
    """Reality of the spectrum from the closed-form inequalities in b^2.

    Inequalities are taken as non-strict: on a locus the frequencies
    coalesce but stay real.  Genuinely complex b^2 falls back to checking
    that every xi is real and non-negative.
    """
    a, b2 = spec.a, spec.b * spec.b
    if abs(b2.imag) > 1e-12 * max(1.0, abs(b2)):
        xi = xi_values(spec)
        return bool(np.all(np.abs(xi.imag) <= 1e-12 * np.abs(xi).max()) and np.all(xi.real >= 0))
    s = b2.real
    if spec.name == "oned":
        return s <= 1.0
    if spec.name == "coupled_xy":
        return -(a - 1) ** 2 <= s <= 4 * a
    if spec.name == "coupled_pp":
        return -(a - 1) ** 2 / a <= s <= 4.0
    if spec.name == "angular":
        return s >= -(a - 1) ** 2 / (2 * (a + 1)) and (s - 4) * (4 * a - s) <= 0
    raise NotAvailable("no reality window for custom models")


@dataclass(frozen=True)
class RealityCheck:
    closed_form: bool
    numerical: bool

    @property
    def agrees(self) -> bool:
        return self.closed_form == self.numerical


def classify_reality(spec: ModelSpec) -> RealityCheck:
    """Compare the closed-form window with the computed spectrum."""
    from .adjrep import gamma_to_adjoint
    from .spectra import eigen

    numerical = eigen(gamma_to_adjoint(model_gamma(spec))).is_real
    return RealityCheck(closed_form_is_real(spec), numerical)


@dataclass(frozen=True)
class EpLocus:
    b_squared: float
    label: str

    @property
    def axis(self) -> str:
        return "b_real" if self.b_squared >= 0 else "b_imag"

    @property
    def value(self) -> float:
        """Non-negative location on ``axis`` (b or beta with b = i beta)."""
        return float(np.sqrt(abs(self.b_squared)))


def exceptional_points(spec: ModelSpec) -> list:
    """Closed-form exceptional-point loci, as values of b^2, at the model's a."""
    a = spec.a
    if spec.name == "oned":
        return [EpLocus(1.0, "b^2 = 1")]
    if spec.name == "coupled_xy":
        return [EpLocus(4 * a, "b^2 = 4a"), EpLocus(-(a - 1) ** 2, "b^2 = -(a-1)^2")]
    if spec.name == "coupled_pp":
        return [EpLocus(4.0, "b^2 = 4"), EpLocus(-(a - 1) ** 2 / a, "b^2 = -(a-1)^2/a")]
    if spec.name == "angular":
        loci = [EpLocus(4.0, "b^2 = 4")]
        if a != 1.0:
            loci.append(EpLocus(4 * a, "b^2 = 4a"))
        loci.append(EpLocus(-(a - 1) ** 2 / (2 * (a + 1)), "b^2 = -(a-1)^2/(2(a+1))"))
        return loci
    raise NotAvailable("exceptional points are only tabulated for builtin models")
