"""Polynomials in canonical coordinates and momenta.

An :class:`OperatorPoly` is a complex linear combination of normal-ordered
monomials ``x1^a1 ... xK^aK p1^b1 ... pK^bK`` (every momentum to the right of
every coordinate), with ``[x_m, p_n] = i delta_mn`` and hbar = 1.  A monomial
is stored as its exponent tuple ``(a1..aK, b1..bK)``.

Values are immutable; arithmetic returns new objects.
"""

from __future__ import annotations

import itertools
from math import comb, factorial
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import DegreeOverflow, DimensionMismatch

MAX_DEGREE = 4
ZERO_THRESHOLD = 1e-14
EQ_TOL = 1e-12

Monomial = tuple


def basis_labels(K: int) -> list[str]:
    """Human-readable names of x1..xK, p1..pK."""
    if K == 1:
        return ["x", "p"]
    if K == 2:
        return ["x", "y", "px", "py"]
    return [f"x{m + 1}" for m in range(K)] + [f"p{m + 1}" for m in range(K)]


def _reorder_terms(b: int, c: int):
    """p^b x^c for a single mode as [(k, coeff)] meaning coeff * x^(c-k) p^(b-k)."""
    return [(k, factorial(k) * comb(b, k) * comb(c, k) * (-1j) ** k) for k in range(min(b, c) + 1)]


class OperatorPoly:
    __slots__ = ("K", "_terms")

    def __init__(self, K: int, terms: Mapping[Monomial, complex] | None = None):
        if K < 1:
            raise ValueError("K must be a positive integer")
        clean = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != 2 * K or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono} for K={K}")
            if sum(mono) > MAX_DEGREE:
                raise DegreeOverflow(f"monomial {mono} exceeds degree {MAX_DEGREE}")
            coeff = complex(coeff)
            if abs(coeff) >= ZERO_THRESHOLD:
                clean[mono] = coeff
        self.K = K
        self._terms = MappingProxyType(clean)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, K: int) -> "OperatorPoly":
        return cls(K)

    @classmethod
    def constant(cls, value: complex, K: int) -> "OperatorPoly":
        return cls(K, {(0,) * (2 * K): value})

    @classmethod
    def x(cls, m: int, K: int) -> "OperatorPoly":
        """Coordinate x_m, 0-based mode index."""
        mono = [0] * (2 * K)
        mono[m] = 1
        return cls(K, {tuple(mono): 1.0})

    @classmethod
    def p(cls, m: int, K: int) -> "OperatorPoly":
        """Momentum p_m, 0-based mode index."""
        mono = [0] * (2 * K)
        mono[K + m] = 1
        return cls(K, {tuple(mono): 1.0})

    @classmethod
    def from_linear(cls, coeffs: Iterable[complex]) -> "OperatorPoly":
        """sum_i c_i O_i over the ordered basis (x1..xK, p1..pK)."""
        coeffs = list(coeffs)
        if len(coeffs) % 2:
            raise DimensionMismatch("linear coefficient vector must have even length")
        K = len(coeffs) // 2
        terms = {}
        for i, c in enumerate(coeffs):
            mono = [0] * (2 * K)
            mono[i] = 1
            terms[tuple(mono)] = c
        return cls(K, terms)

    @classmethod
    def from_gamma(cls, gamma, constant: complex = 0.0) -> "OperatorPoly":
        """sum_ij gamma_ij O_i O_j (+ constant), normal ordered."""
        gamma = np.asarray(gamma, dtype=complex)
        n = gamma.shape[0]
        if gamma.ndim != 2 or gamma.shape != (n, n) or n % 2:
            raise DimensionMismatch(f"gamma must be 2K x 2K, got {gamma.shape}")
        K = n // 2
        ops = basis(K)
        out = cls.constant(constant, K)
        for i in range(n):
            for j in range(n):
                if gamma[i, j] != 0:
                    out = out + gamma[i, j] * (ops[i] * ops[j])
        return out

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, complex]:
        return self._terms

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=0)

    def coeff(self, mono: Monomial) -> complex:
        return self._terms.get(tuple(mono), 0.0j)

    def scalar_part(self) -> complex:
        return self.coeff((0,) * (2 * self.K))

    def part(self, degree: int) -> "OperatorPoly":
        """Homogeneous component of the given total degree."""
        return OperatorPoly(self.K, {m: c for m, c in self._terms.items() if sum(m) == degree})

    def without_constant(self) -> "OperatorPoly":
        return OperatorPoly(self.K, {m: c for m, c in self._terms.items() if sum(m) != 0})

    def linear_coeffs(self) -> np.ndarray:
        """Coefficients of the degree-1 part on (x1..xK, p1..pK)."""
        out = np.zeros(2 * self.K, dtype=complex)
        for i in range(2 * self.K):
            mono = [0] * (2 * self.K)
            mono[i] = 1
            out[i] = self.coeff(tuple(mono))
        return out

    def norm(self) -> float:
        """Largest coefficient magnitude."""
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def is_zero(self, tol: float = EQ_TOL) -> bool:
        return self.norm() <= tol

    def allclose(self, other: "OperatorPoly", tol: float = EQ_TOL) -> bool:
        return (self - other).norm() <= tol

    # -- arithmetic --------------------------------------------------------

    def _check_k(self, other: "OperatorPoly"):
        if other.K != self.K:
            raise DimensionMismatch(f"K mismatch: {self.K} vs {other.K}")

    def _coerce(self, other) -> "OperatorPoly":
        if isinstance(other, OperatorPoly):
            self._check_k(other)
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return OperatorPoly.constant(other, self.K)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, 0.0) + c
        return OperatorPoly(self.K, terms)

    __radd__ = __add__

    def __neg__(self):
        return OperatorPoly(self.K, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, OperatorPoly):
            return multiply(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return OperatorPoly(self.K, {m: c * other for m, c in self._terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, OperatorPoly):
            return NotImplemented
        return self.K == other.K and self.allclose(other)

    __hash__ = None

    def __repr__(self):
        return f"OperatorPoly(K={self.K}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        labels = basis_labels(self.K)
        parts = []
        for mono in sorted(self._terms, key=lambda m: (sum(m), tuple(-e for e in m))):
            c = self._terms[mono]
            factors = [lab if e == 1 else f"{lab}^{e}" for lab, e in zip(labels, mono) if e]
            coeff = f"({c.real:g}{c.imag:+g}j)" if c.imag else f"{c.real:g}"
            parts.append("*".join([coeff] + factors))
        return " + ".join(parts)


def basis(K: int) -> list[OperatorPoly]:
    """The ordered operator basis x1..xK, p1..pK."""
    return [OperatorPoly.x(m, K) for m in range(K)] + [OperatorPoly.p(m, K) for m in range(K)]


def _multiply_monomials(m1: Monomial, m2: Monomial, K: int) -> dict:
    """Normal-ordered expansion of (x^a p^b)(x^c p^d)."""
    a, b = m1[:K], m1[K:]
    c, d = m2[:K], m2[K:]
    per_mode = [_reorder_terms(b[m], c[m]) for m in range(K)]
    out = {}
    for choice in itertools.product(*per_mode):
        coeff = 1.0 + 0.0j
        xs, ps = [], []
        for m, (k, w) in enumerate(choice):
            coeff *= w
            xs.append(a[m] + c[m] - k)
            ps.append(b[m] - k + d[m])
        mono = tuple(xs + ps)
        out[mono] = out.get(mono, 0.0) + coeff
    return out


def multiply(p: OperatorPoly, q: OperatorPoly) -> OperatorPoly:
    """Normal-ordered product p*q.

    Raises DegreeOverflow when deg(p) + deg(q) exceeds the degree cap; the
    leading part of a product never cancels, so the bound is exact.
    """
    p._check_k(q)
    if p.degree() + q.degree() > MAX_DEGREE:
        raise DegreeOverflow(
            f"product of degrees {p.degree()} and {q.degree()} exceeds {MAX_DEGREE}"
        )
    K = p.K
    terms: dict = {}
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            for mono, w in _multiply_monomials(m1, m2, K).items():
                terms[mono] = terms.get(mono, 0.0) + c1 * c2 * w
    return OperatorPoly(K, terms)


def commutator(p: OperatorPoly, q: OperatorPoly) -> OperatorPoly:
    """[p, q] = pq - qp."""
    return multiply(p, q) - multiply(q, p)


def adjoint(p: OperatorPoly) -> OperatorPoly:
    """Hermitian adjoint: conjugate coefficients and reverse factor order.

    x and p are Hermitian, so (x^a p^b)^dagger = p^b x^a, which is then
    brought back to normal order.
    """
    K = p.K
    terms: dict = {}
    for mono, c in p.terms.items():
        xpart = tuple(mono[:K]) + (0,) * K
        ppart = (0,) * K + tuple(mono[K:])
        for m, w in _multiply_monomials(ppart, xpart, K).items():
            terms[m] = terms.get(m, 0.0) + c.conjugate() * w
    return OperatorPoly(K, terms)


def is_hermitian(p: OperatorPoly, tol: float = EQ_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return (adjoint(p) - p).norm() <= tol
