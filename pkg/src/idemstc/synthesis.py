"""Matrices assembled from complete orthogonal sets of idempotents.

An element ``A = sum a_i E_i`` over a complete orthogonal set has inverse
``sum (1/a_i) E_i`` and determinant ``prod a_i ** rank(E_i)``; with unit
coefficients it is unitary with eigenvalues ``a_i``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import ZeroCoefficientError
from .idempotents import CompleteOrthogonalSet, SymmetricIdempotent
from .linalg import as_matrix

PHASE_TOL = 1e-12
UNIT_COEFF_TOL = 1e-10
ZERO_COEFF_TOL = 1e-12


@dataclass(frozen=True)
class PhaseCoefficient:
    """A unit-modulus scalar, optionally known to be ``exp(2 pi i j / k)``."""

    value: complex
    root_order: int | None = None
    exponent: int | None = None

    def __post_init__(self):
        v = complex(self.value)
        object.__setattr__(self, "value", v)
        if abs(abs(v) - 1.0) > PHASE_TOL:
            raise ValueError(f"|{v}| != 1")
        if (self.root_order is None) != (self.exponent is None):
            raise ValueError("root_order and exponent go together")
        if self.root_order is not None:
            if self.root_order < 1:
                raise ValueError("root_order must be positive")
            object.__setattr__(self, "exponent", self.exponent % self.root_order)
            if abs(v - _root(self.root_order, self.exponent)) > PHASE_TOL:
                raise ValueError("value does not match its root-of-unity tag")

    @classmethod
    def root(cls, k: int, j: int) -> "PhaseCoefficient":
        return cls(_root(k, j % k), k, j % k)

    @property
    def tagged(self) -> bool:
        return self.root_order is not None

    def __complex__(self) -> complex:
        return self.value

    def __mul__(self, other):
        if isinstance(other, PhaseCoefficient):
            if self.tagged and other.tagged and self.root_order == other.root_order:
                return PhaseCoefficient.root(self.root_order, self.exponent + other.exponent)
            return PhaseCoefficient(self.value * other.value)
        return self.value * other

    __rmul__ = __mul__


def _root(k: int, j: int) -> complex:
    # exact values at the quarter turns keep e.g. omega^2 = -1 exact for k = 4
    j %= k
    if (4 * j) % k == 0:
        return (1, 1j, -1, -1j)[(4 * j) // k]
    return cmath.exp(2j * math.pi * j / k)


Coefficient = Union[complex, float, int, PhaseCoefficient]


def _values(coeffs: Sequence[Coefficient], size: int) -> list[complex]:
    vals = [complex(c) for c in coeffs]
    if len(vals) != size:
        raise ValueError(f"{len(vals)} coefficients for a set of {size} idempotents")
    return vals


def combine(s: CompleteOrthogonalSet, coeffs: Sequence[Coefficient]) -> np.ndarray:
    """``sum coeffs[i] * E_i`` with no restriction on the coefficients."""
    vals = _values(coeffs, len(s))
    out = np.zeros((s.order, s.order), dtype=np.complex128)
    for a, e in zip(vals, s.members):
        out += a * e.matrix
    return as_matrix(out)


def unitary_from_set(s: CompleteOrthogonalSet, phases: Sequence[Coefficient]) -> np.ndarray:
    vals = _values(phases, len(s))
    for a in vals:
        if abs(abs(a) - 1.0) > UNIT_COEFF_TOL:
            raise ValueError(f"coefficient {a} does not have modulus 1")
    return combine(s, vals)


def reflection_unitary(e: SymmetricIdempotent) -> np.ndarray:
    """``2E - I``, the involutory unitary that fixes range(E) and negates its complement."""
    return as_matrix(2 * e.matrix - np.eye(e.order))


def inverse_via_idempotents(s: CompleteOrthogonalSet, coeffs: Sequence[Coefficient]) -> np.ndarray:
    vals = _values(coeffs, len(s))
    for i, a in enumerate(vals):
        if abs(a) <= ZERO_COEFF_TOL:
            raise ZeroCoefficientError(f"coefficient {i} is zero; the element is a zero divisor")
    return combine(s, [1 / a for a in vals])


def det_via_ranks(s: CompleteOrthogonalSet, coeffs: Sequence[Coefficient]) -> complex:
    vals = _values(coeffs, len(s))
    out = complex(1.0)
    for a, e in zip(vals, s.members):
        out *= a ** e.rank
    return out


def abs_det_via_ranks(ranks: Sequence[int], diffs: Sequence[complex]) -> float:
    """``prod |d_i| ** r_i``, the modulus form used by the pair scans."""
    out = 1.0
    for d, r in zip(diffs, ranks):
        out *= abs(d) ** r
    return out
