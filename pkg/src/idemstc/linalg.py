"""Dense complex matrix helpers.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Everything that
crosses a public boundary goes through :func:`as_matrix`, which copies the
input, checks that it is square and finite, and marks the copy read-only so
values can be shared freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    ConditionNotSatisfiedError,
    ConvergenceError,
    NotUnitaryError,
    OrderMismatchError,
)

UNITARY_TOL = 1e-8
DET_RTOL = 1e-9
DET_ATOL = 1e-12
TWO_PI = 2.0 * math.pi


def as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=np.complex128, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf")
    a.setflags(write=False)
    return a


def identity(n: int) -> np.ndarray:
    return as_matrix(np.eye(n))


def conj_transpose(m) -> np.ndarray:
    return as_matrix(np.asarray(m).conj().T)


def mat_mul(a, b) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise OrderMismatchError(f"order mismatch: {a.shape} vs {b.shape}")
    return as_matrix(a @ b)


def max_entry(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def unitarity_residual(u) -> float:
    """Max-entry deviation of ``u u*`` from the identity."""
    u = np.asarray(u)
    return max_entry(u @ u.conj().T - np.eye(u.shape[0]))


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    return unitarity_residual(u) <= tol


def require_unitary(u, tol: float = UNITARY_TOL, what: str = "matrix") -> None:
    r = unitarity_residual(u)
    if r > tol:
        raise NotUnitaryError(f"{what} is not unitary (residual {r:.3g} > {tol:g})", r)


def determinant(m) -> complex:
    """Determinant; closed form for orders 1 and 2, LU with partial pivoting above."""
    m = np.asarray(m, dtype=np.complex128)
    n = m.shape[0]
    if n == 1:
        return complex(m[0, 0])
    if n == 2:
        return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    # LAPACK getrf: LU with partial pivoting
    return complex(np.linalg.det(m))


def determinants(stack: np.ndarray) -> np.ndarray:
    """Vectorised :func:`determinant` over a ``(..., n, n)`` stack."""
    stack = np.asarray(stack, dtype=np.complex128)
    if stack.shape[-1] == 1:
        return stack[..., 0, 0].copy()
    if stack.shape[-1] == 2:
        return stack[..., 0, 0] * stack[..., 1, 1] - stack[..., 0, 1] * stack[..., 1, 0]
    return np.linalg.det(stack)


def det_close(x: complex, y: complex, rtol: float = DET_RTOL, atol: float = DET_ATOL) -> bool:
    return abs(x - y) <= max(atol, rtol * max(abs(x), abs(y)))


# (name, premise, formula) for the five block-determinant identities
_BLOCK_RULES = {
    "zero": "one block is the zero matrix",
    "dc": "DC = CD",
    "ac": "AC = CA",
    "bd": "BD = DB",
    "ab": "AB = BA",
}


def det_block_2x2(a, b, c, d, rule: str = "dc", tol: float = UNITARY_TOL) -> complex:
    """Determinant of ``[[a, b], [c, d]]`` from a commuting-blocks identity.

    ``rule`` picks the identity and its premise:

    ========  ==============  ===============
    rule      premise         determinant
    ========  ==============  ===============
    ``zero``  a block is 0    det(AD - BC)
    ``dc``    DC = CD         det(AD - BC)
    ``ac``    AC = CA         det(AD - CB)
    ``bd``    BD = DB         det(DA - BC)
    ``ab``    AB = BA         det(DA - CB)
    ========  ==============  ===============

    The premise is checked numerically (max-entry, relative to the block
    scale) and :class:`ConditionNotSatisfiedError` raised if it fails.
    """
    a, b, c, d = (np.asarray(x, dtype=np.complex128) for x in (a, b, c, d))
    if not (a.shape == b.shape == c.shape == d.shape) or a.ndim != 2:
        raise OrderMismatchError("all four blocks must be square of the same order")
    if rule not in _BLOCK_RULES:
        raise ValueError(f"unknown rule {rule!r}; expected one of {sorted(_BLOCK_RULES)}")
    scale = max(1.0, *(max_entry(x) for x in (a, b, c, d)))

    def commutes(x, y) -> bool:
        return max_entry(x @ y - y @ x) <= tol * scale * scale

    if rule == "zero":
        ok = any(max_entry(x) <= tol * scale for x in (a, b, c, d))
        value = a @ d - b @ c
    elif rule == "dc":
        ok = commutes(d, c)
        value = a @ d - b @ c
    elif rule == "ac":
        ok = commutes(a, c)
        value = a @ d - c @ b
    elif rule == "bd":
        ok = commutes(b, d)
        value = d @ a - b @ c
    else:
        ok = commutes(a, b)
        value = d @ a - c @ b
    if not ok:
        raise ConditionNotSatisfiedError(f"premise '{_BLOCK_RULES[rule]}' does not hold")
    return determinant(value)


def block(a, b, c, d) -> np.ndarray:
    return as_matrix(np.block([[a, b], [c, d]]))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Unit-modulus eigenvalues with matching rank-1 orthogonal projectors."""

    phases: tuple[complex, ...]
    projectors: tuple[np.ndarray, ...]

    def reconstruct(self) -> np.ndarray:
        n = self.projectors[0].shape[0]
        out = np.zeros((n, n), dtype=np.complex128)
        for alpha, p in zip(self.phases, self.projectors):
            out += alpha * p
        return as_matrix(out)

    @property
    def angles(self) -> tuple[float, ...]:
        return tuple(principal_angle(z) for z in self.phases)


def principal_angle(z: complex) -> float:
    """Argument of ``z`` folded into [0, 2pi)."""
    t = math.atan2(z.imag, z.real) % TWO_PI
    if t >= TWO_PI - 1e-13:
        t = 0.0
    return t


def _clusters(values: np.ndarray, tol: float) -> list[list[int]]:
    # values ascending (eigh output)
    groups: list[list[int]] = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _joint_basis(h1: np.ndarray, h2: np.ndarray, tol: float, depth: int = 0) -> np.ndarray:
    """Orthonormal basis diagonalising the commuting Hermitian pair (h1, h2).

    Three passes at most: h1, then h2 inside h1-clusters, then h1 again inside
    the surviving clusters to split eigenvalues closer than ``tol``.  Whatever
    is still clustered after that is a genuinely repeated eigenvalue.
    """
    try:
        w, q = np.linalg.eigh(h1)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    if depth >= 2:
        return q
    cols = []
    for g in _clusters(w, tol):
        qg = q[:, g]
        if len(g) == 1:
            cols.append(qg)
            continue
        # restrict the partner matrix to the (near-)degenerate eigenspace
        r2 = qg.conj().T @ h2 @ qg
        r1 = qg.conj().T @ h1 @ qg
        sub = _joint_basis((r2 + r2.conj().T) / 2, (r1 + r1.conj().T) / 2, tol, depth + 1)
        cols.append(qg @ sub)
    return np.concatenate(cols, axis=1)


def spectral_decompose_unitary(u, tol: float = UNITARY_TOL) -> SpectralDecomposition:
    """Split a unitary matrix into phases and rank-1 projectors.

    ``U`` is handled through the commuting Hermitian pair
    ``H1 = (U + U*)/2`` and ``H2 = (U - U*)/2i`` (the cosine and sine parts of
    its spectrum).  ``H1`` is diagonalised first; inside each degenerate
    eigenspace the restriction of ``H2`` is diagonalised, alternating until
    each cluster is resolved.  Repeated eigenvalues get an arbitrary
    orthonormal basis of their eigenspace.

    Phases are Rayleigh quotients normalised to modulus 1 and returned sorted
    by principal argument in [0, 2pi), ties broken by basis index.
    """
    u = as_matrix(u)
    require_unitary(u, tol, "input")
    uh = u.conj().T
    h1 = (u + uh) / 2
    h2 = (u - uh) / 2j
    h1 = (h1 + h1.conj().T) / 2
    h2 = (h2 + h2.conj().T) / 2
    basis = _joint_basis(h1, h2, tol=1e-7)
    # re-orthonormalise (Gram-Schmidt via QR); keeps column directions
    basis, r = np.linalg.qr(basis)
    basis = basis * (np.sign(np.diag(r).real) + (np.diag(r).real == 0))
    entries = []
    for i in range(basis.shape[1]):
        v = basis[:, i]
        alpha = complex(v.conj() @ u @ v)
        mod = abs(alpha)
        if mod == 0.0:
            raise ConvergenceError("degenerate Rayleigh quotient")
        alpha /= mod
        entries.append((principal_angle(alpha), i, alpha, np.outer(v, v.conj())))
    entries.sort(key=lambda e: (e[0], e[1]))
    return SpectralDecomposition(
        phases=tuple(e[2] for e in entries),
        projectors=tuple(as_matrix(e[3]) for e in entries),
    )


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the phase-corrected QR of a Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return as_matrix(q * (d / np.abs(d)))


def stack_matrices(ms: Sequence[np.ndarray]) -> np.ndarray:
    return np.stack([np.asarray(m) for m in ms])
