"""Symmetric (Hermitian) idempotents and complete orthogonal sets of them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import NonUnitVectorError, NotIdempotentError, OrderMismatchError
from .linalg import UNITARY_TOL, as_matrix, max_entry, require_unitary

IDEMPOTENT_TOL = 1e-8
SYMMETRY_TOL = 1e-10
RANK_TOL = 1e-6
UNIT_TOL = 1e-10


def trace_rank(m: np.ndarray) -> int:
    """Rank of an idempotent read off its trace."""
    tr = complex(np.trace(m))
    r = round(tr.real)
    if abs(tr.real - r) > RANK_TOL or abs(tr.imag) > RANK_TOL:
        raise NotIdempotentError(f"trace {tr:.6g} is not an integer")
    return int(r)


@dataclass(frozen=True, eq=False)
class SymmetricIdempotent:
    """E with E^2 = E and E* = E.  ``rank`` is filled in from the trace."""

    matrix: np.ndarray
    rank: int = field(default=-1)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        sym = max_entry(m - m.conj().T)
        if sym > SYMMETRY_TOL:
            raise NotIdempotentError(f"not symmetric (residual {sym:.3g})")
        idem = max_entry(m @ m - m)
        if idem > IDEMPOTENT_TOL:
            raise NotIdempotentError(f"not idempotent (residual {idem:.3g})")
        r = trace_rank(m)
        if self.rank not in (-1, r):
            raise NotIdempotentError(f"stated rank {self.rank} but trace gives {r}")
        object.__setattr__(self, "rank", r)

    @property
    def order(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_primitive(self) -> bool:
        return self.rank == 1

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def unit_vector(entries: Iterable[complex]) -> np.ndarray:
    v = np.array(list(entries), dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise NonUnitVectorError("expected a non-empty vector")
    norm2 = float(np.sum(np.abs(v) ** 2))
    if abs(norm2 - 1.0) > UNIT_TOL:
        raise NonUnitVectorError(f"vector has squared norm {norm2!r}, expected 1")
    return v


def rank1_projector(v: Sequence[complex]) -> SymmetricIdempotent:
    """``v v*`` for a unit column vector ``v``."""
    v = unit_vector(v)
    return SymmetricIdempotent(np.outer(v, v.conj()))


def complement(e: SymmetricIdempotent) -> SymmetricIdempotent:
    return SymmetricIdempotent(np.eye(e.order) - e.matrix)


def rational_idempotent(p: int, q: int) -> SymmetricIdempotent:
    """The 2x2 projector onto (sqrt(p/q), sqrt((q-p)/q))."""
    if not (isinstance(p, (int, np.integer)) and isinstance(q, (int, np.integer))):
        raise TypeError("p and q must be integers")
    if p < 1 or q <= p:
        raise ValueError(f"need 0 < p < q, got p={p}, q={q}")
    off = math.sqrt(p * (q - p)) / q
    return SymmetricIdempotent(np.array([[p / q, off], [off, (q - p) / q]]))


def angle_idempotent(theta: float) -> SymmetricIdempotent:
    c, s = math.cos(theta), math.sin(theta)
    return SymmetricIdempotent(np.array([[c * c, c * s], [c * s, s * s]]))


def gaussian_idempotent(a: complex, b: complex) -> SymmetricIdempotent:
    """(1/t) [[a a*, a b*], [b a*, b b*]] for Gaussian integers a, b.

    ``t = |a|^2 + |b|^2`` is formed in integer arithmetic so the entries are
    the exact rationals of Q(i), rounded once to floating point.
    """
    ar, ai = _gaussian_parts(a)
    br, bi = _gaussian_parts(b)
    t = ar * ar + ai * ai + br * br + bi * bi
    if t == 0:
        raise NonUnitVectorError("(a, b) must not be the zero vector")
    aa = ar * ar + ai * ai
    bb = br * br + bi * bi
    # a * conj(b)
    ab = complex(ar * br + ai * bi, ai * br - ar * bi)
    m = np.array([[aa, ab], [ab.conjugate(), bb]], dtype=np.complex128) / t
    return SymmetricIdempotent(m)


def _gaussian_parts(z) -> tuple[int, int]:
    z = complex(z)
    re, im = round(z.real), round(z.imag)
    if re != z.real or im != z.imag:
        raise ValueError(f"{z} is not a Gaussian integer")
    return int(re), int(im)


def canonical_vector(v: Sequence[complex]) -> np.ndarray:
    """Representative of the projective class of ``v``.

    Scaled to unit norm with its first nonzero entry real and positive, so
    ``v`` and ``alpha * v`` map to the same array.
    """
    v = np.array(v, dtype=np.complex128)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise NonUnitVectorError("zero vector has no projective class")
    v = v / norm
    for x in v:
        if abs(x) > 1e-12:
            v = v * (abs(x) / x)
            break
    return v


@dataclass(frozen=True)
class ValidationReport:
    idempotency: tuple[float, ...]
    symmetry: tuple[float, ...]
    orthogonality: dict
    completeness: float
    traces: tuple[float, ...]
    ranks: tuple[int, ...]
    primitive: tuple[bool, ...]
    tolerance: float = IDEMPOTENT_TOL

    @property
    def failures(self) -> list[str]:
        out = []
        for i, r in enumerate(self.idempotency):
            if r > self.tolerance:
                out.append(f"member {i}: not idempotent ({r:.3g})")
        for i, r in enumerate(self.symmetry):
            if r > SYMMETRY_TOL:
                out.append(f"member {i}: not symmetric ({r:.3g})")
        for (i, j), r in sorted(self.orthogonality.items()):
            if r > self.tolerance:
                out.append(f"members {i},{j}: not orthogonal ({r:.3g})")
        if self.completeness > self.tolerance:
            out.append(f"sum differs from identity ({self.completeness:.3g})")
        for i, t in enumerate(self.traces):
            if abs(t - round(t)) > RANK_TOL:
                out.append(f"member {i}: non-integral trace {t:.6g}")
        return out

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_set(members: Sequence, tol: float = IDEMPOTENT_TOL) -> ValidationReport:
    """Residual report for a candidate complete orthogonal set.

    Accepts raw matrices or :class:`SymmetricIdempotent` and never raises on
    a failed check; inspect ``report.failures``.
    """
    ms = [np.asarray(getattr(m, "matrix", m), dtype=np.complex128) for m in members]
    if not ms:
        raise ValueError("empty set")
    n = ms[0].shape[0]
    if any(m.shape != (n, n) for m in ms):
        raise OrderMismatchError("members have different orders")
    idem = tuple(max_entry(m @ m - m) for m in ms)
    sym = tuple(max_entry(m - m.conj().T) for m in ms)
    orth = {
        (i, j): max_entry(ms[i] @ ms[j])
        for i in range(len(ms))
        for j in range(len(ms))
        if i != j
    }
    comp = max_entry(sum(ms) - np.eye(n))
    traces = tuple(float(np.trace(m).real) for m in ms)
    ranks = tuple(int(round(t)) for t in traces)
    return ValidationReport(
        idempotency=idem,
        symmetry=sym,
        orthogonality=orth,
        completeness=comp,
        traces=traces,
        ranks=ranks,
        primitive=tuple(r == 1 for r in ranks),
        tolerance=tol,
    )


@dataclass(frozen=True)
class CompleteOrthogonalSet:
    """Pairwise-orthogonal symmetric idempotents summing to the identity."""

    members: tuple[SymmetricIdempotent, ...]

    def __post_init__(self):
        members = tuple(
            m if isinstance(m, SymmetricIdempotent) else SymmetricIdempotent(m)
            for m in self.members
        )
        object.__setattr__(self, "members", members)
        report = validate_set(members)
        if not report.ok:
            raise NotIdempotentError("; ".join(report.failures))
        if sum(m.rank for m in members) != self.order:
            raise NotIdempotentError("ranks do not sum to the order")

    @property
    def order(self) -> int:
        return self.members[0].order

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(m.rank for m in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]


def complete_set_from_unitary_rows(p, tol: float = UNITARY_TOL) -> CompleteOrthogonalSet:
    """Rank-1 projectors built from the rows of a unitary matrix.

    Each row ``v`` contributes ``outer(v, conj(v))``, the projector onto ``v``
    read as a column.  For ``p = [[-1, -i], [i, 1]] / sqrt(2)`` this gives
    ``[[1, -i], [i, 1]] / 2`` and ``[[1, i], [-i, 1]] / 2``.
    """
    p = as_matrix(p)
    require_unitary(p, tol, "row matrix")
    return CompleteOrthogonalSet(
        tuple(SymmetricIdempotent(np.outer(row, row.conj())) for row in p)
    )


def diagonal_set(n: int) -> CompleteOrthogonalSet:
    """The standard set {e_ii}."""
    out = []
    for i in range(n):
        m = np.zeros((n, n))
        m[i, i] = 1.0
        out.append(SymmetricIdempotent(m))
    return CompleteOrthogonalSet(tuple(out))


def dft_set(n: int) -> CompleteOrthogonalSet:
    """Rank-1 set from the rows of the unitary n-point DFT matrix."""
    j = np.arange(n)
    f = np.exp(-2j * np.pi * np.outer(j, j) / n) / math.sqrt(n)
    return complete_set_from_unitary_rows(f)


def pair_set(e: SymmetricIdempotent) -> CompleteOrthogonalSet:
    """{E, I - E}."""
    return CompleteOrthogonalSet((e, complement(e)))
