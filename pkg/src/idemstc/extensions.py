"""Ways to grow a constellation: negation, root-of-unity orbits and tangles."""

from __future__ import annotations

import enum
import logging
import math
from itertools import combinations

import numpy as np

from .constellations import DUPLICATE_TOL, Constellation
from .errors import CollisionError, NotUnitaryError, OrderMismatchError, ReferenceDeviation, warn_deviation
from .linalg import UNITARY_TOL, as_matrix, determinant, max_entry, require_unitary, unitarity_residual
from .synthesis import PhaseCoefficient

log = logging.getLogger(__name__)

OMEGA_PREFIX = "ω^"
TANGLE_SCALE = 1 / math.sqrt(2)


def _omega_label(t: int, label: str) -> str:
    return label if t == 0 else f"{OMEGA_PREFIX}{t}·{label}"


def _negated_label(label: str) -> str:
    return label[1:] if label.startswith("-") else "-" + label


def _orbit_collisions(c: Constellation, k: int, include_identity: bool = False):
    """Pairs (i, j, t) with V_i == w^t V_j, w = exp(2 pi i / k)."""
    ts = range(0 if include_identity else 1, k)
    out = []
    for i, j in combinations(range(len(c)), 2):
        a, b = c.matrices[i], c.matrices[j]
        for t in ts:
            w = PhaseCoefficient.root(k, t).value
            if max_entry(a - w * b) <= DUPLICATE_TOL:
                out.append((i, j, t))
    return out


def negate_extend(c: Constellation) -> Constellation:
    """``c`` together with the negative of every member."""
    bad = _orbit_collisions(c, 2)
    if bad:
        i, j, _ = bad[0]
        a, b = c.labels[i], c.labels[j]
        raise CollisionError(f"{a} is the negative of {b}", (a, b))
    ms = c.matrices + tuple(as_matrix(-m) for m in c.matrices)
    labels = c.labels + tuple(_negated_label(x) for x in c.labels)
    out = Constellation(ms, labels, c.family, dict(c.params), c.chain + ({"op": "negate"},))
    return out.validate()


def omega_extend(c: Constellation, k: int) -> Constellation:
    """Union of the orbits ``{w^t V : 0 <= t < k}``, ``w = exp(2 pi i / k)``.

    Members are ordered power-major: all of ``c``, then ``w c``, and so on.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    bad = _orbit_collisions(c, k, include_identity=True)
    if bad:
        i, j, t = bad[0]
        a, b = c.labels[i], c.labels[j]
        raise CollisionError(f"{a} = ω^{t} {b} for ω of order {k}", (a, b))
    ms, labels = [], []
    for t in range(k):
        w = PhaseCoefficient.root(k, t).value
        for lab, m in zip(c.labels, c.matrices):
            ms.append(w * m)
            labels.append(_omega_label(t, lab))
    out = Constellation(tuple(ms), tuple(labels), c.family, dict(c.params), c.chain + ({"op": "omega", "k": k},))
    return out.validate()


def predicted_quality_omega(base_quality: float, k: int) -> float:
    """Closed-form candidate ``min(base_quality, sin(pi / k))`` for an orbit extension.

    Only an upper bound in general: cross-orbit differences ``A - w^t B`` can
    be closer than ``A - B`` (see :func:`modulus_inequality_check`).
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    return min(base_quality, abs(math.sin(math.pi / k)))


def orbit_distance(k: int, j: int) -> float:
    """Distance between ``V`` and ``w^j V``; equals |sin(pi j / k)| for any unitary V."""
    return abs(math.sin(math.pi * j / k))


def modulus_inequality_check(a, b, omega) -> bool:
    """Whether ``|det(a - omega b)| >= |det(a - b)|`` (1e-9 slack).

    This does *not* hold for all unitary pairs: ``a = I``, ``b = conj(omega) I``
    makes the left side zero.  The function reports, it does not assume.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise OrderMismatchError("a and b must have the same order")
    w = complex(omega)
    return abs(determinant(a - w * b)) >= abs(determinant(a - b)) - 1e-9


class TangleVariant(enum.Enum):
    """Block layouts, each scaled by 1/sqrt(2)."""

    AA_BNB = "AA/B-B"  # [[A, A], [B, -B]]
    AB_ANB = "AB/A-B"  # [[A, B], [A, -B]]
    BA_BNA = "BA/B-A"  # [[B, A], [B, -A]]
    BNA_BA = "B-A/BA"  # [[B, -A], [B, A]]

    @classmethod
    def parse(cls, text: str) -> "TangleVariant":
        for v in cls:
            if text in (v.value, v.name):
                return v
        raise ValueError(f"unknown tangle variant {text!r}")


def _layout(a, b, variant: TangleVariant) -> np.ndarray:
    if variant is TangleVariant.AA_BNB:
        return np.block([[a, a], [b, -b]])
    if variant is TangleVariant.AB_ANB:
        return np.block([[a, b], [a, -b]])
    if variant is TangleVariant.BA_BNA:
        return np.block([[b, a], [b, -a]])
    return np.block([[b, -a], [b, a]])


def tangle(a, b, variant: TangleVariant | str = TangleVariant.AA_BNB, tol: float = UNITARY_TOL) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise OrderMismatchError("tangle blocks must have the same order")
    require_unitary(a, tol, "first block")
    require_unitary(b, tol, "second block")
    if isinstance(variant, str):
        variant = TangleVariant.parse(variant)
    return as_matrix(TANGLE_SCALE * _layout(a, b, variant))


def tangle_extend(c: Constellation, omega_order: int = 1, scale: float = TANGLE_SCALE) -> Constellation:
    """Double the order: tensor-like ``B_i`` for every member plus crossed ``C_i, D_i`` per pair.

    With members ``A_1 .. A_2w`` paired as (1, 2), (3, 4), ... and
    ``s = scale``::

        B_i = s [[A_i, A_i], [A_i, -A_i]]
        C_i = s [[A_i, -A_i], [A_i+1, A_i+1]]
        D_i = s [[A_i+1, -A_i+1], [A_i, A_i]]

    each multiplied by ``w^0 .. w^(t-1)`` for ``w`` of order ``t``; that is
    ``4 w t`` members of order ``2M``, ordered power-major with the ``w``-free
    members first.  Only ``scale = 1/sqrt(2)`` gives unitary members; other
    values are rejected after the unitarity check.
    """
    t = int(omega_order)
    if t < 1:
        raise ValueError("omega_order must be positive")
    if len(c) % 2:
        raise ValueError("tangle_extend needs an even number of members")
    bad = _orbit_collisions(c, t, include_identity=True) if t > 1 else [
        (i, j, 0) for i, j in combinations(range(len(c)), 2)
        if max_entry(c.matrices[i] - c.matrices[j]) <= DUPLICATE_TOL
    ]
    if bad:
        i, j, s = bad[0]
        a, b = c.labels[i], c.labels[j]
        raise CollisionError(f"{a} = ω^{s} {b}", (a, b))
    warn_deviation(
        ReferenceDeviation(
            "tangle-prefactor",
            "block prefactor 1/2 in the published general construction is not unitary; 1/sqrt(2) is used",
            claimed=0.5,
            computed=TANGLE_SCALE,
        )
    )
    log.info("tangle_extend: using block prefactor %.17g", scale)

    A, L = c.matrices, c.labels
    base_ms, base_labels = [], []
    for a, lab in zip(A, L):
        base_ms.append(scale * np.block([[a, a], [a, -a]]))
        base_labels.append(f"B[{lab}]")
    for i in range(0, len(A), 2):
        a, b = A[i], A[i + 1]
        pair = f"{L[i]},{L[i + 1]}"
        base_ms.append(scale * np.block([[a, -a], [b, b]]))
        base_labels.append(f"C[{pair}]")
        base_ms.append(scale * np.block([[b, -b], [a, a]]))
        base_labels.append(f"D[{pair}]")
    for lab, m in zip(base_labels, base_ms):
        r = unitarity_residual(m)
        if r > UNITARY_TOL:
            raise NotUnitaryError(f"tangled member {lab} is not unitary (residual {r:.3g})", r)

    ms, labels = [], []
    for s in range(t):
        w = PhaseCoefficient.root(t, s).value
        for lab, m in zip(base_labels, base_ms):
            ms.append(w * m)
            labels.append(_omega_label(s, lab))
    out = Constellation(
        tuple(ms), tuple(labels), c.family, dict(c.params),
        c.chain + ({"op": "tangle", "omega_order": t},),
    )
    return out.validate()


def omega_free(c: Constellation) -> Constellation:
    """Members without an ``ω^t`` prefix (the t = 0 layer of an orbit extension)."""
    keep = [i for i, lab in enumerate(c.labels) if not lab.startswith(OMEGA_PREFIX)]
    return Constellation(
        tuple(c.matrices[i] for i in keep),
        tuple(c.labels[i] for i in keep),
        c.family,
        dict(c.params),
        c.chain + ({"op": "omega-free"},),
    )


def predicted_quality_tangle(base_quality: float) -> float:
    """``2**(1/4) * base_quality``: the published tensor-doubling figure."""
    return 2 ** 0.25 * base_quality


def predicted_quality_tangle_extend(base_quality: float, omega_order: int) -> float:
    q = predicted_quality_tangle(base_quality)
    if omega_order > 1:
        q = min(q, abs(math.sin(math.pi / omega_order)))
    return q
