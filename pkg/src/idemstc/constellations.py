"""Constellations of unitary matrices, their distances, and the generated families."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import CollisionError, NotUnitaryError, OrderMismatchError, ReferenceDeviation, warn_deviation
from .idempotents import (
    CompleteOrthogonalSet,
    angle_idempotent,
    canonical_vector,
    diagonal_set,
    gaussian_idempotent,
    rational_idempotent,
)
from .linalg import UNITARY_TOL, as_matrix, determinant, determinants, max_entry, unitarity_residual
from .synthesis import PhaseCoefficient, abs_det_via_ranks, reflection_unitary, unitary_from_set

DUPLICATE_TOL = 1e-10
DIVERSITY_TOL = 1e-9
BUCKET_DECIMALS = 12
_PAIR_CHUNK = 1 << 17


@dataclass(frozen=True)
class Constellation:
    """An ordered, labelled list of same-order matrices.

    Construction only checks shapes and labels.  Call :meth:`validate` for
    the unitarity and distinctness invariants; generators do so before
    returning, and loaders leave it to ``verify`` so that broken files can
    still be reported on.
    """

    matrices: tuple[np.ndarray, ...]
    labels: tuple[str, ...]
    family: str = ""
    params: dict = field(default_factory=dict)
    chain: tuple[dict, ...] = ()

    def __post_init__(self):
        ms = tuple(as_matrix(m) for m in self.matrices)
        object.__setattr__(self, "matrices", ms)
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "chain", tuple(self.chain))
        if not ms:
            raise ValueError("a constellation needs at least one member")
        if len(self.labels) != len(ms):
            raise ValueError("one label per matrix")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique")
        n = ms[0].shape[0]
        for m in ms:
            if m.shape != (n, n):
                raise OrderMismatchError("all members must have the same order")

    @property
    def order(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def rate(self) -> float:
        return math.log2(len(self)) / self.order

    def __len__(self) -> int:
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def validate(self, tol: float = UNITARY_TOL, distinct: bool = True) -> "Constellation":
        for lab, m in zip(self.labels, self.matrices):
            r = unitarity_residual(m)
            if r > tol:
                raise NotUnitaryError(f"member {lab} is not unitary (residual {r:.3g})", r)
        if distinct:
            dup = find_duplicates(self)
            if dup:
                a, b = dup[0]
                raise CollisionError(f"members {a} and {b} coincide", (a, b))
        return self

    def with_metadata(self, family: str | None = None, params: dict | None = None, step: dict | None = None):
        chain = self.chain + ((step,) if step else ())
        return Constellation(
            self.matrices,
            self.labels,
            self.family if family is None else family,
            dict(self.params if params is None else params),
            chain,
        )


def find_duplicates(c: Constellation, tol: float = DUPLICATE_TOL) -> list[tuple[str, str]]:
    out = []
    for i, j in combinations(range(len(c)), 2):
        if max_entry(c.matrices[i] - c.matrices[j]) <= tol:
            out.append((c.labels[i], c.labels[j]))
    return out


def distance(a, b) -> float:
    """Half the M-th root of |det(a - b)| for M x M matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise OrderMismatchError(f"order mismatch: {a.shape} vs {b.shape}")
    return 0.5 * abs(determinant(a - b)) ** (1.0 / a.shape[0])


def pair_abs_dets(c: Constellation) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """|det(V_i - V_j)| for all i < j, in lexicographic pair order."""
    stack = np.stack(c.matrices)
    ii, jj = np.triu_indices(len(c), 1)
    out = np.empty(len(ii))
    for s in range(0, len(ii), _PAIR_CHUNK):
        sl = slice(s, s + _PAIR_CHUNK)
        out[sl] = np.abs(determinants(stack[ii[sl]] - stack[jj[sl]]))
    return ii, jj, out


@dataclass(frozen=True)
class QualityReport:
    quality: float
    rate: float
    min_pair: tuple[str, str]
    min_pair_index: tuple[int, int]
    distribution: tuple[tuple[float, int], ...]
    size: int
    order: int

    @property
    def pair_count(self) -> int:
        return sum(n for _, n in self.distribution)

    @property
    def mean_distance(self) -> float:
        return sum(d * n for d, n in self.distribution) / self.pair_count

    def count_at(self, value: float, tol: float = 10.0 ** -BUCKET_DECIMALS) -> int:
        return sum(n for d, n in self.distribution if abs(d - value) <= tol)

    def as_dict(self) -> dict:
        return {
            "quality": self.quality,
            "rate": self.rate,
            "min_pair": list(self.min_pair),
            "distribution": [{"distance": d, "count": n} for d, n in self.distribution],
        }


def distances_from_abs_dets(abs_dets: np.ndarray, order: int) -> np.ndarray:
    return 0.5 * abs_dets ** (1.0 / order)


def summarize(c: Constellation, dists: np.ndarray, ii: np.ndarray, jj: np.ndarray) -> QualityReport:
    qmin = float(dists.min())
    # lexicographically first pair that attains the minimum up to rounding
    hit = int(np.flatnonzero(dists <= qmin + 1e-12 * max(1.0, qmin))[0])
    counts = Counter(np.round(dists, BUCKET_DECIMALS).tolist())
    return QualityReport(
        quality=qmin,
        rate=c.rate,
        min_pair=(c.labels[ii[hit]], c.labels[jj[hit]]),
        min_pair_index=(int(ii[hit]), int(jj[hit])),
        distribution=tuple(sorted(counts.items())),
        size=len(c),
        order=c.order,
    )


def quality(c: Constellation) -> QualityReport:
    """Full pairwise scan: quality, rate, minimising pair and distance spectrum."""
    if len(c) < 2:
        raise ValueError("quality needs at least two members")
    ii, jj, dets = pair_abs_dets(c)
    return summarize(c, distances_from_abs_dets(dets, c.order), ii, jj)


def is_fully_diverse(c: Constellation, tolerance: float = DIVERSITY_TOL):
    """``(True, None)`` if every |det(A - B)| exceeds ``tolerance``, else ``(False, (label, label))``."""
    if len(c) < 2:
        return True, None
    ii, jj, dets = pair_abs_dets(c)
    bad = np.flatnonzero(dets <= tolerance)
    if bad.size:
        k = int(bad[0])
        return False, (c.labels[ii[k]], c.labels[jj[k]])
    return True, None


def check_diversity_criterion(tuples: Sequence[Sequence[int]], root_order: int) -> bool:
    """Exact test: no two tuples share an exponent (mod root_order) in any coordinate."""
    if not tuples:
        return True
    width = len(tuples[0])
    if any(len(t) != width for t in tuples):
        raise ValueError("tuples must all have the same length")
    for col in range(width):
        seen = [t[col] % root_order for t in tuples]
        if len(set(seen)) != len(seen):
            return False
    return True


# --- cyclic (commuting) family ------------------------------------------------


def parse_tuples(text: str) -> list[tuple[int, ...]]:
    """``"0,2;1,4"`` -> ``[(0, 2), (1, 4)]``."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            out.append(tuple(int(x) for x in chunk.split(",")))
    return out


def tuple_label(t: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in t) + ")"


def gen_cyclic(
    root_order: int,
    tuples: Sequence[Sequence[int]],
    basis: CompleteOrthogonalSet | None = None,
) -> Constellation:
    """Members ``sum_t exp(2 pi i j_t / n) E_t``, one per exponent tuple.

    ``basis`` defaults to the diagonal set of matching size.
    """
    if root_order < 1:
        raise ValueError("root_order must be positive")
    tuples = [tuple(int(x) % root_order for x in t) for t in tuples]
    if not tuples:
        raise ValueError("no tuples given")
    width = len(tuples[0])
    if basis is None:
        basis = diagonal_set(width)
        basis_name = "diagonal"
    else:
        basis_name = "custom"
    if len(basis) != width or any(len(t) != width for t in tuples):
        raise ValueError("every tuple needs one exponent per idempotent")
    ms = [unitary_from_set(basis, [PhaseCoefficient.root(root_order, j) for j in t]) for t in tuples]
    c = Constellation(
        tuple(ms),
        tuple(tuple_label(t) for t in tuples),
        "cyclic",
        {"n": root_order, "tuples": [list(t) for t in tuples], "basis": basis_name},
    )
    return c.validate(distinct=False)


def cyclic_abs_dets(tuples: Sequence[Sequence[int]], root_order: int, ranks: Sequence[int]) -> list[float]:
    """|det(V_r - V_s)| for all pairs via the rank-product formula, no matrices built."""
    out = []
    for a, b in combinations(tuples, 2):
        diffs = [
            PhaseCoefficient.root(root_order, x).value - PhaseCoefficient.root(root_order, y).value
            for x, y in zip(a, b)
        ]
        out.append(abs_det_via_ranks(ranks, diffs))
    return out


def cyclic_quality(tuples: Sequence[Sequence[int]], root_order: int, ranks: Sequence[int] | None = None) -> float:
    """Quality of a cyclic constellation from exponent tuples alone."""
    width = len(tuples[0])
    ranks = list(ranks) if ranks is not None else [1] * width
    order = sum(ranks)
    return min(0.5 * d ** (1.0 / order) for d in cyclic_abs_dets(tuples, root_order, ranks))


# --- real rank-1 reflections --------------------------------------------------


def real_rank1_member(k: int) -> np.ndarray:
    return reflection_unitary(rational_idempotent(1, k + 1))


def gen_real_rank1(indices: Iterable[int]) -> Constellation:
    """``A_k = 2 E_k - I`` with E_k the projector onto (1, sqrt(k)) / sqrt(k + 1)."""
    indices = [int(k) for k in indices]
    if len(set(indices)) != len(indices):
        raise ValueError("indices must be distinct")
    if any(k < 1 for k in indices):
        raise ValueError("indices must be positive")
    c = Constellation(
        tuple(real_rank1_member(k) for k in indices),
        tuple(f"A_{k}" for k in indices),
        "real-rank1",
        {"indices": indices},
    )
    return c.validate()


def predicted_distance_rank1(k: int, l: int) -> float:
    if k == l:
        raise ValueError("k and l must differ")
    return abs(math.sqrt(l) - math.sqrt(k)) / math.sqrt((l + 1) * (k + 1))


def predicted_sum_distance_rank1(k: int, l: int) -> float:
    """Distance between A_k and -A_l: the cosine of the angle between their lines."""
    return (1 + math.sqrt(k * l)) / math.sqrt((l + 1) * (k + 1))


def gen_rational(pairs: Iterable[Sequence[int]]) -> Constellation:
    """``A_{p,q} = 2 E_{p,q} - I`` for each (p, q)."""
    pairs = [(int(p), int(q)) for p, q in pairs]
    c = Constellation(
        tuple(reflection_unitary(rational_idempotent(p, q)) for p, q in pairs),
        tuple(f"A_{p},{q}" for p, q in pairs),
        "rational",
        {"pairs": [list(x) for x in pairs]},
    )
    return c.validate()


# --- angle family -------------------------------------------------------------


def gen_angle(n: int) -> Constellation:
    """``U_j = 2 E(2 pi j / n) - I`` for j = 0..n-1.

    For even ``n`` the angles ``theta`` and ``theta + pi`` give the same
    projector, so the result has coincident members and quality 0.  It is
    still returned (that failure is the point of the even case).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    ms = tuple(reflection_unitary(angle_idempotent(2 * math.pi * j / n)) for j in range(n))
    c = Constellation(ms, tuple(f"U_{j}" for j in range(n)), "angle", {"n": n})
    return c.validate(distinct=n % 2 == 1)


def predicted_quality_angle(n: int) -> float:
    if n < 3 or n % 2 == 0:
        raise ValueError("the closed form holds for odd n >= 3 only")
    return abs(math.sin(math.pi / n))


# --- Gaussian-integer family --------------------------------------------------

# (a, b) whose published idempotent has a misprinted diagonal entry
_MISPRINTED = {(complex(1, 3), complex(3, 1)): "(2,2) entry printed as 5/20; trace 1 forces 10/20"}


def gaussian_label(a: complex, b: complex) -> str:
    return f"({_gauss_str(a)},{_gauss_str(b)})"


def _gauss_str(z: complex) -> str:
    z = complex(z)
    re, im = int(z.real), int(z.imag)
    if im == 0:
        return str(re)
    if re == 0:
        return f"{im}i"
    return f"{re}{'+' if im > 0 else '-'}{abs(im)}i"


def parse_gaussian(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    if t.endswith("j") and (t == "j" or t[-2] in "+-"):
        t = t[:-1] + "1j"
    return complex(t)


def gen_gaussian(pairs: Iterable[Sequence[complex]]) -> Constellation:
    """``2 E - I`` for the projector onto each Gaussian-integer vector (a, b)."""
    pairs = [(complex(a), complex(b)) for a, b in pairs]
    canon = [canonical_vector(p) for p in pairs]
    for i, j in combinations(range(len(pairs)), 2):
        if np.max(np.abs(canon[i] - canon[j])) <= DUPLICATE_TOL:
            la, lb = gaussian_label(*pairs[i]), gaussian_label(*pairs[j])
            raise CollisionError(f"{lb} is a scalar multiple of {la}", (la, lb))
    for p in pairs:
        if p in _MISPRINTED:
            e = gaussian_idempotent(*p)
            warn_deviation(
                ReferenceDeviation(
                    "gaussian-trace",
                    f"idempotent for {gaussian_label(*p)}: {_MISPRINTED[p]}",
                    claimed=5 / 20,
                    computed=float(e.matrix[1, 1].real),
                )
            )
    c = Constellation(
        tuple(reflection_unitary(gaussian_idempotent(a, b)) for a, b in pairs),
        tuple(gaussian_label(a, b) for a, b in pairs),
        "gaussian",
        {"pairs": [[_gauss_str(a), _gauss_str(b)] for a, b in pairs]},
    )
    return c.validate()
