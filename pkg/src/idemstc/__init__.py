"""Unitary space-time constellations built from orthogonal idempotents."""

from .constellations import (
    Constellation,
    QualityReport,
    check_diversity_criterion,
    cyclic_quality,
    distance,
    gen_angle,
    gen_cyclic,
    gen_gaussian,
    gen_rational,
    gen_real_rank1,
    is_fully_diverse,
    predicted_distance_rank1,
    predicted_quality_angle,
    predicted_sum_distance_rank1,
    quality,
)
from .errors import ReferenceDeviation, ReferenceDeviationWarning
from .extensions import (
    TangleVariant,
    modulus_inequality_check,
    negate_extend,
    omega_extend,
    omega_free,
    predicted_quality_omega,
    predicted_quality_tangle,
    tangle,
    tangle_extend,
)
from .idempotents import (
    CompleteOrthogonalSet,
    SymmetricIdempotent,
    angle_idempotent,
    complement,
    complete_set_from_unitary_rows,
    diagonal_set,
    dft_set,
    gaussian_idempotent,
    rank1_projector,
    rational_idempotent,
    validate_set,
)
from .linalg import (
    SpectralDecomposition,
    conj_transpose,
    det_block_2x2,
    determinant,
    mat_mul,
    spectral_decompose_unitary,
)
from .synthesis import (
    PhaseCoefficient,
    det_via_ranks,
    inverse_via_idempotents,
    reflection_unitary,
    unitary_from_set,
)

__version__ = "0.1.0"
