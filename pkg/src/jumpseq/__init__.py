"""jumpseq: exact generating sequences of rational valuations on
2-dimensional regular local rings, with blow-up simulation and
machine-checkable toroidal-structure certificates."""

from .errors import (
    DivisibilityError,
    InsufficientDepthError,
    InvalidSpecError,
    JumpseqError,
    ResourceLimitError,
)
from .fields import Fp, GroundField, QQ, prime_field
from .poly import BivarPoly, RatExpr, divmod_in_v, exact_divide
from .euclid import EuclidData, bezout, euclid_data
from .engine import (
    IndependentData,
    JumpingSequence,
    TExpansion,
    ValuationSpec,
    build_jumping_sequence,
    expand,
    extract_independent,
    residue,
    rewrite_in_independent,
    value,
    verify_generating_sequence,
    verify_minimality,
)
from .blowup import (
    Chart,
    ChunkResult,
    chunk_transform,
    initial_chart,
    is_admissible,
    monoidal_sequence,
    single_quadratic_transform,
    strict_transform,
)
from .extension import (
    DualSequences,
    LadderCertificate,
    MonomialExtension,
    ToroidalForm,
    build_dual_sequences,
    chunk_descend,
    classify_toroidal_form,
    discrete_branch_report,
    ladder,
    prepared_pair_check,
    prepared_pair_step,
)

__version__ = "0.1.0"
