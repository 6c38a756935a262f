"""Frames, fusion frames, and framed positive operator-valued measures.

Finite-dimensional toolkit: frame models and their duals, atom-indexed
positive operator families with axiom checks, minimal dilations onto block
spectral measures, canonical dual measures, uniform-multiplicity
decompositions, and operator-valued densities against scalar reference
measures. A JSON document layer and CLI wrap the library.
"""

from .errors import (
    DegenerateBasisError,
    DimensionMismatchError,
    DocumentError,
    EventSpaceTooLargeError,
    FramePovmError,
    InvalidIsometryError,
    InvalidPovmError,
    NotAbsolutelyContinuousError,
    NotAFrameError,
    NotInvertibleError,
    NumericalFailure,
    ParseError,
    SchemaError,
    SpaceMismatchError,
    ValidationError,
)
from .operators import (
    DEFAULT_TOLERANCES,
    PositiveOperator,
    Projection,
    Tolerances,
    invert_positive,
    loewner_bounds,
    operator_rank,
    orthonormalize_columns,
    projector_from_columns,
    psd_sqrt,
    support_basis,
)
from .measure import DiscreteBorelSpace, Event, ScalarMeasure, measure_of
from .frames import (
    Frame,
    FrameBounds,
    FusionFrame,
    SampledGeneralizedFrame,
    analyze,
    canonical_dual,
    frame_bounds,
    frame_operator,
    synthesize,
)
from .povm import (
    FramedPOVM,
    PovmReport,
    SpectralCheck,
    effect,
    induced_scalar_measure,
    is_spectral,
    povm_from_frame,
    povm_from_fusion_frame,
    povm_from_sampled_generalized_frame,
    total_effect,
    validate,
)
from .naimark import (
    DilationReport,
    NaimarkRepresentation,
    TransportResult,
    VectorValuedMeasure,
    analysis_measure,
    check_minimality,
    intertwining_unitary,
    minimal_dilation,
    synthesize_measure,
    transport,
    verify_dilation,
)
from .duality import DualPair, DualityReport, canonical_dual_povm, verify_duality
from .multiplicity import (
    CanonicalSignature,
    DecompositionReport,
    MultiplicityComponent,
    canonical_signature,
    decompose,
    verify_decomposition,
)
from .radon_nikodym import (
    RadonNikodymDecomposition,
    RadonNikodymReport,
    base_measure,
    rn_derivative,
    verify_rn,
)
from .documents import Document, Report, canonical_json, document_for, emit, parse
from .oracles import (
    EventCheckReport,
    InstanceGenerator,
    brute_force_frame_operator,
    exhaustive_event_check,
    shuffled_dilation,
)

__version__ = "0.1.0"
