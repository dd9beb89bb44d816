"""Orthoplex-bound frames from Singer and relative difference sets."""

from .analysis import (
    AnalysisReport,
    analyze,
    certify_picket_values,
    coherence,
    equiangularity,
    fourier_identity_check,
    gramian,
    modulation_operators,
    mutual_unbiasedness,
    orthoplex_check,
    tightness,
    welch_bound,
)
from .config import DEFAULT_TOLERANCES, Tolerances
from .design2 import (
    DesignCertificate,
    WeightedFrame,
    design_sum,
    picket_weights,
    projector_sum_check,
    singer_weights,
)
from .designsets import (
    DesignSet,
    Plain,
    Relative,
    difference_spectrum,
    relative_set,
    search_difference_sets,
    search_picket_fence,
    singer_set,
    verify_design,
)
from .framegen import (
    Frame,
    GeneratingSequence,
    adjoin_basis,
    chirp_mub,
    cyclic_frame,
    drop_basis_vectors,
    example_5_2,
    picket_blocks,
    picket_ogf,
    singer_ogf,
)
from .gf import FieldSpec, GFElement, discrete_log_table, make_field, primitive_element, relative_trace

__version__ = "0.1.0"
