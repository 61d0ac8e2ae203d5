"""Exact p-adic strata, simple characters and tame Yu data for GL_N over Q_p."""

__version__ = "0.1.0"

from .padic import Elem, Subfield, Tower, make_tower  # noqa: E402
from .orders import CentralizerAlgebra, StandardOrder  # noqa: E402
from .strata import (ApproxSequence, Stratum, approx_sequence, is_minimal,  # noqa: E402
                     is_pure, is_simple, k0)
from .generic import check_GE1, minimal_via_sr, sr  # noqa: E402
from .characters import (MultChar, SimpleCharacter, build_theta, factor_theta,  # noqa: E402
                         group_shape, sample_theta)
from .bridge import (build_tower, index_ladder, verify_filt_dictionary,  # noqa: E402
                     verify_group_equalities)
from .yu import YuDatum, assemble, hat_product_equals_theta, validate  # noqa: E402

__all__ = [
    "ApproxSequence", "CentralizerAlgebra", "Elem", "MultChar", "SimpleCharacter",
    "StandardOrder", "Stratum", "Subfield", "Tower", "YuDatum", "approx_sequence", "assemble",
    "build_theta", "build_tower", "check_GE1", "factor_theta", "group_shape",
    "hat_product_equals_theta", "index_ladder", "is_minimal", "is_pure", "is_simple", "k0",
    "make_tower", "minimal_via_sr", "sample_theta", "sr", "validate", "verify_filt_dictionary",
    "verify_group_equalities",
]
