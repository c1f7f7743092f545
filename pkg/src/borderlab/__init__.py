"""borderlab: exact loop-group decompositions, one-parameter-subgroup tensor
limits, and border-subrank degeneration certificates."""

from .errors import (
    BorderlabError,
    FieldMismatchError,
    NoLimitError,
    PlacementError,
    PrecisionError,
    ShapeError,
    SingularError,
    SizeGuardError,
    WitnessVerificationFailure,
)
from .fields import FieldContext, PrimeField, QQ, Rationals, is_prime, random_prime
from .series import DEFAULT_TRUNCATION, LaurentSeries, SeriesMatrix
from .loopgroup import (
    CartanDecomposition,
    VerificationResult,
    cartan_decompose,
    cartan_decompose_tuple,
    smith_form,
    verify_cartan,
)
from .tensors import (
    OneParamSubgroup,
    SeriesTensor,
    SubgroupFactor,
    Tensor,
    WeightDecomposition,
    act,
    act_series,
    limit_at_infinity,
    limit_at_zero,
    recognize_unit_tensor,
    unit_tensor,
    weight_decompose,
)
from .witness import LimitWitness, build_witness, specialize, sym3_lift, sym3_lift_constant
from .degeneration import (
    BlockPlacement,
    DegenerationCertificate,
    DichotomyResult,
    PyramidPattern,
    WeightProfile,
    build_planted_tensor,
    build_pyramid,
    certify_lower_bound,
    hypercube_dichotomy,
    jacobian_dominance_rank,
    min_slice_cover,
    pyramid_size,
    pyramid_weight_profile,
    recheck_certificate,
)
from . import bounds, instances, jsonio

__version__ = "0.1.0"

__all__ = [
    "BorderlabError",
    "FieldMismatchError",
    "NoLimitError",
    "PlacementError",
    "PrecisionError",
    "ShapeError",
    "SingularError",
    "SizeGuardError",
    "WitnessVerificationFailure",
    "FieldContext",
    "PrimeField",
    "QQ",
    "Rationals",
    "is_prime",
    "random_prime",
    "DEFAULT_TRUNCATION",
    "LaurentSeries",
    "SeriesMatrix",
    "CartanDecomposition",
    "VerificationResult",
    "cartan_decompose",
    "cartan_decompose_tuple",
    "smith_form",
    "verify_cartan",
    "OneParamSubgroup",
    "SeriesTensor",
    "SubgroupFactor",
    "Tensor",
    "WeightDecomposition",
    "act",
    "act_series",
    "limit_at_infinity",
    "limit_at_zero",
    "recognize_unit_tensor",
    "unit_tensor",
    "weight_decompose",
    "LimitWitness",
    "build_witness",
    "specialize",
    "sym3_lift",
    "sym3_lift_constant",
    "BlockPlacement",
    "DegenerationCertificate",
    "DichotomyResult",
    "PyramidPattern",
    "WeightProfile",
    "build_planted_tensor",
    "build_pyramid",
    "certify_lower_bound",
    "hypercube_dichotomy",
    "jacobian_dominance_rank",
    "min_slice_cover",
    "pyramid_size",
    "pyramid_weight_profile",
    "recheck_certificate",
    "bounds",
    "instances",
    "jsonio",
]
