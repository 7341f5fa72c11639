"""Linear codes from configurations of affine lines over a prime field,
with effective-set majority-vote decoding."""

from .errors import (
    FieldDivisionError,
    FieldMismatchError,
    GenerationError,
    InconsistencyError,
    LinecodeError,
    NoIntersectionError,
    ParameterError,
    ShapeError,
    SingularMatrixError,
    TooLargeError,
    UnsupportedError,
)
from .gfield import FieldElement, FieldSpec, Matrix, add, det, inverse, mul, mul_inv, rank, solve
from .geometry import (
    Configuration,
    Line,
    Point,
    grid_configuration,
    intersection,
    is_general_position,
    points_on_line,
    random_configuration,
)
from .evalcode import CodeInstance, MonomialBasis, build_code, code_parameters, encode, evaluate_poly
from .decoder import (
    DecodeReport,
    Decoder,
    EffectiveSet,
    Exhaustive,
    Sampled,
    collision_rank,
    count_effective_sets,
    decode,
    enumerate_effective_sets,
    sample_effective_set,
    solve_minor,
)
from .codefile import load_code, make_code, save_code

__version__ = "0.1.0"
