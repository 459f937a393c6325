from .eval_matrix import EvalMatrix, ThresholdPair, format_rational, matrix_from_values, to_rational, validate_matrix
from .exceptions import (
    CertificateError,
    DichotomyLabError,
    InvalidWitnessError,
    LPError,
    LPInfeasibleError,
    LPUnboundedError,
    MatrixParseError,
    MatrixValidationError,
    ParameterError,
    PivotLimitError,
    ReportIntegrityError,
    WitnessIndexError,
    WitnessShapeError,
)
from .metrics import SearchMetrics
from .witnesses import (
    CoefVector,
    Orientation,
    ShatterWitness,
    StaircaseWitness,
    WitnessCheck,
    check_chain,
    check_shatter,
    check_staircase,
)
