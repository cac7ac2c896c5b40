"""Real components of abelian varieties given as lattices with involution."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    AdjointnessViolation,
    InternalInconsistency,
    InvalidCurveData,
    MalformedInput,
    NotAnInvolution,
    PrymCensusError,
    RankGuardExceeded,
)
from .involution import (  # noqa: F401
    InvolutionLattice,
    component_group,
    component_group_oracle,
    decompose,
    split,
    validate,
)
from .linalg import IntegerMatrix, smith_normal_form  # noqa: F401
