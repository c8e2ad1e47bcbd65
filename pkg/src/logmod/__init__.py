"""logmod: decision procedures and certified numerics for pattern algebras.

The package decides when a reflexive-transitive matrix-unit pattern is block
upper triangular up to permutation (the factorization-friendly shape), builds
structured Cholesky factors, spectral (Fejer-Riesz and outer) factorizations
on the circle, 2-summing norms with Pietsch-style domination certificates, and
positive extensions of pattern-algebra representations together with Naimark
dilations of finite POVMs.
"""

from __future__ import annotations

import os as _os

# Honor the thread cap before any BLAS-backed import happens in this process.
_threads = _os.environ.get("LOGMOD_THREADS", "")
if _threads.isdigit() and int(_threads) > 0:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)
del _os

from . import errors
from .errors import (
    DegenerateLeading,
    DimensionMismatch,
    Infeasible,
    LogmodError,
    NoConvergence,
    NotHermitian,
    NotNonnegative,
    NotPOVM,
    NotPSD,
    NotPositive,
    NotQuadratic,
    NotQuadraticFamily,
    NotTransitive,
    NumericalFailure,
    ParallelogramViolation,
    ParseError,
    PrecisionUnreachable,
    TooLarge,
    WitnessInvalid,
)
from .linalg import (
    HermitianEigen,
    cholesky,
    col_block_norm,
    herm_eig,
    operator_norm,
    row_block_norm,
)
from .patterns import (
    BlockStructure,
    LogmodularVerdict,
    Pattern,
    decide_logmodular,
    enumerate_patterns,
    transitive_closure,
)
from .factor import (
    FactorResult,
    factor_attempt,
    refute_logmodular,
    structured_cholesky,
)
from .spectral import (
    AnalyticPoly,
    BoundaryFunction,
    TrigPoly,
    fejer_riesz,
    logmodular_witness,
    outer_function,
)
from .domination import (
    DominationCertificate,
    LMIProblem,
    LmiSolution,
    SubspaceMap,
    cb_level_norm,
    dominating_state,
    dual_witness_functions,
    solve_lmi,
    two_summing_norm,
)
from .extension import (
    ExtensionReport,
    PatternRepresentation,
    PositiveMapOnMatrices,
    QuadraticFormOracle,
    assemble_positive_map,
    corner_representation,
    direct_sum,
    dominating_functional,
    identity_representation,
    naimark_dilate,
    polarization_reconstruct,
    positive_extension,
    rn_margin,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
