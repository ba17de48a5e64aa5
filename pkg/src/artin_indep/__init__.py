"""Exact truncated Artin L-series and rank certificates for their independence."""

from .arithfun import (CoefficientSeq, MultFun, arithmetic_derivative, dirichlet_convolve,
                       equivalence_witness, identity_e)
from .dseries import (TruncatedSeries, euler_expand, evaluate, finite_difference_check,
                      series_derivative, series_product)
from .exactnum import CycNum, LogPoly
from .galois import (GaloisContext, VirtualCharacter, artin_coefficients, builtin_context,
                     frobenius_class, local_euler_factor, virtual_sum)
from .independence import (build_matrix, decay_probe, exact_rank, float_rank, residual_probe,
                           verify_algebraic_independence, verify_formalism, verify_theorem7)

__version__ = "0.1.0"
