"""miint: modular iterated integrals toolkit for SL2(Z).

Exact q-expansions, real-analytic Eisenstein series, Eichler integrals and
period polynomials, additively twisted L-values, second-order series and
their invariant coefficient vectors, iterated Eichler integrals up to depth
three, Maass-operator identity checks, and exact dimension formulas for the
associated vector-valued spaces.
"""

from .errors import ConvergenceError, PrecisionError
from .group import (
    BiWeight,
    GroupElement,
    IDENTITY,
    INFINITY,
    PolyC,
    R,
    S,
    T,
    T_pow,
    act_poly,
    act_rs,
    act_rs_fn,
    act_tensor,
    enumerate_cosets,
    jfactor,
    mobius,
    word_decompose,
    word_to_matrix,
)
from .qforms import QExpansion, cusp_basis, delta_q, eisenstein_q, eval_form
from .periods import (
    PeriodCocycle,
    eichler_F,
    exp_poly_primitive,
    lambda_table,
    period_from_Lvalues,
    period_poly,
    period_poly_base,
    twisted_L,
)
from .raseries import (
    SeriesValue,
    TruncationParams,
    coeff_decompose,
    closed_form_phi_j,
    eisenstein_rs,
    fourier_coefficient,
    kloosterman_twisted,
    phi,
    phi_coefficient,
    poincare,
    psi_series,
    second_order_G,
)
from .maass import FDScheme, maass_d, maass_dbar
from .iterated import IteratedIntegrand, iterated_F, map_to_MI, order_check
from .vvdim import dim_M2c, dim_Mk_rho, rho_matrices, trace_ST

__version__ = "0.1.0"
