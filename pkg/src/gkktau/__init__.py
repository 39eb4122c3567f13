"""Exact construction and certification of a Toeplitz Hessenberg matrix
family whose members satisfy strong positivity properties yet fail to be
positive stable once the band parameter exceeds 20."""

from .charpoly import Polynomial, charpoly, eta, g_poly, nu, phi, phi_tilde, psi
from .classify import (
    ClassReport,
    MinRealEig,
    gkk_structured,
    is_GKK,
    is_omega,
    is_P_matrix,
    is_positive_stable,
    is_tau,
    is_weakly_sign_symmetric,
    min_real_eig,
    varga_wedge_check,
)
from .exact import IndexSet, RatMatrix, Rational, det, det_oracle, minor, submatrix
from .family import FamilyParams, build_A, build_B, coeff_a, coeff_a_solve, minor_formula
from .hurwitz import (
    HurwitzMatrix,
    build_hurwitz,
    closed_form_minor,
    hurwitz_minor_2to5,
    routh_stable,
    threshold_scan,
    tnn_spot_check,
)
from .rootfind import (
    ComplexRoot,
    LambdaChain,
    RootEnclosure,
    complex_roots,
    lambda_chain,
    refine,
    sturm_isolate,
)

__version__ = "0.1.0"
