"""Traveling-wave solitons of nonlinear Schrodinger equations with
nonvanishing conditions at infinity, computed by constrained variational
minimization on axisymmetric grids."""

from .ansatz import dilate, make_wr, pohozaev_normalize, prepare_initial
from .functionals import FunctionalReport, evaluate, pde_residual
from .grid import Field, Grid, constant_field, d_rho, d_x1, laplacian_transverse
from .kernels import ACTIVE_LANE
from .minimizer import (MinimizeConfig, SolitonRecord, certify,
                        minimize_E_fixed_P, minimize_T_fixed_J, solve)
from .nonlinearity import (Nonlinearity, check_assumptions, make_cubic_quintic,
                           make_gp, theta, theta_prime, v_mod)
from .regularize import modulus_control, regularize

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_LANE", "Field", "FunctionalReport", "Grid", "MinimizeConfig",
    "Nonlinearity", "SolitonRecord", "certify", "check_assumptions",
    "constant_field", "d_rho", "d_x1", "dilate", "evaluate",
    "laplacian_transverse", "make_cubic_quintic", "make_gp", "make_wr",
    "minimize_E_fixed_P", "minimize_T_fixed_J", "modulus_control",
    "pde_residual", "pohozaev_normalize", "prepare_initial", "regularize",
    "solve", "theta", "theta_prime", "v_mod",
]
