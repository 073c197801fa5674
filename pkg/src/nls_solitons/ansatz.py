"""Constructive test fields: ring ansatz, dilations, constraint seeding.

The ring field w_r = chi_r e^{i phi_r} carries one unit of phase winding
around the circle {x1 = 0, |x_perp| = r}: the phase phi_r ramps linearly
from 0 to 2 pi across the wedge |x1| < r - rho and the cutoff chi_r
removes the core where the phase is singular.  Its momentum satisfies the
two-sided bracket

    -2 pi omega_{N-1} r^{N-1} <= P(w_r) <= -2 pi omega_{N-1} (r-2)^{N-1}.

Dilations w_{l1,l2}(x) = w(x1/l1, x_perp/l2) are realized purely on grid
metadata (values untouched), so the functional scaling laws

    T(w_{1,s}) = s^{N-3} T(w),   J(w_{1,s}) = s^{N-1} J(w)

hold to machine precision; they drive the exact constraint restorations
and the Pohozaev normalization lambda_w = sqrt((N-3) T / ((N-1) J)).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericsError, ParameterError
from .functionals import constraint_j, evaluate, transverse_kinetic
from .grid import Field, Grid

# ---------------------------------------------------------------------------
# dilations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DilationParams:
    lambda1: float
    lambda2: float

    def __post_init__(self):
        for lam in (self.lambda1, self.lambda2):
            if not (lam > 0 and math.isfinite(lam)):
                raise ParameterError(f"dilation factors must be positive, got {self}")


def dilate(w, lambda1, lambda2=None):
    """w(x1/lambda1, rho/lambda2) via grid-metadata rescale, no interpolation."""
    if isinstance(lambda1, DilationParams):
        d = lambda1
    else:
        d = DilationParams(float(lambda1), float(lambda2))
    return w.on_grid(w.grid.scaled(d.lambda1, d.lambda2))


# ---------------------------------------------------------------------------
# smooth cutoff chi
# ---------------------------------------------------------------------------

_CHI_LO = 0.25   # chi == 0 below this radius: cuts the phase singularity out
_CHI_HI = 2.0
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def _chi_bump(t):
    out = np.zeros_like(t)
    inside = (t > _CHI_LO) & (t < _CHI_HI)
    ti = t[inside]
    out[inside] = np.exp(-1.0 / ((ti - _CHI_LO) * (_CHI_HI - ti)))
    return out


def _chi_mass():
    half = 0.5 * (_CHI_HI - _CHI_LO)
    nodes = _CHI_LO + half * (_GL_NODES + 1.0)
    return half * float(_chi_bump(nodes) @ _GL_WEIGHTS)


_CHI_MASS = _chi_mass()


def chi(x):
    """Monotone C-infinity step: 0 for x <= 1/4, 1 for x >= 2, slope in [0, 2]."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    xv = np.atleast_1d(x)
    out = np.zeros_like(xv)
    out[xv >= _CHI_HI] = 1.0
    mid = (xv > _CHI_LO) & (xv < _CHI_HI)
    if np.any(mid):
        upper = xv[mid]
        half = 0.5 * (upper - _CHI_LO)
        nodes = _CHI_LO + half[:, None] * (_GL_NODES[None, :] + 1.0)
        out[mid] = half * (_chi_bump(nodes) @ _GL_WEIGHTS) / _CHI_MASS
    return float(out[0]) if scalar else out


def chi_prime(x):
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    out = _chi_bump(np.atleast_1d(x)) / _CHI_MASS
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# ring ansatz
# ---------------------------------------------------------------------------

def ring_phase(x1, rho, r):
    """Piecewise winding phase: 0 outside the cylinder rho < r, a linear
    ramp 0 -> 2 pi across the wedge |x1| < r - rho, saturated at 2 pi on
    the downstream side."""
    inside = rho < r
    width = np.where(inside, r - rho, 1.0)
    ramp = math.pi * (x1 / width + 1.0)
    phase = np.where(x1 <= -width, 0.0, np.where(x1 >= width, 2.0 * math.pi, ramp))
    return np.where(inside, phase, 0.0)


def make_wr(grid, r):
    """Ring field w_r = chi_r e^{i phi_r} on the given grid."""
    if r < 2.0:
        raise ParameterError(f"ring radius must satisfy r >= 2, got {r}")
    if grid.L1 < r + 4.0 or grid.L2 < r + 4.0:
        raise ParameterError(
            f"grid too small for ring r={r}: need L1, L2 >= r + 4, "
            f"got L1={grid.L1}, L2={grid.L2}")
    x1 = grid.x1[:, None]
    rho = grid.rho[None, :]
    core_dist = np.sqrt(x1 ** 2 + (rho - r) ** 2)
    amp = chi(core_dist)
    phase = ring_phase(x1, rho, r)
    vals = amp * np.exp(1j * phase)
    # far field is exactly the boundary constant (phase is 0 or 2 pi there)
    vals[0, :] = 1.0
    vals[-1, :] = 1.0
    vals[:, -1] = 1.0
    return Field(grid, vals, 0.0)


def momentum_bracket(dim_N, r):
    """Two-sided bound [-2 pi omega_{N-1} r^{N-1}, -2 pi omega_{N-1} (r-2)^{N-1}]."""
    from .grid import unit_ball_volume
    omega = unit_ball_volume(dim_N - 1)
    lo = -2.0 * math.pi * omega * r ** (dim_N - 1)
    hi = -2.0 * math.pi * omega * (r - 2.0) ** (dim_N - 1)
    return lo, hi


# ---------------------------------------------------------------------------
# constraint-set seeding and Pohozaev normalization
# ---------------------------------------------------------------------------

def prepare_initial(j, nl, nu, grid):
    """A field with J = j (> 0) to machine precision on a rescaled grid.

    Sweeps ring radii until J(w_r) > 0, then applies the exact transverse
    dilation sigma = (j / J(w_r))^{1/(N-1)}.  Deterministic.
    """
    if grid.dim_N < 4:
        raise ParameterError(
            f"fixed-J seeding requires N >= 4, got N = {grid.dim_N}")
    if not j > 0:
        raise ParameterError(f"target constraint value must be positive, got {j}")
    if not (0.0 < nu < math.sqrt(2.0)):
        raise ParameterError(f"seeding requires 0 < nu < sqrt(2), got {nu}")
    r_max = min(grid.L1, grid.L2) - 4.0
    samples = []
    r = 4.0
    while r <= r_max + 1e-12:
        w = make_wr(grid, r)
        j_seed = constraint_j(w, nl, nu)
        samples.append((r, j_seed))
        if j_seed > 0.0:
            sigma = (j / j_seed) ** (1.0 / (grid.dim_N - 1))
            return dilate(w, 1.0, sigma)
        r += 2.0
    raise NumericsError(
        "no ring radius r <= {:.3g} gives J(w_r) > 0; J samples: {}".format(
            r_max, ", ".join(f"r={r:g}: J={jv:.4g}" for r, jv in samples)))


def pohozaev_normalize(w, nl, nu):
    """Transverse dilation onto the Pohozaev manifold.

    Returns (w_{1,lambda_w}, lambda_w) with lambda_w = sqrt((N-3)T/((N-1)J));
    the output satisfies Poh = 0 and S = 2 T / (N-1) up to roundoff.
    """
    dim_N = w.grid.dim_N
    if dim_N < 4:
        raise DomainError("Pohozaev normalization needs N >= 4")
    t = transverse_kinetic(w)
    jv = constraint_j(w, nl, nu)
    if not (t > 0.0 and jv > 0.0):
        raise DomainError(
            f"Pohozaev normalization needs T > 0 and J > 0, got T={t:.4g}, J={jv:.4g}")
    lam = math.sqrt((dim_N - 3) * t / ((dim_N - 1) * jv))
    return dilate(w, 1.0, lam), lam
