"""Axisymmetric spatial discretization of R^N.

Fields w(x1, x_perp) depending only on (x1, |x_perp|) are stored on a 2-D
node grid: x1_i = -L1 + i*h1 (i = 0..n1-1), rho_k = k*h2 (k = 0..n2-1).
Volume integrals over R^N reduce to

    integral f dx = sphere_factor * iint f(x1, rho) rho^{N-2} drho dx1,

with sphere_factor = (N-1) * omega_{N-1} the surface area of the unit
sphere in R^{N-1}.  Quadrature is trapezoid in both directions with the
radial measure rho^{N-2} attached to the nodes; the weight on the axis
column vanishes for N >= 3, which removes the coordinate singularity.

Differential operators are second-order finite differences (see kernels);
the axis is handled by even mirror symmetry and the transverse Laplacian
is in conservative flux form with the regularized (N-1) d2/drho2 limit on
the axis.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .errors import ParameterError, ShapeError


def unit_ball_volume(d):
    """Volume of the unit ball in R^d."""
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


@dataclass(frozen=True)
class Grid:
    """Geometry, spacings and quadrature for one axisymmetric box."""

    dim_N: int
    L1: float
    L2: float
    n1: int
    n2: int

    def __post_init__(self):
        if self.dim_N < 3:
            raise ParameterError(f"grid requires dim_N >= 3, got {self.dim_N}")
        if not (self.L1 > 0 and self.L2 > 0):
            raise ParameterError("grid half-lengths L1, L2 must be positive")
        if self.n1 < 5 or self.n2 < 5:
            raise ParameterError("need at least 5 nodes per direction for the stencils")

    @cached_property
    def h1(self):
        return 2.0 * self.L1 / (self.n1 - 1)

    @cached_property
    def h2(self):
        return self.L2 / (self.n2 - 1)

    @cached_property
    def x1(self):
        return -self.L1 + self.h1 * np.arange(self.n1)

    @cached_property
    def rho(self):
        return self.h2 * np.arange(self.n2)

    @cached_property
    def sphere_factor(self):
        return (self.dim_N - 1) * unit_ball_volume(self.dim_N - 1)

    @cached_property
    def w_x1(self):
        """Trapezoid weights along x1 (line measure)."""
        w = np.full(self.n1, self.h1)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    @cached_property
    def node_pow(self):
        """rho_k^{N-2} at the nodes."""
        return self.rho ** (self.dim_N - 2)

    @cached_property
    def face_pow(self):
        """rho_{k+1/2}^{N-2} at the radial faces (length n2-1)."""
        mid = self.h2 * (np.arange(self.n2 - 1) + 0.5)
        return mid ** (self.dim_N - 2)

    @cached_property
    def w_rho(self):
        """Radial quadrature weights: trapezoid x sphere_factor x rho^{N-2}."""
        w = np.full(self.n2, self.h2)
        w[0] *= 0.5
        w[-1] *= 0.5
        return self.sphere_factor * w * self.node_pow

    @cached_property
    def weights(self):
        """Full (n1, n2) quadrature weight table."""
        return np.outer(self.w_x1, self.w_rho)

    @cached_property
    def w_rho_face(self):
        """Radial face weights sphere_factor * h2 * rho_{k+1/2}^{N-2}."""
        return self.sphere_factor * self.h2 * self.face_pow

    def integrate(self, f):
        """Discrete integral over R^N of a real grid function."""
        f = np.asarray(f)
        if f.shape != (self.n1, self.n2):
            raise ShapeError(
                f"integrand shape {f.shape} does not match grid ({self.n1}, {self.n2})")
        return float(np.sum(self.weights * f))

    def scaled(self, lambda1, lambda2):
        """Grid dilated by (lambda1, lambda2); node counts unchanged."""
        if not (lambda1 > 0 and lambda2 > 0 and math.isfinite(lambda1)
                and math.isfinite(lambda2)):
            raise ParameterError("dilation factors must be positive and finite")
        return Grid(self.dim_N, lambda1 * self.L1, lambda2 * self.L2, self.n1, self.n2)

    def interior_mask(self):
        """True on nodes free to move: everything but the Dirichlet edges.

        The axis column k = 0 is interior (it is not a boundary of the
        domain in R^N); the frozen edges are x1 = +-L1 and rho = L2.
        """
        m = np.zeros((self.n1, self.n2), dtype=bool)
        m[1:-1, :-1] = True
        return m


class Field:
    """Complex axisymmetric grid function with constant Dirichlet far field.

    The outer edges (x1 = +-L1, rho = L2) carry the constant value
    exp(1j*boundary_phase), the discrete stand-in for |w| -> 1 at infinity.
    """

    __slots__ = ("grid", "values", "boundary_phase")

    def __init__(self, grid, values, boundary_phase=0.0):
        values = np.ascontiguousarray(values, dtype=np.complex128)
        if values.shape != (grid.n1, grid.n2):
            raise ShapeError(
                f"field shape {values.shape} does not match grid ({grid.n1}, {grid.n2})")
        self.grid = grid
        self.values = values
        self.boundary_phase = float(boundary_phase) % (2.0 * math.pi)

    @property
    def boundary_value(self):
        return complex(np.exp(1j * self.boundary_phase))

    def with_values(self, values):
        return Field(self.grid, values, self.boundary_phase)

    def on_grid(self, grid):
        """Same values reinterpreted on another grid of equal shape."""
        return Field(grid, self.values, self.boundary_phase)

    def copy(self):
        return Field(self.grid, self.values.copy(), self.boundary_phase)


def constant_field(grid, boundary_phase=0.0):
    vals = np.full((grid.n1, grid.n2), np.exp(1j * boundary_phase), dtype=np.complex128)
    return Field(grid, vals, boundary_phase)


def cdot(a, b):
    """Pointwise real scalar product <a, b> = Re(a conj(b)) of complex arrays."""
    return a.real * b.real + a.imag * b.imag


def inner(grid, a, b):
    """Weighted grid inner product integral(<a, b>)."""
    return grid.integrate(cdot(a, b))


def norm(grid, a):
    """Weighted grid L2 norm."""
    return math.sqrt(max(grid.integrate(np.abs(a) ** 2), 0.0))


def d_x1(w):
    """First x1-derivative of a Field (second-order stencils)."""
    return w.with_values(kernels.d_x1(w.values, w.grid.h1))


def d_rho(w):
    """First radial derivative of a Field; even mirror at the axis."""
    return w.with_values(kernels.d_rho(w.values, w.grid.h2))


def d2_x1(w):
    """Second x1-derivative of a Field."""
    return w.with_values(kernels.d2_x1(w.values, w.grid.h1))


def laplacian_transverse(w):
    """Transverse Laplacian sum_{i=2..N} d^2 w / dx_i^2 of a Field."""
    g = w.grid
    return w.with_values(
        kernels.lap_rho(w.values, g.h2, g.dim_N, g.face_pow, g.node_pow))
