"""Numpy implementation of the finite-difference stencil kernels.

All kernels act on complex (n1, n2) arrays: axis 0 is the propagation
direction x1 (uniform spacing h1), axis 1 is the transverse radius rho
(uniform spacing h2, rho_k = k*h2, so column 0 sits on the symmetry axis).

Stencils are second order: central differences in the interior, one-sided
three/four point formulas on the outer edges, and an even mirror extension
across the axis (smooth axisymmetric fields satisfy d/drho = 0 at rho = 0).
"""

import numpy as np

LANE = "numpy"


def d_x1(w, h1):
    """First derivative along x1."""
    out = np.empty_like(w)
    inv2h = 1.0 / (2.0 * h1)
    out[1:-1, :] = (w[2:, :] - w[:-2, :]) * inv2h
    out[0, :] = (-3.0 * w[0, :] + 4.0 * w[1, :] - w[2, :]) * inv2h
    out[-1, :] = (3.0 * w[-1, :] - 4.0 * w[-2, :] + w[-3, :]) * inv2h
    return out


def d_rho(w, h2):
    """First derivative along rho; even mirror at the axis column."""
    out = np.empty_like(w)
    inv2h = 1.0 / (2.0 * h2)
    out[:, 1:-1] = (w[:, 2:] - w[:, :-2]) * inv2h
    out[:, 0] = 0.0  # (w[:,1] - mirror(w[:,1])) / 2h
    out[:, -1] = (3.0 * w[:, -1] - 4.0 * w[:, -2] + w[:, -3]) * inv2h
    return out


def d2_x1(w, h1):
    """Second derivative along x1."""
    out = np.empty_like(w)
    invh2 = 1.0 / (h1 * h1)
    out[1:-1, :] = (w[2:, :] - 2.0 * w[1:-1, :] + w[:-2, :]) * invh2
    out[0, :] = (2.0 * w[0, :] - 5.0 * w[1, :] + 4.0 * w[2, :] - w[3, :]) * invh2
    out[-1, :] = (2.0 * w[-1, :] - 5.0 * w[-2, :] + 4.0 * w[-3, :] - w[-4, :]) * invh2
    return out


def lap_rho(w, h2, dim_N, face_pow, node_pow):
    """Transverse Laplacian sum_{i>=2} d^2/dx_i^2 on axisymmetric fields.

    Conservative form (1/rho^{N-2}) d/drho (rho^{N-2} dw/drho) at interior
    columns, the regularized limit (N-1) d^2/drho^2 on the axis, and a
    one-sided non-conservative stencil on the outer edge.

    face_pow[k] = rho_{k+1/2}^{N-2}, node_pow[k] = rho_k^{N-2}.
    """
    out = np.empty_like(w)
    invh2 = 1.0 / (h2 * h2)
    # axis: L'Hopital limit with even mirror, (N-1) * 2 (w1 - w0) / h^2
    out[:, 0] = (2.0 * (dim_N - 1) * invh2) * (w[:, 1] - w[:, 0])
    # interior: flux difference
    flux = face_pow[np.newaxis, :] * (w[:, 1:] - w[:, :-1])
    out[:, 1:-1] = (flux[:, 1:] - flux[:, :-1]) * (invh2 / node_pow[np.newaxis, 1:-1])
    # outer edge: d2/drho2 + (N-2)/rho * d/drho, one-sided
    rho_edge = (w.shape[1] - 1) * h2
    d2 = (2.0 * w[:, -1] - 5.0 * w[:, -2] + 4.0 * w[:, -3] - w[:, -4]) * invh2
    d1 = (3.0 * w[:, -1] - 4.0 * w[:, -2] + w[:, -3]) / (2.0 * h2)
    out[:, -1] = d2 + ((dim_N - 2) / rho_edge) * d1
    return out
