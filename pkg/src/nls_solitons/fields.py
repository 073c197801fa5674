"""Deterministic field constructors for tests, checks and diagnostics."""

import math

import numpy as np

from .grid import Field


def _window(grid):
    """Smooth window vanishing on the Dirichlet edges and the axis column."""
    wx = np.sin(0.5 * math.pi * (grid.x1 + grid.L1) / grid.L1) ** 2
    wr = np.sin(math.pi * grid.rho / grid.L2) ** 2
    win = np.outer(wx, wr)
    win[0, :] = 0.0
    win[-1, :] = 0.0
    win[:, 0] = 0.0
    win[:, -1] = 0.0
    return win


def interior_bump(grid, rng=None, modes=3):
    """Complex perturbation supported away from edges and axis; unit sup norm."""
    rng = rng or np.random.default_rng(0)
    win = _window(grid)
    sx = (grid.x1 + grid.L1) / (2.0 * grid.L1)
    sr = grid.rho / grid.L2
    out = np.zeros((grid.n1, grid.n2), dtype=np.complex128)
    for _ in range(modes):
        px, qx = rng.integers(1, 5, size=2)
        a = rng.normal() + 1j * rng.normal()
        out += a * np.outer(np.sin(math.pi * px * sx), np.sin(math.pi * qx * sr))
    out *= win
    peak = np.max(np.abs(out))
    if peak > 0:
        out /= peak
    return out


def random_smooth_field(grid, rng=None, amplitude=0.3, boundary_phase=0.0):
    """1 + smooth random interior perturbation (times the boundary constant)."""
    rng = rng or np.random.default_rng(0)
    pert = interior_bump(grid, rng)
    vals = np.exp(1j * boundary_phase) * (1.0 + amplitude * pert)
    return Field(grid, vals, boundary_phase)


def modulus_bounded_field(grid, rng=None, eps=0.2):
    """Field with || |w| - 1 ||_inf <= eps (for the momentum-bound suite)."""
    rng = rng or np.random.default_rng(0)
    pert = interior_bump(grid, rng)
    vals = 1.0 + 0.9 * eps * pert
    f = Field(grid, vals, 0.0)
    dev = np.max(np.abs(np.abs(f.values) - 1.0))
    if dev > eps:  # renormalize defensively; |1 + a| - 1 <= |a| keeps this rare
        f = Field(grid, 1.0 + (0.9 * eps / dev) * (vals - 1.0), 0.0)
    return f


def gaussian_dip_field(grid, depth=1.0, width=2.0, center=(0.0, 3.0)):
    """Axisymmetric modulus dip (|w| = 1 - depth at the center point)."""
    x1 = grid.x1[:, None]
    rho = grid.rho[None, :]
    r2 = (x1 - center[0]) ** 2 + (rho - center[1]) ** 2
    vals = (1.0 - depth * np.exp(-r2 / width ** 2)).astype(np.complex128)
    vals[0, :] = 1.0
    vals[-1, :] = 1.0
    vals[:, -1] = 1.0
    return Field(grid, vals, 0.0)
