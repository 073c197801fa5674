"""Self-check suites behind the `check` subcommand.

Each suite re-verifies one family of structural invariants (cutoff shape,
exact scaling laws, gradient correctness, discrete integration by parts,
the subsonic momentum bound, gauge consistency) on deterministic seeded
fields, and returns one (name, passed, detail) row per check.
"""



import math

import numpy as np

from .ansatz import dilate
from .fields import interior_bump, modulus_bounded_field, random_smooth_field
from .functionals import (check_momentum_bound, constraint_j, evaluate,
                          grad_constraint_j, grad_transverse_kinetic, momentum,
                          transverse_kinetic)
from .grid import (Field, Grid, d_x1, inner, laplacian_transverse)
from .nonlinearity import make_gp, theta, theta_prime


def check_theta():
    x = np.linspace(-8.0, 8.0, 10_001)
    tp = theta_prime(x)
    rows = [
        ("theta-identity-region", bool(np.allclose(theta(np.linspace(0, 2, 501)),
                                                   np.linspace(0, 2, 501),
                                                   atol=1e-14)),
         "theta(x) = x on [0, 2]"),
        ("theta-saturation", theta(6.0) == 3.0 and theta(-6.0) == -3.0,
         "theta = +-3 beyond |x| = 4"),
        ("theta-odd", bool(np.allclose(theta(x), -theta(-x), atol=1e-13)),
         "odd symmetry"),
        ("theta-prime-range", bool(np.all((tp >= 0.0) & (tp <= 1.0))),
         "theta' in [0, 1] on 10^4 points"),
    ]
    a = np.linspace(-7.9, 7.9, 4001)
    b = a + 0.1
    lips = np.max(np.abs(theta(a) - theta(b))) <= 0.1 + 1e-9
    rows.append(("theta-lipschitz", bool(lips), "1-Lipschitz on sampled pairs"))
    return rows


def _scaling_case(dim_N, sigma, seed):
    grid = Grid(dim_N, 8.0, 8.0, 49, 41)
    w = random_smooth_field(grid, np.random.default_rng(seed))
    nl = make_gp()
    nu = 0.5
    t0 = transverse_kinetic(w)
    j0 = constraint_j(w, nl, nu)
    wd = dilate(w, 1.0, sigma)
    t1 = transverse_kinetic(wd)
    j1 = constraint_j(wd, nl, nu)
    et = abs(t1 - sigma ** (dim_N - 3) * t0) / abs(t0)
    ej = abs(j1 - sigma ** (dim_N - 1) * j0) / max(abs(j0), 1e-30)
    return max(et, ej)


def check_scaling():
    worst = 0.0
    for dim_N in (3, 4, 5):
        for sigma in (0.5, 2.0):
            worst = max(worst, _scaling_case(dim_N, sigma, seed=dim_N * 7 + 1))
    return [("dilation-scaling-laws", worst <= 1e-12,
             f"worst relative deviation {worst:.2e} (tol 1e-12)")]


def _fd_gradient_error(grid, seed, which):
    """Relative defect between the central finite difference of the
    functional and the pairing with its gradient field, normalized by the
    Cauchy-Schwarz size of the pairing (a directional derivative can be
    accidentally ~0 while both sides agree)."""
    rng = np.random.default_rng(seed)
    w = random_smooth_field(grid, rng)
    v = interior_bump(grid, rng)
    nl = make_gp()
    nu = 0.5
    t = 1e-5
    wp = w.with_values(w.values + t * v)
    wm = w.with_values(w.values - t * v)
    if which == "T":
        fd = (transverse_kinetic(wp) - transverse_kinetic(wm)) / (2 * t)
        grad = grad_transverse_kinetic(w).values
    else:
        fd = (constraint_j(wp, nl, nu) - constraint_j(wm, nl, nu)) / (2 * t)
        grad = grad_constraint_j(w, nl, nu).values
    lin = inner(grid, grad, v)
    pairing_scale = math.sqrt(max(inner(grid, grad, grad), 0.0)
                              * max(inner(grid, v, v), 0.0))
    return abs(fd - lin) / max(abs(fd), abs(lin), 1e-8 * pairing_scale, 1e-30)


def check_gradients(n_fields=20):
    worst = 0.0
    for dim_N in (3, 4):
        grid = Grid(dim_N, 8.0, 8.0, 49, 41)
        for s in range(n_fields // 2):
            for which in ("T", "J"):
                worst = max(worst, _fd_gradient_error(grid, 100 * dim_N + s, which))
    return [("gradient-finite-difference", worst <= 1e-4,
             f"worst relative error {worst:.2e} (tol 1e-4)")]


def check_integration_by_parts():
    rows = []
    for dim_N in (3, 5):
        grid = Grid(dim_N, 8.0, 8.0, 49, 41)
        rng = np.random.default_rng(dim_N)
        u = Field(grid, interior_bump(grid, rng))
        v = Field(grid, interior_bump(grid, rng))
        lhs = inner(grid, d_x1(u).values, v.values)
        rhs = -inner(grid, u.values, d_x1(v).values)
        rows.append((f"x1-integration-by-parts-N{dim_N}",
                     abs(lhs - rhs) <= 1e-10,
                     f"|<du,v> + <u,dv>| = {abs(lhs - rhs):.2e}"))
        lhs = inner(grid, laplacian_transverse(u).values, v.values)
        rhs = inner(grid, u.values, laplacian_transverse(v).values)
        rows.append((f"transverse-laplacian-adjoint-N{dim_N}",
                     abs(lhs - rhs) <= 1e-10,
                     f"asymmetry {abs(lhs - rhs):.2e}"))
    return rows


def check_momentum_suite(n_fields=100, eps=0.2):
    grid = Grid(3, 10.0, 10.0, 65, 49)
    bad = 0
    for s in range(n_fields):
        w = modulus_bounded_field(grid, np.random.default_rng(s), eps=eps)
        rep = check_momentum_bound(w, eps)
        if not (rep.applicable and rep.passed):
            bad += 1
    return [("momentum-bound-suite", bad == 0,
             f"{n_fields - bad}/{n_fields} random fields satisfy "
             f"|P| <= E_Mod / (sqrt(2) (1 - {eps}))")]


def check_gauge():
    grid = Grid(4, 8.0, 8.0, 49, 41)
    w = random_smooth_field(grid, np.random.default_rng(5))
    alpha = 0.7
    w2 = Field(grid, np.exp(1j * alpha) * w.values, alpha)
    dev = abs(momentum(w2) - momentum(w))
    return [("momentum-gauge-invariance", dev <= 1e-12 * max(1.0, abs(momentum(w))),
             f"|P(e^(ia) w) - P(w)| = {dev:.2e}")]


def check_report_identities():
    grid = Grid(4, 8.0, 8.0, 49, 41)
    w = random_smooth_field(grid, np.random.default_rng(11))
    rep = evaluate(w, make_gp(), 0.5)
    d1 = abs(rep.s - (rep.t - rep.j))
    d2 = abs(rep.poh - ((grid.dim_N - 3) / (grid.dim_N - 1) * rep.t - rep.j))
    ok = d1 <= 1e-10 * max(1.0, abs(rep.s)) and d2 <= 1e-10
    return [("report-identities", ok,
             f"|S-(T-J)| = {d1:.2e}, Poh defect = {d2:.2e}")]


SUITES = {
    "theta": check_theta,
    "scaling": check_scaling,
    "gradients": check_gradients,
    "integration": check_integration_by_parts,
    "momentum-bound": check_momentum_suite,
    "gauge": check_gauge,
    "report": check_report_identities,
}


def run_suites(names=None):
    """Run the named suites (all by default); returns list of result rows."""
    rows = []
    for name, fn in SUITES.items():
        if names and name not in names:
            continue
        rows.extend(fn())
    return rows
