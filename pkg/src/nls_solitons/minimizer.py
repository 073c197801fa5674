"""Constrained solvers for the two soliton families.

Mode A minimizes the transverse kinetic energy T at fixed J = j (N >= 4):
projected gradient descent g = grad T - mu grad J with
mu = <grad T, grad J> / <grad J, grad J> in the grid inner product, and
exact feasibility restoration by the transverse metadata dilation
sigma = (j / J)^{1/(N-1)}.  The converged multiplier lambda = mu must be
positive; the returned field is the dilation by lambda0 = sqrt(lambda),
which turns the constrained critical point into a traveling-wave solution:
the discrete stationarity condition rearranges to

    (1/lambda) Lap_perp w + d2 w/dx1^2 - i nu dw/dx1 + G(|w|^2) w = 0,

so after the rescale the PDE residual is limited only by the convergence
tolerance.

Mode B minimizes the energy E at fixed momentum P = q (< 0, N >= 3); the
speed emerges as minus the Lagrange multiplier and must land in
(0, sqrt(2)).  Feasibility is restored by an exact one-dimensional solve
along grad P (P is an affine-quadratic functional, so P(w + s grad P) = q
is a scalar quadratic solved in closed form).

Both modes share one backtracking step controller: plain gradient steps,
halving on merit increase measured after the feasibility restoration, no
momentum or acceleration.  Fields move in the affine space w0 +
(perturbations vanishing on the Dirichlet edges); the axis column is a
free row.
"""

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .ansatz import dilate, make_wr, pohozaev_normalize, prepare_initial
from .errors import ConvergenceError, NumericsError, ParameterError
from .functionals import (SOUND_SPEED, axial_kinetic, constraint_j, energy,
                          evaluate, grad_constraint_j, grad_energy,
                          grad_momentum, grad_transverse_kinetic,
                          gradient_square, momentum, _momentum_linear,
                          _momentum_quadratic, pde_residual, potential_integral,
                          transverse_kinetic)
from .grid import Field, Grid, cdot, inner

_MERIT_SLACK = 1e-13   # relative slack for merit comparisons near stationarity


@dataclass
class MinimizeConfig:
    """Knobs of the projected-gradient solves."""

    mode: str                      # "A" (T at fixed J) or "B" (E at fixed P)
    constraint_value: float        # j > 0 for mode A, q < 0 for mode B
    nu: float = None               # mode A only; emerges as multiplier in B
    max_iters: int = 400_000
    step: float = None             # initial step; default 0.125 * min(h1,h2)^2
    tol_grad: float = 0.0          # absolute projected-gradient norm stop
    tol_constraint: float = None   # drift bound; default 1e-6 * max(1, |value|)
    restore_every: int = 10        # restoration cadence (accepted steps)
    pde_target: float = 5e-4       # certified-residual stop (auto controller)
    check_every: int = 50          # cadence of the residual controller
    step_grow: float = 1.1
    max_backtracks: int = 60
    keep_trace: bool = False

    def __post_init__(self):
        if self.mode not in ("A", "B"):
            raise ParameterError(f"mode must be 'A' or 'B', got {self.mode!r}")
        if self.mode == "A":
            if self.nu is None or not (0.0 < self.nu < SOUND_SPEED):
                raise ParameterError(
                    f"mode A requires 0 < nu < sqrt(2), got {self.nu}")
            if not self.constraint_value > 0:
                raise ParameterError(
                    f"mode A requires j > 0, got {self.constraint_value}")
        else:
            if not self.constraint_value < 0:
                raise ParameterError(
                    f"mode B requires q < 0, got {self.constraint_value}")
        if self.tol_grad < 0 or self.pde_target <= 0:
            raise ParameterError("tolerances must be positive")
        if self.tol_constraint is not None and not self.tol_constraint > 0:
            raise ParameterError("tol_constraint must be positive")

    def drift_bound(self):
        if self.tol_constraint is not None:
            return self.tol_constraint
        return 1e-6 * max(1.0, abs(self.constraint_value))


@dataclass
class SolitonRecord:
    """A converged (and rescaled, in mode A) traveling-wave candidate."""

    field: Field
    nu: float
    family: str                    # "J" (mode A) or "Q" (mode B)
    lambda0: float
    multiplier: float
    report: object                 # FunctionalReport of the final field
    residual_pde: float
    residual_poh: float
    iterations: int
    constraint_value: float
    grad_norm: float
    flags: tuple = ()
    trace: list = dc_field(default_factory=list, repr=False)

    @property
    def converged(self):
        return not any(f.startswith("not-converged") for f in self.flags)


def _masked(arr, mask):
    out = arr.copy()
    out[~mask] = 0.0
    return out


class _ConstrainedDescent:
    """Shared backtracking projected-gradient loop (used by both modes and
    reused by the regularization flow through `backtracking_minimize`)."""

    def __init__(self, w0, cfg, merit_fn, grads_fn, restore_fn, residual_fn):
        self.cfg = cfg
        self.w = w0
        self.mask = w0.grid.interior_mask()
        self.merit_fn = merit_fn
        self.grads_fn = grads_fn       # w -> (g_merit, g_constraint) masked arrays
        self.restore_fn = restore_fn   # w -> restored Field (exact feasibility)
        self.residual_fn = residual_fn  # (w, mu) -> certified residual or None
        self.trace = []
        self.mu = 0.0
        self.grad_norm = math.inf
        self.iterations = 0

    def run(self):
        cfg = self.cfg
        w = self.restore_fn(self.w)
        if w is None:
            raise NumericsError("initial field cannot be restored to the constraint")
        alpha = cfg.step
        if alpha is None:
            h = min(w.grid.h1, w.grid.h2)
            alpha = 0.125 * h * h
        merit = self.merit_fn(w)
        since_restore = 0
        for it in range(cfg.max_iters):
            self.iterations = it
            g_merit, g_con = self.grads_fn(w)
            den = inner(w.grid, g_con, g_con)
            self.mu = inner(w.grid, g_merit, g_con) / den if den > 0 else 0.0
            g = g_merit - self.mu * g_con
            gnorm = math.sqrt(max(inner(w.grid, g, g), 0.0))
            self.grad_norm = gnorm
            if cfg.keep_trace:
                self.trace.append((it, merit, gnorm, alpha, self.mu))
            if cfg.tol_grad > 0 and gnorm <= cfg.tol_grad:
                self.w = w
                return w
            if it % cfg.check_every == 0 and self.residual_fn is not None:
                res = self.residual_fn(w, self.mu)
                if res is not None and res <= cfg.pde_target:
                    self.w = w
                    return w

            accepted = False
            for _ in range(cfg.max_backtracks):
                cand = w.with_values(w.values - alpha * g)
                do_restore = (since_restore + 1 >= cfg.restore_every)
                cand, ok, drift = self._feasibility(cand, force=do_restore)
                if not ok:
                    alpha *= 0.5
                    continue
                cand_merit = self.merit_fn(cand)
                if cand_merit <= merit + _MERIT_SLACK * abs(merit) + 1e-300:
                    accepted = True
                    break
                alpha *= 0.5
            if not accepted:
                # step limited by roundoff on the merit: treat as stationary
                self.w = w
                self.trace.append((it, merit, gnorm, alpha, self.mu))
                return w
            since_restore = 0 if drift == 0.0 else since_restore + 1
            w, merit = cand, cand_merit
            alpha = min(alpha * cfg.step_grow, 1.0)
        self.w = w
        raise ConvergenceError(
            f"no convergence in {cfg.max_iters} iterations "
            f"(grad norm {self.grad_norm:.3e})", self.trace)

    def _feasibility(self, cand, force):
        """Restore the constraint if forced or drifted; returns
        (field, ok, remaining_drift)."""
        drift = self.constraint_drift(cand)
        if force or abs(drift) > self.cfg.drift_bound():
            restored = self.restore_fn(cand)
            if restored is None:
                return cand, False, drift
            return restored, True, 0.0
        return cand, True, drift


# ---------------------------------------------------------------------------
# mode A: minimize T under J = j
# ---------------------------------------------------------------------------

class _ModeA(_ConstrainedDescent):
    def __init__(self, w0, cfg, nl):
        self.nl = nl
        self.j = cfg.constraint_value
        self.nu = cfg.nu
        super().__init__(w0, cfg, self._merit, self._grads, self._restore,
                         self._residual)

    def _merit(self, w):
        return transverse_kinetic(w)

    def _grads(self, w):
        gt = _masked(grad_transverse_kinetic(w).values, self.mask)
        gj = _masked(grad_constraint_j(w, self.nl, self.nu).values, self.mask)
        return gt, gj

    def _restore(self, w):
        jv = constraint_j(w, self.nl, self.nu)
        if not (jv > 0 and math.isfinite(jv)):
            return None
        sigma = (self.j / jv) ** (1.0 / (w.grid.dim_N - 1))
        return dilate(w, 1.0, sigma)

    def constraint_drift(self, w):
        return constraint_j(w, self.nl, self.nu) - self.j

    def _residual(self, w, mu):
        if mu <= 0:
            return None
        final = dilate(w, 1.0, math.sqrt(mu))
        return pde_residual(final, self.nl, self.nu)


def minimize_T_fixed_J(w0, cfg, nl):
    """Run the fixed-J solve from w0; returns the rescaled SolitonRecord."""
    if cfg.mode != "A":
        raise ParameterError("config mode must be 'A'")
    if w0.grid.dim_N < 4:
        raise ParameterError(
            f"mode A requires N >= 4, got N = {w0.grid.dim_N}")
    j0 = constraint_j(w0, nl, cfg.nu)
    if abs(j0 - cfg.constraint_value) > max(1e-6, 1e-6 * abs(cfg.constraint_value)):
        raise ParameterError(
            f"initial field violates the constraint: J(w0) = {j0:.6g}, "
            f"target j = {cfg.constraint_value:.6g}")
    solver = _ModeA(w0, cfg, nl)
    w = solver.run()
    lam = solver.mu
    if not lam > 0:
        raise NumericsError(
            f"multiplier sign violation: lambda = {lam:.4g} at convergence "
            "(a fixed-J minimizer must have lambda > 0)")
    lam0 = math.sqrt(lam)
    final = dilate(w, 1.0, lam0)
    rep = evaluate(final, nl, cfg.nu)
    return SolitonRecord(
        field=final, nu=cfg.nu, family="J", lambda0=lam0, multiplier=lam,
        report=rep,
        residual_pde=pde_residual(final, nl, cfg.nu),
        residual_poh=abs(rep.poh),
        iterations=solver.iterations,
        constraint_value=cfg.constraint_value,
        grad_norm=solver.grad_norm,
        trace=solver.trace)


# ---------------------------------------------------------------------------
# mode B: minimize E under P = q
# ---------------------------------------------------------------------------

class _ModeB(_ConstrainedDescent):
    def __init__(self, w0, cfg, nl):
        self.nl = nl
        self.q = cfg.constraint_value
        super().__init__(w0, cfg, self._merit, self._grads, self._restore,
                         self._residual)

    def _merit(self, w):
        return energy(w, self.nl)

    def _grads(self, w):
        ge = _masked(grad_energy(w, self.nl).values, self.mask)
        gp = _masked(grad_momentum(w).values, self.mask)
        return ge, gp

    def _restore(self, w):
        """Exact momentum restoration: P(w + s d) = q solved as a scalar
        quadratic along the masked momentum gradient d."""
        d = _masked(grad_momentum(w).values, self.mask)
        c0 = momentum(w) - self.q
        if c0 == 0.0:
            return w
        b = _momentum_linear(w, d)
        a = _momentum_quadratic(w, d)
        s = _smallest_quadratic_root(a, b, c0)
        if s is None:
            return None
        return w.with_values(w.values + s * d)

    def constraint_drift(self, w):
        return momentum(w) - self.q

    def _residual(self, w, mu):
        nu_e = -mu
        return pde_residual(w, self.nl, nu_e)


def _smallest_quadratic_root(a, b, c):
    """Real root of a s^2 + b s + c = 0 with smallest |s|, or None."""
    if abs(a) < 1e-300:
        if b == 0.0:
            return None
        return -c / b
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    # numerically stable pair
    q = -0.5 * (b + math.copysign(sq, b))
    roots = []
    if abs(a) > 0:
        roots.append(q / a)
    if abs(q) > 0:
        roots.append(c / q)
    roots = [r for r in roots if math.isfinite(r)]
    if not roots:
        return None
    return min(roots, key=abs)


def minimize_E_fixed_P(w0, cfg, nl):
    """Run the fixed-P solve from w0; the speed emerges as -multiplier."""
    if cfg.mode != "B":
        raise ParameterError("config mode must be 'B'")
    solver = _ModeB(w0, cfg, nl)
    w = solver.run()
    mu = solver.mu
    nu_e = -mu
    flags = []
    if not (0.0 < nu_e < SOUND_SPEED):
        flags.append("emergent-speed-out-of-range")
    nu_rep = nu_e if not flags else 0.0
    rep = evaluate(w, nl, nu_rep)
    return SolitonRecord(
        field=w, nu=nu_e, family="Q", lambda0=1.0, multiplier=mu,
        report=rep,
        residual_pde=pde_residual(w, nl, nu_e),
        residual_poh=abs(rep.poh),
        iterations=solver.iterations,
        constraint_value=cfg.constraint_value,
        grad_norm=solver.grad_norm,
        flags=tuple(flags),
        trace=solver.trace)


def default_initial_mode_B(q, nl, grid, cfg=None):
    """Deterministic mode-B initializer: ring with P(w_r) ~ q from the
    analytic momentum bracket midpoint, followed by the exact correction."""
    if not q < 0:
        raise ParameterError(f"mode B requires q < 0, got {q}")
    from .grid import unit_ball_volume
    omega = unit_ball_volume(grid.dim_N - 1)
    # solve -2 pi omega (r-1)^{N-1} = q for the bracket midpoint radius
    r = 1.0 + (abs(q) / (2.0 * math.pi * omega)) ** (1.0 / (grid.dim_N - 1))
    r = min(max(r, 2.0), min(grid.L1, grid.L2) - 4.0)
    w = make_wr(grid, r)
    helper = _ModeB(w, cfg or MinimizeConfig(mode="B", constraint_value=q), nl)
    restored = helper._restore(w)
    if restored is None:
        raise NumericsError(f"cannot reach P = {q} from the ring seed r = {r}")
    return restored


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityCheck:
    name: str
    lhs: float
    rhs: float
    residual: float
    tol: float
    passed: bool
    note: str = ""

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class CertificationReport:
    checks: tuple

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def as_dict(self):
        return {"ok": self.ok, "checks": [c.as_dict() for c in self.checks]}


_FLOOR = 1e-12


def certify(record, nl):
    """Recompute and assert the solution identities on a record's field.

    (a) vanishing of Poh; (b) the second (full-dilation) Pohozaev identity
    (N-2) |grad w|^2 + N V + (N-1) nu P = 0; (c) for N >= 4 the integral
    identities V = -nu q/2 - (N-2) j/(N-3) and |dw/dx1|^2 = -nu q/2 +
    j/(N-3); (d) a least-action spot check against an independent
    Pohozaev-normalized ring field.
    """
    w = record.field
    dim_N = w.grid.dim_N
    nu = record.nu
    checks = []

    rep = record.report
    tol_a = max(1e-2 * rep.t, _FLOOR)
    checks.append(IdentityCheck(
        "pohozaev", rep.poh, 0.0, abs(rep.poh), tol_a, abs(rep.poh) <= tol_a))

    gsq = gradient_square(w)
    vint = potential_integral(w, nl)
    q = momentum(w)
    terms = ((dim_N - 2) * gsq, dim_N * vint, (dim_N - 1) * nu * q)
    r2 = sum(terms)
    dominant = max(max(abs(x) for x in terms), _FLOOR)
    tol_b = 1e-2 * dominant
    checks.append(IdentityCheck(
        "pohozaev-second", r2, 0.0, abs(r2), tol_b, abs(r2) <= tol_b))

    if dim_N >= 4:
        jv = constraint_j(w, nl, nu)
        rhs_v = -0.5 * nu * q - (dim_N - 2) / (dim_N - 3) * jv
        rhs_ax = -0.5 * nu * q + jv / (dim_N - 3)
        ax = axial_kinetic(w)
        for name, lhs, rhs in (("potential-identity", vint, rhs_v),
                               ("axial-identity", ax, rhs_ax)):
            scale = max(abs(lhs), abs(rhs), _FLOOR)
            ok = abs(lhs - rhs) <= 0.02 * scale
            checks.append(IdentityCheck(name, lhs, rhs, abs(lhs - rhs),
                                        0.02 * scale, ok))

    if dim_N >= 4 and 0.0 < nu < SOUND_SPEED:
        cand_s = _independent_action_candidate(dim_N, nl, nu)
        if cand_s is not None:
            tol_d = 0.01 * abs(cand_s) + _FLOOR
            ok = rep.s <= cand_s + tol_d
            checks.append(IdentityCheck(
                "least-action", rep.s, cand_s, rep.s - cand_s, tol_d, ok,
                note="record action vs Pohozaev-normalized ring"))

    return CertificationReport(tuple(checks))


def _independent_action_candidate(dim_N, nl, nu):
    """Action of a Pohozaev-normalized ring ansatz, or None if no ring in
    the search range carries positive J."""
    grid = Grid(dim_N, 14.0, 14.0, 97, 81)
    for r in (6.0, 8.0, 10.0):
        w = make_wr(grid, r)
        if constraint_j(w, nl, nu) > 0:
            wn, _ = pohozaev_normalize(w, nl, nu)
            return evaluate(wn, nl, nu).s
    return None


# ---------------------------------------------------------------------------
# convenience front end
# ---------------------------------------------------------------------------

def solve(cfg, nl, grid, w0=None):
    """Dispatch one solve with the default deterministic initializer."""
    if cfg.mode == "A":
        if w0 is None:
            w0 = prepare_initial(cfg.constraint_value, nl, cfg.nu, grid)
        return minimize_T_fixed_J(w0, cfg, nl)
    if w0 is None:
        w0 = default_initial_mode_B(cfg.constraint_value, nl, grid, cfg)
    return minimize_E_fixed_P(w0, cfg, nl)
