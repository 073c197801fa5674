"""Nonlinear term G, its potential V, and the saturating modulus cutoff.

Conventions: s denotes |w|^2.  V(s) = integral_s^1 G(y) dy in closed form,
so V(1) = 0 exactly and V' = -G.  The cutoff Theta is odd, equals the
identity on [0, 2], saturates at 3 for arguments >= 4, and interpolates on
(2, 4) with a C-infinity monotone bridge whose slope runs from 1 down to 0
(so Theta' stays in [0, 1] and Theta is 1-Lipschitz).  The modified
potential is V_Mod(w) = (Theta^2(|w|) - 1)^2.
"""

import math
from dataclasses import dataclass
from functools import partial

import numpy as np

from .errors import ParameterError

# ---------------------------------------------------------------------------
# Theta cutoff
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def _sigma(t):
    out = np.zeros_like(t)
    pos = t > 0.0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def _bridge_slope(u):
    """Smooth partition step S on [0, 1]: S(0) = 1, S(1) = 0, flat at both ends.

    S(u) + S(1 - u) = 1, so integral_0^1 S = 1/2, which pins Theta(4) = 3
    without any numerical normalization.
    """
    u = np.clip(u, 0.0, 1.0)
    hi = _sigma(1.0 - u)
    lo = _sigma(u)
    return hi / (hi + lo)


def _bridge_integral(upper):
    """integral_0^upper S(u) du, vectorized Gauss-Legendre."""
    half = 0.5 * upper
    nodes = half[:, None] * (_GL_NODES[None, :] + 1.0)
    return half * (_bridge_slope(nodes) @ _GL_WEIGHTS)


def theta(x):
    """Saturating cutoff: x on [0,2], 3 beyond 4, odd, C-infinity."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    ax = np.abs(np.atleast_1d(x))
    out = np.where(ax >= 4.0, 3.0, ax)
    mid = (ax > 2.0) & (ax < 4.0)
    if np.any(mid):
        out[mid] = 2.0 + 2.0 * _bridge_integral((ax[mid] - 2.0) / 2.0)
    out = np.copysign(out, np.atleast_1d(x))
    return float(out[0]) if scalar else out


def theta_prime(x):
    """Derivative of theta (even function of x, values in [0, 1])."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    ax = np.abs(np.atleast_1d(x))
    out = np.ones_like(ax)
    out[ax >= 4.0] = 0.0
    mid = (ax > 2.0) & (ax < 4.0)
    if np.any(mid):
        out[mid] = _bridge_slope((ax[mid] - 2.0) / 2.0)
    return float(out[0]) if scalar else out


def v_mod(w_abs):
    """Modified potential (Theta^2(|w|) - 1)^2."""
    t = theta(w_abs)
    q = t * t - 1.0
    return q * q


# ---------------------------------------------------------------------------
# Nonlinearity instances
# ---------------------------------------------------------------------------

def _gp_g(s):
    return 1.0 - s


def _gp_v(s):
    r = 1.0 - s
    return 0.5 * r * r


def _poly_g(coeffs, s):
    c1, c3, c5 = coeffs
    return -c1 + c3 * s - c5 * s * s


def _poly_v(coeffs, s):
    # V(s) = Gamma(1) - Gamma(s) with Gamma' = G
    c1, c3, c5 = coeffs

    def gamma(y):
        return -c1 * y + 0.5 * c3 * y * y - (c5 / 3.0) * y ** 3

    return gamma(1.0) - gamma(s)


@dataclass(frozen=True)
class Nonlinearity:
    """The pair (G, V) with metadata for the growth/sign assumption checks.

    p0_growth: smallest exponent with |G(s)| <= c (1 + s^p0).
    r0_threshold: threshold for the sign condition G(s) <= -c s^p1 (s >= r0),
    or nan when no such claim is made.
    """

    name: str
    params: tuple
    g: callable
    v: callable
    p0_growth: float
    r0_threshold: float = math.nan

    def to_config(self):
        return {"nonlinearity": self.name, "params": list(self.params)}


def make_gp():
    """Gross-Pitaevskii: G(s) = 1 - s, V(s) = (1 - s)^2 / 2."""
    return Nonlinearity("gp", (), _gp_g, _gp_v, p0_growth=1.0, r0_threshold=2.0)


def make_cubic_quintic(c1):
    """Cubic-quintic: G(s) = -c1 + c3 s - c5 s^2 with c3, c5 solved so that
    G(1) = 0 and G'(1) = -1 (two positive roots c1/(c1+1) and 1)."""
    if not c1 > 0:
        raise ParameterError(f"cubic-quintic needs c1 > 0, got {c1}")
    c1 = float(c1)
    c3 = 2.0 * c1 + 1.0
    c5 = c1 + 1.0
    coeffs = (c1, c3, c5)
    return Nonlinearity(
        "cubic-quintic", coeffs,
        partial(_poly_g, coeffs), partial(_poly_v, coeffs),
        p0_growth=2.0, r0_threshold=max(2.0, 2.0 * c3 / c5))


def from_config(name, params=()):
    if name == "gp":
        return make_gp()
    if name == "cubic-quintic":
        if not params:
            raise ParameterError("cubic-quintic requires the parameter c1")
        return make_cubic_quintic(params[0])
    raise ParameterError(f"unknown nonlinearity {name!r}")


# ---------------------------------------------------------------------------
# Assumption checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AssumptionReport:
    ass1_pass: bool
    g_at_one: float
    gprime_at_one: float
    ass2_pass: bool
    ass2_exponent: float
    ass2_required: float
    ass2_c_est: float
    ass3_claimed: bool
    ass3_pass: bool
    ass3_c_est: float

    @property
    def all_claimed_pass(self):
        ok = self.ass1_pass and self.ass2_pass
        if self.ass3_claimed:
            ok = ok and self.ass3_pass
        return ok

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def check_assumptions(nl, dim_N, s_max=16.0, n_samples=2001):
    """Numerical verification of the structural assumptions on G.

    Checks G(1) = 0 and centered-difference G'(1) = -1; the growth bound
    |G| <= c (1 + s^p0) with p0 < 2/(N-2) on a bounded sample (the exponent
    comparison is the binding part); and, when claimed, the sign condition
    G(s) <= -c s^p1 for s >= r0.  Failures are reported, never raised.
    """
    if dim_N < 3:
        raise ParameterError(f"assumption check needs N >= 3, got {dim_N}")
    g1 = float(nl.g(np.asarray(1.0)))
    step = 1e-6
    gp1 = float((nl.g(np.asarray(1.0 + step)) - nl.g(np.asarray(1.0 - step)))
                / (2.0 * step))
    ass1 = abs(g1) <= 1e-12 and abs(gp1 + 1.0) <= 1e-6

    required = 2.0 / (dim_N - 2)
    s = np.linspace(0.0, s_max, n_samples)
    with np.errstate(divide="ignore"):
        c_est = float(np.max(np.abs(nl.g(s)) / (1.0 + s ** nl.p0_growth)))
    ass2 = bool(nl.p0_growth < required and math.isfinite(c_est))

    claimed = math.isfinite(nl.r0_threshold)
    if claimed:
        s3 = np.linspace(nl.r0_threshold, max(4.0 * nl.r0_threshold, s_max), n_samples)
        c3_est = float(np.min(-nl.g(s3) / s3 ** nl.p0_growth))
        ass3 = bool(c3_est > 0.0)
    else:
        c3_est = math.nan
        ass3 = False

    return AssumptionReport(ass1, g1, gp1, ass2, nl.p0_growth, required, c_est,
                            claimed, ass3, c3_est)


def check_taylor_control(nl, eps, delta, n_samples=2001):
    """Check |V(s) - (s-1)^2/2| <= eps (s-1)^2 for | sqrt(s) - 1 | <= delta.

    Returns (holds, worst_ratio); quantifies the quadratic Taylor expansion
    of V around s = 1 that underpins the small-modulus estimates.
    """
    m = np.linspace(1.0 - delta, 1.0 + delta, n_samples)
    s = m * m
    dev = np.abs(nl.v(s) - 0.5 * (s - 1.0) ** 2)
    quad = (s - 1.0) ** 2
    keep = quad > 1e-30
    if not np.any(keep):
        return True, 0.0
    ratio = float(np.max(dev[keep] / quad[keep]))
    return ratio <= eps, ratio
