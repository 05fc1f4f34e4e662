"""Elliptic modular function lambda(tau) = N(tau)/D(tau) near the cusp.

Both series are evaluated through the nome-like variable
``u_s = exp(2*pi*i*s*tau)``::

    1/cos^2(pi*s*tau) =  4u/(1+u)^2
    1/sin^2(pi*s*tau) = -4u/(1-u)^2

which is exact for ``s > 0`` and avoids the overflow of ``cos``/``sin``
at large imaginary arguments.  The terms indexed by ``n`` and ``1-n``
(half-integer shifts) and by ``n`` and ``-n`` (integer shifts) are equal,
so each pair is summed once and doubled.  Both N and D carry the factor
pi**2 so that ``D(tau) -> pi**2`` as ``Im tau -> oo``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass

import numpy as np

from .core import MetricSample, UpperHalfPlanePoint

PI2 = math.pi ** 2
EPS = np.finfo(float).eps

#: bounds 1/4 e^|y| < |sin z|, |cos z| < e^|y| hold above this height
VALIDITY_FLOOR = 0.5 * math.log(2)

#: largest |p| (or |1-p|) handed to the cusp inversion
CUSP_THRESHOLD = 1e-2

MAX_NEWTON_ITER = 50
_MAX_ADAPTIVE_INDEX = 10_000


class TruncationError(ArithmeticError):
    """The requested tail tolerance is not met at the allowed cutoff."""


class InversionError(ArithmeticError):
    """Newton inversion of lambda failed or left its basin."""


@dataclass(frozen=True)
class TruncationPolicy:
    """Series cutoff and acceptance rules.

    ``max_index=None`` selects the smallest pair count whose a priori
    truncation bound is below ``tail_tolerance``.  An explicit
    ``max_index`` is used as given and evaluation fails when its bound
    exceeds the tolerance.
    """

    max_index: int | None = None
    tail_tolerance: float = 1e-14
    min_im: float = 1.0

    def __post_init__(self):
        if self.max_index is not None and self.max_index < 1:
            raise ValueError("max_index must be >= 1")
        if not (self.tail_tolerance > 0):
            raise ValueError("tail_tolerance must be positive")
        if not (self.min_im > VALIDITY_FLOOR):
            raise ValueError(f"min_im must exceed (1/2) ln 2 = {VALIDITY_FLOOR:.6f}")

    def snapshot(self) -> dict:
        return asdict(self)


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class SeriesValue:
    """A truncated series value.

    ``tail_bound`` is the a priori truncation bound plus a summation
    rounding allowance; ``terms_used`` counts the summed index pairs.
    """

    value: complex
    tail_bound: float
    terms_used: int

    def __post_init__(self):
        if not (self.tail_bound >= 0):
            raise ValueError("tail_bound must be nonnegative")


@dataclass(frozen=True)
class LambdaInversionResult:
    tau: UpperHalfPlanePoint
    residual: float
    iterations: int


# -- truncation bounds -------------------------------------------------------

def _geom_tail(rho, start):
    """sum_{k>=0} rho**(start + k)"""
    return rho ** start / (1 - rho)


def _weighted_geom_tail(rho, start):
    """sum_{k>=0} (start + k) * rho**(start + k)"""
    return rho ** start * (start / (1 - rho) + rho / (1 - rho) ** 2)


def _truncation_bounds(M, y):
    """Bounds on the neglected parts of N, D, N', D' after M index pairs.

    Every neglected term has |u| <= a = rho**(M + 1/2) with rho = e^{-2 pi y}, so
    |4u/(1 +- u)^2| <= 4|u|/(1-a)^2 and
    |d/dtau 4u/(1 +- u)^2| <= 8 pi s |u| (1+a)/(1-a)^3.
    """
    rho = math.exp(-2 * math.pi * y)
    a = rho ** (M + 0.5)
    val = 4 / (1 - a) ** 2
    der = 8 * math.pi * (1 + a) / (1 - a) ** 3
    half = _geom_tail(rho, M + 0.5)
    whole = _geom_tail(rho, M + 1)
    whalf = _weighted_geom_tail(rho, M + 0.5)
    wwhole = _weighted_geom_tail(rho, M + 1)
    # factor 2 for the paired indices, pi^2 for the normalisation
    n_tail = 2 * PI2 * 2 * val * half
    d_tail = 2 * PI2 * val * (half + whole)
    dn_tail = 2 * PI2 * 2 * der * whalf
    dd_tail = 2 * PI2 * der * (whalf + wwhole)
    return n_tail, d_tail, dn_tail, dd_tail


def _choose_cutoff(y, policy):
    if policy.max_index is not None:
        M = policy.max_index
        if max(_truncation_bounds(M, y)[:2]) > policy.tail_tolerance:
            raise TruncationError(
                f"tail bound at max_index={M}, Im tau={y} exceeds {policy.tail_tolerance}; "
                "raise max_index")
        return M
    for M in range(1, _MAX_ADAPTIVE_INDEX + 1):
        if max(_truncation_bounds(M, y)[:2]) <= policy.tail_tolerance:
            return M
    raise TruncationError(f"no cutoff below {_MAX_ADAPTIVE_INDEX} meets tail tolerance at Im tau={y}")


# -- series ------------------------------------------------------------------

def _series(tau, policy):
    """N, D, N', D' as SeriesValue, summed from the smallest terms upward."""
    tau = UpperHalfPlanePoint.coerce(tau)
    if tau.im < policy.min_im:
        raise ValueError(f"Im tau = {tau.im} below policy.min_im = {policy.min_im}")
    M = _choose_cutoff(tau.im, policy)
    t = complex(tau)

    m = np.arange(M, 0, -1, dtype=float)
    s = m - 0.5
    uh = np.exp(2j * np.pi * s * t)
    un = np.exp(2j * np.pi * m * t)

    cos_h = 4 * uh / (1 + uh) ** 2
    sin_h = 4 * uh / (1 - uh) ** 2            # = -1/sin^2
    cos_n = 4 * un / (1 + un) ** 2
    dcos_h = 4 * (1 - uh) / (1 + uh) ** 3 * (2j * np.pi * s * uh)
    dsin_h = 4 * (1 + uh) / (1 - uh) ** 3 * (2j * np.pi * s * uh)
    dcos_n = 4 * (1 - un) / (1 + un) ** 3 * (2j * np.pi * m * un)

    n_terms = cos_h + sin_h
    d_terms = cos_n + sin_h
    dn_terms = dcos_h + dsin_h
    dd_terms = dcos_n + dsin_h

    N = 2 * PI2 * _ordered_sum(n_terms)
    D = PI2 * (1 + 2 * _ordered_sum(d_terms))
    dN = 2 * PI2 * _ordered_sum(dn_terms)
    dD = 2 * PI2 * _ordered_sum(dd_terms)

    trunc = _truncation_bounds(M, tau.im)
    # rounding of this sum and of any re-evaluation at another cutoff
    rnd = 2 * (M + 2) * EPS
    return (
        SeriesValue(N, trunc[0] + rnd * 2 * PI2 * np.abs(n_terms).sum(), M),
        SeriesValue(D, trunc[1] + rnd * PI2 * (1 + 2 * np.abs(d_terms).sum()), M),
        SeriesValue(dN, trunc[2] + rnd * 2 * PI2 * np.abs(dn_terms).sum(), M),
        SeriesValue(dD, trunc[3] + rnd * 2 * PI2 * np.abs(dd_terms).sum(), M),
    )


def _ordered_sum(terms):
    acc = 0j
    for term in terms:  # already ordered from the largest index down
        acc += term
    return complex(acc)


def eval_N(tau, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesValue:
    """Numerator series ``sum_n 1/cos^2(pi(n-1/2)tau) - 1/sin^2(pi(n-1/2)tau)``, times pi^2."""
    return _series(tau, policy)[0]


def eval_D(tau, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesValue:
    """Denominator series ``sum_n 1/cos^2(pi n tau) - 1/sin^2(pi(n-1/2)tau)``, times pi^2."""
    return _series(tau, policy)[1]


def eval_N_prime(tau, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesValue:
    return _series(tau, policy)[2]


def eval_D_prime(tau, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesValue:
    return _series(tau, policy)[3]


def _quotient(N, D):
    if abs(D.value) < 10 * D.tail_bound:
        raise TruncationError("denominator not resolved above its own tail bound")
    lam = N.value / D.value
    err = (N.tail_bound + abs(lam) * D.tail_bound) / abs(D.value) + 2 * EPS * abs(lam)
    return lam, err


def eval_lambda(tau, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesValue:
    N, D, _, _ = _series(tau, policy)
    lam, err = _quotient(N, D)
    return SeriesValue(lam, err, N.terms_used)


def eval_lambda_prime(tau, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesValue:
    """lambda' = N'/D - lambda D'/D with first-order error propagation."""
    N, D, dN, dD = _series(tau, policy)
    lam, lam_err = _quotient(N, D)
    dval = (dN.value - lam * dD.value) / D.value
    err = (dN.tail_bound + abs(lam) * dD.tail_bound + abs(dD.value) * lam_err) / abs(D.value)
    err += abs(dval) * D.tail_bound / abs(D.value)
    return SeriesValue(dval, err, N.terms_used)


# -- inversion ---------------------------------------------------------------

def cusp_seed(target: complex) -> complex:
    """Initial guess from lambda(tau) ~ 16 exp(i pi tau), with Re in [0, 2)."""
    arg = cmath.phase(target) % (2 * math.pi)
    return complex(arg / math.pi, math.log(16 / abs(target)) / math.pi)


def invert_lambda_near_zero(target, tol: float = 1e-12,
                            policy: TruncationPolicy = DEFAULT_POLICY,
                            cusp_threshold: float = CUSP_THRESHOLD,
                            max_iter: int = MAX_NEWTON_ITER) -> LambdaInversionResult:
    """Solve lambda(q) = target for q high in the upper half-plane.

    Newton's method from :func:`cusp_seed`; stops on the residual
    ``|lambda(q) - target| <= tol``.  ``Re q`` is reduced into ``[0, 2)``
    using the period 2.
    """
    target = complex(target)
    if not (0 < abs(target) <= cusp_threshold):
        raise ValueError(f"|target| = {abs(target)} outside (0, {cusp_threshold}]")
    if not (tol > 0):
        raise ValueError("tol must be positive")

    q = cusp_seed(target)
    for it in range(max_iter + 1):
        if q.imag < policy.min_im:
            raise InversionError(f"Newton iterate {q} dropped below Im = {policy.min_im}")
        lam = eval_lambda(q, policy)
        residual = abs(lam.value - target)
        if residual <= tol:
            break
        if it == max_iter:
            raise InversionError(
                f"no convergence after {max_iter} iterations (residual {residual:.3e})")
        dlam = eval_lambda_prime(q, policy)
        if abs(dlam.value) <= 10 * dlam.tail_bound:
            raise InversionError(f"lambda' numerically vanishes at {q}")
        q = q - (lam.value - target) / dlam.value

    reduced = complex(q.real % 2.0, q.imag)
    if reduced != q:
        residual = abs(eval_lambda(reduced, policy).value - target)
        q = reduced
    return LambdaInversionResult(UpperHalfPlanePoint.coerce(q), residual, it)


def kobayashi_c_minus_two_points(p, xi=1.0, tol: float = 1e-12,
                                 policy: TruncationPolicy = DEFAULT_POLICY,
                                 cusp_threshold: float = CUSP_THRESHOLD) -> MetricSample:
    """Kobayashi metric of C minus {0, 1} at ``p`` near a puncture.

    ``value = |xi| / (2 Im q |lambda'(q)|)`` with ``lambda(q) = p``.  Points
    near 1 are moved near 0 by ``z -> 1 - z``.  Here ``tol`` is relative
    to the (reduced) target, since the metric blows up like 1/|p|.
    """
    p = complex(p)
    xi_norm = abs(complex(xi))
    if abs(p) <= cusp_threshold and p != 0:
        w, regime, input_err = p, "near_0", 0.0
    elif abs(1 - p) <= cusp_threshold and p != 1:
        w, regime = 1 - p, "near_1"
        # rounding of 1 - p perturbs the effective point
        input_err = EPS * max(1.0, abs(p))
    else:
        raise ValueError(f"p = {p} outside the cusp neighbourhoods of 0 and 1 "
                         f"(threshold {cusp_threshold})")

    inv = invert_lambda_near_zero(w, tol * abs(w), policy, cusp_threshold)
    q = complex(inv.tau)
    lam = eval_lambda(q, policy)
    dlam = eval_lambda_prime(q, policy)
    dmag = abs(dlam.value)
    if dmag <= 10 * dlam.tail_bound:
        raise InversionError(f"lambda' numerically vanishes at q = {q}")
    M = q.imag
    value = xi_norm / (2 * M * dmag)

    # first order: dq = dp / lambda'(q), d log F/dq ~ |lambda''/lambda'| + 1/M ~ pi + 1/M
    point_err = inv.residual + lam.tail_bound + input_err
    err = value * dlam.tail_bound / dmag
    err += value * 2 * (math.pi + 1 / M) * point_err / dmag

    trunc = policy.snapshot()
    trunc.update(terms_used=dlam.terms_used, newton_iterations=inv.iterations,
                 residual=inv.residual, regime=regime, q=q)
    return MetricSample("C-{0,1}", p, complex(xi), value, trunc, err)
