"""Bergman kernel and metric of the unit ball and of the ring domain in C^2.

The ring ``Omega_r = {r < |z| < 1}`` has the monomial orthonormal basis
of the ball, renormalised by ``1/sqrt(1 - r^(2(j+k)+4))``.  On the axis
point ``(x, 0)`` only the ``k = 0`` and ``k = 1`` families contribute to
the metric, with weights

    b_j = (j+1)(j+2)/pi^2,      gamma_j = 1/(1 - r^(2j+4))
    c_j = (j+1)(j+2)(j+3)/pi^2, beta_j  = 1/(1 - r^(2j+6))

Series are summed in ``t = x^2``.  Every truncated sum comes with an a
priori tail bound from the ratio test on its polynomial weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import MetricSample
from .modular import SeriesValue, TruncationError

PI2 = math.pi ** 2
PI4 = math.pi ** 4
EPS = np.finfo(float).eps

#: cutoff target: neglected mass relative to the leading term
SERIES_RTOL = 1e-14
#: tail bounds above this fraction of a value are rejected
ACCEPT_RTOL = 1e-10
_MAX_DEGREE = 2_000_000


def _check_r(r):
    if not (0 < r < 1):
        raise ValueError(f"inner radius must lie in (0, 1), got {r!r}")
    return float(r)


def _one_minus_power(r, n):
    """1 - r**n without cancellation for r near 1."""
    return -np.expm1(n * np.log(r))


@dataclass(frozen=True)
class RingDomainSpec:
    inner_radius: float

    def __post_init__(self):
        _check_r(self.inner_radius)


@dataclass(frozen=True)
class AxisEvalPoint:
    """The point ``(x, 0)``; the ring constraint ``r < x`` is checked on use."""

    x: float

    def __post_init__(self):
        if not (0 < self.x < 1):
            raise ValueError(f"x must lie in (0, 1), got {self.x!r}")

    @classmethod
    def coerce(cls, pt) -> "AxisEvalPoint":
        return pt if isinstance(pt, cls) else cls(float(pt))


@dataclass(frozen=True, eq=False)
class BasisCoefficients:
    """Read-only coefficient table up to degree ``max_degree``."""

    r: float
    max_degree: int
    b: np.ndarray
    c: np.ndarray
    gamma: np.ndarray
    beta: np.ndarray

    @classmethod
    def build(cls, r, max_degree=None, x_max=None) -> "BasisCoefficients":
        """Tabulate the weights; ``max_degree`` defaults to the cutoff for ``x_max``."""
        r = _check_r(r)
        if max_degree is None:
            if x_max is None:
                raise ValueError("give max_degree or x_max")
            max_degree = required_degree(x_max, r)
        J = int(max_degree)
        if J < 1:
            raise ValueError("max_degree must be >= 1")
        j = np.arange(J + 1, dtype=float)
        b = (j + 1) * (j + 2) / PI2
        c = (j + 1) * (j + 2) * (j + 3) / PI2
        gamma = 1 / _one_minus_power(r, 2 * j + 4)
        beta = 1 / _one_minus_power(r, 2 * j + 6)
        for arr in (b, c, gamma, beta):
            arr.setflags(write=False)
        return cls(r, J, b, c, gamma, beta)

    def gamma_at(self, j):
        return 1 / _one_minus_power(self.r, 2 * j + 4)


@dataclass(frozen=True)
class CoefficientTriple:
    C0: float
    C1: float
    C2: float
    r: float
    higher: tuple = field(default=())


# -- tail control --------------------------------------------------------------

def _poly_tail(poly, t, J, scale=1.0):
    """Bound on ``scale * sum_{j>J} poly(j) t^j`` via the ratio test."""
    p1 = poly(J + 1)
    if p1 == 0:
        p1 = poly(J + 2) / t
    rho = t * poly(J + 2) / p1
    if rho >= 1:
        return math.inf
    return scale * p1 * t ** (J + 1) / (1 - rho)


def _weight5(j):
    return (j + 1) ** 3 * (j + 2) * (j + 3)


def required_degree(x, r, rtol=SERIES_RTOL) -> int:
    """Smallest-ish degree J whose tails are below ``rtol`` of the leading terms.

    The weight (j+1)^3 (j+2)(j+3) dominates every series used on the axis.
    """
    r = _check_r(r)
    if not (0 < x < 1):
        raise ValueError(f"x must lie in (0, 1), got {x!r}")
    t = x * x
    g0 = 1 / _one_minus_power(r, 4)

    def bound(J):
        return _poly_tail(_weight5, t, J, g0)

    J = 4
    while bound(J) > 2 * rtol:
        J = int(J * 1.25) + 1
        if J > _MAX_DEGREE:
            raise TruncationError(f"x = {x} too close to 1 for a certified cutoff")
    lo, hi = J // 2, J
    while lo < hi:
        mid = (lo + hi) // 2
        if bound(mid) <= 2 * rtol:
            hi = mid
        else:
            lo = mid + 1
    return max(hi, 4)


def _axis_sums(pt, coeffs):
    """Kernel, tangential and normal numerators at (x, 0) with tail bounds."""
    pt = AxisEvalPoint.coerce(pt)
    x = pt.x
    if not x > coeffs.r:
        raise ValueError(f"x = {x} not in ({coeffs.r}, 1)")
    t = x * x
    J = coeffs.max_degree
    j = np.arange(J + 1, dtype=float)
    tp = t ** j
    a = coeffs.gamma * coeffs.b
    u = a * tp

    K = _sum_small_first(u)
    T = _sum_small_first(coeffs.beta * coeffs.c * tp)
    A2 = _sum_small_first(j * j * u)
    # 1/2 sum_{j,k} a_j a_k (k-j)^2 t^(j+k-1) = (1/t) sum_{d>=1} d^2 sum_k u_k u_{k+d}
    corr = np.correlate(u, u, mode="full")[J + 1:]
    d = np.arange(1, J + 1, dtype=float)
    normal = _sum_small_first(d * d * corr) / t

    gt = coeffs.gamma_at(J + 1)
    bt = 1 / _one_minus_power(coeffs.r, 2 * (J + 1) + 6)
    k_tail = _poly_tail(lambda i: (i + 1) * (i + 2) / PI2, t, J, gt)
    t_tail = _poly_tail(lambda i: (i + 1) * (i + 2) * (i + 3) / PI2, t, J, bt)
    k2_tail = _poly_tail(lambda i: i * i * (i + 1) * (i + 2) / PI2, t, J, gt)
    n_tail = (k2_tail * (K + k_tail) + k_tail * (A2 + k2_tail)) / t

    rnd = (J + 2) * EPS
    return {
        "J": J,
        "K": (K, k_tail + rnd * K),
        "T": (T, t_tail + rnd * T),
        "N": (normal, n_tail + 2 * rnd * normal),
    }


def _sum_small_first(terms):
    return float(np.sum(terms[::-1]))


def _accept(name, value, err, x, coeffs):
    if not (err <= ACCEPT_RTOL * abs(value)):
        raise TruncationError(
            f"{name} tail bound {err:.3e} too large at x={x}, r={coeffs.r}, "
            f"max_degree={coeffs.max_degree}; rebuild with a larger degree")


# -- ball -----------------------------------------------------------------------

def ball_metric(p, xi, n=None) -> float:
    """Bergman metric of the unit ball in C^n at p in direction xi."""
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    xi = np.atleast_1d(np.asarray(xi, dtype=complex))
    if n is None:
        n = p.size
    if p.size != n or xi.size != n:
        raise ValueError(f"p and xi must have length n = {n}")
    s = float(np.vdot(p, p).real)
    if not s < 1:
        raise ValueError(f"|p| = {math.sqrt(s)} not inside the unit ball")
    inner = abs(np.vdot(xi, p))
    xi2 = float(np.vdot(xi, xi).real)
    return math.sqrt(n + 1) * math.sqrt(inner ** 2 / (1 - s) ** 2 + xi2 / (1 - s))


# -- ring -----------------------------------------------------------------------

def basis_renormalization(j: int, k: int, r: float) -> float:
    """Factor ``1/sqrt(1 - r^(2(j+k)+4))`` turning ball basis coefficients into ring ones."""
    r = _check_r(r)
    if j < 0 or k < 0:
        raise ValueError("indices must be nonnegative")
    return 1 / math.sqrt(_one_minus_power(r, 2 * (j + k) + 4))


def comparability_bounds(r):
    r = _check_r(r)
    lower = math.sqrt(_one_minus_power(r, 4))
    return lower, 1 / lower


def ring_kernel_diagonal(pt, coeffs: BasisCoefficients) -> SeriesValue:
    """``K(z0, z0) = sum_j gamma_j b_j x^(2j)`` at ``z0 = (x, 0)``."""
    sums = _axis_sums(pt, coeffs)
    K, err = sums["K"]
    _accept("kernel", K, err, AxisEvalPoint.coerce(pt).x, coeffs)
    return SeriesValue(K, err, sums["J"] + 1)


def _tangential_sq(sums):
    K, eK = sums["K"]
    T, eT = sums["T"]
    val = T / K
    return val, eT / K + T * eK / K ** 2


def _normal_sq(sums):
    K, eK = sums["K"]
    Nm, eN = sums["N"]
    val = Nm / K ** 2
    return val, eN / K ** 2 + 2 * Nm * eK / K ** 3


def _sample(name, x, direction, sq, coeffs, J):
    val2, err2 = sq
    value = math.sqrt(val2)
    err = err2 / (2 * value) + EPS * value
    _accept(name, value, err, x, coeffs)
    trunc = {"r": coeffs.r, "max_degree": J}
    return MetricSample(f"ring(r={coeffs.r!r})", (x, 0.0), direction, value, trunc, err)


def tangential_metric_ring(pt, coeffs: BasisCoefficients) -> MetricSample:
    pt = AxisEvalPoint.coerce(pt)
    sums = _axis_sums(pt, coeffs)
    return _sample("tangential metric", pt.x, (0, 1), _tangential_sq(sums), coeffs, sums["J"])


def normal_metric_ring(pt, coeffs: BasisCoefficients) -> MetricSample:
    """Normal direction, from the positive double sum

        F^2 K^2 = 1/2 sum_{j,k} b'_j b'_k (k-j)^2 x^(2(j+k)-2)
    """
    pt = AxisEvalPoint.coerce(pt)
    sums = _axis_sums(pt, coeffs)
    return _sample("normal metric", pt.x, (1, 0), _normal_sq(sums), coeffs, sums["J"])


def full_metric_ring(pt, xi, coeffs: BasisCoefficients) -> MetricSample:
    """Metric at ``(x, 0)``; the mixed Levi-form entry vanishes on the axis."""
    pt = AxisEvalPoint.coerce(pt)
    xi = np.asarray(xi, dtype=complex)
    if xi.shape != (2,):
        raise ValueError("xi must be a complex 2-vector")
    sums = _axis_sums(pt, coeffs)
    n2, en2 = _normal_sq(sums)
    t2, et2 = _tangential_sq(sums)
    w1, w2 = abs(xi[0]) ** 2, abs(xi[1]) ** 2
    sq = (w1 * n2 + w2 * t2, w1 * en2 + w2 * et2)
    if sq[0] == 0:
        trunc = {"r": coeffs.r, "max_degree": sums["J"]}
        return MetricSample(f"ring(r={coeffs.r!r})", (pt.x, 0.0), tuple(xi), 0.0, trunc, 0.0)
    return _sample("metric", pt.x, tuple(xi), sq, coeffs, sums["J"])


def axis_unitary(p):
    """Unitary U with ``U p = (|p|, 0)``."""
    p = np.asarray(p, dtype=complex)
    rad = float(np.linalg.norm(p))
    if rad == 0:
        raise ValueError("p must be nonzero")
    p1, p2 = p
    return np.array([[p1.conjugate(), p2.conjugate()], [-p2, p1]]) / rad


def ring_metric(p, xi, coeffs: BasisCoefficients) -> MetricSample:
    """Metric at an arbitrary point, rotated onto the axis first."""
    p = np.asarray(p, dtype=complex)
    U = axis_unitary(p)
    x = float(np.linalg.norm(p))
    sample = full_metric_ring(x, U @ np.asarray(xi, dtype=complex), coeffs)
    return MetricSample(sample.domain, tuple(p), tuple(np.asarray(xi, dtype=complex)),
                        sample.value, sample.truncation, sample.error_bound)


def cross_term_A(j: int, k: int, coeffs: BasisCoefficients) -> float:
    """``A_jk = c_j b_k (beta_j - gamma_k) + c_k b_j (beta_k - gamma_j)``, negative for j > k.

    The differences are formed as
    ``beta_j - gamma_k = -r^(2k+4) (1 - r^(2(j-k)+2)) beta_j gamma_k``, since
    both factors round to 1.0 once r^(2k+4) drops below machine epsilon.
    """
    if not j > k >= 0:
        raise ValueError(f"need j > k >= 0, got j={j}, k={k}")
    if j > coeffs.max_degree:
        raise ValueError(f"j = {j} beyond table degree {coeffs.max_degree}")
    r = coeffs.r
    b, c, g, be = coeffs.b, coeffs.c, coeffs.gamma, coeffs.beta
    # beta_j - gamma_k and beta_k - gamma_j (the latter has j - k >= 1 of the other sign)
    d_jk = -r ** (2 * k + 4) * _one_minus_power(r, 2 * (j - k) + 2) * be[j] * g[k]
    d_kj = r ** (2 * k + 6) * _one_minus_power(r, 2 * (j - k) - 2) * be[k] * g[j] \
        if j - k > 1 else 0.0
    return float(c[j] * b[k] * d_jk + c[k] * b[j] * d_kj)


# -- normal-direction comparison polynomial -------------------------------------

def comparison_c0(r):
    r = _check_r(r)
    return -(24 / PI4) * r ** 4 * (1 - r ** 2) / ((1 - r ** 6) * (1 - r ** 4) ** 2)


def comparison_c1(r):
    r = _check_r(r)
    return -(192 / PI4) * r ** 6 * (1 - r ** 2) / ((1 - r ** 4) * (1 - r ** 8) * (1 - r ** 6))


def comparison_c2(r):
    r = _check_r(r)
    s = r * r
    num = 24 * r ** 4 * (3 - 2 * s - 37 * s ** 2 - 66 * s ** 3 - 96 * s ** 4
                         - 69 * s ** 5 - 34 * s ** 6 + s ** 7)
    den = ((1 + s) * (1 + s + s ** 2 + s ** 3 + s ** 4) * (s ** 3 - 1)
           * (1 + s + s ** 2) * (s ** 4 - 1))
    return num / den / PI4


def comparison_coefficients(r, num_coeffs: int = 3, max_degree=None) -> CoefficientTriple:
    """Coefficients of

        (1 - t)^2 sum_{j,k} a_j a_k (k-j)^2 t^(j+k-1) - 6 (sum_j a_j t^j)^2 = sum_l C_l t^l

    with ``a_j = gamma_j b_j`` and ``t = x^2``.

    The convolutions run in exact rational arithmetic on ``Fraction(r)``
    with ``b_j * pi^2`` integral, so the heavy cancellation at small r
    costs nothing; the common factor 1/pi^4 is applied at the end.
    """
    r = _check_r(r)
    if num_coeffs < 3:
        raise ValueError("num_coeffs must be >= 3")
    if max_degree is None:
        max_degree = num_coeffs + 2
    if max_degree < num_coeffs + 2:
        raise ValueError(f"max_degree must be >= num_coeffs + 2 = {num_coeffs + 2}")
    # C_l needs a_j up to j = l + 1 only
    J = num_coeffs
    rq = Fraction(r)
    a = [Fraction((j + 1) * (j + 2)) / (1 - rq ** (2 * j + 4)) for j in range(J + 1)]

    def conv(p, q, n):
        return [sum(p[i] * q[m - i] for i in range(m + 1) if i < len(p) and m - i < len(q))
                for m in range(n)]

    a1 = [j * aj for j, aj in enumerate(a)]
    a2 = [j * j * aj for j, aj in enumerate(a)]
    # t * S(t) = 2 (a * a2) - 2 (a1 * a1); drop the constant and shift
    tS = [2 * x - 2 * y for x, y in zip(conv(a, a2, J + 1), conv(a1, a1, J + 1))]
    S = tS[1:]
    K2 = conv(a, a, J)
    C = []
    for l in range(num_coeffs):
        s0 = S[l]
        s1 = S[l - 1] if l >= 1 else 0
        s2 = S[l - 2] if l >= 2 else 0
        C.append(float(s0 - 2 * s1 + s2 - 6 * K2[l]) / PI4)
    return CoefficientTriple(C[0], C[1], C[2], r, tuple(C[3:]))
