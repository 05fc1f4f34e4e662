"""Kobayashi metric of planar domains through their universal covers.

If ``pi: H -> Omega`` is a covering with ``pi(q) = p`` and ``m`` maps the
half-plane ``H`` onto the unit disk with ``m(q) = 0``, then

    F_K(p, xi) = |m'(q)| / |pi'(q)| * |xi|.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import MetricSample, PuncturedDiskPoint, UpperHalfPlanePoint
from .modular import (
    CUSP_THRESHOLD,
    DEFAULT_POLICY,
    TruncationPolicy,
    kobayashi_c_minus_two_points,
)


@dataclass(frozen=True)
class MobiusMap:
    """``z -> (z - zero) / (z - pole)``."""

    zero: complex
    pole: complex

    def __post_init__(self):
        if self.zero == self.pole:
            raise ValueError("degenerate Mobius map: zero == pole")

    def __call__(self, z):
        return (z - self.zero) / (z - self.pole)

    def derivative(self, z):
        return (self.zero - self.pole) / (z - self.pole) ** 2


def mobius_to_disk(q) -> MobiusMap:
    """Upper half-plane onto the unit disk, sending q to 0."""
    q = UpperHalfPlanePoint.coerce(q)
    qc = complex(q)
    return MobiusMap(zero=qc, pole=qc.conjugate())


def mobius_left_half_to_disk(q) -> MobiusMap:
    """Left half-plane ``Re z < 0`` onto the unit disk, sending q to 0."""
    q = complex(q)
    if not q.real < 0:
        raise ValueError(f"{q} not in the left half-plane")
    return MobiusMap(zero=q, pole=-q.conjugate())


def kobayashi_via_covering(cover_deriv_at_q, q_to_disk_deriv_mag, xi_norm) -> float:
    cover_deriv_at_q = complex(cover_deriv_at_q)
    if cover_deriv_at_q == 0:
        raise ValueError("covering map derivative vanishes; not a local biholomorphism")
    if q_to_disk_deriv_mag < 0 or xi_norm < 0:
        raise ValueError("derivative magnitude and |xi| must be nonnegative")
    return q_to_disk_deriv_mag / abs(cover_deriv_at_q) * xi_norm


def kobayashi_punctured_disk(p, xi=1.0) -> MetricSample:
    """Closed form ``|xi| / (2 |p| log(1/|p|))`` on the punctured unit disk."""
    p = PuncturedDiskPoint.coerce(p)
    delta = abs(p.value)
    value = abs(complex(xi)) / (2 * delta * math.log(1 / delta))
    return MetricSample("D-{0}", p.value, complex(xi), value, {"exact": True}, 0.0)


def punctured_disk_via_exponential_cover(p, xi=1.0) -> float:
    """Same metric through the cover ``exp`` from the left half-plane.

    ``q = Log p`` has ``Re q = log|p| < 0``; ``pi'(q) = e^q = p``.
    """
    p = PuncturedDiskPoint.coerce(p).value
    q = cmath.log(p)
    m = mobius_left_half_to_disk(q)
    return kobayashi_via_covering(cmath.exp(q), abs(m.derivative(q)), abs(complex(xi)))


def kobayashi_punctured_domain_bounds(p, punctures, hole_radius, xi=1.0, tol: float = 1e-12,
                                      policy: TruncationPolicy = DEFAULT_POLICY,
                                      cusp_threshold: float = CUSP_THRESHOLD):
    """Two-sided bounds on F_K of ``U`` minus a discrete puncture set.

    With ``a`` the puncture nearest ``p`` and ``b`` the next nearest,

        Delta(a, hole_radius) - {a}  c  Omega  c  C - {a, b}

    so the punctured-disk value is an upper bound and the ``C - {a, b}``
    value a lower bound.  The latter is normalised by
    ``z -> (z - a)/(b - a)``, which scales ``xi`` by ``1/(b - a)``.

    Returns ``(lower, upper)``.
    """
    p = complex(p)
    pts = [complex(z) for z in punctures]
    if len(pts) < 2:
        raise ValueError("need at least two punctures")
    if not hole_radius > 0:
        raise ValueError("hole_radius must be positive")
    pts.sort(key=lambda z: (abs(p - z), z.real, z.imag))
    a, b = pts[0], pts[1]
    if p == a:
        raise ValueError(f"p = {p} is a puncture")
    if abs(p - a) >= hole_radius:
        raise ValueError(f"p = {p} outside the disk of radius {hole_radius} about {a}")
    if any(abs(z - a) < hole_radius for z in pts[1:]):
        raise ValueError(f"disk of radius {hole_radius} about {a} contains another puncture")

    xi = complex(xi)
    upper = kobayashi_punctured_disk((p - a) / hole_radius, xi / hole_radius).value
    lower = kobayashi_c_minus_two_points((p - a) / (b - a), xi / (b - a), tol, policy,
                                         cusp_threshold).value
    return lower, upper
