"""Verification suites over fixed default grids.

Each check evaluates an invariant of the library on a deterministic grid
and returns a :class:`CheckResult` with witness values (worst margins,
empirical constants).  Nothing here adds mathematics of its own.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .bergman import (
    BasisCoefficients,
    ball_metric,
    comparability_bounds,
    comparison_c0,
    comparison_c1,
    comparison_c2,
    comparison_coefficients,
    cross_term_A,
    full_metric_ring,
    normal_metric_ring,
    tangential_metric_ring,
)
from .covering import (
    kobayashi_punctured_disk,
    kobayashi_punctured_domain_bounds,
    punctured_disk_via_exponential_cover,
)
from .modular import (
    TruncationPolicy,
    eval_D,
    eval_D_prime,
    eval_lambda,
    eval_lambda_prime,
    eval_N_prime,
    invert_lambda_near_zero,
    kobayashi_c_minus_two_points,
)

SEED = 20240611

#: empirical sup over Im tau >= 1 (attained at Im tau = 1)
D_PRIME_BOUND = 14.0
#: sup of |N'(tau)| e^{pi Im tau} over Im tau >= 1; tends to 16 pi^3 at the cusp
N_PRIME_SCALED_BOUND = 510.0

RING_RADII = (0.1, 0.3, 0.5, 0.7)
NORMAL_RADII = (0.05, 0.1)
NORMAL_OFFSETS = (0.005, 0.01, 0.05)
WINDOW_DELTAS = tuple(np.logspace(-6, -2, 9))


@dataclass
class CheckResult:
    check: str
    passed: bool
    witness: dict = field(default_factory=dict)
    failure: dict | None = None
    runtime: float = 0.0

    def as_dict(self, timing=False):
        d = {"check": self.check, "passed": self.passed, "witness": self.witness,
             "failure": self.failure}
        if timing:
            d["runtime"] = self.runtime
        return d


def _timed(fn):
    def wrapper():
        t0 = time.perf_counter()
        try:
            res = fn()
        except Exception as exc:  # evaluation failures become failed checks
            res = CheckResult(fn.__name__, False, failure={"error": f"{type(exc).__name__}: {exc}"})
        res.runtime = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    return wrapper


def ring_grid(r, n=20):
    """n interior points of (r, 1), equally spaced."""
    return [r + (1 - r) * k / (n + 1) for k in range(1, n + 1)]


DIRECTIONS = {
    "N": np.array([1, 0], dtype=complex),
    "T": np.array([0, 1], dtype=complex),
    "D": np.array([1, 1], dtype=complex) / math.sqrt(2),
}


# -- Kobayashi ------------------------------------------------------------------

@_timed
def punctured_disk_oracle():
    worst, where = 0.0, None
    for delta in (0.5, 0.1, 0.01, 0.001):
        closed = kobayashi_punctured_disk(delta).value
        cover = punctured_disk_via_exponential_cover(delta)
        err = abs(closed - cover) / closed
        if err >= worst:
            worst, where = err, delta
    ok = worst < 1e-12
    return CheckResult("thm1.punctured_disk_oracle", ok, {"max_rel_err": worst},
                       None if ok else {"delta": where})


@_timed
def cusp_window():
    ratios, bad = [], None
    for delta in WINDOW_DELTAS:
        s = kobayashi_c_minus_two_points(delta)
        ratio = s.value * delta * math.log(1 / delta)
        ratios.append(ratio)
        upper = kobayashi_punctured_disk(delta).value
        if not (0 < ratio <= 0.5 + 1e-9) or s.value > upper + s.error_bound:
            bad = bad or {"delta": float(delta), "ratio": ratio}
    lo, hi = min(ratios), max(ratios)
    ok = bad is None and hi / lo < 10
    return CheckResult("thm1.window", ok,
                       {"ratio_min": lo, "ratio_max": hi, "max_over_min": hi / lo},
                       None if ok else (bad or {"max_over_min": hi / lo}))


@_timed
def inversion_round_trip():
    worst, where = 0.0, None
    for mod in (1e-2, 1e-4, 1e-6):
        for k in range(8):
            p = mod * complex(math.cos(2 * math.pi * k / 8), math.sin(2 * math.pi * k / 8))
            inv = invert_lambda_near_zero(p, tol=1e-12)
            res = abs(eval_lambda(complex(inv.tau)).value - p)
            if res >= worst:
                worst, where = res, p
    ok = worst < 1e-10
    return CheckResult("thm1.inversion_round_trip", ok, {"max_residual": worst},
                       None if ok else {"p": repr(where)})


@_timed
def near_one_symmetry():
    worst, bad = 0.0, None
    for delta in (1e-3, 1e-5):
        a = kobayashi_c_minus_two_points(delta)
        b = kobayashi_c_minus_two_points(1 - delta)
        slack = a.error_bound + b.error_bound - abs(a.value - b.value)
        rel = abs(a.value - b.value) / a.value
        worst = max(worst, rel)
        if slack < 0:
            bad = {"delta": delta, "diff": abs(a.value - b.value),
                   "combined_bound": a.error_bound + b.error_bound}
    return CheckResult("thm1.near_one_symmetry", bad is None, {"max_rel_diff": worst}, bad)


@_timed
def punctured_domain_bounds():
    configs = [
        ((0, 1), 1.0, [1e-3, 1e-4 * 1j, -1e-5]),
        ((0, 2), 1.0, [2e-3, 2e-5 * (1 + 1j)]),
        ((0, 1, 3j, -2), 0.5, [1e-3, 1 + 1e-4, 1 - 2e-3j]),
    ]
    worst, bad = math.inf, None
    for punctures, radius, points in configs:
        for p in points:
            lower, upper = kobayashi_punctured_domain_bounds(p, punctures, radius)
            gap = (upper - lower) / upper
            worst = min(worst, gap)
            if not 0 < lower <= upper:
                bad = {"p": repr(p), "lower": lower, "upper": upper}
    return CheckResult("thm1.punctured_domain_bounds", bad is None, {"min_rel_gap": worst}, bad)


# -- modular function -------------------------------------------------------------

@_timed
def modular_asymptotics():
    d_err = abs(eval_D(10j).value - math.pi ** 2)
    devs = [abs(eval_lambda(complex(0, t)).value * math.exp(math.pi * t) - 16)
            for t in (4, 6, 8, 10)]
    lam8 = abs(eval_lambda(8j).value * math.exp(8 * math.pi) - 16)
    mono = all(b < a for a, b in zip(devs, devs[1:]))
    ok = d_err < 1e-8 and lam8 < 1e-6 and mono and devs[-1] < 1e-6
    return CheckResult("lemma_bdden.asymptotics", ok,
                       {"abs_D10i_minus_pi2": d_err, "abs_lam8i_scaled_minus_16": lam8,
                        "deviation_t10": devs[-1]},
                       None if ok else {"deviations": devs})


def random_taus(n=10, seed=SEED, im_range=(3.0, 8.0)):
    rng = np.random.default_rng(seed)
    re = rng.uniform(0.0, 2.0, n)
    im = rng.uniform(*im_range, n)
    return [complex(a, b) for a, b in zip(re, im)]


@_timed
def derivative_finite_difference():
    h = 1e-5
    worst, where = 0.0, None
    for tau in random_taus():
        fd = (eval_lambda(tau + h).value - eval_lambda(tau - h).value) / (2 * h)
        an = eval_lambda_prime(tau).value
        err = abs(fd - an) / abs(an)
        if err >= worst:
            worst, where = err, tau
    ok = worst < 1e-6
    return CheckResult("lemma_bdden.derivative_fd", ok, {"max_rel_err": worst},
                       None if ok else {"tau": repr(where)})


@_timed
def derivative_bounds():
    dmax, nmax, where = 0.0, 0.0, None
    for y in np.linspace(1, 10, 19):
        for x in np.linspace(0, 2, 9)[:-1]:
            tau = complex(x, y)
            d = abs(eval_D_prime(tau).value)
            n = abs(eval_N_prime(tau).value) * math.exp(math.pi * y)
            if d > dmax or n > nmax:
                where = tau
            dmax, nmax = max(dmax, d), max(nmax, n)
    ok = dmax < D_PRIME_BOUND and nmax < N_PRIME_SCALED_BOUND
    return CheckResult("lemma_bdden.derivative_bounds", ok,
                       {"sup_abs_D_prime": dmax, "sup_abs_N_prime_scaled": nmax},
                       None if ok else {"tau": repr(where)})


@_timed
def truncation_consistency():
    worst, bad = 0.0, None
    for tau in random_taus(5, SEED + 1, (2.0, 10.0)) + [1j, 0.5 + 1.2j]:
        for fn in (eval_lambda, eval_lambda_prime, eval_D):
            base = fn(tau)
            doubled = fn(tau, TruncationPolicy(max_index=2 * base.terms_used))
            diff = abs(doubled.value - base.value)
            worst = max(worst, diff / max(base.tail_bound, 1e-300))
            if diff > base.tail_bound:
                bad = {"tau": repr(tau), "op": fn.__name__, "diff": diff}
    return CheckResult("lemma_bdden.truncation_consistency", bad is None,
                       {"max_diff_over_bound": worst}, bad)


@_timed
def periodicity():
    worst, bad = 0.0, None
    for tau in random_taus(5, SEED + 2, (2.0, 10.0)):
        a, b = eval_lambda(tau), eval_lambda(tau + 2)
        diff = abs(a.value - b.value)
        worst = max(worst, diff)
        if diff > a.tail_bound + b.tail_bound:
            bad = {"tau": repr(tau), "diff": diff}
    return CheckResult("lemma_bdden.periodicity", bad is None, {"max_abs_diff": worst}, bad)


# -- Bergman ------------------------------------------------------------------------

def _coeffs_for(r, xs):
    return BasisCoefficients.build(r, x_max=max(xs))


@_timed
def tangential_strict():
    worst, bad = math.inf, None
    for r in RING_RADII:
        xs = ring_grid(r)
        cf = _coeffs_for(r, xs)
        for x in xs:
            s = tangential_metric_ring(x, cf)
            ball = ball_metric((x, 0), (0, 1))
            margin = ball - s.value
            worst = min(worst, margin / ball)
            if not margin > s.error_bound:
                bad = {"r": r, "x": x, "margin": margin, "error_bound": s.error_bound}
    return CheckResult("thm2.tangential_strict", bad is None,
                       {"min_rel_margin": worst}, bad)


@_timed
def cross_term_signs():
    worst, bad = -math.inf, None
    for r in (0.1, 0.5, 0.9):
        cf = BasisCoefficients.build(r, max_degree=30)
        for j in range(1, 31):
            for k in range(j):
                a = cross_term_A(j, k, cf)
                worst = max(worst, a)
                if not a < 0:
                    bad = {"r": r, "j": j, "k": k, "A": a}
    return CheckResult("thm2.cross_term_signs", bad is None, {"max_A": worst}, bad)


@_timed
def sandwich():
    worst, bad = math.inf, None
    for r in RING_RADII:
        lo, hi = comparability_bounds(r)
        xs = ring_grid(r)
        cf = _coeffs_for(r, xs)
        for x in xs:
            for name, xi in DIRECTIONS.items():
                s = full_metric_ring(x, xi, cf)
                ball = ball_metric((x, 0), xi)
                m_lo = s.value - lo * ball
                m_hi = hi * ball - s.value
                worst = min(worst, m_lo / ball, m_hi / ball)
                if not (m_lo > s.error_bound and m_hi > s.error_bound):
                    bad = {"r": r, "x": x, "dir": name, "lower_margin": m_lo,
                           "upper_margin": m_hi}
    return CheckResult("eq786.sandwich", bad is None, {"min_rel_margin": worst}, bad)


@_timed
def normal_strict():
    worst, bad = math.inf, None
    for r in NORMAL_RADII:
        xs = [r + e for e in NORMAL_OFFSETS]
        cf = _coeffs_for(r, xs)
        for x in xs:
            s = normal_metric_ring(x, cf)
            ball = ball_metric((x, 0), (1, 0))
            margin = ball - s.value
            worst = min(worst, margin / ball)
            if not margin > s.error_bound:
                bad = {"r": r, "x": x, "margin": margin}
    return CheckResult("prop_ring_normal.normal_strict", bad is None,
                       {"min_rel_margin": worst}, bad)


@_timed
def coefficient_closed_forms():
    worst, bad = 0.0, None
    for r in (0.05, 0.1, 0.2, 0.5):
        trip = comparison_coefficients(r)
        for got, want in ((trip.C0, comparison_c0(r)), (trip.C1, comparison_c1(r)),
                          (trip.C2, comparison_c2(r))):
            worst = max(worst, abs(got - want) / abs(want))
        if not (trip.C0 < 0 and trip.C1 < 0):
            bad = {"r": r, "C0": trip.C0, "C1": trip.C1}
    ok = bad is None and worst < 1e-10
    return CheckResult("prop_ring_normal.coefficients", ok, {"max_rel_err": worst},
                       bad if bad else (None if ok else {"max_rel_err": worst}))


@_timed
def c0_order():
    rs = np.geomspace(0.01, 0.2, 12)
    scaled = [abs(comparison_coefficients(float(r)).C0) / r ** 4 for r in rs]
    lo, hi = min(scaled), max(scaled)
    ok = hi / lo < 10
    return CheckResult("prop_ring_normal.c0_order", ok,
                       {"min_C0_over_r4": lo, "max_C0_over_r4": hi},
                       None if ok else {"max_over_min": hi / lo})


@_timed
def ball_limit():
    r = 1e-6
    worst, bad = 0.0, None
    cf = BasisCoefficients.build(r, x_max=0.9)
    for x in (0.3, 0.6, 0.9):
        for name, fn, xi in (("N", normal_metric_ring, (1, 0)), ("T", tangential_metric_ring, (0, 1))):
            ring = fn(x, cf).value
            ball = ball_metric((x, 0), xi)
            err = abs(ring - ball) / ball
            worst = max(worst, err)
            if not err < 1e-5:
                bad = {"x": x, "dir": name, "rel_err": err}
    return CheckResult("thm3.ball_limit", bad is None, {"max_rel_err": worst}, bad)


def random_directions(n=20, seed=SEED):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    return list(z)


@_timed
def decomposition():
    worst, bad = 0.0, None
    r, x = 0.3, 0.5
    cf = BasisCoefficients.build(r, x_max=x)
    n = normal_metric_ring(x, cf).value
    t = tangential_metric_ring(x, cf).value
    for xi in random_directions():
        full = full_metric_ring(x, xi, cf).value
        quad = math.sqrt(abs(xi[0]) ** 2 * n ** 2 + abs(xi[1]) ** 2 * t ** 2)
        err = abs(full - quad) / quad
        worst = max(worst, err)
        if not err < 1e-12:
            bad = {"xi": repr(tuple(xi)), "rel_err": err}
    return CheckResult("thm3.decomposition", bad is None, {"max_rel_err": worst}, bad)


@_timed
def full_strict():
    worst, bad = math.inf, None
    dirs = [np.array([1, 1], dtype=complex)] + random_directions(8, SEED + 3)
    for r in NORMAL_RADII:
        xs = [r + e for e in NORMAL_OFFSETS]
        cf = _coeffs_for(r, xs)
        for x in xs:
            for xi in dirs:
                s = full_metric_ring(x, xi, cf)
                ball = ball_metric((x, 0), xi)
                margin = ball - s.value
                worst = min(worst, margin / ball)
                if not margin > s.error_bound:
                    bad = {"r": r, "x": x, "xi": repr(tuple(xi)), "margin": margin}
    return CheckResult("thm3.full_strict", bad is None, {"min_rel_margin": worst}, bad)


SUITES = {
    "thm1": (punctured_disk_oracle, cusp_window, inversion_round_trip, near_one_symmetry,
             punctured_domain_bounds),
    "lemma_bdden": (modular_asymptotics, derivative_finite_difference, derivative_bounds,
                    truncation_consistency, periodicity),
    "thm2": (tangential_strict, cross_term_signs),
    "eq786": (sandwich,),
    "prop_ring_normal": (normal_strict, coefficient_closed_forms, c0_order),
    "thm3": (decomposition, ball_limit, full_strict),
}


def run_suite(name):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return [check() for check in SUITES[name]]


def run_all():
    return [res for name in SUITES for res in run_suite(name)]
