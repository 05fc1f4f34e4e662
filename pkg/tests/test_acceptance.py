"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary section
at the end lists every criterion.
"""

import math

import numpy as np

from invmetric import (
    BasisCoefficients,
    ball_metric,
    comparability_bounds,
    comparison_coefficients,
    cross_term_A,
    eval_D,
    eval_lambda,
    eval_lambda_prime,
    full_metric_ring,
    invert_lambda_near_zero,
    kobayashi_c_minus_two_points,
    kobayashi_punctured_disk,
    normal_metric_ring,
    tangential_metric_ring,
)
from invmetric import cli
from invmetric.bergman import SERIES_RTOL, comparison_c0, comparison_c1, comparison_c2
from invmetric.covering import punctured_disk_via_exponential_cover

RING_RADII = (0.1, 0.3, 0.5, 0.7)
DIRECTIONS = {"N": np.array([1, 0]), "T": np.array([0, 1]),
              "D": np.array([1, 1]) / math.sqrt(2)}


def ring_grid(r, n=20):
    return [r + (1 - r) * k / (n + 1) for k in range(1, n + 1)]


def test_c01_punctured_disk_oracle(acceptance_report):
    errs = []
    for d in (0.5, 0.1, 0.01, 0.001):
        closed = kobayashi_punctured_disk(d).value
        errs.append(abs(punctured_disk_via_exponential_cover(d) - closed) / closed)
    ok = max(errs) < 1e-12
    assert acceptance_report(1, "punctured-disk closed form vs covering pipeline", ok,
                             f"max rel err {max(errs):.2e} (< 1e-12)")


def test_c02_cusp_window(acceptance_report):
    ratios = [kobayashi_c_minus_two_points(d).value * d * math.log(1 / d)
              for d in np.logspace(-6, -2, 9)]
    lo, hi = min(ratios), max(ratios)
    ok = 0 < lo and hi <= 0.5 + 1e-9 and hi / lo < 10
    assert acceptance_report(2, "v(d) d log(1/d) window", ok,
                             f"range [{lo:.5f}, {hi:.5f}], max/min {hi / lo:.4f} (< 10)")


def test_c03_modular_asymptotics(acceptance_report):
    d = abs(eval_D(10j).value - math.pi ** 2)
    lam = abs(eval_lambda(8j).value * math.exp(8 * math.pi) - 16)
    ok = d < 1e-8 and lam < 1e-6
    assert acceptance_report(3, "D(10i) -> pi^2, lambda(8i) e^{8 pi} -> 16", ok,
                             f"|D - pi^2| = {d:.2e} (< 1e-8), |lambda e^(8 pi) - 16| = "
                             f"{lam:.2e} (< 1e-6)")


def test_c04_derivative_finite_difference(acceptance_report):
    rng = np.random.default_rng(4)
    h, worst = 1e-5, 0.0
    for x, y in zip(rng.uniform(0, 2, 10), rng.uniform(3, 8, 10)):
        tau = complex(x, y)
        fd = (eval_lambda(tau + h).value - eval_lambda(tau - h).value) / (2 * h)
        an = eval_lambda_prime(tau).value
        worst = max(worst, abs(fd - an) / abs(an))
    ok = worst < 1e-6
    assert acceptance_report(4, "lambda' vs central differences", ok,
                             f"max rel err {worst:.2e} over 10 points (< 1e-6)")


def test_c05_inversion_round_trip(acceptance_report):
    worst = 0.0
    for mod in (1e-2, 1e-4, 1e-6):
        for k in range(8):
            p = mod * complex(math.cos(math.pi * k / 4), math.sin(math.pi * k / 4))
            tau = complex(invert_lambda_near_zero(p).tau)
            worst = max(worst, abs(eval_lambda(tau).value - p))
    ok = worst < 1e-10
    assert acceptance_report(5, "lambda(lambda^-1(p)) = p", ok,
                             f"max residual {worst:.2e} over 24 targets (< 1e-10)")


def test_c06_symmetry_near_one(acceptance_report):
    details, ok = [], True
    for d in (1e-3, 1e-5):
        a, b = kobayashi_c_minus_two_points(d), kobayashi_c_minus_two_points(1 - d)
        diff, bound = abs(a.value - b.value), a.error_bound + b.error_bound
        ok &= diff <= bound
        details.append(f"d={d:g}: diff {diff:.2e} <= bound {bound:.2e}")
    assert acceptance_report(6, "value at 1 - d equals value at d", ok, "; ".join(details))


def test_c07_sandwich(acceptance_report):
    worst, ok, count = math.inf, True, 0
    for r in RING_RADII:
        lo, hi = comparability_bounds(r)
        xs = ring_grid(r)
        cf = BasisCoefficients.build(r, x_max=max(xs))
        for x in xs:
            for xi in DIRECTIONS.values():
                s = full_metric_ring(x, xi, cf)
                ball = ball_metric((x, 0), xi)
                need = max(s.error_bound, SERIES_RTOL * ball)
                margin = min(s.value - lo * ball, hi * ball - s.value)
                ok &= margin > need
                worst = min(worst, margin / ball)
                count += 1
    assert acceptance_report(7, "sqrt(1-r^4) F_ball <= F_ring <= F_ball/sqrt(1-r^4)", ok,
                             f"{count} points, min rel margin {worst:.3e}")


def test_c08_tangential_strict_and_cross_terms(acceptance_report):
    worst, ok = math.inf, True
    for r in RING_RADII:
        xs = ring_grid(r)
        cf = BasisCoefficients.build(r, x_max=max(xs))
        for x in xs:
            s = tangential_metric_ring(x, cf)
            margin = ball_metric((x, 0), (0, 1)) - s.value
            ok &= margin > s.error_bound
            worst = min(worst, margin)
    max_a = -math.inf
    for r in (0.1, 0.5, 0.9):
        cf = BasisCoefficients.build(r, max_degree=30)
        for j in range(1, 31):
            for k in range(j):
                max_a = max(max_a, cross_term_A(j, k, cf))
    ok &= max_a < 0
    assert acceptance_report(8, "F_ring_T < F_ball_T and A_jk < 0", ok,
                             f"min margin {worst:.3e}, max A_jk {max_a:.3e}")


def test_c09_normal_direction(acceptance_report):
    ok, worst = True, math.inf
    for r in (0.05, 0.1):
        xs = [r + e for e in (0.005, 0.01, 0.05)]
        cf = BasisCoefficients.build(r, x_max=max(xs))
        for x in xs:
            s = normal_metric_ring(x, cf)
            margin = ball_metric((x, 0), (1, 0)) - s.value
            ok &= margin > s.error_bound
            worst = min(worst, margin)
    coef_err = 0.0
    for r in (0.05, 0.1, 0.2, 0.5):
        trip = comparison_coefficients(r)
        ok &= trip.C0 < 0 and trip.C1 < 0
        for got, want in ((trip.C0, comparison_c0(r)), (trip.C1, comparison_c1(r)),
                          (trip.C2, comparison_c2(r))):
            coef_err = max(coef_err, abs(got - want) / abs(want))
    ok &= coef_err < 1e-10
    scaled = [abs(comparison_coefficients(float(r)).C0) / r ** 4
              for r in np.geomspace(0.01, 0.2, 12)]
    band = max(scaled) / min(scaled)
    ok &= band < 10
    assert acceptance_report(9, "F_ring_N < F_ball_N, C0/C1/C2, C0 = O(r^4)", ok,
                             f"min margin {worst:.3e}, coef rel err {coef_err:.1e}, "
                             f"|C0|/r^4 band {band:.3f}")


def test_c10_ball_limit(acceptance_report):
    cf = BasisCoefficients.build(1e-6, x_max=0.9)
    worst = 0.0
    for x in (0.3, 0.6, 0.9):
        for fn, xi in ((normal_metric_ring, (1, 0)), (tangential_metric_ring, (0, 1))):
            ball = ball_metric((x, 0), xi)
            worst = max(worst, abs(fn(x, cf).value - ball) / ball)
    ok = worst < 1e-5
    assert acceptance_report(10, "ring metric at r = 1e-6 vs ball", ok,
                             f"max rel err {worst:.2e} (< 1e-5)")


def test_c11_decomposition(acceptance_report):
    rng = np.random.default_rng(11)
    r, x = 0.3, 0.5
    cf = BasisCoefficients.build(r, x_max=x)
    n, t = normal_metric_ring(x, cf).value, tangential_metric_ring(x, cf).value
    worst = 0.0
    for xi in rng.normal(size=(20, 2)) + 1j * rng.normal(size=(20, 2)):
        quad = math.hypot(abs(xi[0]) * n, abs(xi[1]) * t)
        worst = max(worst, abs(full_metric_ring(x, xi, cf).value - quad) / quad)
    ok = worst < 1e-12
    assert acceptance_report(11, "full metric = quadrature of N and T parts", ok,
                             f"max rel err {worst:.2e} over 20 directions (< 1e-12)")


def test_c12_determinism(acceptance_report, tmp_path, capsys):
    files = []
    for i in range(2):
        path = tmp_path / f"verify{i}.txt"
        code = cli.main(["verify", "--all", "--out", str(path)])
        files.append((code, path.read_bytes()))
    emitted = []
    for i in range(2):
        path = tmp_path / f"emit{i}.csv"
        cli.main(["emit", "bergman_ring_N", "--r", "0.1", "--grid", "lin:0.11:0.95:7",
                  "--out", str(path)])
        emitted.append(path.read_bytes())
    ok = files[0] == files[1] and emitted[0] == emitted[1] and files[0][0] == 0
    assert acceptance_report(12, "verify --all and emit are reproducible", ok,
                             f"verify reports identical: {files[0][1] == files[1][1]}, "
                             f"emitted files identical: {emitted[0] == emitted[1]}")
