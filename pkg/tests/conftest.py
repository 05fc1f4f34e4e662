import mpmath as mp
import pytest

mp.mp.dps = 40


def theta_lambda(tau):
    """lambda = (theta_2 / theta_3)^4 with nome exp(i pi tau), in mpmath."""
    q = mp.exp(1j * mp.pi * mp.mpc(tau))
    return (mp.jtheta(2, 0, q) / mp.jtheta(3, 0, q)) ** 4


def theta_N(tau):
    q = mp.exp(1j * mp.pi * mp.mpc(tau))
    return mp.pi ** 2 * mp.jtheta(2, 0, q) ** 4


def theta_D(tau):
    q = mp.exp(1j * mp.pi * mp.mpc(tau))
    return mp.pi ** 2 * mp.jtheta(3, 0, q) ** 4


def theta_kobayashi(p):
    """Kobayashi metric of C - {0, 1} at p near 0: invert lambda with
    findroot from the cusp asymptotics, then 1 / (2 Im q |lambda'(q)|)."""
    p = mp.mpc(p)
    seed = mp.log(p / 16) / (1j * mp.pi)
    if mp.re(seed) < 0:
        seed += 2
    q = mp.findroot(lambda t: theta_lambda(t) - p, seed)
    dlam = mp.diff(theta_lambda, q)
    return float(1 / (2 * mp.im(q) * abs(dlam)))


def radial_kernel(s, r, terms=400):
    """Ring Bergman kernel K(z, z) as a function of s = |z|^2.

    The ring weights depend on j + k only, so expanding
    1/(1 - r^(2n+4)) geometrically gives K = sum_m r^(4m) K_ball(r^m z).
    """
    r = mp.mpf(r)
    total = mp.mpf(0)
    for m in range(terms):
        w = r ** (4 * m)
        if m and w < mp.mpf(10) ** -45:
            break
        total += w * 2 / mp.pi ** 2 / (1 - r ** (2 * m) * s) ** 3
    return total


def radial_metric(p, xi, r):
    """Bergman metric from the Levi form of log G(|z|^2):
    g'(s) |xi|^2 + g''(s) |<xi, z>|^2."""
    p = [mp.mpc(complex(v)) for v in p]
    xi = [mp.mpc(complex(v)) for v in xi]
    s = sum(abs(v) ** 2 for v in p)
    g = lambda u: mp.log(radial_kernel(u, r))
    g1 = mp.diff(g, s)
    g2 = mp.diff(g, s, 2)
    inner = abs(sum(a * mp.conj(b) for a, b in zip(xi, p)))
    return float(mp.sqrt(g1 * sum(abs(v) ** 2 for v in xi) + g2 * inner ** 2))


@pytest.fixture
def oracle():
    class O:
        lam = staticmethod(theta_lambda)
        N = staticmethod(theta_N)
        D = staticmethod(theta_D)
        kobayashi = staticmethod(theta_kobayashi)
        kernel = staticmethod(radial_kernel)
        metric = staticmethod(radial_metric)
    return O


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    """Record and print one pass/fail line for an acceptance criterion.

    The lines are repeated in a summary section at the end of the run.
    """
    def report(number, title, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}  {title}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
