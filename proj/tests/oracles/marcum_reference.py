# SPDX-License-Identifier: Apache-2.0
"""Reference values for the Marcum Q tests.

Evaluates Q1(a, b) = int_b^inf x exp(-(x^2 + a^2)/2) I0(a x) dx by
adaptive quadrature at 40 significant digits. Run with
`python3 tests/oracles/marcum_reference.py`; the printed values are frozen
into tests/test_detection.cpp.
"""
import mpmath as mp

mp.mp.dps = 40


def marcum_q1(a, b):
    a = mp.mpf(a)
    b = mp.mpf(b)
    f = lambda x: x * mp.exp(-(x * x + a * a) / 2) * mp.besseli(0, a * x)
    # Split at the peak region so the quadrature sees the bulk of the mass.
    pts = [b] + [p for p in (a, a + 10, a + 40) if p > b] + [mp.inf]
    return mp.quad(f, pts)


def marcum_p1(a, b):
    """1 - Q1(a, b) = sum_k Pois(k; a^2/2) P(Pois(b^2/2) > k), at 60 digits.

    Cross-checked against quadrature of the integrand over [0, b] split into
    199 pieces; a coarse split loses precision in the deep tail.
    """
    with mp.workdps(60):
        lam = mp.mpf(a) ** 2 / 2
        y = mp.mpf(b) ** 2 / 2
        total = mp.mpf(0)
        for k in range(int(lam + 40 * mp.sqrt(lam) + 100)):
            weight = mp.exp(-lam + k * mp.log(lam) - mp.loggamma(k + 1))
            total += weight * mp.gammainc(k + 1, 0, y, regularized=True)
        aa, bb = mp.mpf(a), mp.mpf(b)
        f = lambda x: x * mp.exp(-(x * x + aa * aa) / 2) * mp.besseli(0, aa * x)
        check = mp.quad(f, mp.linspace(0, bb, 200))
        assert abs(check / total - 1) < mp.mpf("1e-8"), (a, b)
        return total


def noise_radar_args(p_fa, rho, n):
    shrink = 1 - mp.mpf(rho) ** 2
    return mp.mpf(rho) * mp.sqrt(2 * n) / shrink, mp.sqrt(-2 * mp.log(p_fa)) / shrink


def conventional_args(p_fa, snr, n):
    return mp.sqrt(2 * n * mp.mpf(snr)), mp.sqrt(-2 * mp.log(p_fa))


if __name__ == "__main__":
    cases = {
        "q1(1,1)": (1, 1),
        "q1(0,2)": (0, 2),
        "q1(3,2)": (3, 2),
        "q1(2,3)": (2, 3),
        "q1(10,12)": (10, 12),
        "q1(40,41)": (40, 41),
        "q1(200,198)": (200, 198),
        "noise(0.01,0.2,150)": noise_radar_args(mp.mpf("0.01"), mp.mpf("0.2"), 150),
        "conv(0.01,1/16,150)": conventional_args(mp.mpf("0.01"), mp.mpf(1) / 16, 150),
    }
    for name, (a, b) in cases.items():
        print(f"{name:24s} a={mp.nstr(a, 20):24s} b={mp.nstr(b, 20):24s} Q1={mp.nstr(marcum_q1(a, b), 20)}")

    # Miss probabilities 1 - Q1 deep in the tail, where Q1 itself rounds to 1.
    rho0, rc = mp.mpf("0.8"), mp.mpf(1000)
    tail_cases = {
        "p1(6,2)": (6, 2),
        "p1(20,5)": (20, 5),
        "p1(30,2)": (30, 2),
    }
    for r in (500, 1000, 1500, 2000):
        rho = rho0 / mp.sqrt(1 + (mp.mpf(r) / rc) ** 4)
        tail_cases[f"miss(0.1,R={r})"] = noise_radar_args(mp.mpf("0.1"), rho, 150)
    for name, (a, b) in tail_cases.items():
        print(f"{name:24s} a={mp.nstr(a, 20):24s} b={mp.nstr(b, 20):24s} 1-Q1={mp.nstr(marcum_p1(a, b), 20)}")
