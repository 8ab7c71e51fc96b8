"""Independent reference values for the unit and acceptance tests.

Uses scipy adaptive quadrature and closed forms only; shares no code with
the C++ implementation. Run: python3 tests/oracles/compute_oracles.py
"""
import math
import numpy as np
from scipy import integrate, optimize

F0, N, ERB = 500.0, 4, 79.0
B = ERB * math.factorial(N - 1) ** 2 / (math.pi * math.factorial(2 * N - 2) * 2.0 ** (2 - 2 * N))


def H2(f, b=B, n=N):
    return (1.0 + ((f - F0) / b) ** 2) ** (-n)


def band(bw):
    return max(0.0, F0 - bw / 2), F0 + bw / 2


def gain(bw):
    lo, hi = band(bw)
    v, _ = integrate.quad(H2, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=500, points=[F0])
    return v / bw


def noise_integral(bw, phase):
    lo, hi = band(bw)
    re = integrate.quad(lambda f: math.cos(phase(f)) * H2(f), lo, hi, epsabs=1e-14, epsrel=1e-12, limit=2000, points=[F0])[0]
    im = integrate.quad(lambda f: math.sin(phase(f)) * H2(f), lo, hi, epsabs=1e-14, epsrel=1e-12, limit=2000, points=[F0])[0]
    return complex(re, im) / bw


def z(g, rho_hat):
    return math.atanh(rho_hat * abs(g)) * np.exp(1j * np.angle(g)) if abs(g) > 0 else 0j


def dprime(gr, gt, snr, g, p):
    dbin = abs(z(gr, p[0]) - z(gt, p[0])) / p[1]
    dmon = 0.0 if p[2] is None else (snr / g) / p[2]
    return math.hypot(dbin, dmon)


def threshold_db(noise, g, psi, p, target=1.0):
    gr = noise / g

    def f(x):
        s = 10 ** (x / 10)
        gt = (noise + s * np.exp(1j * psi)) / (g + s)
        return dprime(gr, gt, s, g, p) - target
    return optimize.brentq(f, -60, 20, xtol=1e-12)


print("b =", repr(B))
full = integrate.quad(H2, -np.inf, np.inf, epsabs=1e-12)[0]
print("integral |H|^2 =", repr(full), " analytic:", B * math.sqrt(math.pi) * math.gamma(N - 0.5) / math.gamma(N))
print("half-power offset =", B * math.sqrt(2 ** 0.25 - 1))
for bw in [25.0, 100.0, 400.0, 800.0, 900.0, 1000.0, 1100.0, 1600.0]:
    print(f"g({bw}) =", repr(gain(bw)))

dt = 2.3e-3
ni = noise_integral(900.0, lambda f: 2 * math.pi * f * dt)
g900 = gain(900.0)
gam = ni / g900
print("gamma(2.3ms wf itd, 900) =", repr(gam), abs(gam), np.angle(gam) / math.pi)
k = 2 * math.pi * B * dt
print("analytic |gamma| full-band =", math.exp(-k) * (k ** 3 + 6 * k ** 2 + 15 * k + 15) / 15)
ni_env = noise_integral(900.0, lambda f: 2 * math.pi * (f - F0) * dt)
print("envelope itd gamma =", repr(ni_env / g900))

rj = (0.92, 0.31, 0.76)
print("N0Spi RJ thr dB =", repr(threshold_db(g900 + 0j, g900, math.pi, rj)))
print("N0S0 RJ thr dB =", repr(threshold_db(g900 + 0j, g900, 0.0, rj)))
print("N0S0 closed form dB =", 10 * math.log10(0.76 * g900))
print("Pollack drho =", repr(math.tanh(0.42) / 0.92))
print("atanh(0.96) =", repr(math.atanh(0.96)))
# Langford Spi at 1.5 ms
ni15 = noise_integral(900.0, lambda f: 2 * math.pi * f * 1.5e-3)
print("LJ Spi dt=1.5ms thr =", repr(threshold_db(ni15, g900, math.pi, (0.95, 0.33, 0.70))))
# Bernstein2020 bw=100, rho=0.992, dt=1ms
g100 = gain(100.0)
ni_b = 0.992 * noise_integral(100.0, lambda f: 2 * math.pi * f * 1e-3)
print("BT2020 bw100 rho.992 dt1ms thr =", repr(threshold_db(ni_b, g100, 2 * math.pi * 500 * 1e-3 + math.pi, (0.89, 0.52, 0.93))))

rows = {
    "pollack1959": (0.92, 0.42), "robinson1963": (0.92, 0.31), "bernstein2014": (0.97, 0.54),
    "langford1964": (0.95, 0.33), "vanderheijden1999": (0.90, 0.19), "rabiner1966": (0.85, 0.24),
    "bernstein2020": (0.89, 0.52), "vandepar1999": (0.97, 0.38)}
us = {}
for name, (rh, sb) in rows.items():
    d = 2 * math.asin(sb / (2 * math.atanh(rh)))
    us[name] = d / (2 * math.pi * 500) * 1e6
    print(f"ipd {name}: {d!r} rad {us[name]!r} us")
print("min/max/median us:", min(us.values()), max(us.values()), np.median(list(us.values())))
d = 2 * math.asin(0.40 / (2 * math.atanh(0.96)))
print("global ipd us:", d / (2 * math.pi * 500) * 1e6)
