"""Offline oracle: extended-precision reference values frozen into the C++ tests.

Run with `python3 tests/oracles/gamma_oracle.py`; requires mpmath.
"""
import mpmath as mp

mp.mp.dps = 40


def show(label, value):
    if isinstance(value, mp.mpc):
        print(f"{label}: {mp.nstr(value.real, 20)} {mp.nstr(value.imag, 20)}")
    else:
        print(f"{label}: {mp.nstr(value, 20)}")


for z in [mp.mpc(1, 0), mp.mpc(0.5, 0), mp.mpc(0.5, 1), mp.mpc(0.5, 5),
          mp.mpc(0.5, 30), mp.mpc(0.5, 50), mp.mpc(3.7, 2.1),
          mp.mpc(12.5, -7.25), mp.mpc(0.75, 100), mp.mpc(-2.5, 0.5)]:
    show(f"loggamma({z})", mp.loggamma(z))

show("pi/cosh(pi)", mp.pi / mp.cosh(mp.pi))
show("2pi/(e^5pi+e^-5pi)", 2 * mp.pi / (mp.exp(5 * mp.pi) + mp.exp(-5 * mp.pi)))
show("abs_gamma_sq(1)", 2 * mp.pi / (mp.exp(mp.pi) + mp.exp(-mp.pi)))
show("2(sqrt(e)-1)", 2 * (mp.sqrt(mp.e) - 1))

for mu in [0, 0.5, 1, 2, 5, 10]:
    show(f"Gamma(1/2+i{mu})/sqrt(2pi)", mp.gamma(mp.mpc(0.5, mu)) / mp.sqrt(2 * mp.pi))

for mu in [0, 0.5, 1, 3, 5, 10, 30, 50]:
    g = mp.gamma(mp.mpc(0.5, mu))
    pre = mp.exp(1j * mp.pi / 4) / mp.sqrt(2 * mp.pi)
    show(f"F+-({mu})", pre * mp.exp(-mp.pi * mu / 2) * g)
    show(f"F-+({mu})", pre * mp.exp(mp.pi * mu / 2) * mp.conj(g))

# Gaussian eta-bump v(eta) = exp(-(eta-c)^2/s^2): Fourier pair under
# u(nu) = (2pi)^(-1/2) int v e^{i nu eta} = (s/sqrt2) exp(-s^2 nu^2/4) e^{i nu c}
for c, s, nu in [(0.0, 1.0, 0.7), (-3.0, 0.5, 2.0)]:
    f = lambda eta: mp.exp(-((eta - c) / s) ** 2) * mp.exp(1j * nu * eta)
    val = mp.quad(f, [-mp.inf, c, mp.inf]) / mp.sqrt(2 * mp.pi)
    show(f"bump u(c={c},s={s},nu={nu})", val)
    show(f"bump closed(c={c},s={s},nu={nu})",
         s / mp.sqrt(2) * mp.exp(-s * s * nu * nu / 4) * mp.exp(1j * nu * c))
