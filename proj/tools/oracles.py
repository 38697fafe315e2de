#!/usr/bin/env python3
"""Independent high-precision reference values frozen into the C++ tests.

Nothing here calls the C++ library. Run: python3 tools/oracles.py
"""
import mpmath as mp

mp.mp.dps = 30


def log_product(s, terms=400):
    # log ∏ tanh²(n s/2), terms chosen far beyond the 1e-40 tail
    return mp.fsum(2 * mp.log(mp.tanh(n * s / 2)) for n in range(1, terms + 1))


def solve_s(alpha):
    target = mp.log(2 * alpha)
    return mp.findroot(lambda s: log_product(s) - target, (mp.mpf("0.05"), mp.mpf(20)), solver="bisect")


def blaschke(s, z, terms=400):
    z = mp.mpc(z)
    out = z
    for n in range(1, terms + 1):
        a2 = mp.tanh(n * s / 2) ** 2
        out *= (a2 - z * z) / (1 - a2 * z * z)
    return out


def annulus_bins_by_cover(R, base, n_bins):
    """Harmonic measure of A(1/R, R) at `base` through the covering
    π(z) = exp(i c artanh z): Poisson measure at the disk preimage, pushed by
    the radial limits. Returns inner bins then outer bins."""
    c = 4 * mp.log(R) / mp.pi
    rho, phi = abs(base), mp.arg(base)
    z0 = mp.tanh((phi - 1j * mp.log(rho)) / c)

    def poisson_mass(t0, t1):
        # ∫_{t0}^{t1} P(z0, e^{it}) dt / 2π
        if t1 <= t0:
            return mp.mpf(0)
        kernel = lambda t: (1 - abs(z0) ** 2) / abs(mp.expj(t) - z0) ** 2
        return mp.quad(kernel, [t0, t1]) / (2 * mp.pi)

    width = 2 * mp.pi / n_bins
    masses = []
    # upper half circle (φ ∈ (0, π)) lands on the inner circle with angle c·u,
    # u = ½ ln cot(φ/2) decreasing; lower half lands on the outer circle with
    # angle c·u, u = ½ ln|cot(φ/2)| increasing in φ ∈ (π, 2π)
    for component in (0, 1):
        for b in range(n_bins):
            lo, hi = b * width, (b + 1) * width
            m = mp.mpf(0)
            for k in range(-60, 61):
                u_lo = (lo + 2 * mp.pi * k) / c
                u_hi = (hi + 2 * mp.pi * k) / c
                if component == 0:
                    # φ = 2 atan(e^{−2u}) on the upper half
                    p0, p1 = 2 * mp.atan(mp.exp(-2 * u_hi)), 2 * mp.atan(mp.exp(-2 * u_lo))
                else:
                    # φ = 2π − 2 atan(e^{−2u}) on the lower half
                    p0, p1 = 2 * mp.pi - 2 * mp.atan(mp.exp(-2 * u_lo)), 2 * mp.pi - 2 * mp.atan(mp.exp(-2 * u_hi))
                m += poisson_mass(p0, p1)
            masses.append(m)
    return masses


def main():
    print("# tau")
    for alpha in ["0.4", "0.25", "0.1", "0.001", "0.0001"]:
        s = solve_s(mp.mpf(alpha))
        print(f"alpha={alpha} s={mp.nstr(s, 30)} tau={mp.nstr(mp.exp(s), 30)}")

    print("# Blaschke values")
    for alpha, z in [("0.4", mp.mpf("0.3")), ("0.4", mp.mpc("0.5", "0.5")), ("0.4", mp.expj(1)),
                     ("0.25", mp.mpc(0, "0.7")), ("0.25", mp.expj("2.5"))]:
        s = solve_s(mp.mpf(alpha))
        v = blaschke(s, z)
        print(f"alpha={alpha} z={mp.nstr(z, 20)} B={mp.nstr(v.real, 25)} {mp.nstr(v.imag, 25)}")

    print("# annulus arc masses via the covering, 8 bins, inner then outer")
    for R, base in [(mp.e, mp.mpf(1)), (mp.mpf(2), mp.mpf("1.2") * mp.expj("0.7"))]:
        masses = annulus_bins_by_cover(R, base, 8)
        print(f"R={mp.nstr(R, 17)} base={mp.nstr(base, 17)} sum={mp.nstr(mp.fsum(masses), 20)}")
        print("  " + ", ".join(mp.nstr(m, 17) for m in masses))


if __name__ == "__main__":
    main()
