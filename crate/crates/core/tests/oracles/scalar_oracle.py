"""Arbitrary-precision reference values for the closed-form scalars.

Independent of the Rust implementation: evaluates the operator
coefficients, the reciprocal-root pairs and the leading eigenvalue with
mpmath at 50 digits. The printed values are frozen into
`tests/analytic_oracle.rs`.

    python3 scalar_oracle.py
"""
import mpmath as mp

mp.mp.dps = 50


def scalars(tau, g, dp):
    tau, g, dp = mp.mpf(tau), mp.mpf(g), mp.mpf(dp)
    beta = 1 + 1j * dp**2 * tau * (1 - 2 * g**2 * (1 - mp.sin(tau) / tau))
    m = 1 / mp.sqrt(beta)
    gg = 2 * m**2 * g**2 * dp**2 * (1 - mp.cos(tau))
    c = g * dp * mp.sqrt(2 * (1 - mp.cos(tau)))
    return beta, m, gg, c


def small_root(p):
    s = mp.sqrt(p * p - 1)
    a, b = p + s, p - s
    return (a, b) if abs(a) < abs(b) else (b, a)


def branch(tau, g, dp):
    beta, m, gg, c = scalars(tau, g, dp)
    tau = mp.mpf(tau)
    q = mp.cos(tau) + 1j * gg * mp.sin(tau)
    qt = mp.cos(tau) + 1j / gg * mp.sin(tau)
    lam, _ = small_root(q)
    zeta, _ = small_root(qt)
    eta = 1 / (2 * (zeta - qt))
    # <0|V e^{-zeta A^dag}|0> via the Gaussian integral in the rotated quadrature
    gamma0 = m * mp.exp(-0.5j * tau) / mp.sqrt(1 + gg * (1 - zeta * mp.exp(-1j * tau)))
    return dict(beta=beta, m=m, g=gg, c=c, q=q, qt=qt, lam=lam, zeta=zeta,
                eta=eta, gamma0=gamma0, r=mp.atanh(abs(zeta)),
                rate=-mp.log(abs(lam)))


def show(name, z):
    z = mp.mpc(z)
    print(f"    {name}: ({mp.nstr(z.real, 20)}, {mp.nstr(z.imag, 20)})")


if __name__ == "__main__":
    for tau in (mp.pi * mp.mpf("0.9"), mp.pi * mp.mpf("0.6"), mp.pi * mp.mpf("1.4")):
        for g, dp in (("1", "0.4"), ("0.7", "1.3")):
            print(f"tau={mp.nstr(tau / mp.pi, 5)}pi g={g} dp={dp}")
            for k, v in branch(tau, g, dp).items():
                show(k, v)
