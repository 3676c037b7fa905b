"""Regenerates the reference tables in this directory (requires mpmath).

j0_reference.csv: J0 at 40 significant digits.
pn2_reference.csv: density of N_2 = nx^4 + ny^4 + nz^4 for Haar-random
qubits, from tanh-sinh quadrature of the unfactored radicand between its
roots, which are located with a polynomial solver in t = x^2.
"""
import mpmath as mp


def j0_table():
    mp.mp.dps = 40
    pts = [0, 1e-8, 0.25, 0.5, 1, 2, 2.404825557695773, 3, 4, 5, 5.520078110286311, 6, 7, 8, 9, 10, 11,
           11.5, 11.999, 12, 12.001, 12.5, 13, 14, 15, 17.5, 20, 25, 30, 40, 50, 75, 100, 250, 500, 1000,
           1750, 2500, -3.7, -20]
    with open("j0_reference.csv", "w") as f:
        f.write("x,j0\n")
        for x in pts:
            f.write(f"{mp.nstr(mp.mpf(x), 17)},{mp.nstr(mp.besselj(0, mp.mpf(x)), 20)}\n")


def radicand(x, n):
    s = 1 - x * x
    return s**4 - (3 * s * s + 4 * x**4 - 4 * n) ** 2


def density(n):
    n = mp.mpf(n)
    ts = [mp.mpf(k) / 4 for k in range(5)]
    vander = mp.matrix([[tk**j for j in range(4, -1, -1)] for tk in ts])
    rhs = mp.matrix([radicand(mp.sqrt(tk), n) for tk in ts])
    c = mp.lu_solve(vander, rhs)
    rts = mp.polyroots([c[i] for i in range(5)], maxsteps=200, extraprec=200)
    roots = sorted(mp.sqrt(mp.re(r)) for r in rts if abs(mp.im(r)) < mp.mpf(10) ** -20 and 0 < mp.re(r) < 1)
    pts = [mp.mpf(0)] + roots + [mp.mpf(1)]
    total = 0
    for a, b in zip(pts[:-1], pts[1:]):
        if radicand((a + b) / 2, n) > 0:
            total += mp.quad(lambda x: 1 / mp.sqrt(radicand(x, n)), [a, b])
    return mp.re(4 / mp.pi * total)


def pn2_table():
    mp.mp.dps = 60
    levels = ["0.34", "0.36", "0.4", "0.45", "0.49", "0.499", "0.501", "0.51", "0.55", "0.6", "0.7", "0.8",
              "0.9", "0.99", "0.999"]
    with open("pn2_reference.csv", "w") as f:
        f.write("n,density\n")
        for n in levels:
            f.write(f"{n},{mp.nstr(density(n), 16)}\n")


if __name__ == "__main__":
    j0_table()
    pn2_table()
