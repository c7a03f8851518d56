#!/usr/bin/env python3
"""Regenerates the Chebyshev coefficient tables in include/robinext/detail/bessel_coeffs.hpp.

The library evaluates e^x * sqrt(x) * K_n(x) (n = 0, 1) by Chebyshev expansions
on two windows expressed in the variable 1/x:

  window A:  x in [2, 8],    t = (16/x - 5)/3   in [-1, 1]
  window B:  x in [8, inf),  t =  16/x - 1      in (-1, 1]

Below x = 2 the library uses the ascending series, which needs no tables.
Run with mpmath installed; output goes to stdout as a ready-to-paste header.
"""

import mpmath as mp

mp.mp.dps = 50


def scaled_k(n, x):
    return mp.exp(x) * mp.sqrt(x) * mp.besselk(n, x)


def cheb_coeffs(f, n_terms):
    """Chebyshev interpolation coefficients at the Chebyshev points of the
    first kind; value = c[0]/2 + sum_{k>=1} c[k] T_k(t)."""
    nodes = [mp.cos(mp.pi * (j + mp.mpf(1) / 2) / n_terms) for j in range(n_terms)]
    vals = [f(t) for t in nodes]
    coeffs = []
    for k in range(n_terms):
        acc = mp.mpf(0)
        for j in range(n_terms):
            acc += vals[j] * mp.cos(mp.pi * k * (j + mp.mpf(1) / 2) / n_terms)
        coeffs.append(2 * acc / n_terms)
    return coeffs


def x_of_t_A(t):
    return 16 / (3 * t + 5)


def x_of_t_B(t):
    u = (t + 1) / 16
    return mp.inf if u == 0 else 1 / u


def f_A(n):
    return lambda t: scaled_k(n, x_of_t_A(t))


def f_B(n):
    def f(t):
        x = x_of_t_B(t)
        if x == mp.inf:
            return mp.sqrt(mp.pi / 2)
        return scaled_k(n, x)

    return f


def clenshaw(coeffs, t):
    b1 = b2 = mp.mpf(0)
    for c in reversed(coeffs[1:]):
        b1, b2 = 2 * t * b1 - b2 + c, b1
    return t * b1 - b2 + coeffs[0] / 2


def max_rel_err(coeffs, n, window):
    worst = mp.mpf(0)
    for i in range(2000):
        if window == "A":
            x = 2 + 6 * mp.mpf(i) / 1999
            t = (16 / x - 5) / 3
        else:
            x = 8 / (1 - mp.mpf(i) / 2000.0001)  # 8 .. ~1.6e4
            t = 16 / x - 1
        approx = clenshaw(coeffs, t)
        exact = scaled_k(n, x)
        worst = max(worst, abs(approx / exact - 1))
    return worst


def emit(name, coeffs):
    print(f"inline constexpr double {name}[] = {{")
    for c in coeffs:
        print(f"    {mp.nstr(c, 21, strip_zeros=False)},")
    print("};")


N_A, N_B = 20, 16
tables = {}
for n in (0, 1):
    tables[f"k{n}_cheb_mid"] = cheb_coeffs(f_A(n), N_A)
    tables[f"k{n}_cheb_tail"] = cheb_coeffs(f_B(n), N_B)

for n in (0, 1):
    ea = max_rel_err(tables[f"k{n}_cheb_mid"], n, "A")
    eb = max_rel_err(tables[f"k{n}_cheb_tail"], n, "B")
    print(f"// K{n}: window A max rel err {mp.nstr(ea, 3)}, "
          f"window B max rel err {mp.nstr(eb, 3)}")

for name, coeffs in tables.items():
    emit(name, coeffs)
