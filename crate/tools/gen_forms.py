#!/usr/bin/env python3
"""Regenerate the weight-4 newform coefficient files in data/forms/.

Each form is written as an explicit integer combination of eta quotients
prod_d eta(d*tau)^r_d spanning S_4(Gamma_0(N)).  The combinations were
found by solving for the unique cusp form whose expansion starts with the
published q-expansion; the resulting a_p are checked for Hecke
multiplicativity up to the requested bound before anything is written.

Usage: tools/gen_forms.py [PMAX] [OUTDIR]
"""
import math
import os
import sys

FORMS = [
    ("6/1", 6, [(1, {1: 2, 2: 2, 3: 2, 6: 2})]),
    ("8/1", 8, [(1, {2: 4, 4: 4})]),
    ("12/1", 12, [
        (1, {1: -1, 2: 2, 3: 3, 4: 3, 6: 2, 12: -1}),
        (3, {1: -1, 2: 4, 3: 3, 4: -1, 12: 3}),
        (-4, {2: 2, 4: 2, 6: 2, 12: 2}),
    ]),
    ("32/1", 32, [
        (1, {1: -2, 2: 3, 4: 3, 8: 3, 16: 3, 32: -2}),
        (2, {1: -2, 2: 3, 4: 3, 8: 5, 16: -3, 32: 2}),
        (-4, {1: -2, 2: 5, 4: -2, 8: 5, 16: 2}),
        (8, {1: -2, 2: 5, 8: -1, 16: 6}),
        (-2, {2: -2, 4: 5, 8: 2, 16: 5, 32: -2}),
        (-4, {2: -2, 4: 5, 8: 4, 16: -1, 32: 2}),
    ]),
    ("32/2", 32, [
        (1, {1: -2, 2: 3, 4: 3, 8: 3, 16: 3, 32: -2}),
        (2, {1: -2, 2: 3, 4: 3, 8: 5, 16: -3, 32: 2}),
        (4, {1: -2, 2: 5, 4: -2, 8: 5, 16: 2}),
        (-8, {1: -2, 2: 5, 8: -1, 16: 6}),
        (-2, {2: -2, 4: 5, 8: 2, 16: 5, 32: -2}),
        (-4, {2: -2, 4: 5, 8: 4, 16: -1, 32: 2}),
    ]),
]


def sigma1(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


def eta_quotient(rd, n):
    """q-expansion coefficients 0..n-1 of prod_d eta(d tau)^r_d."""
    lead = sum(d * r for d, r in rd.items())
    assert lead % 24 == 0
    lead //= 24
    m = n - lead
    s1 = [0] + [sigma1(k) for k in range(1, m)]
    c = [0] * m
    for k in range(1, m):
        c[k] = -sum(r * d * s1[k // d] for d, r in rd.items() if k % d == 0)
    g = [0] * m
    g[0] = 1
    for j in range(1, m):
        acc = sum(c[k] * g[j - k] for k in range(1, j + 1))
        assert acc % j == 0
        g[j] = acc // j
    return [0] * lead + g


def primes_upto(n):
    sieve = [True] * (n + 1)
    sieve[0] = sieve[1] = False
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = [False] * len(sieve[i * i :: i])
    return [i for i, v in enumerate(sieve) if v]


def check_hecke(a, level, n):
    for p in primes_upto(n - 1):
        assert p not in (0, 1)
        q = p
        prev, cur = 1, a[p]
        while q * p < n:
            nxt = a[p] * cur - (0 if level % p == 0 else p ** 3 * prev)
            assert a[q * p] == nxt, (p, q)
            prev, cur, q = cur, nxt, q * p
        if level % p:
            assert a[p] ** 2 <= 4 * p ** 3
    for m in range(2, n):
        for k in range(2, int(math.isqrt(m)) + 1):
            if m % k == 0 and math.gcd(k, m // k) == 1:
                assert a[m] == a[k] * a[m // k], m


def main():
    pmax = int(sys.argv[1]) if len(sys.argv) > 1 else 1000
    outdir = sys.argv[2] if len(sys.argv) > 2 else os.path.join(
        os.path.dirname(__file__), "..", "crates", "core", "data", "forms")
    n = pmax + 1
    for name, level, combo in FORMS:
        a = [0] * n
        for coef, rd in combo:
            for i, v in enumerate(eta_quotient(rd, n)):
                a[i] += coef * v
        assert a[1] == 1
        check_hecke(a, level, n)
        path = os.path.join(outdir, name.replace("/", "_") + ".coef")
        with open(path, "w") as fh:
            fh.write("# weight 4 newform %s, a_p for p <= %d\n" % (name, pmax))
            fh.write("# generated by tools/gen_forms.py from eta quotients:\n")
            for coef, rd in combo:
                body = " ".join("eta(%dt)^%d" % (d, r) for d, r in sorted(rd.items()) if r)
                fh.write("#   %+d * %s\n" % (coef, body))
            fh.write("%s %d 4 1\n" % (name, level))
            for p in primes_upto(pmax):
                fh.write("%d %d\n" % (p, a[p]))
        print("wrote", path)


if __name__ == "__main__":
    main()
