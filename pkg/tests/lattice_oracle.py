"""Recursive expansion of the lattice vertex operators, used as an oracle."""

from fractions import Fraction

from critical_fock.exact import add_into, add_term
from critical_fock.lattice import LatticeMonomial, beta_apply, cocycle


def exp_series(sign, creation, v, top):
    # d E_d = sum_j (j a_j) E_{d-j}
    series = [dict(v)]
    for d in range(1, top + 1):
        acc = {}
        for j in range(1, d + 1):
            prev = series[d - j]
            if not prev:
                continue
            if creation:
                add_into(acc, beta_apply(-j, prev), Fraction(sign))
            else:
                add_into(acc, beta_apply(j, prev), Fraction(-sign))
        series.append({k: c / d for k, c in acc.items()})
    return series


def expbeta_recursive(sign, n, v, convention):
    out = {}
    for mono, c0 in v.items():
        annihilated = exp_series(sign, False, {mono: Fraction(1)}, mono.degree)
        eps = cocycle(sign, mono.m, convention)
        for d, vec in enumerate(annihilated):
            dc = d + sign * mono.m - n - 1
            if not vec or dc < 0:
                continue
            shifted = {LatticeMonomial(k.m + sign, k.parts): c * eps for k, c in vec.items()}
            for key, c in exp_series(sign, True, shifted, dc)[dc].items():
                add_term(out, key, c * c0)
    return out
