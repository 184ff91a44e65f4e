"""The rank-one lattice vertex superalgebra F_{-1} with <beta, beta> = -1.

A monomial ``beta(-n_1)...beta(-n_k) e^{m beta}`` is stored as ``(m, parts)``
with ``parts`` a non-increasing tuple of positive ints.
"""

from __future__ import annotations

from fractions import Fraction
from collections import Counter
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Dict, List, NamedTuple, Optional, Tuple

from .exact import Vector, add_term

NORM = -1  # <beta, beta>

# Two-cocycle conventions for e^{a beta} e^{b beta} = eps(a, b) e^{(a+b) beta}.
TRIVIAL = "trivial"
SIGNED = "signed"  # eps(a, b) = (-1)^(a b)


class LatticeMonomial(NamedTuple):
    m: int = 0
    parts: Tuple[int, ...] = ()

    @property
    def degree(self) -> int:
        return sum(self.parts)

    @property
    def beta0(self) -> int:
        return NORM * self.m

    @property
    def parity(self) -> int:
        return self.m % 2

    def __str__(self):
        hs = "".join(f"b(-{n})" for n in self.parts)
        return f"{hs}e^{{{self.m}b}}"


def lattice_vacuum(m: int = 0) -> Vector:
    return {LatticeMonomial(m, ()): Fraction(1)}


def _insert(parts: Tuple[int, ...], n: int) -> Tuple[int, ...]:
    return tuple(sorted(parts + (n,), reverse=True))


@lru_cache(maxsize=None)
def _beta_mono(n: int, mono: LatticeMonomial) -> Tuple[Tuple[LatticeMonomial, Fraction], ...]:
    if n < 0:
        return ((LatticeMonomial(mono.m, _insert(mono.parts, -n)), Fraction(1)),)
    if n == 0:
        if mono.beta0 == 0:
            return ()
        return ((mono, Fraction(mono.beta0)),)
    k = mono.parts.count(n)
    if not k:
        return ()
    idx = mono.parts.index(n)
    rest = mono.parts[:idx] + mono.parts[idx + 1:]
    # [beta(n), beta(-n)] = n <beta, beta>
    return ((LatticeMonomial(mono.m, rest), Fraction(k * n * NORM)),)


def beta_apply(n: int, v: Vector) -> Vector:
    out: Vector = {}
    for mono, c in v.items():
        for key, coef in _beta_mono(n, mono):
            add_term(out, key, coef * c)
    return out


@lru_cache(maxsize=None)
def exp_coefficients(c: int, d: int) -> Tuple[Tuple[Tuple[int, ...], Fraction], ...]:
    """Coefficient of ``x^d`` in ``exp(c sum_j y_j x^j / j)`` as ``((partition, coef), ...)``.

    For a partition with multiplicities ``a_j`` the coefficient is
    ``prod_j c^{a_j} / (j^{a_j} a_j!)``.
    """
    out = []
    for lam in _partitions(d):
        coef = Fraction(1)
        for j in set(lam):
            a = lam.count(j)
            coef *= Fraction(c ** a, j ** a * factorial(a))
        out.append((lam, coef))
    return tuple(out)


def _sub_multisets(parts: Tuple[int, ...]):
    """Yield ``(removed, rest)`` for every sub-multiset of a partition."""
    counts = sorted(Counter(parts).items(), reverse=True)
    for choice in product(*(range(k + 1) for _, k in counts)):
        removed = tuple(j for (j, _), a in zip(counts, choice) for _ in range(a))
        rest = tuple(j for (j, k), a in zip(counts, choice) for _ in range(k - a))
        yield choice, counts, removed, rest


def cocycle(a: int, b: int, convention: str = SIGNED) -> int:
    if convention == TRIVIAL:
        return 1
    if convention == SIGNED:
        return -1 if (a * b) % 2 else 1
    raise ValueError(f"unknown cocycle convention {convention!r}")


@lru_cache(maxsize=None)
def _expbeta_mono(sign: int, n: int, mono: LatticeMonomial, convention: str):
    """``e^{sign beta}_n`` on one monomial.

    ``Y(e^{sign beta}, z) = E^-(z) e^{sign beta} z^{sign beta(0)} E^+(z)`` with
    ``E^+ = exp(-sign sum_j beta(j) z^{-j}/j)`` and ``E^- = exp(sign sum_j beta(-j) z^j/j)``.
    The annihilating half is applied in closed form over sub-multisets of the parts.
    """
    eps = cocycle(sign, mono.m, convention)
    out: Vector = {}
    for choice, counts, removed, rest in _sub_multisets(mono.parts):
        d = sum(removed)
        dc = d + sign * mono.m - n - 1  # degree created so that the z-power is -n-1
        if dc < 0:
            continue
        # coefficient of prod beta(j)^{a_j} in E^+, times its action on the parts
        coef = Fraction(eps)
        for (j, k), a in zip(counts, choice):
            if a:
                coef *= Fraction((-sign) ** a, j ** a * factorial(a))
                coef *= Fraction(factorial(k), factorial(k - a)) * (j * NORM) ** a
        for lam, c in exp_coefficients(sign, dc):
            key = LatticeMonomial(mono.m + sign, tuple(sorted(rest + lam, reverse=True)))
            add_term(out, key, coef * c)
    return tuple(sorted(out.items()))


def expbeta_apply(sign, n: int, v: Vector, convention: str = SIGNED) -> Vector:
    """Apply the mode ``e^{sign beta}_n`` of ``Y(e^{sign beta}, z)``."""
    s = 1 if sign in (1, "+") else -1
    out: Vector = {}
    for mono, c in v.items():
        for key, coef in _expbeta_mono(s, n, mono, convention):
            add_term(out, key, coef * c)
    return out


def _partitions(n: int, largest: Optional[int] = None) -> List[Tuple[int, ...]]:
    if n == 0:
        return [()]
    largest = n if largest is None else min(largest, n)
    out = []
    for first in range(largest, 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return out


def partitions(n: int) -> List[Tuple[int, ...]]:
    return _partitions(n)


def lattice_basis(max_degree: int, charge: Optional[int] = None,
                  charges=None) -> List[LatticeMonomial]:
    """Monomials of Heisenberg degree <= ``max_degree``.

    ``charge`` fixes one lattice charge; ``charges`` gives an explicit list.
    """
    if charge is not None:
        cs = [charge]
    elif charges is not None:
        cs = sorted(charges)
    else:
        cs = [0]
    out = []
    for m in cs:
        for d in range(max_degree + 1):
            for p in reversed(_partitions(d)):
                out.append(LatticeMonomial(m, p))
    return out


def degree_counts(max_degree: int) -> Dict[int, int]:
    return {d: len(_partitions(d)) for d in range(max_degree + 1)}


__all__ = [
    "LatticeMonomial", "beta_apply", "expbeta_apply", "lattice_basis",
    "lattice_vacuum", "cocycle", "TRIVIAL", "SIGNED", "partitions", "exp_coefficients",
]
