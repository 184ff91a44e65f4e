"""The Weyl vertex algebra, its Wakimoto sl2 action and the realization in Tilde (x) F_{-1}.

Fields are ``a(z) = sum a(n) z^{-n-1}`` and ``a*(z) = sum a*(n) z^{-n}`` with
``[a(n), a*(m)] = delta_{n+m,0}``.  Annihilators are ``a(n), n >= 0`` and
``a*(n), n >= 1``.  A monomial ``a(-n_1)... a*(-m_1)... 1`` stores the
positive ``n_i`` and the non-negative ``m_i``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from .affine import (LEVEL, as_affine, bracket_rhs, check_carrier, psi_lattice_mode,
                     relation_suite, sector_basis, sl2_apply)
from .amodule import ModuleSpec, _chi
from .exact import LaurentData, SpanBasis, Vector, add_term, vec_sub
from .fock import VACUUM
from .lattice import LatticeMonomial, partitions
from .report import CheckReport


class WeylMonomial(NamedTuple):
    a_parts: Tuple[int, ...] = ()
    astar_parts: Tuple[int, ...] = ()

    @property
    def degree(self) -> int:
        return sum(self.a_parts) + sum(self.astar_parts)

    @property
    def charge(self) -> int:
        return len(self.a_parts) - len(self.astar_parts)

    def __str__(self):
        a = "".join(f"a(-{n})" for n in self.a_parts)
        s = "".join(f"a*(-{n})" for n in self.astar_parts)
        return f"{a}{s}1"


WEYL_VACUUM = WeylMonomial()


def _insert(parts, n):
    return tuple(sorted(parts + (n,), reverse=True))


def _remove(parts, n):
    i = parts.index(n)
    return parts[:i] + parts[i + 1:]


def is_annihilator(gen: str, n: int) -> bool:
    return n >= 0 if gen == "a" else n >= 1


@lru_cache(maxsize=None)
def _weyl_mono(gen: str, n: int, mono: WeylMonomial):
    if gen == "a":
        if n < 0:
            return ((WeylMonomial(_insert(mono.a_parts, -n), mono.astar_parts), Fraction(1)),)
        k = mono.astar_parts.count(n)
        if not k:
            return ()
        return ((WeylMonomial(mono.a_parts, _remove(mono.astar_parts, n)), Fraction(k)),)
    if gen == "astar":
        if n <= 0:
            return ((WeylMonomial(mono.a_parts, _insert(mono.astar_parts, -n)), Fraction(1)),)
        k = mono.a_parts.count(n)
        if not k:
            return ()
        # [a*(n), a(-n)] = -1
        return ((WeylMonomial(_remove(mono.a_parts, n), mono.astar_parts), Fraction(-k)),)
    raise ValueError(f"unknown Weyl generator {gen!r}")


def weyl_apply(gen: str, n: int, v: Vector) -> Vector:
    out: Vector = {}
    for mono, c in v.items():
        for k2, c2 in _weyl_mono(gen, n, mono):
            add_term(out, k2, c * c2)
    return out


def normal_product(modes: Iterable[Tuple[str, int]], v: Vector) -> Vector:
    """``:x_1(n_1)...x_k(n_k):`` on ``v``: annihilators act first."""
    modes = list(modes)
    ann = [m for m in modes if is_annihilator(*m)]
    cre = [m for m in modes if not is_annihilator(*m)]
    for gen, n in ann + cre:
        v = weyl_apply(gen, n, v)
        if not v:
            break
    return v


def _bounds(v: Vector) -> Tuple[int, int]:
    """Largest useful index of ``a*`` and of ``a`` when acting on ``v``."""
    top_a = max([0, *(max(k.a_parts, default=0) for k in v)])
    top_s = max([-1, *(max(k.astar_parts, default=-1) for k in v)])
    return top_a, top_s


def wakimoto_apply(x: str, n: int, chi, v: Vector) -> Vector:
    """Mode ``x(n)`` of the Wakimoto module ``W_{-chi}``.

    ``e = a``, ``h = -2 :a* a: - chi`` and ``f = -:a*^2 a: - 2 d a* - a* chi``.
    """
    chi = _chi(chi)
    if x == "e":
        return weyl_apply("a", n, v)
    out: Vector = {}
    if not v:
        return out
    # a*(m) can only act nontrivially for m <= ua; a(j) for j <= us
    ua, us = _bounds(v)
    if x == "h":
        for m in range(n - us, ua + 1):
            for k2, c in normal_product((("astar", m), ("a", n - m)), v).items():
                add_term(out, k2, -2 * c)
        if chi[n]:
            for k2, c in v.items():
                add_term(out, k2, -chi[n] * c)
        return out
    if x == "f":
        lo = n - ua - us
        for m1 in range(lo, ua + 1):
            for m2 in range(lo, ua + 1):
                j = n - m1 - m2
                if j > us:
                    continue
                term = normal_product((("astar", m1), ("astar", m2), ("a", j)), v)
                for k2, c in term.items():
                    add_term(out, k2, -c)
        if n:
            for k2, c in weyl_apply("astar", n, v).items():
                add_term(out, k2, 2 * n * c)
        for k, ck in chi.items():
            for k2, c in weyl_apply("astar", n - k, v).items():
                add_term(out, k2, -ck * c)
        return out
    raise ValueError(f"unknown sl2 generator {x!r}")


def weyl_basis(degree_bound: int, charge_bound: int = 2) -> List[WeylMonomial]:
    """Monomials of degree <= bound with ``|#a - #a*| <= charge_bound``."""
    out = []
    for d in range(degree_bound + 1):
        for da in range(d + 1):
            for ap in partitions(da):
                rest = d - da
                for sp in partitions(rest):
                    # any number of a*(0) factors
                    for zeros in range(0, len(ap) + charge_bound + 1):
                        astar = sp + (0,) * zeros
                        mono = WeylMonomial(ap, astar)
                        if abs(mono.charge) <= charge_bound:
                            out.append(mono)
    out.sort(key=lambda k: (k.degree, k.charge, k))
    return out


def weyl_counts(degree_bound: int, charge_bound: int = 2) -> Dict[Tuple[int, int], int]:
    counts: Dict[Tuple[int, int], int] = {}
    for k in weyl_basis(degree_bound, charge_bound):
        counts[(k.degree, k.charge)] = counts.get((k.degree, k.charge), 0) + 1
    return counts


# --- realization inside Tilde (x) F_{-1} --------------------------------------------

REALIZED_VACUUM = (VACUUM, LatticeMonomial(0, ()))


def realized_weyl_apply(gen: str, n: int, w: Vector) -> Vector:
    """``a = Psi+(-3/2) 1 (x) e^beta`` and ``a* = -Psi-(-1/2) 1 (x) e^{-beta}`` in modes.

    ``a(n) = sum_i (-i) Psi+(i-1/2) (x) e^beta_{n-i-1}`` and
    ``a*(n) = -sum_i Psi-(i-1/2) (x) e^{-beta}_{n-i-1}``.
    """
    check_carrier(ModuleSpec.tilde(0), w)
    if gen == "a":
        return psi_lattice_mode(1, n, lambda i: Fraction(-i), w)
    if gen == "astar":
        return psi_lattice_mode(-1, n, lambda i: Fraction(-1), w)
    raise ValueError(f"unknown Weyl generator {gen!r}")


@lru_cache(maxsize=None)
def _phi_mono(mono: WeylMonomial) -> Tuple:
    v: Vector = {REALIZED_VACUUM: Fraction(1)}
    for n in mono.astar_parts:
        v = realized_weyl_apply("astar", -n, v)
    for n in mono.a_parts:
        v = realized_weyl_apply("a", -n, v)
    return tuple(v.items())


def phi(v: Vector) -> Vector:
    """The map W -> L_0(Tilde): same word in realized modes applied to 1 (x) 1."""
    out: Vector = {}
    for mono, c in v.items():
        for k2, c2 in _phi_mono(mono):
            add_term(out, k2, c * c2)
    return out


# --- checks --------------------------------------------------------------------------

def weyl_relation_check(mode_bound: int, degree_bound: int, charge_bound: int = 2,
                        realized: bool = False, basis=None) -> CheckReport:
    """``[a(n), a*(m)] = delta_{n+m,0}`` and ``[a, a] = [a*, a*] = 0`` on a truncation."""
    if realized:
        vectors = [k for k in sector_basis(ModuleSpec.tilde(0), 0, degree_bound, charge_bound)]
        apply = realized_weyl_apply
        name = "Weyl relations (realized in Tilde (x) F_-1)"
    else:
        vectors = weyl_basis(degree_bound, charge_bound)
        apply = weyl_apply
        name = "Weyl relations"
    if basis is not None:
        vectors = list(basis)
    report = CheckReport(name)
    report.details.update(mode_bound=mode_bound, degree_bound=degree_bound,
                          charge_bound=charge_bound, basis_size=len(vectors))
    modes = range(-mode_bound, mode_bound + 1)
    pairs = (("a", "astar"), ("a", "a"), ("astar", "astar"))
    for key in vectors:
        v = {key: Fraction(1)}
        one = {(g, n): apply(g, n, v) for g in ("a", "astar") for n in modes}
        for g1, g2 in pairs:
            for n in modes:
                for m in modes:
                    lhs = vec_sub(apply(g1, n, one[(g2, m)]), apply(g2, m, one[(g1, n)]))
                    rhs = v if (g1, g2) == ("a", "astar") and n + m == 0 else {}
                    report.record(lhs == rhs, relation=f"[{g1}(n),{g2}(m)]", n=n, m=m, vector=key)
    return report


def wakimoto_relation_check(chi, mode_bound: int, degree_bound: int,
                            charge_bound: int = 2, basis=None) -> CheckReport:
    chi = _chi(chi)
    vectors = list(basis) if basis is not None else weyl_basis(degree_bound, charge_bound)
    report = CheckReport(f"sl2 level {LEVEL} relations on the Wakimoto module W_-chi, chi = {chi}")
    report.details.update(mode_bound=mode_bound, degree_bound=degree_bound,
                          charge_bound=charge_bound, basis_size=len(vectors))
    return relation_suite(lambda x, n, v: wakimoto_apply(x, n, chi, v), vectors,
                          range(-mode_bound, mode_bound + 1), report)


def intertwiner_check(chi, degree_bound: int, charge_bound: int = 2,
                      mode_bound: Optional[int] = None) -> CheckReport:
    """``phi(x(n) w) == x(n) phi(w)`` with the right side computed in Tilde(chi) (x) F_-1.

    Also checks injectivity of ``phi`` on the truncation and that the graded
    dimensions of W and of sector 0 of Tilde (x) F_-1 agree.
    """
    chi = _chi(chi)
    mode_bound = degree_bound if mode_bound is None else mode_bound
    spec = as_affine(ModuleSpec.tilde(chi))
    vectors = weyl_basis(degree_bound, charge_bound)
    report = CheckReport(f"Wakimoto intertwiner into {spec.describe()}")
    report.details.update(degree_bound=degree_bound, charge_bound=charge_bound,
                          mode_bound=mode_bound, basis_size=len(vectors))
    for key in vectors:
        w = {key: Fraction(1)}
        pw = phi(w)
        for x in "efh":
            for n in range(-mode_bound, mode_bound + 1):
                lhs = phi(wakimoto_apply(x, n, chi, w))
                rhs = sl2_apply(x, n, spec, pw)
                report.record(lhs == rhs, check="intertwine", x=x, n=n, vector=key)
    span = SpanBasis()
    for key in vectors:
        span.add(phi({key: Fraction(1)}))
    report.record(span.dimension() == len(vectors), check="injective",
                  rank=span.dimension(), size=len(vectors))
    target: Dict[Tuple[int, int], int] = {}
    for (u, l) in sector_basis(spec.base, 0, degree_bound, charge_bound):
        from .affine import l0_weight
        d = l0_weight((u, l))
        target[(int(d), l.m)] = target.get((int(d), l.m), 0) + 1
    ours = weyl_counts(degree_bound, charge_bound)
    report.record(ours == target, check="graded dimensions")
    report.details["graded_dimensions"] = {f"{d},{c}": n for (d, c), n in sorted(ours.items())}
    return report


__all__ = [
    "WeylMonomial", "WEYL_VACUUM", "weyl_apply", "wakimoto_apply", "normal_product",
    "weyl_basis", "weyl_counts", "realized_weyl_apply", "phi", "weyl_relation_check",
    "wakimoto_relation_check", "intertwiner_check", "REALIZED_VACUUM",
]
