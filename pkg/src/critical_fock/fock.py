"""The fermionic Fock space F of the charged Clifford algebra.

A basis monomial is ``Psi+(-p_1)...Psi+(-p_a) Psi-(-q_1)...Psi-(-q_b) 1`` with
``p_1 > ... > p_a > 0`` and ``q_1 > ... > q_b > 0`` half-odd integers.  Modes
are stored doubled (``3/2 -> 3``), so the blocks are strictly decreasing tuples
of positive odd ints.  All signs are relative to this plus-then-minus order.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Tuple

from .exact import Vector, add_term, as_scalar, from_x2, to_x2


class FermionMonomial(NamedTuple):
    plus: Tuple[int, ...] = ()
    minus: Tuple[int, ...] = ()

    @property
    def charge(self) -> int:
        return len(self.plus) - len(self.minus)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(self.plus) + sum(self.minus), 2)

    @property
    def parity(self) -> int:
        return (len(self.plus) + len(self.minus)) % 2

    def __str__(self):
        if not self.plus and not self.minus:
            return "1"
        ps = "".join(f"Psi+(-{r}/2)" for r in self.plus)
        ms = "".join(f"Psi-(-{r}/2)" for r in self.minus)
        return ps + ms + "1"


VACUUM = FermionMonomial((), ())


class SubspaceTag(enum.Enum):
    F = "F"
    TILDE = "Tilde"
    BAR = "Bar"


def is_canonical(m: FermionMonomial) -> bool:
    for block in (m.plus, m.minus):
        if any(r <= 0 or r % 2 == 0 for r in block):
            return False
        if any(a <= b for a, b in zip(block, block[1:])):
            return False
    return True


def in_tilde(m: FermionMonomial) -> bool:
    # Ker Psi-(1/2): no Psi+(-1/2) factor
    return 1 not in m.plus


def in_bar(m: FermionMonomial) -> bool:
    return 1 not in m.plus and 1 not in m.minus


def has_tag(m: FermionMonomial, tag: SubspaceTag) -> bool:
    if tag is SubspaceTag.F:
        return True
    if tag is SubspaceTag.TILDE:
        return in_tilde(m)
    return in_bar(m)


def fock_grade(m: FermionMonomial):
    """Return ``(charge, weight, tags)`` of a canonical monomial."""
    tags = {t for t in SubspaceTag if has_tag(m, t)}
    return m.charge, m.weight, tags


@lru_cache(maxsize=None)
def psi_monomial(sign: int, r2: int, m: FermionMonomial) -> Optional[Tuple[int, FermionMonomial]]:
    """Apply ``Psi^sign(r2/2)`` to a monomial; ``None`` when the result is 0."""
    if r2 < 0:
        # creation: slot the factor into its block
        mode = -r2
        if sign > 0:
            block, offset = m.plus, 0
        else:
            block, offset = m.minus, len(m.plus)
        if mode in block:
            return None
        pos = sum(1 for x in block if x > mode)
        new = block[:pos] + (mode,) + block[pos:]
        coef = -1 if (offset + pos) % 2 else 1
        if sign > 0:
            return coef, FermionMonomial(new, m.minus)
        return coef, FermionMonomial(m.plus, new)
    # annihilation: Psi^{+}(r) contracts Psi^{-}(-r), and vice versa
    if sign > 0:
        block, offset = m.minus, len(m.plus)
    else:
        block, offset = m.plus, 0
    if r2 not in block:
        return None
    pos = block.index(r2)
    new = block[:pos] + block[pos + 1:]
    coef = -1 if (offset + pos) % 2 else 1
    if sign > 0:
        return coef, FermionMonomial(m.plus, new)
    return coef, FermionMonomial(new, m.minus)


def psi_x2(sign: int, r2: int, v: Vector) -> Vector:
    out: Vector = {}
    for m, c in v.items():
        hit = psi_monomial(sign, r2, m)
        if hit is not None:
            add_term(out, hit[1], hit[0] * c)
    return out


def psi_apply(sign, r, v: Vector) -> Vector:
    """Apply ``Psi^{sign}(r)`` for a half-odd ``r`` to a Fock vector."""
    return psi_x2(_sign(sign), to_x2(r), v)


def _sign(sign) -> int:
    if sign in (1, "+"):
        return 1
    if sign in (-1, "-"):
        return -1
    raise ValueError(f"bad sign {sign!r}")


def monomial(plus=(), minus=()) -> FermionMonomial:
    """Build a canonical monomial from half-integer modes given as positive values.

    ``monomial(plus=["1/2"], minus=["3/2"])`` is ``Psi+(-1/2) Psi-(-3/2) 1``;
    any order is accepted and the sign of the reordering is *not* tracked, so
    use :func:`word` to apply operators in a given order.
    """
    p = tuple(sorted((to_x2(x) for x in plus), reverse=True))
    q = tuple(sorted((to_x2(x) for x in minus), reverse=True))
    m = FermionMonomial(p, q)
    if not is_canonical(m):
        raise ValueError(f"not a valid monomial: {plus}, {minus}")
    return m


def word(ops, v: Vector) -> Vector:
    """Apply ``ops = [(sign, r), ...]`` right to left to ``v``."""
    for sign, r in reversed(list(ops)):
        v = psi_apply(sign, r, v)
    return v


def _distinct_odd(max_sum: int, min_part: int) -> List[Tuple[int, ...]]:
    """Strictly decreasing tuples of odd ints >= min_part with sum <= max_sum."""
    out: List[Tuple[int, ...]] = []

    def rec(prefix, smallest_next, total):
        out.append(tuple(reversed(prefix)))
        part = smallest_next
        while total + part <= max_sum:
            prefix.append(part)
            rec(prefix, part + 2, total + part)
            prefix.pop()
            part += 2

    rec([], min_part, 0)
    return out


def fock_basis(tag: SubspaceTag, max_weight, charge: Optional[int] = None,
               exclude_plus: Optional[int] = None,
               exclude_minus: Optional[int] = None) -> List[FermionMonomial]:
    """All monomials of the tagged subspace with weight <= ``max_weight``.

    ``exclude_plus``/``exclude_minus`` (doubled modes) drop every monomial
    containing that creation mode; this describes the carriers of the
    ``Bar(m, n)`` modules.  Order is by ``(charge, weight, plus, minus)``.
    """
    limit = int(2 * Fraction(max_weight))
    if limit < 0:
        return []
    tag = SubspaceTag(tag) if not isinstance(tag, SubspaceTag) else tag
    min_plus = 1 if tag is SubspaceTag.F else 3
    min_minus = 3 if tag is SubspaceTag.BAR else 1
    pluses = _distinct_odd(limit, min_plus)
    minuses = _distinct_odd(limit, min_minus)
    if exclude_plus is not None:
        pluses = [p for p in pluses if exclude_plus not in p]
    if exclude_minus is not None:
        minuses = [q for q in minuses if exclude_minus not in q]
    out = []
    for p in pluses:
        sp = sum(p)
        for q in minuses:
            if sp + sum(q) > limit:
                continue
            m = FermionMonomial(p, q)
            if charge is not None and m.charge != charge:
                continue
            out.append(m)
    out.sort(key=sort_key)
    return out


def sort_key(m: FermionMonomial):
    return (m.charge, sum(m.plus) + sum(m.minus), m.plus, m.minus)


def charge_weight_counts(tag: SubspaceTag, max_weight) -> Dict[Tuple[int, Fraction], int]:
    counts: Dict[Tuple[int, Fraction], int] = {}
    for m in fock_basis(tag, max_weight):
        key = (m.charge, m.weight)
        counts[key] = counts.get(key, 0) + 1
    return counts


def vacuum_vector() -> Vector:
    return {VACUUM: Fraction(1)}


def clifford_relation_check(mode_bound, weight_bound, tag: SubspaceTag = SubspaceTag.F,
                            basis=None):
    """``{Psi+(r), Psi-(s)} = delta_{r+s,0}`` and same-sign anticommutators on F."""
    from .report import CheckReport

    top = int(2 * as_scalar(mode_bound))
    top -= 1 - top % 2  # largest odd value <= 2 * mode_bound
    modes = [r2 for r2 in range(-top, top + 1, 2)]
    vectors = list(basis) if basis is not None else fock_basis(tag, weight_bound)
    report = CheckReport("Clifford relations")
    report.details.update(mode_bound=str(from_x2(top)), weight_bound=str(Fraction(weight_bound)),
                          basis_size=len(vectors))
    for key in vectors:
        v = {key: Fraction(1)}
        one = {(sg, r2): psi_x2(sg, r2, v) for sg in (1, -1) for r2 in modes}
        for (s1, s2) in ((1, -1), (1, 1), (-1, -1)):
            for r2 in modes:
                for q2 in modes:
                    lhs: Vector = {}
                    for k, c in psi_x2(s1, r2, one[(s2, q2)]).items():
                        add_term(lhs, k, c)
                    for k, c in psi_x2(s2, q2, one[(s1, r2)]).items():
                        add_term(lhs, k, c)
                    rhs = v if s1 != s2 and r2 + q2 == 0 else {}
                    report.record(lhs == rhs, relation=f"{{Psi{'+' if s1 > 0 else '-'}(r),"
                                  f"Psi{'+' if s2 > 0 else '-'}(s)}}",
                                  r=f"{r2}x2", s=f"{q2}x2", vector=key)
    return report


__all__ = [
    "FermionMonomial", "VACUUM", "SubspaceTag", "fock_grade", "fock_basis",
    "psi_apply", "psi_x2", "psi_monomial", "monomial", "word", "in_tilde",
    "in_bar", "has_tag", "sort_key", "vacuum_vector", "clifford_relation_check",
    "charge_weight_counts",
]
