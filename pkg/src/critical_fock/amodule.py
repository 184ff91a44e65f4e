"""The Lie superalgebra A acting on twisted Fock modules.

Generators are ``G+(r), G-(r)`` (odd, ``r`` in Z+1/2) and the central ``S(n)``,
``T(n)``.  On ``F(chi+, chi-)`` the fields are

    G^{+-}(z) = d/dz Psi^{+-}(z) + chi^{+-}(z) Psi^{+-}(z),
    T(z) = (chi+ - chi-)/2,   S(z) = (2 chi+ chi- + d chi+ + d chi-)/4,

which in modes reads ``G(i-1/2) = -i Psi(i-1/2) + sum_k chi_k Psi(i-k-1/2)``.
``Tilde(chi)`` is ``Full(0, chi)`` on Ker Psi-(1/2) and ``Bar(m, n)`` is
``Full(-m/z, -n/z)`` on the span of monomials avoiding ``Psi+(-m-1/2)`` and
``Psi-(-n-1/2)``.  ``Vacuum`` is F (x) M(0) with the gamma modes kept as free
commuting creation operators; it contains the vertex superalgebra U(A).1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from .exact import LaurentData, Vector, add_term, as_scalar, from_x2, to_x2, vec_add, vec_scale
from .fock import FermionMonomial, SubspaceTag, VACUUM, fock_basis, in_tilde, psi_monomial, sort_key
from .lattice import partitions
from .report import CarrierError, CheckReport

ChiData = LaurentData

FULL, TILDE, BAR, VAC = "Full", "Tilde", "Bar", "Vacuum"


class VacuumMonomial(NamedTuple):
    """``f (x) gamma+(-a_1)... gamma-(-b_1)... 1`` inside F (x) M(0)."""
    f: FermionMonomial = VACUUM
    gp: Tuple[int, ...] = ()
    gm: Tuple[int, ...] = ()

    @property
    def charge(self) -> int:
        return self.f.charge

    @property
    def weight(self) -> Fraction:
        return self.f.weight + sum(self.gp) + sum(self.gm)

    @property
    def parity(self) -> int:
        return self.f.parity

    def __str__(self):
        g = "".join(f"g+(-{a})" for a in self.gp) + "".join(f"g-(-{b})" for b in self.gm)
        return f"{g}{self.f}"


@dataclass(frozen=True)
class ModuleSpec:
    kind: str
    chi_plus: LaurentData = field(default_factory=LaurentData)
    chi_minus: LaurentData = field(default_factory=LaurentData)
    m: int = 0
    n: int = 0

    @classmethod
    def full(cls, chi_plus, chi_minus) -> "ModuleSpec":
        return cls(FULL, _chi(chi_plus), _chi(chi_minus))

    @classmethod
    def tilde(cls, chi) -> "ModuleSpec":
        return cls(TILDE, LaurentData(), _chi(chi))

    @classmethod
    def bar(cls, m: int, n: int) -> "ModuleSpec":
        if m < 0 or n < 0:
            raise ValueError("Bar(m, n) needs m, n >= 0")
        return cls(BAR, LaurentData({0: -m}), LaurentData({0: -n}), m, n)

    @classmethod
    def vacuum(cls) -> "ModuleSpec":
        return cls(VAC)

    @property
    def tag(self) -> SubspaceTag:
        return {FULL: SubspaceTag.F, TILDE: SubspaceTag.TILDE,
                BAR: SubspaceTag.BAR, VAC: SubspaceTag.F}[self.kind]

    @property
    def effective(self) -> Tuple[LaurentData, LaurentData]:
        return self.chi_plus, self.chi_minus

    def in_carrier(self, key) -> bool:
        if self.kind == VAC:
            return isinstance(key, VacuumMonomial)
        if not isinstance(key, FermionMonomial):
            return False
        if self.kind == TILDE:
            return in_tilde(key)
        if self.kind == BAR:
            return (2 * self.m + 1) not in key.plus and (2 * self.n + 1) not in key.minus
        return True

    def check_carrier(self, v: Vector) -> None:
        for key in v:
            if not self.in_carrier(key):
                raise CarrierError(f"{key} is outside the carrier of {self.describe()}")

    def basis(self, max_weight, charge: Optional[int] = None) -> List:
        if self.kind == VAC:
            return vacuum_basis(max_weight, charge)
        if self.kind == BAR:
            return fock_basis(SubspaceTag.F, max_weight, charge,
                              exclude_plus=2 * self.m + 1, exclude_minus=2 * self.n + 1)
        return fock_basis(self.tag, max_weight, charge)

    def describe(self) -> str:
        if self.kind == FULL:
            return f"Full({_fmt(self.chi_plus)}, {_fmt(self.chi_minus)})"
        if self.kind == TILDE:
            return f"Tilde({_fmt(self.chi_minus)})"
        if self.kind == BAR:
            return f"Bar({self.m}, {self.n})"
        return "Vacuum"

    def vacuum_vector(self) -> Vector:
        if self.kind == VAC:
            return {VacuumMonomial(): Fraction(1)}
        return {VACUUM: Fraction(1)}

    def to_json(self):
        return {"kind": self.kind, "chi_plus": self.chi_plus.to_json(),
                "chi_minus": self.chi_minus.to_json(), "m": self.m, "n": self.n}


def _chi(x) -> LaurentData:
    if isinstance(x, LaurentData):
        return x
    if isinstance(x, dict):
        return LaurentData(x)
    # a bare scalar c means c/z
    return LaurentData({0: as_scalar(x)})


def _fmt(chi: LaurentData) -> str:
    return str(chi)


def vacuum_basis(max_weight, charge: Optional[int] = None) -> List[VacuumMonomial]:
    limit = Fraction(max_weight)
    out = []
    for f in fock_basis(SubspaceTag.F, limit, charge):
        room = int(limit - f.weight)
        for a in range(room + 1):
            for pa in partitions(a):
                for b in range(room - a + 1):
                    for pb in partitions(b):
                        out.append(VacuumMonomial(f, pa, pb))
    out.sort(key=lambda k: (k.charge, k.weight, sort_key(k.f), k.gp, k.gm))
    return out


# --- central fields -------------------------------------------------------------

def scalar_fields(spec: ModuleSpec) -> Tuple[LaurentData, LaurentData]:
    """Return ``(S(z), T(z))`` as Laurent data in the ``z^(-k-1)`` convention.

    ``S(n)`` is the coefficient at index ``n + 1`` and ``T(n)`` at index ``n``.
    """
    cp, cm = spec.effective
    t = (cp - cm) * Fraction(1, 2)
    s = (cp * cm * 2 + cp.derivative() + cm.derivative()) * Fraction(1, 4)
    return s, t


@lru_cache(maxsize=None)
def _scalars(spec: ModuleSpec):
    return scalar_fields(spec)


def s_scalar(spec: ModuleSpec, n: int) -> Fraction:
    return _scalars(spec)[0][n + 1]


def t_scalar(spec: ModuleSpec, n: int) -> Fraction:
    return _scalars(spec)[1][n]


# --- G modes --------------------------------------------------------------------

@lru_cache(maxsize=None)
def g_terms(spec: ModuleSpec, sign: int, i: int) -> Tuple[Tuple[int, Fraction], ...]:
    """``G^sign(i - 1/2)`` on a chi-twisted module as ``((mode2, coef), ...)``."""
    chi = spec.chi_plus if sign > 0 else spec.chi_minus
    acc: Dict[int, Fraction] = {}
    if i:
        acc[2 * i - 1] = Fraction(-i)
    for k, c in chi.items():
        r2 = 2 * (i - k) - 1
        acc[r2] = acc.get(r2, Fraction(0)) + c
    return tuple((r2, c) for r2, c in sorted(acc.items()) if c)


@lru_cache(maxsize=None)
def _g_mono(spec: ModuleSpec, sign: int, i: int, key) -> Tuple:
    out: Vector = {}
    if spec.kind != VAC:
        for r2, c in g_terms(spec, sign, i):
            hit = psi_monomial(sign, r2, key)
            if hit is not None:
                add_term(out, hit[1], c * hit[0])
        return tuple(out.items())
    # Vacuum: -i Psi(i-1/2) + sum_{k<0} gamma(k) Psi(i-k-1/2)
    f = key.f
    if i:
        hit = psi_monomial(sign, 2 * i - 1, f)
        if hit is not None:
            add_term(out, VacuumMonomial(hit[1], key.gp, key.gm), Fraction(-i * hit[0]))
    opposite = f.minus if sign > 0 else f.plus
    lowest = min([i, *[i - (r2 + 1) // 2 for r2 in opposite]])
    for k in range(lowest, 0):
        hit = psi_monomial(sign, 2 * (i - k) - 1, f)
        if hit is None:
            continue
        if sign > 0:
            g = VacuumMonomial(hit[1], _ins(key.gp, -k), key.gm)
        else:
            g = VacuumMonomial(hit[1], key.gp, _ins(key.gm, -k))
        add_term(out, g, Fraction(hit[0]))
    return tuple(out.items())


def _ins(parts, a):
    return tuple(sorted(parts + (a,), reverse=True))


def g_apply(spec: ModuleSpec, sign: int, i: int, v: Vector) -> Vector:
    """``G^sign(i - 1/2) v`` without carrier checking."""
    out: Vector = {}
    for key, c in v.items():
        for k2, c2 in _g_mono(spec, sign, i, key):
            add_term(out, k2, c * c2)
    return out


def _gamma_mode_mult(key: VacuumMonomial, sign: int, n: int) -> Optional[VacuumMonomial]:
    if n >= 0:
        return None
    if sign > 0:
        return VacuumMonomial(key.f, _ins(key.gp, -n), key.gm)
    return VacuumMonomial(key.f, key.gp, _ins(key.gm, -n))


def t_apply(spec: ModuleSpec, n: int, v: Vector) -> Vector:
    if spec.kind != VAC:
        return vec_scale(v, t_scalar(spec, n))
    out: Vector = {}
    for key, c in v.items():
        for sign in (1, -1):
            k2 = _gamma_mode_mult(key, sign, n)
            if k2 is not None:
                add_term(out, k2, c * Fraction(sign, 2))
    return out


def s_apply(spec: ModuleSpec, n: int, v: Vector) -> Vector:
    if spec.kind != VAC:
        return vec_scale(v, s_scalar(spec, n))
    out: Vector = {}
    for key, c in v.items():
        # 1/2 sum_{a+b=n} gamma+(a) gamma-(b) + (-n-1)/4 (gamma+(n) + gamma-(n))
        for a in range(n + 1, 0):
            b = n - a
            if b >= 0:
                continue
            k1 = _gamma_mode_mult(key, 1, a)
            add_term(out, _gamma_mode_mult(k1, -1, b), c * Fraction(1, 2))
        for sign in (1, -1):
            k2 = _gamma_mode_mult(key, sign, n)
            if k2 is not None:
                add_term(out, k2, c * Fraction(-n - 1, 4))
    return out


class AGenerator(NamedTuple):
    kind: str  # "G+", "G-", "S", "T"
    index: Fraction  # r for G, n for S and T

    @classmethod
    def parse(cls, kind: str, index) -> "AGenerator":
        if kind not in ("G+", "G-", "S", "T"):
            raise ValueError(f"unknown generator {kind!r}")
        idx = as_scalar(index)
        if kind.startswith("G"):
            to_x2(idx)
        elif idx.denominator != 1:
            raise ValueError("S and T modes are integral")
        return cls(kind, idx)

    @property
    def parity(self) -> int:
        return 1 if self.kind.startswith("G") else 0


def a_apply(gen: AGenerator, spec: ModuleSpec, v: Vector) -> Vector:
    spec.check_carrier(v)
    if gen.kind in ("G+", "G-"):
        i = int(gen.index + Fraction(1, 2))
        return g_apply(spec, 1 if gen.kind == "G+" else -1, i, v)
    n = int(gen.index)
    if gen.kind == "S":
        return s_apply(spec, n, v)
    return t_apply(spec, n, v)


def _apply(spec, gen: Tuple[str, int], v: Vector) -> Vector:
    kind, idx = gen
    if kind == "G+":
        return g_apply(spec, 1, idx, v)
    if kind == "G-":
        return g_apply(spec, -1, idx, v)
    if kind == "S":
        return s_apply(spec, idx, v)
    return t_apply(spec, idx, v)


def a_relation_check(spec: ModuleSpec, mode_bound, weight_bound,
                     basis: Optional[Iterable] = None) -> CheckReport:
    """Check the defining relations of A on carrier vectors of bounded weight.

    Mode windows: ``G(r)`` with ``|r| <= mode_bound`` and ``S(n), T(n)`` with
    ``|n| <= mode_bound``.  ``i`` below is ``r + 1/2``.
    """
    mb = as_scalar(mode_bound)
    rs = [i for i in range(-int(mb) - 1, int(mb) + 2) if abs(Fraction(2 * i - 1, 2)) <= mb]
    ns = list(range(-int(mb), int(mb) + 1))
    vectors = list(basis) if basis is not None else spec.basis(weight_bound)
    report = CheckReport(f"A relations on {spec.describe()}")
    report.details.update(mode_bound=str(mb), weight_bound=str(Fraction(weight_bound)),
                          basis_size=len(vectors))
    for key in vectors:
        v = {key: Fraction(1)}
        gp = {i: g_apply(spec, 1, i, v) for i in rs}
        gm = {i: g_apply(spec, -1, i, v) for i in rs}
        for i in rs:
            r = Fraction(2 * i - 1, 2)
            for j in rs:
                s = Fraction(2 * j - 1, 2)
                lhs = vec_add(g_apply(spec, 1, i, gm[j]), g_apply(spec, -1, j, gp[i]))
                total = i + j - 1  # r + s
                rhs = vec_add(vec_scale(s_apply(spec, total, v), 2),
                              t_apply(spec, total, v), r - s)
                if total == 0:
                    rhs = vec_add(rhs, v, -(r * r - Fraction(1, 4)))
                report.record(lhs == rhs, relation="{G+(r),G-(s)}", r=str(r), s=str(s),
                              vector=key)
                same_p = vec_add(g_apply(spec, 1, i, gp[j]), g_apply(spec, 1, j, gp[i]))
                report.record(not same_p, relation="{G+(r),G+(s)}", r=str(r), s=str(s), vector=key)
                same_m = vec_add(g_apply(spec, -1, i, gm[j]), g_apply(spec, -1, j, gm[i]))
                report.record(not same_m, relation="{G-(r),G-(s)}", r=str(r), s=str(s), vector=key)
        for n in ns:
            for central in ("S", "T"):
                cv = _apply(spec, (central, n), v)
                for i in rs:
                    for sign, gv in ((1, gp[i]), (-1, gm[i])):
                        a = _apply(spec, (central, n), gv)
                        b = g_apply(spec, sign, i, cv)
                        report.record(a == b, relation=f"[{central}(n),G(r)]", n=n,
                                      r=str(Fraction(2 * i - 1, 2)), sign=sign, vector=key)
    return report


__all__ = [
    "ModuleSpec", "ChiData", "AGenerator", "VacuumMonomial", "scalar_fields",
    "s_scalar", "t_scalar", "g_terms", "g_apply", "a_apply", "s_apply", "t_apply",
    "a_relation_check", "vacuum_basis", "FULL", "TILDE", "BAR", "VAC",
]
