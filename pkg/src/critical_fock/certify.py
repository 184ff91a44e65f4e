"""Truncated cyclicity and irreducibility certificates, and the generation check.

A certificate works on a finite slice.  Upward closure from the vacuum runs
over a window of modes and keeps only images lying in a slightly enlarged
slice, so everything it finds is genuinely in the cyclic submodule.  Downward
closure uses pure annihilators, which map the slice into itself.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .affine import (AffineModuleSpec, LEVEL, l0_weight, sl2_apply, t_mode_apply)
from .amodule import (ModuleSpec, VacuumMonomial, _chi, g_apply, s_apply, t_apply)
from .exact import LaurentData, SpanBasis, Vector, vec_add, vec_scale, vec_sub
from .fock import FermionMonomial, VACUUM
from .lattice import LatticeMonomial, lattice_basis
from .report import CheckReport, to_jsonable
from .weyl import WEYL_VACUUM, WeylMonomial, wakimoto_apply, weyl_basis

Operator = Callable[[Vector], Vector]


class ClosureLimitError(RuntimeError):
    """A span closure ran past its iteration cap."""


def span_closure(action: Sequence[Operator], start, inside: Optional[Callable] = None,
                 max_iter: Optional[int] = None, key=None) -> SpanBasis:
    """Smallest span containing ``start`` and stable under ``action`` within ``inside``.

    ``start`` is a vector or a list of vectors.  Images with a component
    outside ``inside`` (a predicate on basis keys) are discarded.  ``max_iter``
    caps the number of vectors processed; it should be tied to the slice
    dimension.
    """
    starts = [start] if isinstance(start, dict) else list(start)
    span = SpanBasis(key)
    queue = deque()
    for v in starts:
        if span.add(v) is not None:
            queue.append(v)
    steps = 0
    while queue:
        steps += 1
        if max_iter is not None and steps > max_iter:
            raise ClosureLimitError(f"closure exceeded {max_iter} steps")
        v = queue.popleft()
        for op in action:
            w = op(v)
            if not w or (inside is not None and not all(inside(k) for k in w)):
                continue
            # keep the image itself: with a slice filter, remainders would lose vectors
            if span.add(w) is not None:
                queue.append(w)
    return span


@dataclass
class CertificateReport:
    name: str
    cyclic_from_vacuum: bool = True
    cocyclic_to_vacuum: bool = True
    truncation: Dict[str, Any] = field(default_factory=dict)
    failures: List[Dict[str, Any]] = field(default_factory=list)
    submodule_witness: Optional[Dict[str, Any]] = None
    checked: int = 0

    @property
    def passed(self) -> bool:
        return self.cyclic_from_vacuum and self.cocyclic_to_vacuum and not self.failures

    def to_json(self):
        return {
            "name": self.name,
            "pass": self.passed,
            "checked": self.checked,
            "cyclic_from_vacuum": self.cyclic_from_vacuum,
            "cocyclic_to_vacuum": self.cocyclic_to_vacuum,
            "truncation": to_jsonable(self.truncation),
            "failures": [to_jsonable(f) for f in self.failures[:20]],
            "submodule_witness": to_jsonable(self.submodule_witness),
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name} ({self.checked} checks)"


# --- the A-module certificate ----------------------------------------------------------

def _p(chi: LaurentData) -> int:
    return max(0, chi.p)


def a_mode_family(spec: ModuleSpec, i_range: Iterable[int], signs=(1, -1)) -> List[Operator]:
    ops = []
    for sign in signs:
        for i in i_range:
            ops.append(lambda v, s=sign, i=i: g_apply(spec, s, i, v))
    return ops


def upward_family(spec: ModuleSpec, weight_bound) -> List[Operator]:
    """``G^+-(r)`` with ``|r| <= weight_bound + p + 1/2``, as ``i = r + 1/2``."""
    p = max(_p(spec.chi_plus), _p(spec.chi_minus))
    top = int(Fraction(weight_bound)) + p
    return a_mode_family(spec, range(-top, top + 2))


def downward_family(spec: ModuleSpec, weight_bound) -> List[Operator]:
    """``G^+-(r)`` with ``r >= p^+- + 1/2``: every term is an annihilator."""
    top = int(Fraction(weight_bound)) + 1
    ops = a_mode_family(spec, range(_p(spec.chi_plus) + 1, _p(spec.chi_plus) + top + 1), (1,))
    ops += a_mode_family(spec, range(_p(spec.chi_minus) + 1, _p(spec.chi_minus) + top + 1), (-1,))
    return ops


def _weight_slice(spec: ModuleSpec, bound):
    bound = Fraction(bound)
    return lambda k: k.weight <= bound and spec.in_carrier(k)


def cyclic_span(spec: ModuleSpec, weight_bound) -> SpanBasis:
    p = max(_p(spec.chi_plus), _p(spec.chi_minus))
    inside = _weight_slice(spec, Fraction(weight_bound) + p + 1)
    cap = 4 * len(spec.basis(Fraction(weight_bound) + p + 1)) + 4
    return span_closure(upward_family(spec, weight_bound), spec.vacuum_vector(), inside, cap)


def downward_span(spec: ModuleSpec, v: Vector, weight_bound) -> SpanBasis:
    inside = _weight_slice(spec, weight_bound)
    return span_closure(downward_family(spec, weight_bound), v, inside)


def irreducibility_certificate(spec: ModuleSpec, weight_bound) -> CertificateReport:
    """Cyclicity of the vacuum and reachability of the vacuum from every basis monomial."""
    if Fraction(weight_bound) < 1:
        raise ValueError("weight_bound must be >= 1")
    report = CertificateReport(f"irreducibility certificate for {spec.describe()}")
    report.truncation = {"weight_bound": str(Fraction(weight_bound))}
    basis = spec.basis(weight_bound)
    vac = spec.vacuum_vector()
    up = cyclic_span(spec, weight_bound)
    missing = []
    for key in basis:
        report.checked += 1
        if not up.contains({key: Fraction(1)}):
            missing.append(key)
    if missing:
        report.cyclic_from_vacuum = False
        report.failures.extend({"kind": "not reached from vacuum", "vector": {k: Fraction(1)}}
                               for k in missing)
        lowest = min(missing, key=lambda k: (k.weight, k))
        report.submodule_witness = {"family": "upward", "generator": vac,
                                    "excluded": {lowest: Fraction(1)}}
    stuck = []
    for key in basis:
        report.checked += 1
        v = {key: Fraction(1)}
        if not downward_span(spec, v, weight_bound).contains(vac):
            stuck.append(key)
    if stuck:
        report.cocyclic_to_vacuum = False
        report.failures.extend({"kind": "vacuum not reached", "vector": {k: Fraction(1)}}
                               for k in stuck)
        if report.submodule_witness is None:
            report.submodule_witness = {"family": "downward", "generator": {stuck[0]: Fraction(1)},
                                        "excluded": vac}
    report.truncation["slice_dimension"] = len(basis)
    report.truncation["cyclic_span_dimension"] = up.dimension()
    return report


def replay_witness(spec: ModuleSpec, weight_bound, witness: Dict[str, Any]) -> bool:
    """Re-verify a submodule witness: ``excluded`` is outside the closure of ``generator``."""
    if witness["family"] == "upward":
        span = span_closure(upward_family(spec, weight_bound), witness["generator"],
                            _weight_slice(spec, Fraction(weight_bound) + max(
                                _p(spec.chi_plus), _p(spec.chi_minus)) + 1))
    else:
        span = downward_span(spec, witness["generator"], weight_bound)
    return not span.contains(witness["excluded"])


# --- the Wakimoto certificate --------------------------------------------------------

def wakimoto_certificate(chi, degree_bound: int, charge_bound: int = 2) -> CertificateReport:
    """Cyclicity/co-cyclicity of the Weyl vacuum for the Wakimoto action."""
    chi = _chi(chi)
    p = max(0, chi.p)
    report = CertificateReport(f"irreducibility certificate for the Wakimoto module, chi = {chi}")
    report.truncation = {"degree_bound": degree_bound, "charge_bound": charge_bound}
    basis = weyl_basis(degree_bound, charge_bound)
    vac = {WEYL_VACUUM: Fraction(1)}
    top = degree_bound + p + 1
    big = lambda k: k.degree <= top and abs(k.charge) <= charge_bound + 1
    up_ops = [lambda v, x=x, n=n: wakimoto_apply(x, n, chi, v)
              for x in "efh" for n in range(-top, top + 1)]
    cap = 4 * len(weyl_basis(top, charge_bound + 1)) + 4
    up = span_closure(up_ops, vac, big, cap)
    missing = [k for k in basis if not up.contains({k: Fraction(1)})]
    report.checked += len(basis)
    if missing:
        report.cyclic_from_vacuum = False
        report.failures.extend({"kind": "not reached from vacuum", "vector": {k: Fraction(1)}}
                               for k in missing)
        report.submodule_witness = {"family": "upward", "generator": vac,
                                    "excluded": {missing[0]: Fraction(1)}}
    # e(n >= 0), h(n >= 1), f(n >= p+1) only lower the degree
    down_ops = ([lambda v, n=n: wakimoto_apply("e", n, chi, v) for n in range(0, degree_bound + 1)]
                + [lambda v, n=n: wakimoto_apply("h", n, chi, v) for n in range(1, degree_bound + 1)]
                + [lambda v, n=n: wakimoto_apply("f", n, chi, v)
                   for n in range(p + 1, p + degree_bound + 2)])
    small = lambda k: k.degree <= degree_bound and abs(k.charge) <= charge_bound + degree_bound
    stuck = []
    for key in basis:
        report.checked += 1
        if not span_closure(down_ops, {key: Fraction(1)}, small).contains(vac):
            stuck.append(key)
    if stuck:
        report.cocyclic_to_vacuum = False
        report.failures.extend({"kind": "vacuum not reached", "vector": {k: Fraction(1)}}
                               for k in stuck)
    report.truncation["slice_dimension"] = len(basis)
    return report


# --- generation of the sector-zero subalgebra -------------------------------------------

def _pbw_words(charge: int, max_weight: Fraction):
    """Ordered creation words of the A-algebra with given charge and weight <= max_weight.

    Yields ``(gplus, gminus, s_parts, t_parts)`` with G modes as ``i = r + 1/2 <= 0``
    (distinct) and S, T modes as negative ints.  Their action on the vacuum spans
    U(A).1 in each (charge, weight) by the PBW theorem.
    """
    W = Fraction(max_weight)
    gmax = int(W + Fraction(1, 2))
    g_modes = list(range(0, -gmax, -1))  # i = 0, -1, ... (weight 1/2 - i)

    def g_sets(count):
        for combo in combinations(g_modes, count):
            wt = sum(Fraction(1, 2) - i for i in combo)
            if wt <= W:
                yield combo, wt

    def boson_sets(budget):
        from .lattice import partitions
        out = [((), 0)]
        for d in range(1, int(budget) + 1):
            out.extend((tuple(-x for x in lam), d) for lam in partitions(d))
        return out

    for npl in range(0, 2 * gmax + 1):
        nmi = npl - charge
        if nmi < 0:
            continue
        for gp, wp in g_sets(npl):
            for gm, wm in g_sets(nmi):
                rest = W - wp - wm
                if rest < 0:
                    continue
                for sp, ws in boson_sets(rest):
                    for tp, wt in boson_sets(rest - ws):
                        yield gp, gm, sp, tp


def vacuum_algebra_slice(charge: int, max_weight) -> SpanBasis:
    """Basis of the charge-``charge`` part of U(A).1 up to ``max_weight``."""
    spec = ModuleSpec.vacuum()
    span = SpanBasis()
    for gp, gm, sp, tp in _pbw_words(charge, max_weight):
        v: Vector = {VacuumMonomial(): Fraction(1)}
        for n in tp:
            v = t_apply(spec, n, v)
        for n in sp:
            v = s_apply(spec, n, v)
        for i in gm:
            v = g_apply(spec, -1, i, v)
        for i in gp:
            v = g_apply(spec, 1, i, v)
        if v:
            span.add(v)
    return span


def sector_zero_slice(degree_bound) -> List[Vector]:
    """Spanning vectors of the sector-0 part of U(A).1 (x) F_-1 with L(0) <= bound."""
    D = Fraction(degree_bound)
    out: List[Vector] = []
    c = 0
    # U(A).1 of charge c starts at L(0) = |c| in sector 0
    for c in range(-int(D) - 1, int(D) + 2):
        wmax = D + Fraction(c * c, 2)
        for row in vacuum_algebra_slice(c, wmax).echelon():
            u0 = next(iter(row))
            room = D - (u0.weight - Fraction(c * c, 2))
            if room < 0:
                continue
            for l in lattice_basis(int(room), charge=c):
                out.append({(u, l): a for u, a in row.items()})
    return out


def generation_check(degree_bound: int = 3) -> CheckReport:
    """Sector 0 of U(A).1 (x) F_-1 is generated from 1 (x) 1 by e, f, h and T.

    Also checks the S(-2) identity and that e, f, h alone generate a smaller space.
    """
    base = ModuleSpec.vacuum()
    spec = AffineModuleSpec(base)
    D = Fraction(degree_bound)
    report = CheckReport(f"generation of sector 0 of U(A).1 (x) F_-1 up to L(0) <= {D}")
    vac: Vector = {(VacuumMonomial(), LatticeMonomial(0, ())): Fraction(1)}
    inside = lambda k: l0_weight(k) <= D
    modes = range(-int(D), 0)
    sl2_ops = [lambda v, x=x, n=n: sl2_apply(x, n, spec, v) for x in "efh" for n in modes]
    t_ops = [lambda v, n=n: t_mode_apply(spec, n, v) for n in modes]

    slice_vectors = sector_zero_slice(D)
    target = SpanBasis()
    for v in slice_vectors:
        target.add(v)
    full = span_closure(sl2_ops + t_ops, vac, inside)
    contained = all(target.contains(r) for r in full.echelon())
    report.record(contained, check="closure inside the slice")
    missing = [v for v in target.echelon() if not full.contains(v)]
    report.record(not missing, check="closure equals the slice",
                  witness=missing[0] if missing else None)
    report.details.update(slice_dimension=target.dimension(), closure_dimension=full.dimension())

    partial = span_closure(sl2_ops, vac, inside)
    gap = [v for v in target.echelon() if not partial.contains(v)]
    report.record(bool(gap) and partial.dimension() < target.dimension(),
                  check="e, f, h alone give a proper subspace")
    report.details["sl2_only_dimension"] = partial.dimension()
    if gap:
        report.details["sl2_only_missing"] = gap[0]

    # S(-2) 1 (x) 1 = 1/4 (e(-1)f(-1) + f(-1)e(-1) + 1/2 h(-1)^2) - 1/2 T(-1)^2
    e1 = lambda v: sl2_apply("e", -1, spec, v)
    f1 = lambda v: sl2_apply("f", -1, spec, v)
    h1 = lambda v: sl2_apply("h", -1, spec, v)
    t1 = lambda v: t_mode_apply(spec, -1, v)
    lhs = vec_add(e1(f1(vac)), f1(e1(vac)))
    lhs = vec_add(lhs, h1(h1(vac)), Fraction(1, 2))
    lhs = vec_scale(lhs, Fraction(1, 4))
    lhs = vec_add(lhs, t1(t1(vac)), Fraction(-1, 2))
    rhs = {(u, l): c for (u0, l), c0 in vac.items()
           for u, c in s_apply(base, -2, {u0: c0}).items()}
    report.record(lhs == rhs, check="S(-2) identity", lhs=lhs, rhs=rhs)
    return report


# --- proof constants ----------------------------------------------------------------

def proof_constant(kind: str, chi, data: Dict[str, Any]) -> Fraction:
    """Closed-form constants of the cyclicity argument.

    ``C``: ``data = {"N": N}``; ``chi_p^{N+1}`` for ``p >= 1`` and
    ``chi_0 (chi_0 + 1)...(chi_0 + N)`` for ``p = 0``.

    ``Cprime``: ``data = {"lam": lam, "plus": [n_1 > ...], "minus": [k_1 > ...]}``
    describing ``Psi+(-n_1-1/2)... Psi-(-k_1-1/2)... 1``.
    """
    chi = _chi(chi)
    p = chi.p
    if p < 0 or not chi[p]:
        raise ValueError("chi must have chi_p != 0 with p >= 0")
    if kind == "C":
        N = int(data["N"])
        if p >= 1:
            return chi[p] ** (N + 1)
        if chi[0].denominator == 1 and -N <= chi[0] <= 0:
            raise ValueError("chi_0 must avoid -N, ..., 0")
        out = Fraction(1)
        for j in range(N + 1):
            out *= chi[0] + j
        return out
    if kind == "Cprime":
        lam = Fraction(data["lam"])
        ns = [int(x) for x in data.get("plus", [])]
        ks = [int(x) for x in data.get("minus", [])]
        out = Fraction((-1) ** (len(ns) + len(ks)))
        for k in ks:
            out *= lam - k - 1
        if p >= 1:
            out *= chi[p] ** len(ns)
        else:
            for n in ns:
                out *= chi[0] - n - 1
        return out
    raise ValueError(f"unknown constant {kind!r}")


def proof_constant_direct(kind: str, chi, data: Dict[str, Any]) -> Fraction:
    """The same constants read off from literal G-words."""
    chi = _chi(chi)
    p = chi.p
    if kind == "C":
        N = int(data["N"])
        spec = ModuleSpec.tilde(chi)
        v = spec.vacuum_vector()
        # G-(p-N-1/2) ... G-(p-1/2) 1, rightmost first; G(r) is index i = r + 1/2
        for i in range(p, p - N - 1, -1):
            v = g_apply(spec, -1, i, v)
        target = FermionMonomial((), tuple(range(2 * N + 1, 0, -2)))
        return v.get(target, Fraction(0))
    if kind == "Cprime":
        lam = Fraction(data["lam"])
        ns = sorted((int(x) for x in data.get("plus", [])), reverse=True)
        ks = sorted((int(x) for x in data.get("minus", [])), reverse=True)
        spec = ModuleSpec.full({0: lam}, chi)
        v = {FermionMonomial(tuple(2 * n + 1 for n in ns), tuple(2 * k + 1 for k in ks)): Fraction(1)}
        # G+(k_1+1/2) first, then down to G+(k_s+1/2); then G-(n_1+p+1/2) ... G-(n_r+p+1/2)
        for k in ks:
            v = g_apply(spec, 1, k + 1, v)
        for n in ns:
            v = g_apply(spec, -1, n + p + 1, v)
        return v.get(VACUUM, Fraction(0))
    raise ValueError(f"unknown constant {kind!r}")


def proof_constant_check(kind: str, chi, data: Dict[str, Any]) -> CheckReport:
    """Closed form against the literal word; ``Cprime`` is compared up to sign."""
    closed = proof_constant(kind, chi, data)
    direct = proof_constant_direct(kind, chi, data)
    shown = ", ".join(f"{k}={v if not isinstance(v, (list, tuple)) else list(map(str, v))}"
                      for k, v in sorted(data.items()))
    report = CheckReport(f"proof constant {kind} for chi = {_chi(chi)}, {shown}")
    ok = closed == direct if kind == "C" else abs(closed) == abs(direct)
    report.record(ok and closed != 0, closed=closed, direct=direct)
    report.details.update(closed=closed, direct=direct)
    return report


__all__ = [
    "span_closure", "CertificateReport", "irreducibility_certificate", "wakimoto_certificate",
    "generation_check", "proof_constant", "proof_constant_direct", "proof_constant_check",
    "replay_witness", "cyclic_span", "downward_span", "vacuum_algebra_slice",
    "sector_zero_slice", "ClosureLimitError",
]
