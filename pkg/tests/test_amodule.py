from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from critical_fock.amodule import (AGenerator, ModuleSpec, a_apply, a_relation_check, g_apply,
                                   s_scalar, t_scalar, vacuum_basis)
from critical_fock.exact import LaurentData, vec_add
from critical_fock.fock import VACUUM, FermionMonomial, monomial, psi_apply
from critical_fock.report import CarrierError

SPECS = [
    ModuleSpec.full({0: "1/2"}, {0: "1/3"}),
    ModuleSpec.full({}, {1: 1, 0: 2}),
    ModuleSpec.tilde({0: 1}),
    ModuleSpec.tilde({1: 1}),
    ModuleSpec.bar(1, 2),
    ModuleSpec.bar(0, 0),
]


def g_oracle(spec, sign, i, v):
    """-(r + 1/2) Psi(r) + sum_k chi_k Psi(r - k) with Clifford modes only."""
    r = Fraction(2 * i - 1, 2)
    chi = spec.chi_plus if sign > 0 else spec.chi_minus
    out = {k: -(r + Fraction(1, 2)) * c for k, c in psi_apply(sign, r, v).items()}
    for k, c in chi.items():
        out = vec_add(out, psi_apply(sign, r - k, v), c)
    return {k: c for k, c in out.items() if c}


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.describe())
def test_g_modes_match_clifford_expansion(spec):
    for key in spec.basis(3):
        v = {key: Fraction(1)}
        for sign in (1, -1):
            for i in range(-3, 5):
                assert g_apply(spec, sign, i, v) == g_oracle(spec, sign, i, v)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.describe())
def test_carrier_is_stable(spec):
    for key in spec.basis(4):
        v = {key: Fraction(1)}
        for sign in (1, -1):
            for i in range(-4, 6):
                assert all(spec.in_carrier(k) for k in g_apply(spec, sign, i, v))


def convolve(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return out


chis = st.dictionaries(st.integers(-1, 2), st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4)),
                       max_size=3)


@given(chis, chis, st.integers(-4, 4))
def test_central_scalars_by_power_series(cp, cm, n):
    spec = ModuleSpec.full(cp, cm)
    # work with exponents of z directly: index k <-> z^(-k-1)
    zp = {-k - 1: Fraction(c) for k, c in cp.items()}
    zm = {-k - 1: Fraction(c) for k, c in cm.items()}
    d = lambda f: {e - 1: e * c for e, c in f.items() if e}
    t = {e: (zp.get(e, 0) - zm.get(e, 0)) / 2 for e in set(zp) | set(zm)}
    s = {}
    for f, w in ((convolve(zp, zm), Fraction(1, 2)), (d(zp), Fraction(1, 4)), (d(zm), Fraction(1, 4))):
        for e, c in f.items():
            s[e] = s.get(e, 0) + w * c
    # T(n) multiplies z^{-n-1}, S(n) multiplies z^{-n-2}
    assert t_scalar(spec, n) == t.get(-n - 1, 0)
    assert s_scalar(spec, n) == s.get(-n - 2, 0)


@pytest.mark.parametrize("spec", SPECS[:5], ids=lambda s: s.describe())
def test_relations_small(spec):
    report = a_relation_check(spec, "5x2", 3)
    assert report.passed, report.violations[:3]


def test_relations_vacuum_kind():
    report = a_relation_check(ModuleSpec.vacuum(), "3x2", 2)
    assert report.passed, report.violations[:3]


def test_delta_term():
    # {G+(1/2), G-(-1/2)} 1 on Full(0, 0): only the central term -(r^2 - 1/4) survives
    spec = ModuleSpec.full({}, {})
    vac = {VACUUM: Fraction(1)}
    lhs = vec_add(g_apply(spec, 1, 1, g_apply(spec, -1, 0, vac)),
                  g_apply(spec, -1, 0, g_apply(spec, 1, 1, vac)))
    assert lhs == {}
    r = Fraction(3, 2)
    lhs = vec_add(g_apply(spec, 1, 2, g_apply(spec, -1, -1, vac)),
                  g_apply(spec, -1, -1, g_apply(spec, 1, 2, vac)))
    assert lhs == {VACUUM: -(r * r - Fraction(1, 4))}


def test_bar_carrier_rejects_excluded_modes():
    spec = ModuleSpec.bar(0, 1)
    bad = {monomial(minus=["3/2"]): Fraction(1)}
    with pytest.raises(CarrierError):
        a_apply(AGenerator.parse("G+", "1/2"), spec, bad)
    assert all(3 not in k.minus and 1 not in k.plus for k in spec.basis(4))


def test_tilde_carrier():
    spec = ModuleSpec.tilde({1: 1})
    with pytest.raises(CarrierError):
        spec.check_carrier({monomial(plus=["1/2"]): Fraction(1)})


def test_generator_parsing():
    assert AGenerator.parse("G-", "-1/2").index == Fraction(-1, 2)
    with pytest.raises(ValueError):
        AGenerator.parse("G+", 1)
    with pytest.raises(ValueError):
        AGenerator.parse("S", "1/2")
    with pytest.raises(ValueError):
        ModuleSpec.bar(-1, 0)


def test_tilde_is_full_with_zero_plus():
    a = ModuleSpec.tilde({0: 3})
    b = ModuleSpec.full({}, {0: 3})
    for key in a.basis(3):
        v = {key: Fraction(1)}
        for sign in (1, -1):
            for i in range(-2, 4):
                assert g_apply(a, sign, i, v) == g_apply(b, sign, i, v)


def test_vacuum_basis_counts():
    # weight 1 at charge 0: Psi+(-1/2)Psi-(-1/2), gamma+(-1), gamma-(-1)
    assert len([k for k in vacuum_basis(1, 0) if k.weight == 1]) == 3
