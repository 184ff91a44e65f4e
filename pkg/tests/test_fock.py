from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from critical_fock.fock import (VACUUM, FermionMonomial, SubspaceTag, charge_weight_counts,
                                clifford_relation_check, fock_basis, in_tilde, is_canonical,
                                monomial, psi_apply, psi_x2, word)

# Jordan-Wigner oracle: a basis state is a set of occupied slots, slots ordered
# as in the canonical monomial (Psi+ block descending, then Psi- block descending).
TOP = 11  # doubled modes 1, 3, ..., 11


def slots():
    return [(1, r) for r in range(TOP, 0, -2)] + [(-1, r) for r in range(TOP, 0, -2)]


SLOTS = slots()


def to_bits(m: FermionMonomial):
    return frozenset([(1, r) for r in m.plus] + [(-1, r) for r in m.minus])


def from_bits(bits):
    plus = tuple(sorted((r for s, r in bits if s > 0), reverse=True))
    minus = tuple(sorted((r for s, r in bits if s < 0), reverse=True))
    return FermionMonomial(plus, minus)


def jw_apply(sign, r2, m):
    bits = to_bits(m)
    if r2 < 0:
        slot, create = (sign, -r2), True
    else:
        slot, create = (-sign, r2), False  # Psi^s(r) removes a Psi^{-s}(-r) factor
    if (slot in bits) == create:
        return {}
    before = sum(1 for x in SLOTS[:SLOTS.index(slot)] if x in bits)
    new = bits | {slot} if create else bits - {slot}
    return {from_bits(new): Fraction((-1) ** before)}


small_monos = st.builds(
    lambda p, q: FermionMonomial(tuple(sorted(p, reverse=True)), tuple(sorted(q, reverse=True))),
    st.sets(st.sampled_from(range(1, 10, 2)), max_size=3),
    st.sets(st.sampled_from(range(1, 10, 2)), max_size=3))


@given(small_monos, st.sampled_from([1, -1]), st.sampled_from([r for r in range(-9, 10, 2)]))
def test_psi_matches_jordan_wigner(m, sign, r2):
    assert psi_x2(sign, r2, {m: Fraction(1)}) == jw_apply(sign, r2, m)


@given(small_monos, st.sampled_from([1, -1]), st.sampled_from([r for r in range(-9, 10, 2)]),
       st.sampled_from([1, -1]), st.sampled_from([r for r in range(-9, 10, 2)]))
def test_anticommutator_property(m, s1, r1, s2, r2):
    v = {m: Fraction(1)}
    lhs = {}
    for k, c in list(psi_x2(s1, r1, psi_x2(s2, r2, v)).items()) + \
            list(psi_x2(s2, r2, psi_x2(s1, r1, v)).items()):
        lhs[k] = lhs.get(k, 0) + c
    lhs = {k: c for k, c in lhs.items() if c}
    assert lhs == (v if s1 != s2 and r1 + r2 == 0 else {})


def test_creation_words_and_vacuum():
    v = word([("+", "-1/2"), ("-", "-3/2")], {VACUUM: Fraction(1)})
    assert v == {monomial(plus=["1/2"], minus=["3/2"]): Fraction(1)}
    # reversed order picks up a sign
    w = word([("-", "-3/2"), ("+", "-1/2")], {VACUUM: Fraction(1)})
    assert w == {monomial(plus=["1/2"], minus=["3/2"]): Fraction(-1)}
    for r in ("1/2", "3/2", "5/2"):
        assert psi_apply("+", r, {VACUUM: Fraction(1)}) == {}
        assert psi_apply("-", r, {VACUUM: Fraction(1)}) == {}


def test_psi_plus_squared_is_zero():
    v = psi_apply("+", "-1/2", {VACUUM: Fraction(1)})
    assert psi_apply("+", "-1/2", v) == {}


def test_psi_rejects_integer_modes():
    with pytest.raises(ValueError):
        psi_apply("+", 1, {VACUUM: Fraction(1)})


def test_monomial_rejects_repeats():
    with pytest.raises(ValueError):
        monomial(plus=["1/2", "1/2"])


def fermion_series(max_weight, min_plus=1, min_minus=1):
    """Coefficients of prod (1 + y q^r)(1 + y^-1 q^r) by direct expansion."""
    limit = int(2 * max_weight)
    series = {(0, 0): 1}
    for sign, lo in ((1, min_plus), (-1, min_minus)):
        for r2 in range(lo, limit + 1, 2):
            new = dict(series)
            for (c, w), n in series.items():
                if w + r2 <= limit:
                    new[(c + sign, w + r2)] = new.get((c + sign, w + r2), 0) + n
            series = new
    return {(c, Fraction(w, 2)): n for (c, w), n in series.items()}


@pytest.mark.parametrize("tag,lo", [(SubspaceTag.F, (1, 1)), (SubspaceTag.TILDE, (3, 1)),
                                    (SubspaceTag.BAR, (3, 3))])
def test_basis_counts_match_generating_function(tag, lo):
    assert charge_weight_counts(tag, 6) == fermion_series(6, *lo)


def test_basis_is_canonical_and_tagged():
    basis = fock_basis(SubspaceTag.TILDE, 5)
    assert len(set(basis)) == len(basis)
    assert all(is_canonical(m) and in_tilde(m) for m in basis)
    assert fock_basis(SubspaceTag.F, 0) == [VACUUM]
    assert fock_basis(SubspaceTag.F, Fraction(1, 2)) == [
        FermionMonomial((), (1,)), VACUUM, FermionMonomial((1,), ())]


def test_charge_zero_weight_one_has_two_states():
    # Psi+(-1/2)Psi-(-1/2) and the vacuum at weight 0
    assert charge_weight_counts(SubspaceTag.F, 1)[(0, Fraction(1))] == 1
    # charge 0 is counted by partitions: 1, 1, 2, 3, 5, ...
    assert len(fock_basis(SubspaceTag.F, 4, charge=0)) == 1 + 1 + 2 + 3 + 5


def test_clifford_suite_small():
    report = clifford_relation_check("5x2", 3)
    assert report.passed and report.checked > 0


def test_annihilator_pairs_with_opposite_sign():
    # Psi+(1/2) contracts the Psi-(-1/2) factor, passing Psi+(-1/2) on the way
    v = {monomial(plus=["1/2"], minus=["1/2"]): Fraction(1)}
    assert psi_apply("+", "1/2", v) == {monomial(plus=["1/2"]): Fraction(-1)}
    assert psi_apply("-", "1/2", v) == {monomial(minus=["1/2"]): Fraction(1)}
