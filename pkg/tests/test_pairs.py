from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from simplecusp.characters import MultChar, make_char, tame_char, trivial_char
from simplecusp.cyclo import RootOfUnity
from simplecusp.errors import PreconditionError
from simplecusp.localfield import LaurentTrunc as L
from simplecusp.localfield import base_field, make_extension, make_field, norm
from simplecusp.pairs import (
    OUTSIDE_ODD_LEVEL,
    AdmissiblePair,
    FieldIso,
    are_isomorphic,
    enumerate_pairs,
    factors_through_norm,
    generators,
    is_admissible,
    make_pair,
    pair_count,
    pair_invariants,
    twist_pair,
)
from strategies import chars_of_level


def compose_with_iso(theta: MultChar, sigma: FieldIso) -> MultChar:
    """theta o sigma for sigma: u -> zeta u on the same field."""
    E = theta.field
    zeta = L.monomial(E, E.params.eta_pow(sigma.zeta_log), 0, 2)
    alpha = None if theta.alpha is None else sigma.inverse().apply(theta.alpha)
    return MultChar(E, theta.level, theta.pi_value * theta(zeta), theta.teich_exp, alpha, theta.psi)


class TestAdmissibility:
    def test_examples(self):
        k = make_field(7)
        for n in (2, 3, 4):
            E = make_extension(k, n, 0)
            assert is_admissible(E, make_char(E, 0, 0, [1]))
        E3 = make_extension(k, 3, 0)
        assert not is_admissible(E3, make_char(E3, 0, 0, [1, 0, 0]))
        assert not is_admissible(E3, trivial_char(E3))
        with pytest.raises(PreconditionError):
            make_pair(E3, trivial_char(E3))

    def test_norm_factoring_crosscheck(self):
        k = make_field(7)
        E3 = make_extension(k, 3, 0)
        assert factors_through_norm(make_char(E3, 0, 0, [1, 0, 0])) == 3
        assert factors_through_norm(make_char(E3, 0, 0, [1])) is None
        E2 = make_extension(k, 2, 1)
        assert factors_through_norm(make_char(E2, 0, 0, [2, 5, 1])) is None


class TestEnumeration:
    def test_q3_n2(self):
        pairs = enumerate_pairs(make_field(3), 2, 1, 1)
        assert len(pairs) == 8 == pair_count(make_field(3), 2, 1, 1)
        assert all(is_admissible(P.ext, P.theta) for P in pairs)
        assert [P.r for P in pairs] == [0] * 4 + [1] * 4

    def test_q2_n3(self):
        assert len(enumerate_pairs(make_field(2), 3, 1, 1)) == 1

    @pytest.mark.parametrize("p,f,n,level,M", [(5, 1, 2, 3, 1), (7, 1, 3, 1, 2), (3, 2, 2, 1, 2), (5, 1, 4, 1, 1)])
    def test_counts_and_distinctness(self, p, f, n, level, M):
        k = make_field(p, f)
        pairs = enumerate_pairs(k, n, level, M)
        assert len(pairs) == pair_count(k, n, level, M)
        assert len({repr(P.to_dict()) for P in pairs}) == len(pairs)

    @pytest.mark.parametrize("p,n,level", [(3, 3, 1), (3, 2, 3), (5, 3, 3), (3, 2, 2)])
    def test_refused(self, p, n, level):
        with pytest.raises(PreconditionError):
            enumerate_pairs(make_field(p), n, level)

    def test_serialization(self):
        k = make_field(5)
        for P in enumerate_pairs(k, 2, 3, 1)[::37]:
            assert AdmissiblePair.from_dict(P.to_dict(), k) == P


class TestIsomorphism:
    def test_reflexive_identity(self):
        for P in enumerate_pairs(make_field(5), 2, 1, 2):
            sigma = are_isomorphic(P, P)
            assert sigma is not None and sigma.zeta_exp == 0

    def test_construct_and_recover(self):
        k = make_field(7)
        for E in (make_extension(k, 3, 1), make_extension(k, 2, 0)):
            theta1 = make_char(E, RootOfUnity(6, 1), 2, [3])
            for z in range(1, E.e):
                sigma = FieldIso(E, E, z)
                theta2 = compose_with_iso(theta1, sigma.inverse())
                P1, P2 = AdmissiblePair(E, theta1), AdmissiblePair(E, theta2)
                found = are_isomorphic(P1, P2)
                assert found is not None and found.zeta_exp == z
                for g in generators(E, 1) + [L.from_coeffs(E, -2, [1, 5, 4], 1)]:
                    assert theta1(g) == theta2(found.apply(g))

    def test_different_fields_never(self):
        pairs = enumerate_pairs(make_field(3), 2, 1, 2)
        for P1, P2 in product(pairs, pairs):
            if P1.r != P2.r:
                assert are_isomorphic(P1, P2) is None

    def test_equivalence_relation(self):
        pairs = enumerate_pairs(make_field(3), 2, 1, 2)
        rel = {(i, j): are_isomorphic(P, Q) for i, P in enumerate(pairs) for j, Q in enumerate(pairs)}
        idx = range(len(pairs))
        for i, j in product(idx, idx):
            assert (rel[i, j] is None) == (rel[j, i] is None)
            if rel[i, j] is not None:
                assert rel[j, i].zeta_exp == rel[i, j].inverse().zeta_exp
        for i, j, m in product(idx, idx, idx):
            if rel[i, j] is not None and rel[j, m] is not None:
                assert rel[i, m] is not None
                assert rel[i, m].zeta_exp == rel[j, m].compose(rel[i, j]).zeta_exp

    def test_iso_fixes_base_field(self):
        k = make_field(7)
        E = make_extension(k, 3, 2)
        from simplecusp.localfield import embed_base

        x = embed_base(L.from_coeffs(base_field(k), -1, [2, 3, 1], 2), E)
        for z in range(E.e):
            assert FieldIso(E, E, z).apply(x) == x


class TestTwisting:
    def test_trivial(self):
        k = make_field(5)
        for P in enumerate_pairs(k, 2, 1, 1)[:5]:
            assert twist_pair(trivial_char(base_field(k)), P).theta == P.theta

    def test_unramified(self):
        k = make_field(5)
        chi = make_char(base_field(k), RootOfUnity(3, 1), 0)
        for P in enumerate_pairs(k, 2, 1, 1)[::7]:
            T = twist_pair(chi, P)
            assert T.theta.teich_exp == P.theta.teich_exp and T.theta.alpha == P.theta.alpha
            u = L.monomial(P.ext, 1, 1, 3)
            assert T.theta.pi_value == P.theta.pi_value * chi(norm(u))

    def test_tame(self):
        k = make_field(7)
        for P in enumerate_pairs(k, 3, 1, 1)[::11]:
            T = twist_pair(tame_char(k, 2), P)
            assert T.level == 1 and T.theta.alpha == P.theta.alpha and not T.flags

    def test_even_level_is_flagged(self):
        k = make_field(5)
        P = enumerate_pairs(k, 2, 1, 1)[0]
        chi = make_char(base_field(k), 0, 0, [1])
        T = twist_pair(chi, P)
        assert T.level == 2 and OUTSIDE_ODD_LEVEL in T.flags

    def test_twist_preserves_isomorphism(self):
        k = make_field(5)
        pairs = enumerate_pairs(k, 2, 1, 1)
        chi = make_char(base_field(k), RootOfUnity(2, 1), 3)
        for P1, P2 in product(pairs[:16], pairs[:16]):
            same = are_isomorphic(P1, P2) is not None
            assert same == (are_isomorphic(twist_pair(chi, P1), twist_pair(chi, P2)) is not None)

    @given(st.data())
    def test_central_character_of_twist(self, data):
        k = make_field(7)
        n = data.draw(st.sampled_from([2, 3]))
        E = make_extension(k, n, data.draw(st.integers(0, n - 1)))
        theta = data.draw(chars_of_level(E, 1))
        chi = data.draw(chars_of_level(base_field(k), data.draw(st.integers(0, 2))))
        P = AdmissiblePair(E, theta)
        _, omega_t = pair_invariants(twist_pair(chi, P))
        _, omega = pair_invariants(P)
        F = base_field(k)
        for g in [L.monomial(F, 1, 1, 4), L.monomial(F, k.eta, 0, 4), L.from_coeffs(F, 0, [1, 3, 5], 3)]:
            assert omega_t(g) == chi(g) ** n * omega(g)


class TestInvariants:
    def test_normalized_level(self):
        k = make_field(5)
        assert pair_invariants(enumerate_pairs(k, 2, 1)[0])[0] == Fraction(1, 2)
        assert pair_invariants(enumerate_pairs(k, 2, 3)[0])[0] == Fraction(3, 2)

    def test_trivial_central_character(self):
        k = make_field(5)
        E = make_extension(k, 2, 0)
        theta = make_char(E, RootOfUnity(2, 1), 0, [1])  # theta(u^2) = 1, theta(eta) = 1
        _, omega = pair_invariants(AdmissiblePair(E, theta))
        assert omega == trivial_char(base_field(k))
