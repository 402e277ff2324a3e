from __future__ import annotations

from itertools import product

import pytest

from simplecusp.characters import AddChar, iter_level_chars, make_char, restrict_to_base, tame_char
from simplecusp.cyclo import CycNum, RootOfUnity
from simplecusp.epsilon import eps_simple_cuspidal
from simplecusp.errors import PreconditionError
from simplecusp.localfield import LaurentTrunc as L
from simplecusp.localfield import base_field, make_extension, make_field
from simplecusp.pairs import AdmissiblePair, are_isomorphic, enumerate_pairs
from simplecusp.verify import (
    _iso_orbit_keys,
    converse_check,
    field_separation_check,
    fingerprint,
    separation_witness,
    stability_check,
    stability_sweep,
)


class TestFingerprint:
    def test_first_entry_is_untwisted(self):
        for P in enumerate_pairs(make_field(5), 2, 1, 2)[::9]:
            assert fingerprint(P).tame_eps[0] == eps_simple_cuspidal(P).constant

    def test_entries_are_roots_of_unity(self):
        for P in enumerate_pairs(make_field(7), 3, 1, 1)[::17]:
            for v in fingerprint(P).tame_eps:
                assert v.half.is_zero() and v * v.conj() == 1

    def test_isomorphic_pairs_share_fingerprints(self):
        pairs = enumerate_pairs(make_field(3), 2, 1, 4)
        fps = [fingerprint(P) for P in pairs]
        for i, j in product(range(len(pairs)), repeat=2):
            if are_isomorphic(pairs[i], pairs[j]) is not None:
                assert fps[i] == fps[j]

    @pytest.mark.parametrize("p,n", [(5, 2), (7, 3), (13, 4)])
    def test_wild_shift_ratio(self, p, n):
        k = make_field(p)
        E = make_extension(k, n, 1)
        for teich, a, delta in [(0, 0, 1), (1, 2, 3), (3, 1, 2)]:
            t1 = make_char(E, RootOfUnity(2, 1), teich, [k.eta_pow(a)])
            t2 = make_char(E, RootOfUnity(2, 1), teich, [k.eta_pow(a + delta)])
            f1, f2 = fingerprint(AdmissiblePair(E, t1)), fingerprint(AdmissiblePair(E, t2))
            for j in range(k.q - 1):
                ratio = f2.tame_eps[j].base / f1.tame_eps[j].base
                assert ratio == CycNum.zeta(k.q - 1, -(teich + j * n) * delta)

    def test_orbit_keys_match_pairwise_isomorphism(self):
        for args in [(3, 2, 1, 2), (7, 3, 1, 1), (5, 4, 1, 1)]:
            k = make_field(args[0])
            pairs = enumerate_pairs(k, *args[1:])[:40]
            keys = _iso_orbit_keys(pairs)
            for i, j in product(range(len(pairs)), repeat=2):
                assert (keys[i] == keys[j]) == (are_isomorphic(pairs[i], pairs[j]) is not None)


class TestConverse:
    def test_q3_n2_m4(self):
        rep = converse_check(make_field(3), 2, 4)
        assert rep.verdict == "PASS" and rep.violations == [] and rep.exit_code == 0
        assert rep.pair_count == 32 and rep.comparisons == 32 * 31 // 2

    def test_degenerate_q2(self):
        assert converse_check(make_field(2), 3, 1).verdict == "PASS"

    def test_negative_control(self):
        rep = converse_check(make_field(3), 2, 4, corrupt=(0, 0))
        assert rep.verdict == "FAIL" and rep.exit_code == 1
        assert len(rep.violations) == 1
        v = rep.violations[0]
        assert v["i"] == 0 and v["direction"] == "isomorphic-fingerprint-differs"

    def test_corrupt_out_of_range(self):
        with pytest.raises(PreconditionError):
            converse_check(make_field(3), 2, 1, corrupt=(99, 0))

    def test_psi_unit_does_not_change_verdict(self):
        k = make_field(3)
        reps = [converse_check(k, 2, 4, psi=AddChar(k, b)) for b in (1, 2)]
        assert [r.verdict for r in reps] == ["PASS", "PASS"]

    def test_m_monotone(self):
        k = make_field(5)
        small, big = converse_check(k, 2, 1), converse_check(k, 2, 2)
        assert small.verdict == big.verdict == "PASS"
        small_pairs = {repr(P.to_dict()) for P in enumerate_pairs(k, 2, 1, 1)}
        big_pairs = enumerate_pairs(k, 2, 1, 2)
        embedded = {repr(P.to_dict()) for P in big_pairs if P.theta.pi_value == 1}
        assert len(embedded) == len(small_pairs)

    def test_thread_count_does_not_change_report(self):
        k = make_field(3)
        a = converse_check(k, 2, 4, threads=1).to_dict(runtime=False)
        b = converse_check(k, 2, 4, threads=2).to_dict(runtime=False)
        assert a == b

    def test_only_level_one(self):
        with pytest.raises(PreconditionError):
            converse_check(make_field(5), 2, 1, level=3)


class TestFieldSeparation:
    def test_exhaustive_q3(self):
        rep = field_separation_check(make_field(3), 2, 0, samples=None)
        assert rep.verdict == "PASS" and rep.comparisons == 16
        assert rep.details["separated"] == 16

    def test_sampled_level_three(self):
        rep = field_separation_check(make_field(5), 2, 1, samples=25, seed=3)
        assert rep.verdict == "PASS" and rep.comparisons == 25

    def test_reproducible(self):
        k = make_field(5)
        a = field_separation_check(k, 2, 1, samples=10, seed=7).to_dict(runtime=False)
        b = field_separation_check(k, 2, 1, samples=10, seed=7).to_dict(runtime=False)
        assert a == b

    def test_skipped_when_single_field(self):
        assert field_separation_check(make_field(2), 3, 0).verdict == "SKIPPED"
        assert field_separation_check(make_field(5), 3, 0).verdict == "SKIPPED"

    def test_witness_nonzero_for_every_cross_pair(self):
        k = make_field(7)
        pairs = enumerate_pairs(k, 3, 1, 1)
        for P1, P2 in product(pairs[::7], pairs[::5]):
            w = separation_witness(P1, P2)
            if P1.r != P2.r:
                assert w["d"] % 3 != 0 and w["d_alt_sign"] % 3 != 0


class TestStability:
    def test_single_case(self):
        k = make_field(7)
        P = enumerate_pairs(k, 3, 1, 1)[40]
        chi = make_char(base_field(k), 0, 2, [3])
        res = stability_check(P, chi)
        assert res.ok, res.record

    def test_sweep_small(self):
        rep = stability_sweep(make_field(7), 3)
        assert rep.verdict == "PASS" and rep.comparisons == 108 * 36

    def test_central_character_factor_is_not_trivial(self):
        k = make_field(7)
        F = base_field(k)
        values = set()
        for P in enumerate_pairs(k, 3, 1, 1)[::5]:
            for chi in list(iter_level_chars(F, 1))[::7]:
                c = L.from_coeffs(F, -1, chi.alpha_digits(), 1)
                values.add(restrict_to_base(P.theta)(c).normalized())
        assert len(values) > 1

    def test_refusals(self):
        k = make_field(7)
        P3 = enumerate_pairs(k, 3, 1, 1)[0]
        with pytest.raises(PreconditionError):
            stability_check(P3, tame_char(k, 1))
        P2 = enumerate_pairs(k, 2, 1, 1)[0]
        with pytest.raises(PreconditionError, match="highly ramified"):
            stability_check(P2, make_char(base_field(k), 0, 0, [1]))
        P_q2 = enumerate_pairs(make_field(2), 3, 1, 1)[0]
        with pytest.raises(PreconditionError, match="wild-bound"):
            stability_check(P_q2, make_char(base_field(make_field(2)), 0, 0, [1]))

    def test_even_twisted_level_refused(self):
        k = make_field(11)
        P = enumerate_pairs(k, 4, 1, 1)[0]
        with pytest.raises(PreconditionError, match="even"):
            stability_check(P, make_char(base_field(k), 0, 0, [1]))
