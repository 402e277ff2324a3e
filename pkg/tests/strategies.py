"""Hypothesis strategies shared across the test modules."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from hypothesis import strategies as st

from simplecusp.characters import make_char
from simplecusp.cyclo import CycNum, euler_phi
from simplecusp.localfield import LaurentTrunc, TameExt, make_field

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (3, 2), (2, 2)]

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def cyc_nums(draw, order: int | None = None) -> CycNum:
    n = order if order is not None else draw(st.sampled_from([1, 2, 3, 4, 5, 6, 8, 9, 12]))
    return CycNum(n, draw(st.lists(small_rationals, min_size=euler_phi(n), max_size=euler_phi(n))))


@st.composite
def extensions(draw, fields=SMALL_FIELDS, max_n: int = 4) -> TameExt:
    p, f = draw(st.sampled_from(fields))
    k = make_field(p, f)
    n = draw(st.integers(1, max_n).filter(lambda n: n % p))
    e = gcd(n, k.q - 1)
    r = draw(st.integers(0, e - 1))
    return TameExt(k, n, r)


@st.composite
def series(draw, ext: TameExt, val_range=(-3, 3), prec: int = 6, unit: bool = True) -> LaurentTrunc:
    q = ext.params.q
    v = draw(st.integers(*val_range))
    lead = draw(st.integers(1, q - 1)) if unit else draw(st.integers(0, q - 1))
    rest = draw(st.lists(st.integers(0, q - 1), min_size=prec - 1, max_size=prec - 1))
    return LaurentTrunc.from_coeffs(ext, v, [lead] + rest, v + prec)


@st.composite
def one_units(draw, ext: TameExt, prec: int) -> LaurentTrunc:
    q = ext.params.q
    rest = draw(st.lists(st.integers(0, q - 1), min_size=prec - 1, max_size=prec - 1))
    return LaurentTrunc.from_coeffs(ext, 0, [1] + rest, prec)


@st.composite
def chars_of_level(draw, fld: TameExt, level: int, max_pi_order: int = 4):
    k = fld.params
    M = draw(st.integers(1, max_pi_order))
    pe = draw(st.integers(0, M - 1))
    teich = draw(st.integers(0, k.q - 2))
    if level == 0:
        digits = []
    else:
        digits = [draw(st.integers(1, k.q - 1))] + draw(
            st.lists(st.integers(0, k.q - 1), min_size=level - 1, max_size=level - 1)
        )
    from simplecusp.cyclo import RootOfUnity

    return make_char(fld, RootOfUnity(M, pe), teich, digits)


def frac(a: int, b: int = 1) -> Fraction:
    return Fraction(a, b)
