"""Admissible pairs (E_r/F, theta) modelling simple cuspidal representations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterator

from .characters import (
    AddChar,
    MultChar,
    base_change,
    make_char,
    restrict_to_base,
    wild_count,
    wild_digits,
)
from .cyclo import RootOfUnity
from .errors import PreconditionError
from .localfield import FieldParams, LaurentTrunc, TameExt, all_extensions, laurent_from_dict

OUTSIDE_ODD_LEVEL = "outside odd-level epsilon scope"


@dataclass(frozen=True)
class AdmissiblePair:
    ext: TameExt
    theta: MultChar
    flags: tuple[str, ...] = ()

    @property
    def level(self) -> int:
        return self.theta.level

    @property
    def n(self) -> int:
        return self.ext.n

    @property
    def r(self) -> int:
        return self.ext.r

    def to_dict(self) -> dict:
        out = {"n": self.ext.n, "r": self.ext.r, "theta": self.theta.to_dict()}
        if self.flags:
            out["flags"] = list(self.flags)
        return out

    @classmethod
    def from_dict(cls, data: dict, params: FieldParams) -> AdmissiblePair:
        theta = MultChar.from_dict(data["theta"], params)
        ext = TameExt(params, int(data["n"]), int(data["r"]))
        return cls(ext, theta, tuple(data.get("flags", ())))


@dataclass(frozen=True)
class FieldIso:
    """u -> zeta * u with zeta = eta^(zeta_exp * (q-1)/e) in mu_n(F)."""

    source: TameExt
    target: TameExt
    zeta_exp: int

    def __post_init__(self) -> None:
        if self.source.r != self.target.r or self.source.n != self.target.n:
            raise PreconditionError("isomorphic tame extensions must share n and r")
        object.__setattr__(self, "zeta_exp", self.zeta_exp % self.source.e)

    @property
    def zeta_log(self) -> int:
        """zeta as a power of eta."""
        k = self.source.params
        return self.zeta_exp * (k.q - 1) // self.source.e

    def apply(self, x: LaurentTrunc) -> LaurentTrunc:
        if x.field != self.source:
            raise PreconditionError("element not in the source field")
        if x.val is None:
            return LaurentTrunc.zero(self.target, x.abs_prec)
        k = x.k
        z = self.zeta_log
        ds = [k.mul[c][k.eta_pow(z * (x.val + i))] if c else 0 for i, c in enumerate(x.coeffs)]
        return LaurentTrunc(self.target, x.val, tuple(ds), x.abs_prec)

    def inverse(self) -> FieldIso:
        return FieldIso(self.target, self.source, -self.zeta_exp)

    def compose(self, other: FieldIso) -> FieldIso:
        """self o other."""
        return FieldIso(other.source, self.target, self.zeta_exp + other.zeta_exp)

    def to_dict(self) -> dict:
        return {"n": self.source.n, "r": self.source.r, "zeta_exp": self.zeta_exp}


def is_admissible(ext: TameExt, theta: MultChar) -> bool:
    if theta.field != ext:
        raise PreconditionError("theta does not live on the given extension")
    return theta.level >= 1 and gcd(theta.level, ext.n) == 1


def make_pair(ext: TameExt, theta: MultChar) -> AdmissiblePair:
    if not is_admissible(ext, theta):
        raise PreconditionError(
            f"not admissible: level {theta.level} with n = {ext.n}"
        )
    return AdmissiblePair(ext, theta)


def check_enumeration_params(params: FieldParams, n: int, level: int) -> None:
    if gcd(n, params.p) != 1:
        raise PreconditionError(f"wild degree unsupported: gcd({n}, {params.p}) != 1")
    if level < 1 or level % 2 == 0:
        raise PreconditionError(f"level must be odd and positive, got {level}")
    if params.p <= level:
        raise PreconditionError(f"wild-bound violation: p={params.p} <= level {level}")
    if gcd(level, n) != 1:
        raise PreconditionError(f"gcd(level={level}, n={n}) != 1")


def iter_pairs(
    params: FieldParams, n: int, level: int, M: int = 1, psi: AddChar | None = None
) -> Iterator[AdmissiblePair]:
    """Deterministic order: r, then pi exponent, then teich, then wild index."""
    check_enumeration_params(params, n, level)
    if M < 1:
        raise PreconditionError("M must be positive")
    for ext in all_extensions(params, n):
        for pe, a, w in product(range(M), range(params.q - 1), range(wild_count(params, level))):
            theta = make_char(ext, RootOfUnity(M, pe), a, wild_digits(params, level, w), psi)
            yield AdmissiblePair(ext, theta)


def enumerate_pairs(
    params: FieldParams, n: int, level: int, M: int = 1, psi: AddChar | None = None
) -> list[AdmissiblePair]:
    return list(iter_pairs(params, n, level, M, psi))


def pair_count(params: FieldParams, n: int, level: int, M: int) -> int:
    return gcd(n, params.q - 1) * M * (params.q - 1) * wild_count(params, level)


def generators(ext: TameExt, level: int) -> list[LaurentTrunc]:
    """u, eta and 1 + b u^j (b in an F_p-basis of k, 1 <= j <= level)."""
    k = ext.params
    prec = level + 1
    gens = [LaurentTrunc.monomial(ext, 1, 1, prec), LaurentTrunc.monomial(ext, k.eta, 0, prec)]
    for j in range(1, level + 1):
        for b in k.basis():
            ds = [1] + [0] * level
            ds[j] = b
            gens.append(LaurentTrunc.from_coeffs(ext, 0, ds, prec))
    return gens


def are_isomorphic(P1: AdmissiblePair, P2: AdmissiblePair) -> FieldIso | None:
    """An F-isomorphism sigma: E_1 -> E_2 with theta_1 = theta_2 o sigma, if any."""
    k1, k2 = P1.ext.params, P2.ext.params
    if k1 != k2 or P1.n != P2.n or P1.level != P2.level:
        raise PreconditionError("parameter mismatch between pairs")
    if P1.r != P2.r:
        return None
    t1, t2 = P1.theta, P2.theta
    gens = generators(P1.ext, P1.level)
    values1 = [t1(g) for g in gens]
    for z in range(P1.ext.e):
        sigma = FieldIso(P1.ext, P2.ext, z)
        if all(v == t2(sigma.apply(g)) for v, g in zip(values1, gens)):
            return sigma
    return None


def twist_pair(chi: MultChar, P: AdmissiblePair) -> AdmissiblePair:
    """(E, chi_E * theta), the pair of chi * pi_{E, theta}."""
    chi_E = base_change(chi, P.ext)
    theta = chi_E * P.theta
    flags = (OUTSIDE_ODD_LEVEL,) if theta.level % 2 == 0 else ()
    return AdmissiblePair(P.ext, theta, flags)


def pair_invariants(P: AdmissiblePair) -> tuple[Fraction, MultChar]:
    """(normalized level l(theta)/n, central character theta|F^x)."""
    return Fraction(P.level, P.n), restrict_to_base(P.theta)


def factors_through_norm(theta: MultChar) -> int | None:
    """Brute-force: smallest d > 1 dividing n such that theta on U^1/U^(l+1)
    agrees with some chi o N_{E/K}, where K = F(u^d) has e(E/K) = d.

    Characters of that form have wild parameters supported on exponents
    divisible by d; each candidate is compared with theta on every element of
    the truncated group.  Exponential in l; meant for small cross-checks.
    """
    ext = theta.field
    k = ext.params
    l = theta.level
    if l == 0:
        return None
    group = []
    for ds in product(range(k.q), repeat=l):
        group.append(LaurentTrunc.from_coeffs(ext, 0, (1,) + ds, l + 1))
    target = [theta(w) for w in group]
    for d in range(2, ext.n + 1):
        if ext.n % d:
            continue
        slots = [j for j in range(1, l + 1) if j % d == 0]
        for vals in product(range(k.q), repeat=len(slots)):
            digits = [0] * l  # index i <-> u^(i - l)
            for j, v in zip(slots, vals):
                digits[l - j] = v
            cand = make_char(ext, RootOfUnity(1, 0), 0, _strip(digits), theta.psi)
            if all(cand(w) == t for w, t in zip(group, target)):
                return d
    return None


def _strip(digits: list[int]) -> list[int]:
    i = 0
    while i < len(digits) and digits[i] == 0:
        i += 1
    return digits[i:]
