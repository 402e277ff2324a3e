"""Epsilon factors s -> C * q^(a(1/2 - s)) stored as the exact pair (a, C)."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product

from .characters import AddChar, MultChar
from .cyclo import CycNum, QHalfExt, RootOfUnity
from .errors import PreconditionError, ScopeError
from .localfield import LaurentTrunc, trace
from .pairs import AdmissiblePair


@dataclass(frozen=True)
class EpsilonFactor:
    exponent: int
    constant: QHalfExt

    def __post_init__(self) -> None:
        if self.constant.is_zero():
            raise PreconditionError("epsilon constant must be nonzero")

    def __mul__(self, other: EpsilonFactor) -> EpsilonFactor:
        return EpsilonFactor(self.exponent + other.exponent, self.constant * other.constant)

    def __pow__(self, m: int) -> EpsilonFactor:
        return EpsilonFactor(self.exponent * m, self.constant**m)

    def scaled(self, c) -> EpsilonFactor:
        """Multiply the constant by c (a root of unity or cyclotomic number)."""
        return EpsilonFactor(self.exponent, self.constant * c)

    def to_dict(self) -> dict:
        return {"exponent": self.exponent, "constant": self.constant.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> EpsilonFactor:
        return cls(int(data["exponent"]), QHalfExt.from_dict(data["constant"]))


def eps_equal(e1: EpsilonFactor, e2: EpsilonFactor) -> bool:
    """Equality as functions of s: the q-power separates distinct exponents."""
    return e1.exponent == e2.exponent and e1.constant == e2.constant


def _check_psi(chi: MultChar, psi: AddChar | None) -> AddChar:
    if psi is not None and psi != chi.psi:
        raise PreconditionError("the character's wild parameter is relative to a different psi")
    return chi.psi


def _alpha_element(theta: MultChar) -> LaurentTrunc:
    l = theta.level
    return LaurentTrunc.from_coeffs(theta.field, -l, theta.alpha_digits(), 1)


def eps_simple_cuspidal_root(
    P: AdmissiblePair, psi: AddChar | None = None, alpha: LaurentTrunc | None = None
) -> RootOfUnity:
    """theta(alpha)^-1 * psi_{E/F}(alpha) at s = 1/2, as a root of unity."""
    theta = P.theta
    psi = _check_psi(theta, psi)
    l = theta.level
    if l == 0:
        raise ScopeError("level-zero characters are refused")
    if l % 2 == 0:
        raise ScopeError(f"even level {l} is outside the odd-level epsilon formula")
    a = _alpha_element(theta) if alpha is None else alpha
    if a.val != -l:
        raise PreconditionError(f"alpha must have valuation -{l}")
    tr0 = trace(a).coefficient(0)
    return theta(a).inverse() * RootOfUnity(psi.params.p, psi.exponent_of_residue(tr0))


def eps_simple_cuspidal(
    P: AdmissiblePair, psi: AddChar | None = None, alpha: LaurentTrunc | None = None
) -> EpsilonFactor:
    root = eps_simple_cuspidal_root(P, psi, alpha)
    return EpsilonFactor(P.level, QHalfExt(P.ext.params.q, root.to_cyc(), 0))


def gauss_sum_tate(
    chi: MultChar, psi: AddChar | None = None, c: LaurentTrunc | None = None
) -> CycNum:
    """tau(chi, psi) = sum over U/U^(l+1) of chi^-1(c x) psi(c x).

    c defaults to alpha_chi; any c of valuation -l (known mod o) may be given.
    """
    psi = _check_psi(chi, psi)
    if not chi.field.is_base:
        raise PreconditionError("gauss_sum_tate expects a character of F^x")
    l = chi.level
    if l == 0:
        raise ScopeError("level-zero Tate epsilon is not supported")
    k = chi.params
    if c is None:
        c = LaurentTrunc.from_coeffs(chi.field, -l, chi.alpha_digits(), 1)
    elif c.val != -l or c.abs_prec < 1:
        raise PreconditionError(f"c must have valuation -{l} and be known mod o")
    N = chi.order
    step = N // k.p
    counts: Counter[int] = Counter()
    for ds in product(range(1, k.q), *([range(k.q)] * l)):
        x = LaurentTrunc.from_coeffs(chi.field, 0, ds, l + 1)
        cx = c * x
        e = -chi.exponent(cx) + psi.exponent_of_residue(cx.coefficient(0)) * step
        counts[e % N] += 1
    return CycNum.from_exponent_counts(N, counts)


def eps_character(chi: MultChar, psi: AddChar | None = None) -> EpsilonFactor:
    """Tate epsilon for l >= 1: exponent l, constant q^(-(l+1)/2) tau(chi, psi)."""
    tau = gauss_sum_tate(chi, psi)
    q = chi.params.q
    return EpsilonFactor(chi.level, QHalfExt.q_power(q, -(chi.level + 1)) * tau)


def eps_det_twist(chi: MultChar, n: int, psi: AddChar | None = None) -> EpsilonFactor:
    """epsilon of chi o det on GL_n: the n-th power of the Tate epsilon."""
    if n < 1:
        raise PreconditionError("n must be positive")
    return eps_character(chi, psi) ** n
