"""Additive character of level one and finite-level multiplicative characters.

A multiplicative character chi of F^x or E^x is stored as its value at the
uniformizer, its value at eta (an exponent mod q-1) and a wild parameter alpha
in p^-l / o, acting on one-units through chi(w) = psi_{E/F}(alpha * log w).
The truncated log is only a homomorphism when p > l, so every level here is
bounded by the residue characteristic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .cyclo import RootOfUnity, lcm
from .errors import PreconditionError
from .localfield import (
    FieldParams,
    LaurentTrunc,
    TameExt,
    base_field,
    decompose_unit,
    embed_base,
    laurent_from_dict,
    laurent_to_dict,
    log_digits,
    norm_of_uniformizer,
    trace,
)


@dataclass(frozen=True)
class AddChar:
    """psi(x) = zeta_p^Tr(unit * x_0); trivial on p_F, nontrivial on o_F."""

    params: FieldParams
    unit: int = 1

    def __post_init__(self) -> None:
        if self.unit == 0:
            raise PreconditionError("the twisting unit of psi must be nonzero")

    def exponent_of_residue(self, z: int) -> int:
        k = self.params
        return k.trace[k.mul[self.unit][z]]

    def to_dict(self) -> dict:
        return {"p": self.params.p, "f": self.params.f, "unit": self.unit}


def add_char_eval(psi: AddChar, x: LaurentTrunc) -> RootOfUnity:
    if not x.field.is_base:
        raise PreconditionError("psi is a character of F; apply trace first")
    return RootOfUnity(psi.params.p, psi.exponent_of_residue(x.coefficient(0)))


def relative_add_char_eval(psi: AddChar, y: LaurentTrunc) -> RootOfUnity:
    """psi_{E/F}(y) = psi(tr_{E/F} y)."""
    return add_char_eval(psi, trace(y))


@dataclass(frozen=True)
class MultChar:
    field: TameExt
    level: int
    pi_value: RootOfUnity
    teich_exp: int
    alpha: LaurentTrunc | None = None
    psi: AddChar | None = None
    order: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        k = self.field.params
        object.__setattr__(self, "teich_exp", self.teich_exp % (k.q - 1))
        if self.psi is None:
            object.__setattr__(self, "psi", AddChar(k))
        if self.level < 0:
            raise PreconditionError("level must be non-negative")
        if self.level == 0:
            if self.alpha is not None and not self.alpha.is_zero():
                raise PreconditionError("level-0 characters carry no wild parameter")
            object.__setattr__(self, "alpha", None)
        else:
            if k.p <= self.level:
                raise PreconditionError(
                    f"wild-bound violation: level {self.level} needs p > level, p = {k.p}"
                )
            a = self.alpha
            if a is None or a.val != -self.level:
                raise PreconditionError(f"alpha must have valuation exactly -{self.level}")
            if a.field != self.field:
                raise PreconditionError("alpha lives in a different field")
            object.__setattr__(self, "alpha", a.truncate(0))
        object.__setattr__(self, "order", lcm(self.pi_value.order, k.q - 1, k.p))

    @property
    def params(self) -> FieldParams:
        return self.field.params

    def alpha_digits(self) -> list[int]:
        """Coefficients of alpha at u^-level .. u^-1."""
        if self.alpha is None:
            return []
        return self.alpha.digits(-self.level, 0)

    def exponent(self, x: LaurentTrunc) -> int:
        """chi(x) as an exponent of zeta_order."""
        if x.field != self.field:
            raise PreconditionError(f"{x.field} is not the field of the character")
        v, a, w = decompose_unit(x)
        k = self.params
        N = self.order
        e = self.pi_value.at_order(N) * v + self.teich_exp * a * (N // (k.q - 1))
        if self.level:
            e += self._wild_exponent(w) * (N // k.p)
        return e % N

    def _wild_exponent(self, w: LaurentTrunc) -> int:
        l = self.level
        k = self.params
        ds = w.digits(0, l + 1)
        lg = log_digits(ds, l, k)
        alpha = self.alpha_digits()  # index i <-> u^(i - l)
        add, mul = k.add, k.mul
        y0 = 0
        for j in range(1, l + 1):
            if lg[j]:
                y0 = add[y0][mul[alpha[l - j]][lg[j]]]
        # psi_{E/F}: the u^0 coefficient of tr(y) is n * y_0
        return self.psi.exponent_of_residue(mul[k.from_int(self.field.n)][y0])

    def __call__(self, x: LaurentTrunc) -> RootOfUnity:
        return RootOfUnity(self.order, self.exponent(x))

    # -- group operations -------------------------------------------------------

    def __mul__(self, other: MultChar) -> MultChar:
        if other.field != self.field:
            raise PreconditionError("characters live on different fields")
        if other.psi != self.psi:
            raise PreconditionError("wild parameters are relative to different psi")
        alpha = _alpha_sum(self.alpha, other.alpha, self.field)
        level = 0 if alpha is None else -alpha.val
        return MultChar(
            self.field, level, self.pi_value * other.pi_value,
            self.teich_exp + other.teich_exp, alpha, self.psi,
        )

    def __pow__(self, m: int) -> MultChar:
        k = self.params
        alpha = None
        if self.alpha is not None:
            scaled = self.alpha * (m % k.p)
            alpha = None if scaled.is_zero() else scaled
        level = 0 if alpha is None else -alpha.val
        return MultChar(self.field, level, self.pi_value**m, self.teich_exp * m, alpha, self.psi)

    def inverse(self) -> MultChar:
        return self ** -1

    def to_dict(self) -> dict:
        return {
            "field": self.field.tag(),
            "level": self.level,
            "pi": self.pi_value.to_dict(),
            "teich": self.teich_exp,
            "alpha": None if self.alpha is None else laurent_to_dict(self.alpha),
            "psi_unit": self.psi.unit,
        }

    @classmethod
    def from_dict(cls, data: dict, params: FieldParams) -> MultChar:
        tag = data["field"]
        fld = TameExt(params, int(tag["n"]), int(tag["r"]))
        alpha = None if data.get("alpha") is None else laurent_from_dict(data["alpha"], params)
        return cls(
            fld, int(data["level"]), RootOfUnity.from_dict(data["pi"]), int(data["teich"]),
            alpha, AddChar(params, int(data.get("psi_unit", 1))),
        )


def _alpha_sum(a: LaurentTrunc | None, b: LaurentTrunc | None, fld: TameExt) -> LaurentTrunc | None:
    if a is None:
        return b
    if b is None:
        return a
    s = a + b
    if s.is_zero() or s.val >= 0:
        return None
    return s


def alpha_from_digits(fld: TameExt, digits: Sequence[int]) -> LaurentTrunc | None:
    """alpha = sum digits[i] * u^(i - len(digits)), known mod o."""
    l = len(digits)
    if l == 0:
        return None
    return LaurentTrunc.from_coeffs(fld, -l, digits, 0)


def make_char(
    fld: TameExt,
    pi_value: RootOfUnity | int = 0,
    teich: int = 0,
    alpha_digits: Sequence[int] = (),
    psi: AddChar | None = None,
) -> MultChar:
    """Character with the given data; ``pi_value`` may be a RootOfUnity or an
    exponent of zeta_(q-1)."""
    if isinstance(pi_value, int):
        pi_value = RootOfUnity(fld.params.q - 1, pi_value)
    alpha = alpha_from_digits(fld, alpha_digits)
    if alpha is not None and alpha.is_zero():
        alpha = None
    level = 0 if alpha is None else -alpha.val
    return MultChar(fld, level, pi_value, teich, alpha, psi)


def trivial_char(fld: TameExt, psi: AddChar | None = None) -> MultChar:
    return MultChar(fld, 0, RootOfUnity(1, 0), 0, None, psi)


def tame_char(params: FieldParams, j: int, psi: AddChar | None = None) -> MultChar:
    """The level-zero character of F^x with chi(eta) = zeta_(q-1)^j, chi(t) = 1."""
    return MultChar(base_field(params), 0, RootOfUnity(1, 0), j, None, psi)


def wild_count(params: FieldParams, level: int) -> int:
    return 1 if level == 0 else (params.q - 1) * params.q ** (level - 1)


def wild_digits(params: FieldParams, level: int, index: int) -> list[int]:
    """Deterministic enumeration of alpha of exact valuation -level.

    The leading coefficient is eta^(index // q^(level-1)); the remaining
    base-q digits of index fill u^(-level+1) .. u^-1.
    """
    if level == 0:
        return []
    q = params.q
    lead, rest = divmod(index, q ** (level - 1))
    ds = [params.eta_pow(lead)]
    for _ in range(level - 1):
        rest, d = divmod(rest, q)
        ds.append(d)
    return ds


def iter_level_chars(
    fld: TameExt, level: int, M: int = 1, psi: AddChar | None = None
) -> Iterator[MultChar]:
    """All characters of exact level with pi_value in mu_M (order: pi, teich, wild)."""
    k = fld.params
    for pe in range(M):
        for a in range(k.q - 1):
            for w in range(wild_count(k, level)):
                yield make_char(fld, RootOfUnity(M, pe), a, wild_digits(k, level, w), psi)


def mult_char_eval(chi: MultChar, x: LaurentTrunc) -> RootOfUnity:
    return chi(x)


def base_change(chi: MultChar, ext: TameExt) -> MultChar:
    """chi_E = chi o N_{E/F}."""
    if not chi.field.is_base:
        raise PreconditionError("base_change expects a character of F^x")
    k = chi.params
    if ext.is_base:
        return chi
    if chi.level and k.p <= ext.n * chi.level:
        raise PreconditionError(
            f"wild-bound violation: p={k.p} <= n*l = {ext.n * chi.level}"
        )
    pi = chi(norm_of_uniformizer(ext, chi.level + 1))
    alpha = None if chi.alpha is None else embed_base(chi.alpha, ext)
    return MultChar(ext, ext.n * chi.level, pi, ext.n * chi.teich_exp, alpha, chi.psi)


def restrict_to_base(theta: MultChar) -> MultChar:
    """theta restricted to F^x inside E^x."""
    ext = theta.field
    if ext.is_base:
        return theta
    k = theta.params
    F = base_field(k)
    # theta(t) = theta(eta^(-r) u^n)
    pi = theta.pi_value**ext.n * RootOfUnity(k.q - 1, -ext.r * theta.teich_exp)
    alpha = None
    if theta.alpha is not None:
        tr = trace(theta.alpha)
        if not tr.is_zero() and tr.val < 0:
            alpha = tr
    level = 0 if alpha is None else -alpha.val
    return MultChar(F, level, pi, theta.teich_exp, alpha, theta.psi)
