"""Exact arithmetic in cyclotomic fields Q(zeta_N), optionally with a formal sqrt(q).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) after reduction
modulo the N-th cyclotomic polynomial, so equality at a fixed order is equality
of coefficient tuples.  Values of different orders are compared after embedding
both into the lcm order.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Union

from .errors import NotInvertibleError, PreconditionError

Rational = Union[int, Fraction]


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def mobius(n: int) -> int:
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def euler_phi(n: int) -> int:
    out = n
    for p in prime_factors(n):
        out -= out // p
    return out


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact(a: list[int], b: list[int]) -> list[int]:
    # b monic up to sign of leading term (+-1)
    a = list(a)
    lead = b[-1]
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        coef = a[i + len(b) - 1] // lead
        out[i] = coef
        if coef:
            for j, y in enumerate(b):
                a[i + j] -= coef * y
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise PreconditionError("cyclotomic order must be positive")
    num, den = [1], [1]
    for d in range(1, n + 1):
        if n % d:
            continue
        mu = mobius(n // d)
        if mu == 0:
            continue
        factor = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            num = _poly_mul(num, factor)
        else:
            den = _poly_mul(den, factor)
    return tuple(_poly_divexact(num, den))


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coordinates of zeta_n^k for k = 0..n-1."""
    phi_poly = cyclotomic_poly(n)
    deg = len(phi_poly) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x and reduce the overflow with the monic relation
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi_poly[i]
    return tuple(rows)


@lru_cache(maxsize=None)
def _sparse_power_table(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    return tuple(
        tuple((i, c) for i, c in enumerate(row) if c) for row in _power_table(n)
    )


def _coerce_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


class CycNum:
    """An element of Q(zeta_order) in canonical power-basis form."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs: Iterable[Rational]) -> None:
        if order < 1:
            raise PreconditionError("cyclotomic order must be positive")
        cs = tuple(_coerce_rational(c) for c in coeffs)
        if len(cs) != euler_phi(order):
            raise ValueError(
                f"expected {euler_phi(order)} coefficients for order {order}, got {len(cs)}"
            )
        self.order = order
        self.coeffs = cs
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_int(cls, value: Rational, order: int = 1) -> CycNum:
        cs = [Fraction(0)] * euler_phi(order)
        cs[0] = _coerce_rational(value)
        return cls(order, cs)

    @classmethod
    def zero(cls, order: int = 1) -> CycNum:
        return cls.from_int(0, order)

    @classmethod
    def one(cls, order: int = 1) -> CycNum:
        return cls.from_int(1, order)

    @classmethod
    def zeta(cls, order: int, k: int = 1) -> CycNum:
        return cls(order, _power_table(order)[k % order])

    @classmethod
    def from_exponent_counts(cls, order: int, counts: Mapping[int, int]) -> CycNum:
        """Sum of count * zeta_order^k over the mapping."""
        acc = [0] * euler_phi(order)
        table = _sparse_power_table(order)
        for k, mult in counts.items():
            if mult:
                for i, c in table[k % order]:
                    acc[i] += mult * c
        return cls(order, acc)

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def embed(self, new_order: int) -> CycNum:
        """Image under Q(zeta_N) -> Q(zeta_M) sending zeta_N to zeta_M^(M/N)."""
        if new_order % self.order:
            raise PreconditionError(f"order {self.order} does not divide {new_order}")
        if new_order == self.order:
            return self
        step = new_order // self.order
        table = _sparse_power_table(new_order)
        acc = [Fraction(0)] * euler_phi(new_order)
        for i, c in enumerate(self.coeffs):
            if c:
                for j, s in table[i * step]:
                    acc[j] += s * c
        return CycNum(new_order, acc)

    def restrict(self, sub_order: int) -> CycNum:
        """Inverse of embed: express self in Q(zeta_sub_order) or raise ValueError."""
        if self.order % sub_order:
            raise PreconditionError(f"order {sub_order} does not divide {self.order}")
        if sub_order == self.order:
            return self
        pivots, inverse = _restriction_solver(self.order, sub_order)
        rhs = [self.coeffs[r] for r in pivots]
        sol = [sum((row[j] * rhs[j] for j in range(len(rhs))), Fraction(0)) for row in inverse]
        candidate = CycNum(sub_order, sol)
        if candidate.embed(self.order).coeffs != self.coeffs:
            raise ValueError(f"element does not lie in Q(zeta_{sub_order})")
        return candidate

    def minimal(self) -> CycNum:
        """Same value written in the smallest cyclotomic field containing it."""
        cur = self
        changed = True
        while changed:
            changed = False
            for p in prime_factors(cur.order):
                try:
                    cur = cur.restrict(cur.order // p)
                except ValueError:
                    continue
                changed = True
                break
        return cur

    def _align(self, other: CycNum) -> tuple[CycNum, CycNum]:
        if self.order == other.order:
            return self, other
        n = lcm(self.order, other.order)
        return self.embed(n), other.embed(n)

    def _lift(self, other) -> CycNum:
        if isinstance(other, CycNum):
            return other
        if isinstance(other, RootOfUnity):
            return other.to_cyc()
        return CycNum.from_int(_coerce_rational(other), self.order)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> CycNum:
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        a, b = self._align(other)
        return CycNum(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum(self.order, [-c for c in self.coeffs])

    def __sub__(self, other) -> CycNum:
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> CycNum:
        return (-self) + other

    def __mul__(self, other) -> CycNum:
        if isinstance(other, (int, Fraction)):
            return CycNum(self.order, [c * other for c in self.coeffs])
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        a, b = self._align(other)
        n = a.order
        deg = len(a.coeffs)
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        acc = prod[:deg]
        table = _sparse_power_table(n)
        for k in range(deg, len(prod)):
            c = prod[k]
            if c:
                for j, s in table[k % n]:
                    acc[j] += s * c
        return CycNum(n, acc)

    __rmul__ = __mul__

    def times_root(self, k: int) -> CycNum:
        """self * zeta_order^k, without a full multiplication."""
        n = self.order
        table = _sparse_power_table(n)
        acc = [Fraction(0)] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            if c:
                for j, s in table[(i + k) % n]:
                    acc[j] += s * c
        return CycNum(n, acc)

    def galois(self, a: int) -> CycNum:
        """The automorphism zeta -> zeta^a, a coprime to the order."""
        n = self.order
        if gcd(a, n) != 1:
            raise PreconditionError(f"{a} is not a unit modulo {n}")
        table = _sparse_power_table(n)
        acc = [Fraction(0)] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            if c:
                for j, s in table[(i * a) % n]:
                    acc[j] += s * c
        return CycNum(n, acc)

    def conj(self) -> CycNum:
        return self.galois(-1)

    def inverse(self) -> CycNum:
        if self.is_zero():
            raise NotInvertibleError("zero cyclotomic number")
        # solve (multiplication-by-self matrix) * y = e_0
        n = self.order
        deg = len(self.coeffs)
        cols = [self.times_root(i).coeffs for i in range(deg)]
        rows = [[cols[j][i] for j in range(deg)] + [Fraction(int(i == 0))] for i in range(deg)]
        sol = _solve(rows, deg)
        return CycNum(n, sol)

    def __truediv__(self, other) -> CycNum:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise NotInvertibleError("zero")
            return CycNum(self.order, [c / other for c in self.coeffs])
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k: int) -> CycNum:
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNum.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, RootOfUnity)):
            other = self._lift(other)
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = self._align(other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            m = self.minimal()
            self._hash = hash((m.order, m.coeffs))
        return self._hash

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z{self.order}^{i}")
        return "CycNum(" + (" + ".join(terms) if terms else "0") + ")"

    def to_complex(self) -> complex:
        """Floating-point value for display only."""
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c) * z**i for i, c in enumerate(self.coeffs))

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "coeffs": [[c.numerator, c.denominator] for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> CycNum:
        return cls(int(data["order"]), [Fraction(int(n), int(d)) for n, d in data["coeffs"]])

    def to_flat(self) -> str:
        cs = ",".join(str(c) for c in self.coeffs)
        return f"{self.order}:[{cs}]"


def _solve(rows: list[list[Fraction]], n: int) -> list[Fraction]:
    """Gauss-Jordan on an augmented n x (n+1) system; raises if singular."""
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            raise NotInvertibleError("singular system")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return [rows[r][n] for r in range(n)]


@lru_cache(maxsize=None)
def _restriction_solver(order: int, sub_order: int):
    """Pivot rows and inverse of the square embedding submatrix."""
    step = order // sub_order
    table = _power_table(order)
    m = euler_phi(sub_order)
    # embedding matrix E: column i = coordinates of zeta_order^(i*step)
    E = [[Fraction(table[i * step][r]) for i in range(m)] for r in range(euler_phi(order))]
    pivots: list[int] = []
    basis: list[list[Fraction]] = []
    # greedy choice of m independent rows via incremental elimination
    reduced: list[tuple[int, list[Fraction]]] = []
    for r, row in enumerate(E):
        vec = list(row)
        for pc, prow in reduced:
            if vec[pc]:
                f = vec[pc] / prow[pc]
                vec = [a - f * b for a, b in zip(vec, prow)]
        lead = next((i for i, v in enumerate(vec) if v), None)
        if lead is not None:
            reduced.append((lead, vec))
            pivots.append(r)
            basis.append(row)
            if len(pivots) == m:
                break
    inverse = []
    for i in range(m):
        aug = [list(basis[r]) + [Fraction(int(r == i))] for r in range(m)]
        inverse.append(_solve(aug, m))
    # inverse[i] solves B x = e_i, so column i of B^-1; transpose to rows
    inv_rows = [[inverse[j][i] for j in range(m)] for i in range(m)]
    return tuple(pivots), tuple(tuple(r) for r in inv_rows)


class RootOfUnity:
    """zeta_order^exp, stored with exp reduced modulo order."""

    __slots__ = ("order", "exp")

    def __init__(self, order: int, exp: int = 0) -> None:
        if order < 1:
            raise PreconditionError("root of unity order must be positive")
        self.order = order
        self.exp = exp % order

    def normalized(self) -> tuple[int, int]:
        g = gcd(self.exp, self.order)
        return self.order // g, self.exp // g

    def __mul__(self, other: RootOfUnity) -> RootOfUnity:
        if not isinstance(other, RootOfUnity):
            if isinstance(other, (CycNum, int, Fraction)):
                return self.to_cyc() * other
            return NotImplemented
        if self.order == other.order:
            return RootOfUnity(self.order, self.exp + other.exp)
        n = lcm(self.order, other.order)
        return RootOfUnity(n, self.exp * (n // self.order) + other.exp * (n // other.order))

    def __rmul__(self, other):
        return self.to_cyc() * other

    def __truediv__(self, other: RootOfUnity) -> RootOfUnity:
        return self * other.inverse()

    def inverse(self) -> RootOfUnity:
        return RootOfUnity(self.order, -self.exp)

    conj = inverse

    def __pow__(self, k: int) -> RootOfUnity:
        return RootOfUnity(self.order, self.exp * k)

    def __eq__(self, other) -> bool:
        if isinstance(other, RootOfUnity):
            return self.exp * other.order == other.exp * self.order
        if isinstance(other, (CycNum, int, Fraction)):
            return self.to_cyc() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.normalized())

    def __repr__(self) -> str:
        return f"RootOfUnity({self.order}, {self.exp})"

    def at_order(self, order: int) -> int:
        """Exponent k with self == zeta_order^k."""
        if (self.exp * order) % self.order:
            raise PreconditionError(f"{self!r} is not an {order}-th root of unity")
        return self.exp * order // self.order

    def to_cyc(self, order: int | None = None) -> CycNum:
        if order is None:
            return CycNum.zeta(self.order, self.exp)
        return CycNum.zeta(order, self.at_order(order))

    def to_dict(self) -> dict:
        return {"order": self.order, "exp": self.exp}

    @classmethod
    def from_dict(cls, data: Mapping) -> RootOfUnity:
        return cls(int(data["order"]), int(data["exp"]))


def root_of_unity(order: int, k: int) -> RootOfUnity:
    return RootOfUnity(order, k)


class QHalfExt:
    """base + half * sqrt(q) with sqrt(q) a formal symbol squaring to q."""

    __slots__ = ("q", "base", "half")

    def __init__(self, q: int, base, half=0) -> None:
        self.q = q
        self.base = _as_cyc(base)
        self.half = _as_cyc(half)

    @classmethod
    def q_power(cls, q: int, twice_exponent: int) -> QHalfExt:
        """q^(twice_exponent / 2)."""
        whole, odd = divmod(twice_exponent, 2)
        value = Fraction(q) ** whole
        if odd:
            return cls(q, 0, value)
        return cls(q, value, 0)

    def _check(self, other: QHalfExt) -> None:
        if self.q != other.q and not (self.half.is_zero() and other.half.is_zero()):
            raise PreconditionError(f"sqrt({self.q}) and sqrt({other.q}) cannot be mixed")

    def _lift(self, other) -> QHalfExt:
        if isinstance(other, QHalfExt):
            return other
        return QHalfExt(self.q, other, 0)

    def __add__(self, other) -> QHalfExt:
        other = self._lift(other)
        self._check(other)
        return QHalfExt(self.q, self.base + other.base, self.half + other.half)

    __radd__ = __add__

    def __neg__(self) -> QHalfExt:
        return QHalfExt(self.q, -self.base, -self.half)

    def __sub__(self, other) -> QHalfExt:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> QHalfExt:
        return (-self) + other

    def __mul__(self, other) -> QHalfExt:
        if isinstance(other, (int, Fraction, CycNum, RootOfUnity)):
            c = _as_cyc(other)
            return QHalfExt(self.q, self.base * c, self.half * c)
        if not isinstance(other, QHalfExt):
            return NotImplemented
        self._check(other)
        q = self.q if not self.half.is_zero() else other.q
        a, b, c, d = self.base, self.half, other.base, other.half
        return QHalfExt(q, a * c + b * d * q, a * d + b * c)

    __rmul__ = __mul__

    def conj(self) -> QHalfExt:
        """Complex conjugation; the formal sqrt(q) is real."""
        return QHalfExt(self.q, self.base.conj(), self.half.conj())

    def inverse(self) -> QHalfExt:
        if self.half.is_zero():
            return QHalfExt(self.q, self.base.inverse(), 0)
        norm = self.base * self.base - self.half * self.half * self.q
        inv = norm.inverse()
        return QHalfExt(self.q, self.base * inv, -self.half * inv)

    def __pow__(self, k: int) -> QHalfExt:
        if k < 0:
            return self.inverse() ** (-k)
        result = QHalfExt(self.q, 1, 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return self.base.is_zero() and self.half.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, CycNum, RootOfUnity)):
            other = self._lift(other)
        if not isinstance(other, QHalfExt):
            return NotImplemented
        if self.q != other.q and not (self.half.is_zero() and other.half.is_zero()):
            return False
        return self.base == other.base and self.half == other.half

    def __hash__(self) -> int:
        return hash((self.base, self.half))

    def __repr__(self) -> str:
        return f"QHalfExt(q={self.q}, base={self.base!r}, half={self.half!r})"

    def key(self, order: int) -> tuple:
        """Hashable canonical tuple with both parts embedded at a common order."""
        return (self.base.embed(order).coeffs, self.half.embed(order).coeffs)

    def to_complex(self) -> complex:
        return self.base.to_complex() + self.half.to_complex() * self.q**0.5

    def to_dict(self) -> dict:
        return {"q": self.q, "base": self.base.to_dict(), "half": self.half.to_dict()}

    @classmethod
    def from_dict(cls, data: Mapping) -> QHalfExt:
        return cls(int(data["q"]), CycNum.from_dict(data["base"]), CycNum.from_dict(data["half"]))

    def to_flat(self) -> str:
        return f"{self.base.to_flat()}+{self.half.to_flat()}*sqrt({self.q})"


def _as_cyc(x) -> CycNum:
    if isinstance(x, CycNum):
        return x
    if isinstance(x, RootOfUnity):
        return x.to_cyc()
    return CycNum.from_int(_coerce_rational(x))


def qhalf_eq(x: QHalfExt, y: QHalfExt) -> bool:
    return x == y
