"""Truncated Laurent-series model of F = k((t)) and its tame extensions.

The residue field k = F_q is encoded as integers 0..q-1 whose base-p digits are
the coefficients (constant first) of a polynomial modulo a fixed primitive
polynomial; eta is a generator of k^x.  The extension E_r = F(u) has u^n =
eta^r * t, so that the embedding F -> E sends t to eta^(-r) * u^n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import gcd
from typing import Iterable, Sequence

from .errors import NotInvertibleError, PrecisionError, PreconditionError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _digits(x: int, p: int, f: int) -> list[int]:
    out = []
    for _ in range(f):
        x, d = divmod(x, p)
        out.append(d)
    return out


def _undigits(ds: Sequence[int], p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


def _times_x(ds: list[int], modulus: Sequence[int], p: int) -> list[int]:
    top = ds[-1]
    out = [0] + ds[:-1]
    if top:
        for i in range(len(out)):
            out[i] = (out[i] - top * modulus[i]) % p
    return out


def _order_of_x(modulus: Sequence[int], p: int, f: int) -> int:
    cur = [1] + [0] * (f - 1)
    one = list(cur)
    for k in range(1, p**f):
        cur = _times_x(cur, modulus, p)
        if cur == one:
            return k
    return 0


class FieldParams:
    """Residue field k = F_{p^f} with its lookup tables and generator eta.

    Tables are built once per (p, f) and are read-only afterwards; use
    :func:`make_field` to obtain the shared instance.
    """

    def __init__(self, p: int, f: int) -> None:
        if not is_prime(p):
            raise PreconditionError(f"{p} is not prime")
        if f < 1:
            raise PreconditionError("residue degree f must be positive")
        self.p = p
        self.f = f
        self.q = q = p**f
        if f == 1:
            g = next(
                c for c in range(1, p) if _order_of_x(((-c) % p, 1), p, 1) == p - 1
            ) if p > 2 else 1
            self.res_modulus = ((-g) % p, 1)
            self.eta = g
            exp = [1]
            for _ in range(q - 2):
                exp.append(exp[-1] * g % p)
        else:
            self.res_modulus = self._least_primitive_poly(p, f)
            self.eta = p  # the class of x
            exp = []
            cur = [1] + [0] * (f - 1)
            for _ in range(q - 1):
                exp.append(_undigits(cur, p))
                cur = _times_x(cur, self.res_modulus, p)
        self.exp = tuple(exp)
        log = [-1] * q
        for i, x in enumerate(exp):
            log[x] = i
        if min(log[1:]) < 0:
            raise AssertionError("eta does not generate k^x")
        self.log = tuple(log)
        digs = [_digits(x, p, f) for x in range(q)]
        self.add = tuple(
            tuple(_undigits([(a + b) % p for a, b in zip(digs[x], digs[y])], p) for y in range(q))
            for x in range(q)
        )
        self.neg = tuple(_undigits([(-a) % p for a in digs[x]], p) for x in range(q))
        self.sub = tuple(tuple(self.add[x][self.neg[y]] for y in range(q)) for x in range(q))
        m = q - 1
        self.mul = tuple(
            tuple(0 if x == 0 or y == 0 else exp[(log[x] + log[y]) % m] for y in range(q))
            for x in range(q)
        )
        self.inv = tuple(0 if x == 0 else exp[(-log[x]) % m] for x in range(q))
        # absolute trace k -> F_p: z + z^p + ... + z^(p^(f-1))
        tr = []
        for z in range(q):
            acc, cur = 0, z
            for _ in range(f):
                acc = self.add[acc][cur]
                cur = self._pow(cur, p)
            tr.append(acc)  # lies in F_p, i.e. digit 0 only
        self.trace = tuple(tr)
        self.minus_one = self.neg[1]

    @staticmethod
    def _least_primitive_poly(p: int, f: int) -> tuple[int, ...]:
        for code in range(p**f):
            low = _digits(code, p, f)
            modulus = tuple(low) + (1,)
            if low[0] == 0:
                continue
            if _order_of_x(modulus, p, f) == p**f - 1:
                return modulus
        raise AssertionError("no primitive polynomial found")

    def _pow(self, x: int, k: int) -> int:
        if x == 0:
            return 0 if k else 1
        return self.exp[(self.log[x] * k) % (self.q - 1)]

    def power(self, x: int, k: int) -> int:
        if x == 0 and k < 0:
            raise NotInvertibleError("0 in the residue field")
        return self._pow(x, k)

    def eta_pow(self, k: int) -> int:
        return self.exp[k % (self.q - 1)]

    def dlog(self, x: int) -> int:
        if x == 0:
            raise NotInvertibleError("0 in the residue field")
        return self.log[x]

    def from_int(self, n: int) -> int:
        return n % self.p

    def basis(self) -> list[int]:
        """F_p-basis of k: the monomials 1, x, ..., x^(f-1)."""
        return [self.p**i for i in range(self.f)]

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldParams) and (self.p, self.f) == (other.p, other.f)

    def __hash__(self) -> int:
        return hash((self.p, self.f))

    def __repr__(self) -> str:
        return f"FieldParams(p={self.p}, f={self.f})"

    def __reduce__(self):
        return (make_field, (self.p, self.f))

    def eta_name(self, x: int) -> str:
        if x == 0:
            return "0"
        k = self.log[x]
        return "1" if k == 0 else ("η" if k == 1 else f"η^{k}")


@lru_cache(maxsize=None)
def make_field(p: int, f: int = 1) -> FieldParams:
    return FieldParams(p, f)


@dataclass(frozen=True)
class TameExt:
    """E_r = F(u), u^n = eta^r * t; the base field itself is n = 1, r = 0."""

    params: FieldParams
    n: int
    r: int

    @property
    def e(self) -> int:
        return gcd(self.n, self.params.q - 1)

    @property
    def is_base(self) -> bool:
        return self.n == 1

    @property
    def var(self) -> str:
        return "t" if self.is_base else "u"

    def tag(self) -> dict:
        return {"n": self.n, "r": self.r}

    def __repr__(self) -> str:
        if self.is_base:
            return f"F(q={self.params.q})"
        return f"E(q={self.params.q}, n={self.n}, r={self.r})"


def base_field(params: FieldParams) -> TameExt:
    return TameExt(params, 1, 0)


def make_extension(params: FieldParams, n: int, r: int) -> TameExt:
    if n < 1:
        raise PreconditionError("degree must be positive")
    if gcd(n, params.p) != 1:
        raise PreconditionError(f"wild degree unsupported: gcd({n}, {params.p}) != 1")
    e = gcd(n, params.q - 1)
    if not 0 <= r < e:
        raise PreconditionError(f"r={r} out of range [0, {e})")
    return TameExt(params, n, r)


def all_extensions(params: FieldParams, n: int) -> list[TameExt]:
    if gcd(n, params.p) != 1:
        raise PreconditionError(f"wild degree unsupported: gcd({n}, {params.p}) != 1")
    return [make_extension(params, n, r) for r in range(gcd(n, params.q - 1))]


# -- truncated series ---------------------------------------------------------


@dataclass(frozen=True)
class LaurentTrunc:
    """sum coeffs[i] * u^(val+i) + O(u^abs_prec).

    The zero element has ``val is None`` and no coefficients; its ``abs_prec``
    records how far it is known to vanish.
    """

    field: TameExt
    val: int | None
    coeffs: tuple[int, ...]
    abs_prec: int

    @property
    def prec(self) -> int:
        return len(self.coeffs)

    @property
    def k(self) -> FieldParams:
        return self.field.params

    def is_zero(self) -> bool:
        return self.val is None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_coeffs(
        cls, field: TameExt, start: int, digits: Iterable[int], abs_prec: int | None = None
    ) -> LaurentTrunc:
        ds = list(digits)
        if abs_prec is None:
            abs_prec = start + len(ds)
        ds = ds[: max(0, abs_prec - start)]
        ds += [0] * (abs_prec - start - len(ds))
        i = 0
        while i < len(ds) and ds[i] == 0:
            i += 1
        if i == len(ds):
            return cls(field, None, (), abs_prec)
        return cls(field, start + i, tuple(ds[i:]), abs_prec)

    @classmethod
    def monomial(cls, field: TameExt, c: int, v: int, prec: int) -> LaurentTrunc:
        if c == 0:
            return cls(field, None, (), v + prec)
        return cls(field, v, (c,) + (0,) * (prec - 1), v + prec)

    @classmethod
    def one(cls, field: TameExt, prec: int) -> LaurentTrunc:
        return cls.monomial(field, 1, 0, prec)

    @classmethod
    def zero(cls, field: TameExt, abs_prec: int) -> LaurentTrunc:
        return cls(field, None, (), abs_prec)

    # -- access ---------------------------------------------------------------

    def coefficient(self, i: int) -> int:
        if i >= self.abs_prec:
            raise PrecisionError(
                f"coefficient of {self.field.var}^{i} not determined (known mod {self.field.var}^{self.abs_prec})"
            )
        if self.val is None or i < self.val:
            return 0
        return self.coeffs[i - self.val]

    def digits(self, start: int, stop: int) -> list[int]:
        return [self.coefficient(i) for i in range(start, stop)]

    def truncate(self, abs_prec: int) -> LaurentTrunc:
        if abs_prec > self.abs_prec:
            raise PrecisionError(f"cannot extend precision from {self.abs_prec} to {abs_prec}")
        if self.val is None:
            return LaurentTrunc(self.field, None, (), abs_prec)
        return LaurentTrunc.from_coeffs(self.field, self.val, self.coeffs, abs_prec)

    # -- arithmetic -------------------------------------------------------------

    def _same_field(self, other: LaurentTrunc) -> None:
        if self.field != other.field:
            raise PreconditionError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: LaurentTrunc) -> LaurentTrunc:
        self._same_field(other)
        add = self.k.add
        top = min(self.abs_prec, other.abs_prec)
        starts = [x.val for x in (self, other) if x.val is not None]
        if not starts:
            return LaurentTrunc.zero(self.field, top)
        lo = min(starts)
        if lo >= top:
            return LaurentTrunc.zero(self.field, top)
        ds = [add[self._c(i)][other._c(i)] for i in range(lo, top)]
        return LaurentTrunc.from_coeffs(self.field, lo, ds, top)

    def _c(self, i: int) -> int:
        # unchecked read inside the known range
        if self.val is None or i < self.val:
            return 0
        j = i - self.val
        return self.coeffs[j] if j < len(self.coeffs) else 0

    def __neg__(self) -> LaurentTrunc:
        if self.val is None:
            return self
        neg = self.k.neg
        return LaurentTrunc(self.field, self.val, tuple(neg[c] for c in self.coeffs), self.abs_prec)

    def __sub__(self, other: LaurentTrunc) -> LaurentTrunc:
        return self + (-other)

    def __mul__(self, other) -> LaurentTrunc:
        if isinstance(other, int):
            return self.scale(self.k.from_int(other))
        self._same_field(other)
        if self.val is None or other.val is None:
            if self.val is None and other.val is None:
                return LaurentTrunc.zero(self.field, self.abs_prec + other.abs_prec)
            z, x = (self, other) if self.val is None else (other, self)
            return LaurentTrunc.zero(self.field, z.abs_prec + x.val)
        rel = min(len(self.coeffs), len(other.coeffs))
        out = _conv(self.coeffs, other.coeffs, rel, self.k)
        return LaurentTrunc(self.field, self.val + other.val, tuple(out), self.val + other.val + rel)

    def scale(self, c: int) -> LaurentTrunc:
        """Multiply by a residue-field constant (a Teichmuller representative)."""
        if c == 0:
            return LaurentTrunc.zero(self.field, self.abs_prec)
        if self.val is None:
            return self
        mul = self.k.mul[c]
        return LaurentTrunc(self.field, self.val, tuple(mul[x] for x in self.coeffs), self.abs_prec)

    def shift(self, m: int) -> LaurentTrunc:
        """Multiply by u^m."""
        if self.val is None:
            return LaurentTrunc.zero(self.field, self.abs_prec + m)
        return LaurentTrunc(self.field, self.val + m, self.coeffs, self.abs_prec + m)

    def inverse(self) -> LaurentTrunc:
        if self.val is None:
            raise NotInvertibleError("zero series")
        k = self.k
        c0inv = k.inv[self.coeffs[0]]
        unit = [k.mul[c0inv][c] for c in self.coeffs]
        inv = _unit_inverse(unit, k)
        out = [k.mul[c0inv][c] for c in inv]
        return LaurentTrunc(self.field, -self.val, tuple(out), -self.val + len(out))

    def __truediv__(self, other: LaurentTrunc) -> LaurentTrunc:
        return self * other.inverse()

    def __pow__(self, e: int) -> LaurentTrunc:
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return LaurentTrunc.one(self.field, max(self.prec, 1))
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __str__(self) -> str:
        return format_laurent(self)


def _conv(a: Sequence[int], b: Sequence[int], n: int, k: FieldParams) -> list[int]:
    add, mul = k.add, k.mul
    out = [0] * n
    for i in range(n):
        ai = a[i]
        if ai == 0:
            continue
        row = mul[ai]
        for j in range(n - i):
            bj = b[j]
            if bj:
                out[i + j] = add[out[i + j]][row[bj]]
    return out


def _unit_inverse(a: Sequence[int], k: FieldParams) -> list[int]:
    """Inverse of a power series with a[0] == 1, to len(a) terms."""
    add, mul, neg = k.add, k.mul, k.neg
    n = len(a)
    out = [0] * n
    out[0] = 1
    for i in range(1, n):
        acc = 0
        for j in range(1, i + 1):
            if a[j] and out[i - j]:
                acc = add[acc][mul[a[j]][out[i - j]]]
        out[i] = neg[acc]
    return out


# -- field-level operations ------------------------------------------------------


def decompose_unit(x: LaurentTrunc) -> tuple[int, int, LaurentTrunc]:
    """Write x = u^v * eta^a * w with w a one-unit; returns (v, a, w)."""
    if x.val is None:
        raise NotInvertibleError("zero series")
    k = x.k
    c0 = x.coeffs[0]
    c0inv = k.inv[c0]
    w = LaurentTrunc(x.field, 0, tuple(k.mul[c0inv][c] for c in x.coeffs), len(x.coeffs))
    return x.val, k.log[c0], w


def embed_base(x: LaurentTrunc, ext: TameExt) -> LaurentTrunc:
    """Image of x in F under t -> eta^(-r) u^n."""
    if not x.field.is_base:
        raise PreconditionError("embed_base expects an element of the base field")
    k = x.k
    n, r = ext.n, ext.r
    if x.val is None:
        return LaurentTrunc.zero(ext, n * x.abs_prec)
    ds = []
    for i, c in enumerate(x.coeffs):
        m = x.val + i
        ds.append(k.mul[c][k.eta_pow(-r * m)])
        if i < len(x.coeffs) - 1:
            ds.extend([0] * (n - 1))
    return LaurentTrunc.from_coeffs(ext, n * x.val, ds, n * x.abs_prec)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def components(x: LaurentTrunc) -> list[LaurentTrunc]:
    """X_0..X_{n-1} in F with x = sum_s u^s X_s(t)."""
    ext = x.field
    n, r, k = ext.n, ext.r, x.k
    F = base_field(k)
    out = []
    for s in range(n):
        top = _ceil_div(x.abs_prec - s, n)
        if x.val is None:
            out.append(LaurentTrunc.zero(F, top))
            continue
        lo = _ceil_div(x.val - s, n)
        ds = []
        for m in range(lo, top):
            c = x._c(n * m + s)
            ds.append(k.mul[c][k.eta_pow(r * m)] if c else 0)
        out.append(LaurentTrunc.from_coeffs(F, lo, ds, top))
    return out


def trace(x: LaurentTrunc) -> LaurentTrunc:
    """tr_{E/F}: kills u^c for n not dividing c, and u^(nm) -> n (eta^r t)^m."""
    ext = x.field
    if ext.is_base:
        return x
    return components(x)[0] * ext.n


def norm(x: LaurentTrunc) -> LaurentTrunc:
    """N_{E/F} as the determinant of multiplication by x on the basis 1..u^(n-1)."""
    ext = x.field
    if ext.is_base:
        return x
    if x.val is None:
        raise NotInvertibleError("norm of zero")
    n, k = ext.n, x.k
    X = components(x)
    width = max(len(c.coeffs) for c in X) + 1
    tshift = LaurentTrunc.monomial(base_field(k), k.eta_pow(ext.r), 1, width)
    # column i is x * u^i
    M = [[None] * n for _ in range(n)]
    for i in range(n):
        for s in range(n):
            j = s + i
            M[j % n][i] = X[s] if j < n else X[s] * tshift
    total = None
    for perm in permutations(range(n)):
        term = None
        for col, row in enumerate(perm):
            term = M[row][col] if term is None else term * M[row][col]
        if _perm_sign(perm) < 0:
            term = -term
        total = term if total is None else total + term
    return total


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def trace_norm(x: LaurentTrunc, which: str) -> LaurentTrunc:
    if which == "trace":
        return trace(x)
    if which == "norm":
        return norm(x)
    raise PreconditionError(f"unknown operation {which!r}")


def norm_of_uniformizer(ext: TameExt, prec: int = 16) -> LaurentTrunc:
    """N(u) = (-1)^(n-1) eta^r t (exact; ``prec`` zero digits are carried)."""
    k = ext.params
    c = k.eta_pow(ext.r)
    if (ext.n - 1) % 2:
        c = k.neg[c]
    return LaurentTrunc.monomial(base_field(k), c, 1, prec)


def log_digits(w: Sequence[int], level: int, k: FieldParams) -> list[int]:
    """Truncated log of the one-unit with coefficients w[0..level] (w[0] == 1).

    Returns coefficients of u^0..u^level (the u^0 entry is always 0).
    """
    if k.p <= level:
        raise PreconditionError(f"level exceeds wild-exponent bound: p={k.p} <= {level}")
    n = level + 1
    z = [0] + list(w[1:n])
    z += [0] * (n - len(z))
    add, mul = k.add, k.mul
    out = [0] * n
    power = list(z)
    for i in range(1, n):
        if not any(power):
            break
        coef = k.inv[k.from_int(i)]
        if i % 2 == 0:
            coef = k.neg[coef]
        row = mul[coef]
        for j in range(n):
            if power[j]:
                out[j] = add[out[j]][row[power[j]]]
        if i < n - 1:
            power = _conv(power, z, n, k)
    return out


def trunc_log(w: LaurentTrunc, level: int) -> LaurentTrunc:
    """log(w) mod p^(level+1) for a one-unit w; needs p > level."""
    if w.val != 0 or w.coeffs[0] != 1:
        raise PreconditionError("trunc_log expects a one-unit (w = 1 mod p)")
    k = w.k
    if k.p <= level:
        raise PreconditionError(f"level exceeds wild-exponent bound: p={k.p} <= {level}")
    if w.abs_prec < level + 1:
        raise PrecisionError(f"need {level + 1} digits of w, have {w.abs_prec}")
    return LaurentTrunc.from_coeffs(w.field, 0, log_digits(w.coeffs, level, k), level + 1)


def format_laurent(x: LaurentTrunc) -> str:
    """Text form eta^a * u^v * (1 + c1 u + ...)."""
    var = x.field.var
    if x.val is None:
        return f"O({var}^{x.abs_prec})"
    v, a, w = decompose_unit(x)
    k = x.k
    head = []
    if a:
        head.append("η" if a == 1 else f"η^{a}")
    if v:
        head.append(var if v == 1 else f"{var}^{v}")
    tail = ["1"]
    for i, c in enumerate(w.coeffs[1:], start=1):
        if c:
            mono = var if i == 1 else f"{var}^{i}"
            name = k.eta_name(c)
            tail.append(mono if name == "1" else f"{name}·{mono}")
    tail.append(f"O({var}^{w.abs_prec})")
    body = "(" + " + ".join(tail) + ")"
    return "·".join(head + [body])


def laurent_to_dict(x: LaurentTrunc) -> dict:
    return {
        "field": x.field.tag(),
        "val": x.val,
        "coeffs": list(x.coeffs),
        "abs_prec": x.abs_prec,
    }


def laurent_from_dict(data: dict, params: FieldParams) -> LaurentTrunc:
    tag = data["field"]
    field = TameExt(params, int(tag["n"]), int(tag["r"]))
    if data["val"] is None:
        return LaurentTrunc.zero(field, int(data["abs_prec"]))
    return LaurentTrunc.from_coeffs(field, int(data["val"]), data["coeffs"], int(data["abs_prec"]))
