"""Principal hereditary orders in M_n(F) and brute-force matrix Gauss sums.

A principal order of ramification index e has e x e blocks of size n/e; the
entry (i, j) of P^m has valuation at least ceil((m - J + I) / e), where I, J
are the block indices of i and j.  Matrices are enumerated modulo P^m entry
by entry with those floors, reduced into the ring o/p^(l+1).

Instead of one pass per character, a pass over the matrices accumulates the
joint distribution of (det y, tr y) modulo p^(l+1); every Gauss sum is then a
short weighted sum over that histogram.
"""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Sequence

from .characters import AddChar, MultChar, iter_level_chars
from .cyclo import CycNum, QHalfExt
from .epsilon import EpsilonFactor, eps_det_twist, gauss_sum_tate
from .errors import BudgetExceededError, PreconditionError, ScopeError
from .localfield import FieldParams, LaurentTrunc, _perm_sign, base_field

DEFAULT_BUDGET = 20_000_000


@dataclass(frozen=True)
class HereditaryOrder:
    n: int
    e: int

    @property
    def block(self) -> int:
        return self.n // self.e

    def floor(self, m: int, i: int, j: int) -> int:
        """Minimal valuation of entry (i, j) in P^m."""
        I, J = i // self.block, j // self.block
        return -((-(m - J + I)) // self.e)

    def index_exponent(self, m: int) -> int:
        """log_q of (A : P^m)."""
        return self.n * self.n // self.e * m

    def index(self, q: int, m: int) -> int:
        return q ** self.index_exponent(m)


def make_order(n: int, e: int) -> HereditaryOrder:
    if n < 1 or e < 1 or n % e:
        raise PreconditionError(f"ramification index e={e} must divide n={n}")
    return HereditaryOrder(n, e)


class TruncRing:
    """o/p^L with elements encoded as sum a_s q^s (a_s residue codes)."""

    def __init__(self, k: FieldParams, L: int) -> None:
        self.k = k
        self.L = L
        self.size = k.q**L
        self._digits = [self._split(x) for x in range(self.size)]
        self.add = [[self._join([k.add[a][b] for a, b in zip(dx, dy)]) for dy in self._digits]
                    for dx in self._digits]
        self.neg = [self._join([k.neg[a] for a in dx]) for dx in self._digits]
        self.mul = [[self._mul(dx, dy) for dy in self._digits] for dx in self._digits]

    def _split(self, x: int) -> list[int]:
        out = []
        for _ in range(self.L):
            x, d = divmod(x, self.k.q)
            out.append(d)
        return out

    def _join(self, ds: Sequence[int]) -> int:
        x = 0
        for d in reversed(ds):
            x = x * self.k.q + d
        return x

    def _mul(self, a: Sequence[int], b: Sequence[int]) -> int:
        k = self.k
        out = [0] * self.L
        for i, x in enumerate(a):
            if x:
                for j in range(self.L - i):
                    if b[j]:
                        out[i + j] = k.add[out[i + j]][k.mul[x][b[j]]]
        return self._join(out)

    def digits(self, x: int) -> list[int]:
        return self._digits[x]

    def encode(self, ds: Sequence[int]) -> int:
        return self._join(list(ds) + [0] * (self.L - len(ds)))


def _entry_codes(ring: TruncRing, lo: int, hi: int) -> list[int]:
    """Codes of sum_{lo <= s < hi} a_s t^s, clipped to s < L."""
    q = ring.k.q
    hi = min(hi, ring.L)
    if lo >= hi:
        return [0]
    out = []
    for ds in product(range(q), repeat=hi - lo):
        out.append(ring.encode([0] * lo + list(ds)))
    return out


def lattice_size(order: HereditaryOrder, q: int, lo: int, hi: int) -> int:
    """Number of residues in P^lo / P^hi."""
    return q ** (order.index_exponent(hi) - order.index_exponent(lo))


def _position_lists(order: HereditaryOrder, ring: TruncRing, lo: int, hi: int, shift_identity: bool):
    n = order.n
    lists = []
    for i in range(n):
        for j in range(n):
            codes = _entry_codes(ring, order.floor(lo, i, j), order.floor(hi, i, j))
            if shift_identity and i == j:
                codes = [ring.add[c][1] for c in codes]
            lists.append(codes)
    return lists


def _histogram_chunk(args) -> dict:
    k, L, n, lists = args
    ring = _ring(k, L)
    add, mul, neg = ring.add, ring.mul, ring.neg
    perms = [(p, _perm_sign(p)) for p in permutations(range(n))]
    diag = [i * n + i for i in range(n)]
    unit_ok = [ring.digits(x)[0] != 0 for x in range(ring.size)]
    counts: Counter = Counter()
    for y in product(*lists):
        det = 0
        for perm, sign in perms:
            term = 1
            for col in range(n):
                term = mul[term][y[perm[col] * n + col]]
                if term == 0:
                    break
            if term:
                det = add[det][term] if sign > 0 else add[det][neg[term]]
        if not unit_ok[det]:
            continue
        tr = 0
        for d in diag:
            tr = add[tr][y[d]]
        counts[(det, tr)] += 1
    return dict(counts)


_RING_CACHE: dict = {}


def _ring(k: FieldParams, L: int) -> TruncRing:
    key = (k.p, k.f, L)
    if key not in _RING_CACHE:
        _RING_CACHE[key] = TruncRing(k, L)
    return _RING_CACHE[key]


def det_trace_histogram(
    order: HereditaryOrder,
    k: FieldParams,
    level: int,
    lo: int,
    hi: int,
    shift_identity: bool = False,
    workers: int = 1,
    partitions: int | None = None,
) -> Counter:
    """Counts of (det y, tr y) mod p^(level+1) over invertible y.

    y runs over P^lo / P^hi (plus the identity when ``shift_identity``).  The
    first matrix entry's range is split into ``partitions`` chunks; chunk
    histograms are merged by addition, so the result does not depend on the
    split or on the worker count.
    """
    ring = _ring(k, level + 1)
    lists = _position_lists(order, ring, lo, hi, shift_identity)
    parts = partitions or max(1, workers)
    first = lists[0]
    chunks = [first[i::parts] for i in range(parts)]
    jobs = [(k, level + 1, order.n, [c] + lists[1:]) for c in chunks if c]
    total: Counter = Counter()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_histogram_chunk, jobs))
    else:
        results = [_histogram_chunk(j) for j in jobs]
    for res in results:
        total.update(res)
    return total


def _sum_from_histogram(
    hist: Counter, order: HereditaryOrder, chi: MultChar, psi: AddChar, level: int
) -> CycNum:
    """sum over the histogram of chi^-1(det(c y)) psi(tr(c y))."""
    k = chi.params
    F = base_field(k)
    ring = _ring(k, level + 1)
    c = LaurentTrunc.from_coeffs(F, -level, chi.alpha_digits(), 1)
    cn = c**order.n
    N = chi.order
    step = N // k.p
    det_cache: dict[int, int] = {}
    counts: Counter = Counter()
    for (d, s), mult in hist.items():
        if d not in det_cache:
            dd = LaurentTrunc.from_coeffs(F, 0, ring.digits(d), level + 1)
            det_cache[d] = chi.exponent(cn * dd)
        ss = LaurentTrunc.from_coeffs(F, 0, ring.digits(s), level + 1)
        e = -det_cache[d] + psi.exponent_of_residue((c * ss).coefficient(0)) * step
        counts[e % N] += mult
    return CycNum.from_exponent_counts(N, counts)


def _check_char(chi: MultChar, psi: AddChar | None) -> AddChar:
    if not chi.field.is_base:
        raise PreconditionError("matrix Gauss sums need a character of F^x")
    if chi.level == 0:
        raise ScopeError("level-zero characters are refused")
    if psi is not None and psi != chi.psi:
        raise PreconditionError("the character's wild parameter is relative to a different psi")
    return chi.psi


def full_size(order: HereditaryOrder, q: int, level: int) -> int:
    return order.index(q, order.e * level + 1)


def matrix_gauss_full(
    order: HereditaryOrder,
    chi: MultChar,
    psi: AddChar | None = None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    hist: Counter | None = None,
) -> CycNum:
    """tau_A(chi, psi): the sum over all of U_A / U_A^(el+1)."""
    psi = _check_char(chi, psi)
    l, k = chi.level, chi.params
    if hist is None:
        size = full_size(order, k.q, l)
        if size > budget:
            raise BudgetExceededError(size, budget)
        hist = det_trace_histogram(order, k, l, 0, order.e * l + 1, workers=workers)
    return _sum_from_histogram(hist, order, chi, psi, l)


def reduced_bounds(order: HereditaryOrder, level: int) -> tuple[int, int]:
    el = order.e * level
    return (el + 1) // 2, el // 2 + 1


def matrix_gauss_reduced(
    order: HereditaryOrder,
    chi: MultChar,
    psi: AddChar | None = None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    hist: Counter | None = None,
) -> CycNum:
    """(A : P^c1) * sum over U^c1 / U^c2 with c1 = [(el+1)/2], c2 = [el/2] + 1."""
    psi = _check_char(chi, psi)
    l, k = chi.level, chi.params
    c1, c2 = reduced_bounds(order, l)
    if hist is None:
        if c1 >= c2:
            hist = Counter({(1, _ring(k, l + 1).encode([k.from_int(order.n)])): 1})
        else:
            size = lattice_size(order, k.q, c1, c2)
            if size > budget:
                raise BudgetExceededError(size, budget)
            hist = det_trace_histogram(order, k, l, c1, c2, shift_identity=True, workers=workers)
    return _sum_from_histogram(hist, order, chi, psi, l) * order.index(k.q, c1)


def normalized_matrix_gauss(order: HereditaryOrder, q: int, level: int, tau_A: CycNum) -> QHalfExt:
    """(A : P^(el+1))^(-1/2) * tau_A."""
    return QHalfExt.q_power(q, -order.index_exponent(order.e * level + 1)) * tau_A


def eps_det_from_order(order: HereditaryOrder, chi: MultChar, tau_A: CycNum) -> EpsilonFactor:
    """epsilon(chi o det) read through the hereditary order: exponent n*l."""
    q = chi.params.q
    return EpsilonFactor(order.n * chi.level, normalized_matrix_gauss(order, q, chi.level, tau_A))


def psi_product_sum(psi: AddChar, u: int) -> int | CycNum:
    """sum over a, b in k of psi(u a b)."""
    k = psi.params
    counts: Counter = Counter()
    for a in range(k.q):
        for b in range(k.q):
            counts[psi.exponent_of_residue(k.mul[u][k.mul[a][b]])] += 1
    return CycNum.from_exponent_counts(k.p, counts)


def verify_gauss_identity(
    params: FieldParams,
    n: int,
    e: int,
    level: int,
    chars: Iterable[MultChar] | None = None,
    psi: AddChar | None = None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    M: int = 1,
) -> dict:
    """Brute-force check of the matrix Gauss-sum identity and its consequences.

    For each character: full sum equals reduced sum; the normalized matrix sum
    equals q^(-n(l+1)/2) tau^n in the formal sqrt(q) ring; and the resulting
    epsilon of chi o det equals the n-th power of the Tate epsilon.  Also
    checks sum_{a,b} psi(u a b) = q for every unit u.
    """
    start = time.perf_counter()
    order = make_order(n, e)
    psi = psi or AddChar(params)
    if level < 1:
        raise ScopeError("level must be at least 1")
    if params.p <= level:
        raise PreconditionError(f"wild-bound violation: p={params.p} <= level {level}")
    F = base_field(params)
    if chars is None:
        chars = iter_level_chars(F, level, M, psi)
    chars = list(chars)
    q = params.q
    fsize = full_size(order, q, level)
    c1, c2 = reduced_bounds(order, level)
    rsize = lattice_size(order, q, c1, c2) if c1 < c2 else 1
    if rsize > budget:
        raise BudgetExceededError(rsize, budget)
    full_hist = None
    if fsize <= budget:
        full_hist = det_trace_histogram(order, params, level, 0, order.e * level + 1, workers=workers)
    red_hist = None
    if c1 < c2:
        red_hist = det_trace_histogram(order, params, level, c1, c2, shift_identity=True, workers=workers)

    per_char = []
    counterexamples = []
    for chi in chars:
        tau = gauss_sum_tate(chi, psi)
        tau_red = matrix_gauss_reduced(order, chi, psi, budget, hist=red_hist)
        checks = {}
        if full_hist is not None:
            tau_full = matrix_gauss_full(order, chi, psi, budget, hist=full_hist)
            checks["full_equals_reduced"] = tau_full == tau_red
            tau_A = tau_full
        else:
            tau_A = tau_red
        lhs = normalized_matrix_gauss(order, q, level, tau_A)
        rhs = QHalfExt.q_power(q, -n * (level + 1)) * tau**n
        checks["power_identity"] = lhs == rhs
        checks["det_epsilon"] = eps_det_from_order(order, chi, tau_A) == eps_det_twist(chi, n, psi)
        ok = all(checks.values())
        entry = {"chi": chi.to_dict(), "checks": checks, "ok": ok}
        per_char.append(entry)
        if not ok:
            counterexamples.append({
                "chi": chi.to_dict(),
                "checks": checks,
                "lhs": lhs.to_dict(),
                "rhs": rhs.to_dict(),
            })

    product_sums = []
    for u in range(1, q):
        val = psi_product_sum(psi, u)
        ok = val == q
        product_sums.append({"u": u, "ok": ok})
        if not ok:
            counterexamples.append({"u": u, "sum": val.to_dict()})

    return {
        "schema": 1,
        "check": "gauss",
        "parameters": {"p": params.p, "f": params.f, "q": q, "n": n, "e": e, "chi_level": level,
                       "psi_unit": psi.unit},
        "counts": {
            "characters": len(chars),
            "full_enumeration": fsize,
            "full_enumerated": full_hist is not None,
            "reduced_enumeration": rsize,
        },
        "characters": per_char,
        "product_sums": product_sums,
        "counterexamples": counterexamples,
        "verdict": "PASS" if not counterexamples else "FAIL",
        "runtime": {"elapsed_s": round(time.perf_counter() - start, 3), "threads": workers},
    }
