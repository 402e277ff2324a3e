"""Exhaustive and sampled checks of the converse theorem, field separation and
stability of epsilon under highly ramified twists.

A fingerprint of a pair is the data an observer sees through epsilon factors:
the exponent, the central character on the uniformizer and on eta, and the
epsilon of every level-zero twist.  The converse check asserts that two
enumerated pairs have equal fingerprints exactly when they are isomorphic.
"""

from __future__ import annotations

import random
import time
from math import gcd
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .characters import AddChar, MultChar, iter_level_chars, restrict_to_base, tame_char
from .cyclo import CycNum, QHalfExt, RootOfUnity
from .epsilon import EpsilonFactor, eps_det_twist, eps_simple_cuspidal, eps_simple_cuspidal_root
from .errors import PreconditionError
from .hereditary import (
    DEFAULT_BUDGET,
    eps_det_from_order,
    full_size,
    make_order,
    matrix_gauss_full,
    matrix_gauss_reduced,
)
from .localfield import FieldParams, LaurentTrunc, base_field
from .pairs import (
    AdmissiblePair,
    FieldIso,
    check_enumeration_params,
    enumerate_pairs,
    generators,
    pair_invariants,
    twist_pair,
)


def _cyc_key(x: CycNum) -> tuple:
    m = x.minimal()
    return (m.order, m.coeffs)


def _qhalf_key(x: QHalfExt) -> tuple:
    return (_cyc_key(x.base), _cyc_key(x.half))


@dataclass(frozen=True)
class Fingerprint:
    exponent: int
    omega_pi: RootOfUnity
    omega_teich: int
    tame_eps: tuple[QHalfExt, ...]

    def key(self) -> tuple:
        """Canonical hashable form; equal keys iff equal fingerprints."""
        return (
            self.exponent,
            self.omega_pi.normalized(),
            self.omega_teich,
            tuple(_qhalf_key(v) for v in self.tame_eps),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Fingerprint):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def corrupted(self, entry: int) -> Fingerprint:
        """Copy with tame_eps[entry] doubled (no longer a root of unity)."""
        if not 0 <= entry < len(self.tame_eps):
            raise PreconditionError(f"fingerprint entry {entry} out of range")
        eps = list(self.tame_eps)
        eps[entry] = eps[entry] * 2
        return Fingerprint(self.exponent, self.omega_pi, self.omega_teich, tuple(eps))

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "omega_pi": self.omega_pi.to_dict(),
            "omega_teich": self.omega_teich,
            "tame_eps": [v.to_dict() for v in self.tame_eps],
        }


def fingerprint(P: AdmissiblePair, psi: AddChar | None = None) -> Fingerprint:
    theta = P.theta
    psi = psi or theta.psi
    k = P.ext.params
    eps = []
    for j in range(k.q - 1):
        twisted = twist_pair(tame_char(k, j, psi), P)
        eps.append(eps_simple_cuspidal(twisted, psi).constant)
    _, omega = pair_invariants(P)
    return Fingerprint(P.level, omega.pi_value, omega.teich_exp, tuple(eps))


@dataclass
class VerifyReport:
    check: str
    parameters: dict
    pair_count: int
    comparisons: int
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0
    threads: int = 1
    skipped: str | None = None

    @property
    def verdict(self) -> str:
        if self.skipped is not None:
            return "SKIPPED"
        return "PASS" if not self.violations else "FAIL"

    @property
    def exit_code(self) -> int:
        return 1 if self.verdict == "FAIL" else 0

    def to_dict(self, runtime: bool = True) -> dict:
        out = {
            "schema": 1,
            "check": self.check,
            "parameters": self.parameters,
            "pair_count": self.pair_count,
            "comparisons": self.comparisons,
            "verdict": self.verdict,
            "violations": self.violations,
        }
        if self.skipped is not None:
            out["skipped_reason"] = self.skipped
        if self.details:
            out["details"] = self.details
        if runtime:
            out["runtime"] = {"elapsed_s": round(self.elapsed, 3), "threads": self.threads}
        return out


# -- converse -----------------------------------------------------------------


def _fingerprint_job(args) -> list[Fingerprint]:
    p, f, n, level, M, unit, lo, hi = args
    from .localfield import make_field

    params = make_field(p, f)
    psi = AddChar(params, unit)
    pairs = enumerate_pairs(params, n, level, M, psi)[lo:hi]
    return [fingerprint(P, psi) for P in pairs]


def _fingerprints(
    params: FieldParams, n: int, level: int, M: int, psi: AddChar,
    pairs: Sequence[AdmissiblePair], threads: int,
) -> list[Fingerprint]:
    if threads <= 1 or len(pairs) < 2 * threads:
        return [fingerprint(P, psi) for P in pairs]
    step = -(-len(pairs) // threads)
    jobs = [(params.p, params.f, n, level, M, psi.unit, lo, min(lo + step, len(pairs)))
            for lo in range(0, len(pairs), step)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        chunks = list(pool.map(_fingerprint_job, jobs))
    return [fp for chunk in chunks for fp in chunk]


def _iso_orbit_keys(pairs: Sequence[AdmissiblePair]) -> list[tuple]:
    """Keys with P_i isomorphic to P_j iff keys are equal.

    theta_1 = theta_2 o sigma is tested on generators, as in are_isomorphic:
    the key of P is r together with the set of vectors theta(sigma(g)) over
    all automorphisms sigma, which is the same set for every member of an
    orbit and disjoint for different orbits.
    """
    keys = []
    for P in pairs:
        gens = generators(P.ext, P.level)
        vecs = []
        for z in range(P.ext.e):
            sigma = FieldIso(P.ext, P.ext, z)
            vecs.append(tuple(P.theta(sigma.apply(g)).normalized() for g in gens))
        keys.append((P.r, frozenset(vecs)))
    return keys


def converse_check(
    params: FieldParams,
    n: int,
    M: int = 1,
    psi: AddChar | None = None,
    level: int = 1,
    threads: int = 1,
    corrupt: tuple[int, int] | None = None,
) -> VerifyReport:
    """fingerprint(P_i) == fingerprint(P_j) iff P_i and P_j are isomorphic, all i < j."""
    start = time.perf_counter()
    if level != 1:
        raise PreconditionError("the converse check is only claimed for level-one pairs")
    check_enumeration_params(params, n, level)
    psi = psi or AddChar(params)
    pairs = enumerate_pairs(params, n, level, M, psi)
    fps = _fingerprints(params, n, level, M, psi, pairs, threads)
    if corrupt is not None:
        i, entry = corrupt
        if not 0 <= i < len(fps):
            raise PreconditionError(f"pair index {i} out of range")
        fps[i] = fps[i].corrupted(entry)
    fkeys = [fp.key() for fp in fps]
    okeys = _iso_orbit_keys(pairs)
    violations = []
    comparisons = 0
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            comparisons += 1
            same_fp = fkeys[i] == fkeys[j]
            iso = okeys[i] == okeys[j]
            if same_fp != iso:
                violations.append({
                    "i": i,
                    "j": j,
                    "direction": "fingerprint-equal-not-isomorphic" if same_fp
                    else "isomorphic-fingerprint-differs",
                    "pair_i": pairs[i].to_dict(),
                    "pair_j": pairs[j].to_dict(),
                    "fingerprint_i": fps[i].to_dict(),
                    "fingerprint_j": fps[j].to_dict(),
                })
    classes = len(set(okeys))
    return VerifyReport(
        check="converse",
        parameters={"p": params.p, "f": params.f, "q": params.q, "n": n, "level": level,
                    "M": M, "psi_unit": psi.unit,
                    **({"corrupt": list(corrupt)} if corrupt is not None else {})},
        pair_count=len(pairs),
        comparisons=comparisons,
        violations=violations,
        details={"isomorphism_classes": classes, "distinct_fingerprints": len(set(fkeys))},
        elapsed=time.perf_counter() - start,
        threads=threads,
    )


# -- field separation ---------------------------------------------------------


def separation_witness(P1: AdmissiblePair, P2: AdmissiblePair) -> dict:
    """Arithmetic witness d with eps(chi_j P1)/eps(chi_j P2) = R_0 * zeta_(q-1)^(-j d).

    With L = a' n + b and a_i = dlog(lead alpha_i) - r_i a', the exponent is
    d = n (a_1 - a_2) + b (r_2 - r_1).
    """
    k = P1.ext.params
    n, L = P1.n, P1.level
    a_prime, b = divmod(L, n)
    a1 = k.dlog(P1.theta.alpha_digits()[0]) - P1.r * a_prime
    a2 = k.dlog(P2.theta.alpha_digits()[0]) - P2.r * a_prime
    d = n * (a1 - a2) + b * (P2.r - P1.r)
    return {
        "a1": a1, "a2": a2, "a_prime": a_prime, "b": b,
        "d": d % (k.q - 1),
        "d_alt_sign": (n * (a1 - a2) - b * (P2.r - P1.r)) % (k.q - 1),
    }


def _separation_record(P1, P2, f1: Fingerprint, f2: Fingerprint) -> dict:
    k = P1.ext.params
    w = separation_witness(P1, P2)
    ratios = [a.base / b.base for a, b in zip(f1.tame_eps, f2.tame_eps)]
    sep = next((j for j, R in enumerate(ratios) if R != 1), None)
    consistent = all(
        R == ratios[0] * RootOfUnity(k.q - 1, -j * w["d"]).to_cyc()
        for j, R in enumerate(ratios)
    )
    return {"separating_j": sep, "witness": w, "ratio_law_holds": consistent}


def field_separation_check(
    params: FieldParams,
    n: int,
    k: int = 0,
    samples: int | None = 200,
    seed: int = 0,
    psi: AddChar | None = None,
    M: int = 1,
    threads: int = 1,
) -> VerifyReport:
    """Cross-field pairs (r_1 != r_2) at level 2k+1 must differ on some tame twist.

    ``samples=None`` compares every cross-field pair.  Sampling draws pairs with
    a seeded generator, so the report is reproducible.
    """
    start = time.perf_counter()
    level = 2 * k + 1
    psi = psi or AddChar(params)
    e = gcd(n, params.q - 1)
    params_out = {"p": params.p, "f": params.f, "q": params.q, "n": n, "k": k, "level": level,
                  "M": M, "samples": samples, "seed": seed, "psi_unit": psi.unit}
    if e == 1:
        return VerifyReport("field-separation", params_out, 0, 0,
                            skipped="only one tame extension of this degree (e = 1)",
                            elapsed=time.perf_counter() - start, threads=threads)
    check_enumeration_params(params, n, level)
    pairs = enumerate_pairs(params, n, level, M, psi)
    if samples is None:
        todo = [(i, j) for i in range(len(pairs)) for j in range(i + 1, len(pairs))
                if pairs[i].r != pairs[j].r]
    else:
        rng = random.Random(seed)
        todo = []
        while len(todo) < samples:
            i, j = rng.randrange(len(pairs)), rng.randrange(len(pairs))
            if pairs[i].r != pairs[j].r:
                todo.append((i, j))
    needed = sorted({i for ij in todo for i in ij})
    sub = [pairs[i] for i in needed]
    fps = dict(zip(needed, _fingerprints_for(params, psi, sub, threads)))
    violations = []
    separated = 0
    for i, j in todo:
        rec = _separation_record(pairs[i], pairs[j], fps[i], fps[j])
        ok = rec["separating_j"] is not None and rec["ratio_law_holds"] and rec["witness"]["d"] != 0
        if ok:
            separated += 1
        else:
            violations.append({"i": i, "j": j, "pair_i": pairs[i].to_dict(),
                               "pair_j": pairs[j].to_dict(), **rec})
    return VerifyReport(
        "field-separation", params_out, len(pairs), len(todo), violations,
        details={"separated": separated},
        elapsed=time.perf_counter() - start, threads=threads,
    )


def _fp_list_job(args) -> list[Fingerprint]:
    psi, pairs = args
    return [fingerprint(P, psi) for P in pairs]


def _fingerprints_for(params: FieldParams, psi: AddChar, pairs: list, threads: int) -> list[Fingerprint]:
    if threads <= 1 or len(pairs) < 2 * threads:
        return [fingerprint(P, psi) for P in pairs]
    step = -(-len(pairs) // threads)
    jobs = [(psi, pairs[lo:lo + step]) for lo in range(0, len(pairs), step)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return [fp for chunk in pool.map(_fp_list_job, jobs) for fp in chunk]


# -- stability ----------------------------------------------------------------


def _chi_alpha(chi: MultChar) -> LaurentTrunc:
    return LaurentTrunc.from_coeffs(base_field(chi.params), -chi.level, chi.alpha_digits(), 1)


def check_stability_params(P: AdmissiblePair, chi: MultChar) -> None:
    n, m = P.n, chi.level
    if not chi.field.is_base:
        raise PreconditionError("chi must be a character of F^x")
    if n * m <= 2 * P.level:
        raise PreconditionError(
            f"twist not highly ramified: need l(chi) > 2 l(theta)/n, got {m} vs {P.level}/{n}"
        )
    if (n * m) % 2 == 0:
        raise PreconditionError(f"n * l(chi) = {n * m} is even; outside odd-level epsilon scope")
    if chi.params.p <= n * m:
        raise PreconditionError(f"wild-bound violation: p={chi.params.p} <= n*l(chi) = {n * m}")


def det_twist_via_order(
    chi: MultChar, n: int, e: int | None = None, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> tuple[EpsilonFactor, str]:
    """epsilon(chi o det) from a hereditary-order Gauss sum; full sum if affordable."""
    order = make_order(n, e or n)
    if full_size(order, chi.params.q, chi.level) <= budget:
        tau_A = matrix_gauss_full(order, chi, budget=budget, workers=workers)
        how = "full"
    else:
        tau_A = matrix_gauss_reduced(order, chi, budget=budget, workers=workers)
        how = "reduced"
    return eps_det_from_order(order, chi, tau_A), how


@dataclass
class StabilityResult:
    ok: bool
    record: dict


def _as_root(x: EpsilonFactor) -> RootOfUnity | None:
    """The constant of x as an exact root of unity, or None if it is not one.

    Roots of unity in Q(zeta_m) have order dividing lcm(2, m), so the search
    over that order is complete.
    """
    c = x.constant
    if not c.half.is_zero():
        return None
    base = c.base
    N = base.order if base.order % 2 == 0 else 2 * base.order
    for k in range(N):
        if base == CycNum.zeta(N, k):
            return RootOfUnity(N, k)
    return None


def _det_sides(chi: MultChar, n: int, budget: int, cache: dict) -> tuple:
    key = (n, chi)
    if key not in cache:
        det_tate = eps_det_twist(chi, n)
        det_order, how = det_twist_via_order(chi, n, budget=budget)
        cache[key] = (det_tate, det_order, how, _as_root(det_tate), _as_root(det_order))
    return cache[key]


def stability_check(
    P: AdmissiblePair,
    chi: MultChar,
    psi: AddChar | None = None,
    budget: int = DEFAULT_BUDGET,
    cache: dict | None = None,
) -> StabilityResult:
    """eps(chi pi) = omega(c)^-1 eps(chi o det), c = alpha_chi, both RHS paths.

    Per-character right-hand sides are cached in ``cache``; when they are roots
    of unity the comparison is done on exponents, otherwise in the sqrt(q) ring.
    """
    check_stability_params(P, chi)
    if psi is not None and psi != P.theta.psi:
        raise PreconditionError("psi differs from the pair's additive character")
    cache = {} if cache is None else cache
    twisted = twist_pair(chi, P)
    lhs_root = eps_simple_cuspidal_root(twisted)
    det_tate, det_order, how, root_a, root_b = _det_sides(chi, P.n, budget, cache)
    w = restrict_to_base(P.theta)(_chi_alpha(chi)).inverse()
    same_exp = twisted.level == det_tate.exponent == det_order.exponent
    if root_a is not None and root_b is not None:
        checks = {
            "lhs_eq_rhs_tate": same_exp and lhs_root == w * root_a,
            "lhs_eq_rhs_order": same_exp and lhs_root == w * root_b,
            "rhs_paths_agree": root_a == root_b,
        }
    else:
        lhs = EpsilonFactor(twisted.level, QHalfExt(P.ext.params.q, lhs_root.to_cyc(), 0))
        rhs_a, rhs_b = det_tate.scaled(w), det_order.scaled(w)
        checks = {"lhs_eq_rhs_tate": lhs == rhs_a, "lhs_eq_rhs_order": lhs == rhs_b,
                  "rhs_paths_agree": rhs_a == rhs_b}
    ok = all(checks.values())
    record = {"checks": checks, "order_sum": how}
    if not ok:
        record.update({
            "pair": P.to_dict(),
            "chi": chi.to_dict(),
            "lhs": EpsilonFactor(twisted.level, QHalfExt(P.ext.params.q, lhs_root.to_cyc(), 0)).to_dict(),
            "rhs_tate": det_tate.scaled(w).to_dict(),
            "rhs_order": det_order.scaled(w).to_dict(),
        })
    return StabilityResult(ok, record)


def stability_sweep(
    params: FieldParams,
    n: int,
    chi_level: int = 1,
    level: int = 1,
    M: int = 1,
    chi_M: int = 1,
    psi: AddChar | None = None,
    budget: int = DEFAULT_BUDGET,
) -> VerifyReport:
    """stability_check over every enumerated pair and every chi of the given level."""
    start = time.perf_counter()
    psi = psi or AddChar(params)
    check_enumeration_params(params, n, level)
    pairs = enumerate_pairs(params, n, level, M, psi)
    chars = list(iter_level_chars(base_field(params), chi_level, chi_M, psi))
    if chars:
        check_stability_params(pairs[0], chars[0])
    cache: dict = {}
    violations = []
    paths = set()
    for P in pairs:
        for chi in chars:
            res = stability_check(P, chi, psi, budget, cache)
            paths.add(res.record["order_sum"])
            if not res.ok:
                violations.append(res.record)
    return VerifyReport(
        "stability",
        {"p": params.p, "f": params.f, "q": params.q, "n": n, "level": level, "M": M,
         "chi_level": chi_level, "chi_M": chi_M, "psi_unit": psi.unit, "budget": budget},
        len(pairs), len(pairs) * len(chars), violations,
        details={"characters": len(chars), "order_sum_paths": sorted(paths)},
        elapsed=time.perf_counter() - start,
    )


__all__ = [
    "Fingerprint",
    "StabilityResult",
    "VerifyReport",
    "converse_check",
    "det_twist_via_order",
    "field_separation_check",
    "fingerprint",
    "separation_witness",
    "stability_check",
    "stability_sweep",
]
