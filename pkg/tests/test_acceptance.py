"""Acceptance criteria A1-A6, run at their stated sizes with exact equality.

Each test records one PASS/FAIL line; the lines are printed at the end of the
pytest session (see conftest.py) and when this file is run as a script.
"""

from __future__ import annotations

import json
import random
import time
from itertools import product
from math import gcd

import pytest

from simplecusp.characters import AddChar, make_char
from simplecusp.cli import run_command
from simplecusp.cyclo import RootOfUnity
from simplecusp.epsilon import eps_simple_cuspidal_root, gauss_sum_tate
from simplecusp.hereditary import psi_product_sum, verify_gauss_identity
from simplecusp.localfield import LaurentTrunc, all_extensions, base_field, make_field
from simplecusp.pairs import enumerate_pairs
from simplecusp.verify import converse_check, field_separation_check, stability_sweep

RESULTS: dict[str, str] = {}

FIELDS = {2: (2, 1), 3: (3, 1), 5: (5, 1), 7: (7, 1), 9: (3, 2), 11: (11, 1), 13: (13, 1)}


def field(q: int):
    return make_field(*FIELDS[q])


def record(name: str, ok: bool, detail: str) -> None:
    RESULTS[name] = f"{name} {'PASS' if ok else 'FAIL'}: {detail}"
    print(RESULTS[name])


# -- A1 -------------------------------------------------------------------------

A1_GRID = [(2, 1, 1, 3), (2, 2, 1, 3), (3, 1, 1, 2), (3, 3, 1, 2), (2, 1, 2, 3)]


def test_a1_gauss_identity():
    failures, notes = [], []
    for n, e, l, q in A1_GRID:
        start = time.perf_counter()
        rep = verify_gauss_identity(field(q), n, e, l, M=2)
        elapsed = time.perf_counter() - start
        full = rep["counts"]["full_enumerated"]
        ok = rep["verdict"] == "PASS" and full and elapsed < 120
        notes.append(f"(n={n},e={e},l={l},q={q}) {rep['counts']['characters']} chars "
                     f"over {rep['counts']['full_enumeration']} matrices {elapsed:.1f}s")
        if not ok:
            failures.append((n, e, l, q, rep["counterexamples"][:1]))
    record("A1", not failures, "; ".join(notes))
    assert not failures, failures


# -- A2 -------------------------------------------------------------------------

A2_GRID = [(3, 2, 1), (3, 2, 4), (5, 2, 4), (2, 3, 1), (7, 3, 3), (9, 2, 2), (5, 4, 2)]


def test_a2_converse():
    failures, notes = [], []
    for q, n, M in A2_GRID:
        rep = converse_check(field(q), n, M)
        ok = rep.verdict == "PASS" and rep.elapsed < 60
        notes.append(f"(q={q},n={n},M={M}) {rep.pair_count} pairs {len(rep.violations)} violations "
                     f"{rep.elapsed:.1f}s")
        if not ok:
            failures.append((q, n, M, rep.violations[:1]))
    record("A2", not failures, "; ".join(notes))
    assert not failures, failures


# -- A3 -------------------------------------------------------------------------

A3_GRID = [(3, 7), (3, 13), (5, 11)]


def test_a3_stability():
    failures, notes = [], []
    for n, q in A3_GRID:
        rep = stability_sweep(field(q), n, chi_level=1)
        ok = rep.verdict == "PASS" and rep.comparisons == rep.pair_count * rep.details["characters"]
        notes.append(f"(n={n},q={q}) {rep.comparisons} (pair, chi) checks, "
                     f"order sum {'/'.join(rep.details['order_sum_paths'])}, {rep.elapsed:.1f}s")
        if not ok:
            failures.append((n, q, rep.violations[:1]))
    record("A3", not failures, "; ".join(notes))
    assert not failures, failures


# -- A4 -------------------------------------------------------------------------

A4_GRID = [(3, 2, 0, None), (5, 2, 1, 200), (9, 2, 0, None)]


def test_a4_field_separation():
    failures, notes = [], []
    for q, n, k, samples in A4_GRID:
        rep = field_separation_check(field(q), n, k, samples=samples, seed=0)
        ok = rep.verdict == "PASS" and rep.details["separated"] == rep.comparisons > 0
        notes.append(f"(q={q},n={n},k={k}) {rep.details.get('separated')}/{rep.comparisons} separated")
        if not ok:
            failures.append((q, n, k, rep.violations[:1]))
    record("A4", not failures, "; ".join(notes))
    assert not failures, failures


# -- A5 -------------------------------------------------------------------------


def _random_char(rng: random.Random, q: int, level: int):
    k = field(q)
    digits = [rng.randrange(1, k.q)] + [rng.randrange(k.q) for _ in range(level - 1)]
    M = rng.randrange(1, 5)
    return make_char(base_field(k), RootOfUnity(M, rng.randrange(M)), rng.randrange(k.q - 1), digits)


def _gauss_norms() -> bool:
    rng = random.Random(2024)
    for q, l in [(3, 1), (3, 2), (5, 1), (7, 1)]:
        for _ in range(50):
            tau = gauss_sum_tate(_random_char(rng, q, l))
            if tau * tau.conj() != q ** (l + 1):
                return False
    return True


def _product_sums() -> bool:
    for q in (2, 3, 5, 7, 9):
        psi = AddChar(field(q))
        if any(psi_product_sum(psi, u) != q for u in range(1, q)):
            return False
    return True


def _alpha_independence() -> bool:
    k = field(3)
    for P in enumerate_pairs(k, 2, 1, 4):
        alpha = LaurentTrunc.from_coeffs(P.ext, -1, P.theta.alpha_digits(), 1)
        base = eps_simple_cuspidal_root(P)
        for c in range(k.q):
            x = LaurentTrunc.from_coeffs(P.ext, 0, [1, c], 2)
            if eps_simple_cuspidal_root(P, alpha=alpha * x) != base:
                return False
    return True


def _field_counts() -> bool:
    for q, n in product((2, 3, 5, 7, 9), range(1, 7)):
        k = field(q)
        if n % k.p and len(all_extensions(k, n)) != gcd(n, q - 1):
            return False
    return True


def _psi_unit_invariance() -> bool:
    k = field(3)
    verdicts = {converse_check(k, 2, 4, psi=AddChar(k, b)).verdict for b in (1, 2)}
    return verdicts == {"PASS"}


def test_a5_property_suites():
    parts = {
        "|tau|^2=q^(l+1) x200": _gauss_norms(),
        "sum psi(uab)=q": _product_sums(),
        "alpha representatives": _alpha_independence(),
        "field census": _field_counts(),
        "psi-unit invariance": _psi_unit_invariance(),
    }
    record("A5", all(parts.values()), "; ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in parts.items()))
    assert all(parts.values()), parts


# -- A6 -------------------------------------------------------------------------


def test_a6_negative_control(capsys):
    code = run_command(["verify-converse", "--p", "3", "--f", "1", "--n", "2", "--M", "4",
                        "--corrupt", "0:0", "--threads", "1"])
    report = json.loads(capsys.readouterr().out)
    ok = code == 1 and len(report["violations"]) == 1
    record("A6", ok, f"exit code {code}, {len(report['violations'])} violation(s)")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
