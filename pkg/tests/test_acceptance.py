"""Acceptance criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` or ``python3 tests/test_acceptance.py``.
Tolerances and parameter ranges are the contractual ones; nothing is relaxed.
"""
import random
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import pytest

from sumformula import exact, series
from sumformula.cli import main as cli_main
from sumformula.combinatorics import chain_partition_holds
from sumformula.exact import PVector

NUMERIC_TOL = 2e-3


def criterion_1():
    bad = []
    for n in range(1, 6):
        for k in range(n + 1, n + 7):
            for m in range(1, 31):
                total = sum(((-1) ** (l - 1) * exact.sum_S_closed(k, n, m, l) for l in range(1, n + 1)), Fraction(0))
                if total != Fraction(1, m**k):
                    bad.append((n, k, m))
    return not bad, f"900 points, {len(bad)} mismatches"


def criterion_2():
    bad = []
    for n in range(1, 7):
        for m in range(1, 31):
            if not exact.check_inclusion_exclusion(n, m, check_partition=False).passed:
                bad.append(("sum", n, m))
            if not chain_partition_holds(m, n):
                bad.append(("partition", n, m))
    return not bad, f"180 points, {len(bad)} mismatches"


def criterion_3():
    rng = random.Random(2024)
    failures = checks = 0
    for total in range(8):
        for s in range(total + 1):
            for _ in range(100):
                xs = exact.sample_positive_rationals(rng, s)
                ys = exact.sample_positive_rationals(rng, total - s)
                failures += not exact.check_shuffle_lemma(xs, ys).passed
                checks += 1
    for K in range(1, 21):
        for _ in range(10):
            x, y = exact.sample_nonzero_pair(rng)
            failures += not exact.check_partial_fraction(x, y, K).passed
            checks += 1
    for n in range(1, 6):
        for l in range(1, n + 1):
            for k in range(n + 1, n + 5):
                for m in range(1, 7):
                    for _ in range(2):
                        p = PVector(tuple(rng.randint(1, 8) for _ in range(n - l)), l)
                        failures += exact.eval_D_definition(l, p, k, n, m) != exact.eval_D_closed(l, p, k, n, m)
                        checks += 1
                        for t in range(l, n):
                            failures += not exact.check_telescoping(l, t, p, k, n, m).passed
                            checks += 1
    return failures == 0, f"{checks} exact checks, {failures} failures"


def criterion_4():
    worst = 0.0
    bad = []
    for k in (3, 4, 5):
        for m in range(1, 6):
            r = series.check_thm2_numeric(2, k, m, 4000, NUMERIC_TOL)
            worst = max(worst, r.residual)
            if r.residual > NUMERIC_TOL:
                bad.append((k, m))
    ladder = [series.check_thm2_numeric(2, 3, 2, cap, NUMERIC_TOL).residual for cap in (500, 1000, 2000, 4000)]
    decreasing = all(a > b for a, b in zip(ladder, ladder[1:]))
    detail = f"max residual {worst:.3e}, ladder {' > '.join(f'{x:.2e}' for x in ladder)}"
    return not bad and decreasing, detail


def criterion_5():
    rows = []
    for n in (2, 3):
        for k in range(n + 1, 8):
            r = series.check_sum_formula_numeric(n, k, 5000, NUMERIC_TOL)
            rows.append((n, k, r.residual))
    bad = [(n, k, f"{res:.2e}") for n, k, res in rows if res > NUMERIC_TOL]
    return not bad, f"{len(rows)} (n,k) pairs, over tolerance: {bad}"


def criterion_6():
    rows = []
    exact_one = True
    for n, k in ((2, 3), (2, 4), (3, 5)):
        for t in (0.5, -1, 1j, 0, 1):
            r = series.check_thm3_numeric(n, k, t, 4000, NUMERIC_TOL)
            rows.append((n, k, t, r.residual))
            if t == 1:
                exact_one &= r.lhs == 0 and r.rhs == 0
    for cap in (1, 37, 500):
        r = series.check_thm3_numeric(3, 5, 1, cap, NUMERIC_TOL)
        exact_one &= r.lhs == 0 and r.rhs == 0
    bad = [(n, k, t, f"{res:.2e}") for n, k, t, res in rows if res > NUMERIC_TOL]
    return not bad and exact_one, f"t=1 exactly zero: {exact_one}; over tolerance: {bad}"


def criterion_7():
    rng = random.Random(77)
    failures = checks = 0
    for r in range(1, 7):
        for _ in range(200):
            ms = [rng.randint(1, 10) for _ in range(r)]
            q = rng.randint(1, 12)
            t = Fraction(rng.randint(-q, q), q)
            failures += not exact.check_numerator_identity(t, ms, r).passed
            checks += 1
    return failures == 0, f"{checks} samples, {failures} failures"


DETERMINISM_COMMANDS = [
    ["verify", "exact", "--suite", "all", "--n", "1..3", "--m", "1..6", "--K", "1..6", "--max-blocks", "5", "--samples", "3", "--seed", "5"],
    ["verify", "numeric", "--thm", "3", "--n", "2..3", "--k", "5", "--t", "0.5,-1,i,0,1", "--cap", "600"],
    ["verify", "numeric", "--thm", "1", "--n", "2", "--k", "3..4", "--f", "power", "--t", "0.5", "--cap", "600"],
    ["verify", "numeric", "--thm", "2", "--n", "2", "--k", "3", "--m", "1..4", "--cap", "300"],
    ["enum", "chains", "--m", "1..4", "--n", "3", "--l", "1..3"],
]


def criterion_8():
    differing = []
    with tempfile.TemporaryDirectory() as tmp:
        for i, argv in enumerate(DETERMINISM_COMMANDS):
            for fmt in ("text", "json", "csv"):
                blobs = []
                for j, workers in enumerate((1, 1, 3)):
                    out = Path(tmp) / f"{i}-{fmt}-{j}"
                    cli_main(argv + ["--format", fmt, "--workers", str(workers), "--out", str(out)])
                    blobs.append(out.read_bytes())
                if len(set(blobs)) != 1:
                    differing.append((argv[:2], fmt))
    return not differing, f"{len(DETERMINISM_COMMANDS) * 3} command/format pairs, differing: {differing}"


CRITERIA = [
    ("1", "alternating S-sum equals 1/m^k, exact closed route", criterion_1),
    ("2", "exact inclusion-exclusion and partition identities", criterion_2),
    ("3", "lemma suite: shuffle, partial fractions, D_l, telescoping", criterion_3),
    ("4", "alternating S-sum from the definition, cap 4000, tol 2e-3", criterion_4),
    ("5", "sum formula instance, cap 5000, tol 2e-3", criterion_5),
    ("6", "product-numerator identity, cap 4000, tol 2e-3", criterion_6),
    ("7", "numerator polynomial identity, r <= 6", criterion_7),
    ("8", "byte-identical reports across runs and worker counts", criterion_8),
]


SUMMARY_LINES = []


def run_criterion(fn):
    start = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - start


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn):
    ok, detail, elapsed = run_criterion(fn)
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({elapsed:.1f}s) :: {detail}"
    SUMMARY_LINES.append(line)
    print(line)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for number, title, fn in CRITERIA:
        ok, detail, elapsed = run_criterion(fn)
        results.append(ok)
        print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({elapsed:.1f}s) :: {detail}", flush=True)
    sys.exit(0 if all(results) else 1)
