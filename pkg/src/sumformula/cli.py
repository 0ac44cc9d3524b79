"""Command-line driver: ``sumformula verify exact|numeric`` and ``sumformula enum ...``.

Exit status: 0 when every entry passes, 1 on any failed entry, 2 on usage
errors (including divergent parameter choices), 3 when ``--deadline-seconds``
runs out.
"""
from __future__ import annotations

import argparse
import itertools
import math
import random
import signal
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import combinatorics as comb
from . import exact
from . import series
from .report import FORMATS, Report, VerificationReport

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DEADLINE = 0, 1, 2, 3

EXACT_SUITES = ("thm2", "ie", "shuffle", "pf", "telescoping", "dclosed", "numerator", "achain")
NUMERIC_THEOREMS = ("1", "2", "3", "sf")


class UsageError(Exception):
    pass


class DeadlineExceeded(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"3"``, ``"2..5"`` or ``"1,4,7"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise argparse.ArgumentTypeError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer range: {text!r}") from None


def parse_complex_list(text: str) -> list[complex]:
    out = []
    for part in text.split(","):
        token = part.strip().replace("i", "j")
        if token in ("j", "+j"):
            token = "1j"
        elif token == "-j":
            token = "-1j"
        try:
            out.append(complex(Fraction(token)) if "/" in token else complex(token))
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a complex number: {part!r}") from None
    return out


# ----------------------------------------------------------------------------
# tasks: module-level so they can be shipped to worker processes


def _exact_task(name: str, kw: dict) -> VerificationReport:
    if name == "thm2":
        res = exact.check_thm2_closed(**kw)
    elif name == "ie":
        res = exact.check_inclusion_exclusion(**kw)
    elif name == "shuffle":
        res = exact.check_shuffle_lemma(**kw)
    elif name == "pf":
        res = exact.check_partial_fraction(**kw)
    elif name == "telescoping":
        res = exact.check_telescoping(kw["l"], kw["t"], exact.PVector(kw["p"], kw["l"]), kw["k"], kw["n"], kw["m"])
    elif name == "dclosed":
        p = exact.PVector(kw["p"], kw["l"])
        args = (kw["l"], p, kw["k"], kw["n"], kw["m"])
        res = exact.IdentityCheckResult(
            "D_definition_vs_closed",
            {"l": kw["l"], "p": kw["p"], "k": kw["k"], "n": kw["n"], "m": kw["m"]},
            exact.eval_D_definition(*args),
            exact.eval_D_closed(*args),
        )
    elif name == "numerator":
        res = exact.check_numerator_identity(**kw)
    elif name == "achain":
        res = exact.IdentityCheckResult(
            "A_two_forms", dict(kw), exact.eval_A(kw["l"], kw["m"]), exact.eval_A_chain(kw["l"], kw["m"])
        )
    else:
        raise KeyError(name)
    return VerificationReport.from_exact(res)


def _numeric_task(name: str, kw: dict) -> VerificationReport:
    if name == "1":
        res = series.check_thm1_numeric(kw["n"], kw["k"], kw["f"], kw["cap"], kw["tol"])
    elif name == "2":
        res = series.check_thm2_numeric(kw["n"], kw["k"], kw["m"], kw["cap"], kw["tol"])
    elif name == "3":
        res = series.check_thm3_numeric(kw["n"], kw["k"], kw["t"], kw["cap"], kw["tol"])
    elif name == "sf":
        res = series.check_sum_formula_numeric(kw["n"], kw["k"], kw["cap"], kw["tol"])
    else:
        raise KeyError(name)
    return VerificationReport.from_numeric(res)


def _run_task(task: tuple) -> VerificationReport:
    kind, name, kw = task
    return (_exact_task if kind == "exact" else _numeric_task)(name, kw)


# ----------------------------------------------------------------------------
# task lists


def _exact_tasks(suite: str, a: argparse.Namespace, rng: random.Random) -> list[tuple]:
    def pick(value, default):
        return default if value is None else value

    tasks = []
    if suite == "thm2":
        for n in pick(a.n, range(1, 6)):
            for extra in pick(a.k_extra, range(1, 7)):
                for m in pick(a.m, range(1, 31)):
                    tasks.append(("thm2", {"k": n + extra, "n": n, "m": m}))
    elif suite == "ie":
        for n in pick(a.n, range(1, 7)):
            for m in pick(a.m, range(1, 31)):
                tasks.append(("ie", {"n": n, "m": m}))
    elif suite == "shuffle":
        samples = pick(a.samples, 100)
        for total in range(pick(a.max_blocks, 7) + 1):
            for s in range(total + 1):
                for _ in range(samples):
                    xs = exact.sample_positive_rationals(rng, s)
                    ys = exact.sample_positive_rationals(rng, total - s)
                    tasks.append(("shuffle", {"xs": xs, "ys": ys}))
    elif suite == "pf":
        for K in pick(a.K, range(1, 21)):
            for _ in range(pick(a.samples, 5)):
                x, y = exact.sample_nonzero_pair(rng)
                tasks.append(("pf", {"x": x, "y": y, "K": K}))
    elif suite in ("telescoping", "dclosed"):
        samples = pick(a.samples, 2)
        for n in pick(a.n, range(1, 6)):
            for l in range(1, n + 1):
                ts = range(l, n) if suite == "telescoping" else [None]
                for t in ts:
                    for extra in pick(a.k_extra, range(1, 5)):
                        for m in pick(a.m, range(1, 7)):
                            for _ in range(samples):
                                p = tuple(rng.randint(1, 8) for _ in range(n - l))
                                kw = {"l": l, "p": p, "k": n + extra, "n": n, "m": m}
                                if t is not None:
                                    kw["t"] = t
                                tasks.append((suite, kw))
    elif suite == "numerator":
        for r in pick(a.r, range(1, 7)):
            for _ in range(pick(a.samples, 20)):
                ms = tuple(rng.randint(1, 10) for _ in range(r))
                q = rng.randint(1, 12)
                t = Fraction(rng.randint(-q, q), q)
                tasks.append(("numerator", {"t": t, "ms": ms, "r": r}))
    elif suite == "achain":
        for l in range(1, 7):
            for m in pick(a.m, range(1, 31)):
                tasks.append(("achain", {"l": l, "m": m}))
    else:
        raise UsageError(f"unknown suite {suite!r}")
    return [("exact", name, kw) for name, kw in tasks]


def _weight_from_args(a: argparse.Namespace) -> series.WeightFunction:
    spec = a.f
    if spec == "one":
        return series.WeightFunction.constant_one()
    if spec == "power":
        if len(a.t) != 1:
            raise UsageError("--f power needs exactly one --t value")
        return series.WeightFunction.power(a.t[0])
    if spec.startswith("periodic:"):
        return series.WeightFunction.from_periodic_file(spec.split(":", 1)[1])
    if spec.startswith("table:"):
        return series.WeightFunction.table(parse_complex_list(spec.split(":", 1)[1]))
    raise UsageError(f"unknown weight function {spec!r} (one, power, periodic:FILE, table:v1,v2,...)")


def _numeric_tasks(a: argparse.Namespace) -> list[tuple]:
    if a.cap < 1:
        raise UsageError("--cap must be positive")
    if not a.tol > 0:
        raise UsageError("--tol must be positive")
    tasks = []
    for n in a.n:
        for k in a.k:
            if n < 1 or k < n + 1:
                raise UsageError(
                    f"n={n}, k={k}: need k >= n + 1; otherwise I(k, 1) is empty and the series diverge"
                )
            base = {"n": n, "k": k, "cap": a.cap, "tol": a.tol}
            if a.thm == "1":
                tasks.append(("1", {**base, "f": _weight_from_args(a)}))
            elif a.thm == "2":
                for m in a.m:
                    if m < 1:
                        raise UsageError("--m values must be positive")
                    tasks.append(("2", {**base, "m": m}))
            elif a.thm == "3":
                for t in a.t:
                    if abs(t) > 1:
                        raise UsageError(f"t={t}: need |t| <= 1 for convergence")
                    tasks.append(("3", {**base, "t": t}))
            else:
                tasks.append(("sf", base))
    return [("numeric", name, kw) for name, kw in tasks]


# ----------------------------------------------------------------------------
# enumeration


def _enum_entries(a: argparse.Namespace) -> list[VerificationReport]:
    entries = []
    what = a.what
    if what == "indices":
        for k, n, r in itertools.product(a.k, a.n, a.r):
            if a.prime:
                found = comb.enumerate_index_set_prime(k, n, r)
                expected = _index_count(k, n, r) - _index_count(k, n, r + 1)
            else:
                found = comb.enumerate_index_set(k, n, r)
                expected = _index_count(k, n, r)
            name = "I_prime(k,r)" if a.prime else "I(k,r)"
            entries.append(_enum_entry(name, {"k": k, "n": n, "r": r}, [str(i) for i in found], expected))
    elif what == "chains":
        for m, n, l in itertools.product(a.m, a.n, a.l):
            found = comb.enumerate_chain_set(m, n, l)
            expected = math.comb(m - 1, l - 1) * math.comb(m + n - l - 1, n - l) if l <= n else 0
            items = ["(" + ",".join(map(str, c.entries)) + ")" for c in found]
            entries.append(_enum_entry("Q_l", {"m": m, "n": n, "l": l}, items, expected))
    elif what == "shuffles":
        for l, r in itertools.product(a.l, a.r):
            found = comb.enumerate_shuffles(l, r)
            items = ["(" + ",".join(map(str, s.mapping)) + ")" for s in found]
            entries.append(_enum_entry("Sh(l,r)", {"l": l, "r": r}, items, math.comb(r - 1, l - 1)))
    elif what == "subsets":
        for n, l, r in itertools.product(a.n, a.l, a.r):
            found = comb.enumerate_subsets(n, l, r)
            entries.append(_enum_entry("J(n,l,r)", {"n": n, "l": l, "r": r}, [str(J) for J in found], math.comb(r - 1, l - 1)))
    else:
        raise UsageError(f"unknown enumeration {what!r}")
    return entries


def _index_count(k: int, n: int, r: int) -> int:
    return 0 if r > n else math.comb(k - r - 1, n - r)


def _enum_entry(name: str, params: dict, items: list[str], expected: int) -> VerificationReport:
    return VerificationReport(
        identity=name,
        mode="enumeration",
        parameters=params,
        passed=len(items) == expected,
        items=items,
        count=len(items),
        extra={"expected_count": expected},
    )


# ----------------------------------------------------------------------------
# driver


def _run_tasks(tasks: list[tuple], workers: int) -> list[VerificationReport]:
    if workers <= 1 or len(tasks) <= 1:
        return [_run_task(t) for t in tasks]
    pool = ProcessPoolExecutor(max_workers=workers)
    try:
        chunk = max(1, len(tasks) // (4 * workers))
        return list(pool.map(_run_task, tasks, chunksize=chunk))
    except DeadlineExceeded:
        for proc in list(getattr(pool, "_processes", {}).values()):
            proc.terminate()
        raise
    finally:
        pool.shutdown(wait=False, cancel_futures=True)


def _on_alarm(signum, frame):
    raise DeadlineExceeded()


def _config_echo(a: argparse.Namespace) -> dict:
    skip = {"out", "format", "workers", "deadline_seconds", "handler"}
    out = {}
    for key, value in sorted(vars(a).items()):
        if key in skip or value is None:
            continue
        if isinstance(value, range):
            value = list(value)
        out[key] = value
    return out


def _cmd_verify_exact(a: argparse.Namespace) -> Report:
    rng = random.Random(a.seed)
    suites = EXACT_SUITES if a.suite == "all" else (a.suite,)
    tasks = [t for s in suites for t in _exact_tasks(s, a, rng)]
    return Report("verify exact", _config_echo(a), _run_tasks(tasks, a.workers))


def _cmd_verify_numeric(a: argparse.Namespace) -> Report:
    tasks = _numeric_tasks(a)
    return Report("verify numeric", _config_echo(a), _run_tasks(tasks, a.workers))


def _cmd_enum(a: argparse.Namespace) -> Report:
    return Report(f"enum {a.what}", _config_echo(a), _enum_entries(a))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--deadline-seconds", type=float, help="abort with exit status 3 after this long")
    common.add_argument("--workers", type=int, default=1, help="worker processes for independent parameter points")

    parser = argparse.ArgumentParser(prog="sumformula", description=__doc__.splitlines()[0])
    top = parser.add_subparsers(dest="command", required=True)

    verify = top.add_parser("verify", help="run identity checks")
    vsub = verify.add_subparsers(dest="mode", required=True)

    ex = vsub.add_parser("exact", parents=[common], help="exact rational identities")
    ex.add_argument("--suite", choices=EXACT_SUITES + ("all",), default="all")
    ex.add_argument("--n", type=parse_range)
    ex.add_argument("--k-extra", type=parse_range, help="k - n values")
    ex.add_argument("--m", type=parse_range)
    ex.add_argument("--r", type=parse_range)
    ex.add_argument("--K", type=parse_range, help="exponents for the partial-fraction identity")
    ex.add_argument("--max-blocks", type=int, help="largest s + t for the shuffle lemma")
    ex.add_argument("--samples", type=int, help="random samples per parameter point")
    ex.set_defaults(handler=_cmd_verify_exact)

    nu = vsub.add_parser("numeric", parents=[common], help="truncated series checks")
    nu.add_argument("--thm", choices=NUMERIC_THEOREMS, required=True, help="1, 2, 3 or sf (sum formula with f = 1)")
    nu.add_argument("--n", type=parse_range, required=True)
    nu.add_argument("--k", type=parse_range, required=True)
    nu.add_argument("--m", type=parse_range, default=[1])
    nu.add_argument("--t", type=parse_complex_list, default=[0.5])
    nu.add_argument("--f", default="one", help="one, power, periodic:FILE or table:v1,v2,...")
    nu.add_argument("--cap", type=int, default=4000)
    nu.add_argument("--tol", type=float, default=1e-3)
    nu.set_defaults(handler=_cmd_verify_numeric)

    en = top.add_parser("enum", help="list combinatorial sets")
    esub = en.add_subparsers(dest="what", required=True)
    p = esub.add_parser("indices", parents=[common])
    p.add_argument("--k", type=parse_range, required=True)
    p.add_argument("--n", type=parse_range, required=True)
    p.add_argument("--r", type=parse_range, required=True)
    p.add_argument("--prime", action="store_true", help="list I'(k, r) instead of I(k, r)")
    p = esub.add_parser("chains", parents=[common])
    p.add_argument("--m", type=parse_range, required=True)
    p.add_argument("--n", type=parse_range, required=True)
    p.add_argument("--l", type=parse_range, required=True)
    p = esub.add_parser("shuffles", parents=[common])
    p.add_argument("--l", type=parse_range, required=True)
    p.add_argument("--r", type=parse_range, required=True)
    p = esub.add_parser("subsets", parents=[common])
    p.add_argument("--n", type=parse_range, required=True)
    p.add_argument("--l", type=parse_range, required=True)
    p.add_argument("--r", type=parse_range, required=True)
    for sub in esub.choices.values():
        sub.set_defaults(handler=_cmd_enum)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler: Callable[[argparse.Namespace], Report] = args.handler
    previous = None
    if args.deadline_seconds is not None:
        previous = signal.signal(signal.SIGALRM, _on_alarm)
        signal.setitimer(signal.ITIMER_REAL, args.deadline_seconds)
    try:
        report = handler(args)
    except DeadlineExceeded:
        print(f"error: deadline of {args.deadline_seconds}s exceeded", file=sys.stderr)
        return EXIT_DEADLINE
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if previous is not None:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, previous)
    text = report.render(args.format)
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
