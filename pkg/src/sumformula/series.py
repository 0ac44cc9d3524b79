"""Truncated evaluation of zeta, multiple zeta and multiple L-type series.

Every depth-``n`` series here runs over ``m_1, ..., m_n >= 1`` and its terms
only depend on the partial sums ``s_j = m_1 + ... + m_j``.  Truncation keeps
the tuples with ``s_n <= cap`` (a simplex), which turns each series into a
nested sum over ``0 = s_0 < s_1 < ... < s_n <= cap``.  Those nested sums are
computed level by level on arrays indexed by ``s`` in 80-bit extended
precision; the per-index results are merged with exact rational
accumulation, so the final double is independent of merge order.

The series ``S(k, m, J)`` is the exception: its free coordinates are capped
one by one (``m_j <= cap`` for ``j`` not in ``J``), matching
:func:`sumformula.combinatorics.enumerate_constrained_tuples`.

Tail estimates are heuristic upper bounds built from the standard
majorant ``1/(s_1 ... s_{n-1} s_n^{1+eps})``; they are not rigorous.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .combinatorics import (
    Index,
    SubsetJ,
    all_subsets,
    enumerate_constrained_tuples,
    enumerate_index_set,
    enumerate_index_set_prime,
)

REAL = np.longdouble
COMPLEX = np.clongdouble


@dataclass(frozen=True)
class TruncationSpec:
    cap: int

    def __post_init__(self) -> None:
        if int(self.cap) < 1:
            raise ValueError(f"cap must be positive, got {self.cap}")


@dataclass
class NumericResult:
    value: complex
    tail_estimate: float
    cap: int

    def __post_init__(self) -> None:
        if self.tail_estimate < 0:
            raise ValueError("tail estimate must be nonnegative")


@dataclass
class NumericCheck:
    """Outcome of a numeric identity check: ``lhs`` vs ``rhs`` at one cap."""

    name: str
    parameters: dict
    lhs: complex
    rhs: complex
    tail_estimate: float
    tol: float
    cap: int
    passed: bool = field(init=False)
    extra: dict = field(default_factory=dict)
    use_tail: bool = True

    def __post_init__(self) -> None:
        budget = self.tol + (self.tail_estimate if self.use_tail else 0.0)
        self.passed = bool(self.residual <= budget)

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


class WeightFunction:
    """A numerator ``f: N -> C``.

    Kinds: ``one`` (f = 1), ``power`` (f(m) = t^m, |t| <= 1), ``periodic``
    (f(m) = values[(m - 1) mod P]) and ``table`` (f(m) = values[m - 1] for
    m <= len(values), 0 beyond).
    """

    KINDS = ("one", "power", "periodic", "table")

    def __init__(self, kind: str, t: complex = 1.0, values: Sequence[complex] = ()):
        if kind not in self.KINDS:
            raise ValueError(f"unknown weight kind {kind!r}")
        self.kind = kind
        self.t = complex(t)
        self.values = tuple(complex(v) for v in values)
        if kind == "power" and abs(self.t) > 1:
            raise ValueError(f"power weight needs |t| <= 1, got t={t}")
        if kind in ("periodic", "table") and not self.values:
            raise ValueError(f"{kind} weight needs at least one value")

    @classmethod
    def constant_one(cls) -> "WeightFunction":
        return cls("one")

    @classmethod
    def power(cls, t: complex) -> "WeightFunction":
        return cls("power", t=t)

    @classmethod
    def periodic(cls, values: Sequence[complex]) -> "WeightFunction":
        return cls("periodic", values=values)

    @classmethod
    def table(cls, values: Sequence[complex]) -> "WeightFunction":
        return cls("table", values=values)

    @classmethod
    def from_periodic_file(cls, path: str | Path) -> "WeightFunction":
        """First line: the period ``P``; then ``P`` lines ``re im``."""
        lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
        if not lines or len(lines[0]) != 1:
            raise ValueError(f"{path}: first line must hold the period")
        period = int(lines[0][0])
        rows = lines[1:]
        if period < 1 or len(rows) != period:
            raise ValueError(f"{path}: expected {period} value lines, found {len(rows)}")
        values = []
        for row in rows:
            if len(row) != 2:
                raise ValueError(f"{path}: value lines must be 're im', got {' '.join(row)!r}")
            values.append(complex(float(row[0]), float(row[1])))
        return cls.periodic(values)

    @property
    def period(self) -> int:
        return len(self.values) if self.kind == "periodic" else 0

    def __call__(self, m: int) -> complex:
        if m < 1:
            raise ValueError(f"f is defined on positive integers, got {m}")
        if self.kind == "one":
            return 1.0
        if self.kind == "power":
            return self.t**m
        if self.kind == "periodic":
            return self.values[(m - 1) % len(self.values)]
        return self.values[m - 1] if m <= len(self.values) else 0.0

    def sup_norm(self) -> float:
        if self.kind == "one":
            return 1.0
        if self.kind == "power":
            return abs(self.t)
        return max(abs(v) for v in self.values)

    def constant_value(self) -> complex | None:
        """The value of ``f`` if it is constant on ``N``, else ``None``."""
        if self.kind == "one":
            return 1.0
        if self.kind == "power" and self.t == 1:
            return 1.0
        if self.kind == "periodic" and len(set(self.values)) == 1:
            return self.values[0]
        return None

    def is_real(self) -> bool:
        if self.kind == "one":
            return True
        if self.kind == "power":
            return self.t.imag == 0
        return all(v.imag == 0 for v in self.values)

    def describe(self) -> str:
        if self.kind == "one":
            return "one"
        if self.kind == "power":
            return f"power({_fmt_complex(self.t)})"
        return f"{self.kind}({','.join(_fmt_complex(v) for v in self.values)})"


def _fmt_complex(z: complex) -> str:
    return repr(z.real) if z.imag == 0 else repr(z)


def _cap(trunc: TruncationSpec | int) -> int:
    return trunc.cap if isinstance(trunc, TruncationSpec) else TruncationSpec(int(trunc)).cap


# ----------------------------------------------------------------------------
# exact merging of extended-precision partial results


class ExactAccumulator:
    """Sums binary floating values (including ``longdouble``) without rounding."""

    def __init__(self) -> None:
        self.re = Fraction(0)
        self.im = Fraction(0)

    def add(self, x, weight: int = 1) -> None:
        z = complex(0) if x is None else x
        if np.iscomplexobj(z):
            self.re += weight * Fraction(*np.longdouble(np.real(z)).as_integer_ratio())
            self.im += weight * Fraction(*np.longdouble(np.imag(z)).as_integer_ratio())
        else:
            self.re += weight * Fraction(*np.longdouble(z).as_integer_ratio())

    def value(self) -> complex:
        return complex(float(self.re), float(self.im))

    def real(self) -> float:
        return float(self.re)


def _inv_powers(cap: int, k: int) -> np.ndarray:
    s = np.arange(1, cap + 1, dtype=REAL)
    return s ** (-k)


def _exclusive_cumsum(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    np.cumsum(v[:-1], axis=0, out=out[1:])
    return out


# ----------------------------------------------------------------------------
# level transfers: G[s'] = sum_{s < s'} kernel(s' - s) * v[s]


def _transfer_plain(v: np.ndarray) -> np.ndarray:
    return _exclusive_cumsum(v)


def _transfer_geometric(v: np.ndarray, w: complex, one_minus: bool = False) -> np.ndarray:
    """Kernel ``w^d`` (or ``1 - w^d``) on a one-column state of ``v``'s dtype."""
    col = v[:, 0]
    kind = v.dtype.type
    w = kind(w) if np.iscomplexobj(v) else kind(complex(w).real)
    out = np.zeros_like(v)
    plain = geo = kind(0)
    for s in range(1, len(col)):
        prev = col[s - 1]
        geo = w * (geo + prev)
        if one_minus:
            plain = plain + prev
            out[s, 0] = plain - geo
        else:
            out[s, 0] = geo
    return out


def _transfer_cyclic(v: np.ndarray) -> np.ndarray:
    """Aux column tracks ``mu mod P``; the kernel advances it by ``d``."""
    out = np.zeros_like(v)
    g = np.zeros(v.shape[1], dtype=v.dtype)
    for s in range(1, v.shape[0]):
        g = np.roll(g + v[s - 1], 1)
        out[s] = g
    return out


def _transfer_bounded(v: np.ndarray) -> np.ndarray:
    """Aux column tracks ``mu`` up to ``T``; the last column absorbs overflow."""
    out = np.zeros_like(v)
    g = np.zeros(v.shape[1], dtype=v.dtype)
    for s in range(1, v.shape[0]):
        h = g + v[s - 1]
        g = np.empty_like(h)
        g[0] = 0
        g[1:-1] = h[:-2]
        g[-1] = h[-2] + h[-1]
        out[s] = g
    return out


def _nested(kvec: Index, cap: int, transfer_for, aux: int = 1, dtype=REAL) -> np.ndarray:
    """Level-by-level nested sum; returns the final state ``v[s, a]``."""
    v = np.zeros((cap + 1, aux), dtype=dtype)
    v[0, 0] = 1
    for j in range(1, kvec.depth + 1):
        v = transfer_for(j)(v)
        v[1:] *= _inv_powers(cap, kvec[j])[:, None]
    return v


def _sequential_total(col: np.ndarray):
    """Ascending-``s`` sum; monotone in the number of nonnegative terms."""
    if len(col) == 0:
        return col.dtype.type(0)
    return np.cumsum(col)[-1]


# ----------------------------------------------------------------------------
# public evaluators


def tail_estimate(kvec: Index, growth_exponent: float, cap: int) -> float:
    """Heuristic bound on the part of a weight-``k`` depth-``n`` series with ``s_n > cap``.

    Assumes a numerator bounded by ``mu^g`` with ``g = growth_exponent``.
    For ``n = 1`` this is the integral bound ``cap^{1-(k-g)} / (k-g-1)``.
    For ``n >= 2``, with ``e = min(k - n - g, 1)`` the majorant
    ``1/(s_1 ... s_{n-1} s_n^{1+e})`` summed over ``s_n > cap`` is compared
    with ``int_cap^inf (1 + log x)^{n-1} x^{-1-e} dx / (n-1)!``, giving
    ``e^{-n} cap^{-e} sum_{j<n} z^j / j!`` with ``z = e (1 + log cap)``.
    """
    n, k = kvec.depth, kvec.weight
    if cap < 1:
        raise ValueError(f"cap must be positive, got {cap}")
    if n == 1:
        slack = k - growth_exponent - 1
        if slack <= 0:
            raise ValueError(f"growth exponent {growth_exponent} too large for k={k}")
        return cap ** (-slack) / slack
    slack = k - n - growth_exponent
    if slack <= 0:
        raise ValueError(f"growth exponent {growth_exponent} must be below k - n = {k - n}")
    e = min(slack, 1.0)
    z = e * (1 + math.log(cap))
    series = sum(z**j / math.factorial(j) for j in range(n))
    return e ** (-n) * cap ** (-e) * series


def eval_zeta(k: int, trunc: TruncationSpec | int) -> NumericResult:
    """``sum_{m <= cap} m^{-k}``."""
    if k <= 1:
        raise ValueError(f"zeta({k}) diverges")
    cap = _cap(trunc)
    total = _sequential_total(_inv_powers(cap, k))
    return NumericResult(float(total), cap ** (1 - k) / (k - 1), cap)


def _mzv_raw(kvec: Index, cap: int):
    v = _nested(kvec, cap, lambda j: _transfer_plain)
    return _sequential_total(v[:, 0])


def eval_mzv(kvec: Index, trunc: TruncationSpec | int) -> NumericResult:
    """Truncated multiple zeta value over ``m_1 + ... + m_n <= cap``."""
    if not kvec.is_admissible():
        raise ValueError(f"{kvec} is not admissible (last part must be >= 2)")
    cap = _cap(trunc)
    return NumericResult(float(_mzv_raw(kvec, cap)), tail_estimate(kvec, 0, cap), cap)


def _L_raw(kvec: Index, f: WeightFunction, J: SubsetJ, cap: int):
    """Extended-precision truncated ``L(k, f, J)`` (real or complex scalar)."""
    const = f.constant_value()
    if const is not None:
        base = _mzv_raw(kvec, cap)
        return base if const == 1 else COMPLEX(const) * base
    if f.kind == "power":
        dtype = REAL if f.t.imag == 0 else COMPLEX
        t = f.t
        v = _nested(kvec, cap, lambda j: (lambda u: _transfer_geometric(u, t)) if j in J else _transfer_plain, dtype=dtype)
        return _sequential_total(v[:, 0])
    if f.kind == "periodic":
        P = f.period
        v = _nested(kvec, cap, lambda j: _transfer_cyclic if j in J else _transfer_plain, aux=P)
        weights = np.array([f(a if a else P) for a in range(P)], dtype=COMPLEX)
        return _sequential_total((v * weights[None, :]).sum(axis=1))
    W = regrouped_weights(kvec, J, cap, support=len(f.values))
    vals = np.array([0] + list(f.values), dtype=COMPLEX)
    return _sequential_total(W[: len(vals)] * vals[: len(W)])


def regrouped_weights(kvec: Index, J: SubsetJ, cap: int, support: int | None = None) -> np.ndarray:
    """``W[mu]``: sum of ``1/prod s_j^{k_j}`` over truncated tuples with ``sum_J m_j = mu``.

    Entries run over ``mu = 0..support`` (default ``cap``).
    """
    T = cap if support is None else min(support, cap)
    v = _nested(kvec, cap, lambda j: _transfer_bounded if j in J else _transfer_plain, aux=T + 2)
    cols = [_sequential_total(v[:, a]) for a in range(T + 1)]
    return np.array(cols, dtype=REAL)


def eval_L(kvec: Index, f: WeightFunction, J: SubsetJ, trunc: TruncationSpec | int) -> NumericResult:
    """Truncated ``sum f(sum_J m_j) / (m_1^{k_1} ... (m_1 + ... + m_n)^{k_n})``."""
    if J is None:
        raise ValueError("J must be a nonempty subset")
    if J.ambient_depth != kvec.depth:
        raise ValueError(f"J lives in 1..{J.ambient_depth}, index has depth {kvec.depth}")
    cap = _cap(trunc)
    acc = ExactAccumulator()
    acc.add(_L_raw(kvec, f, J, cap))
    tail = f.sup_norm() * tail_estimate(kvec, 0, cap) if kvec.is_admissible() else math.inf
    return NumericResult(acc.value(), tail, cap)


def _S_one_index(kvec: Index, J: SubsetJ, m: int, cap: int):
    n = kvec.depth
    smax = (n - J.cardinality()) * cap + m
    v = np.zeros((smax + 1, m + 1), dtype=REAL)
    v[0, 0] = 1
    s = np.arange(1, smax + 1, dtype=REAL)
    for j in range(1, n + 1):
        g = np.zeros_like(v)
        if j in J:
            for d in range(1, m + 1):
                g[d:, d:] += v[:-d, :-d]
        else:
            c = np.zeros_like(v)
            np.cumsum(v, axis=0, out=c)
            # g[s'] = sum_{s'-cap <= s < s'} v[s]
            g[1:] = c[:-1]
            g[cap + 1 :] -= c[: smax - cap]
        g[0] = 0
        g[1:] *= (s ** (-kvec[j]))[:, None]
        v = g
    return _sequential_total(v[:, m])


def eval_S_truncated(k: int, n: int, m: int, J: SubsetJ, trunc: TruncationSpec | int) -> NumericResult:
    """``S(k, m, J)`` with every coordinate outside ``J`` capped at ``cap``."""
    if k < n + 1:
        raise ValueError(f"need k >= n + 1, got k={k}, n={n}")
    if m < J.cardinality():
        return NumericResult(0.0, 0.0, _cap(trunc))
    cap = _cap(trunc)
    acc = ExactAccumulator()
    tail = 0.0
    for kvec in enumerate_index_set(k, n, J.maximum()):
        acc.add(_S_one_index(kvec, J, m, cap))
        if J.cardinality() < n:
            tail += tail_estimate(kvec, 0, cap)
    return NumericResult(acc.real(), tail, cap)


def eval_S_bruteforce(k: int, n: int, m: int, J: SubsetJ, cap: int) -> Fraction:
    """Term-by-term exact sum over :func:`enumerate_constrained_tuples`; small caps only."""
    total = Fraction(0)
    if m < J.cardinality():
        return total
    tuples = enumerate_constrained_tuples(m, J, n, cap)
    for kvec in enumerate_index_set(k, n, J.maximum()):
        for tup in tuples:
            denom, acc = 1, 0
            for kj, mj in zip(kvec.parts, tup):
                acc += mj
                denom *= acc**kj
            total += Fraction(1, denom)
    return total


def _lhs_thm1(n: int, k: int, f: WeightFunction, cap: int) -> tuple[complex, float]:
    acc = ExactAccumulator()
    tail = 0.0
    for J in all_subsets(n):
        sign = (-1) ** (J.cardinality() - 1)
        for kvec in enumerate_index_set(k, n, J.maximum()):
            acc.add(_L_raw(kvec, f, J, cap), sign)
            tail += f.sup_norm() * tail_estimate(kvec, 0, cap)
    return acc.value(), tail


def _rhs_series(k: int, cap: int, coeffs: Iterable[complex]) -> complex:
    acc = ExactAccumulator()
    w = _inv_powers(cap, k)
    c = np.fromiter(coeffs, dtype=np.complex128, count=cap).astype(COMPLEX)
    acc.add(_sequential_total(c * w))
    return acc.value()


def _check_divergence(n: int, k: int) -> None:
    if n < 1:
        raise ValueError(f"depth must be positive, got n={n}")
    if k < n + 1:
        raise ValueError(f"k={k} <= n={n}: no admissible index and the series diverge")


def check_thm1_numeric(n: int, k: int, f: WeightFunction, trunc: TruncationSpec | int, tol: float) -> NumericCheck:
    """Alternating ``L``-sum over ``J`` and ``I(k, max J)`` vs ``sum f(m)/m^k``."""
    _check_divergence(n, k)
    cap = _cap(trunc)
    lhs, tail = _lhs_thm1(n, k, f, cap)
    rhs = _rhs_series(k, cap, (f(m) for m in range(1, cap + 1)))
    tail += f.sup_norm() * cap ** (1 - k) / (k - 1)
    params = {"n": n, "k": k, "f": f.describe()}
    return NumericCheck("thm1_numeric", params, lhs, rhs, tail, tol, cap)


def check_thm2_numeric(n: int, k: int, m: int, trunc: TruncationSpec | int, tol: float) -> NumericCheck:
    """Alternating sum of truncated ``S(k, m, J)`` over all ``J`` vs ``1/m^k``."""
    _check_divergence(n, k)
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    cap = _cap(trunc)
    acc = ExactAccumulator()
    tail = 0.0
    for J in all_subsets(n):
        res = eval_S_truncated(k, n, m, J, cap)
        acc.add(res.value, (-1) ** (J.cardinality() - 1))
        tail += res.tail_estimate
    params = {"n": n, "k": k, "m": m}
    return NumericCheck(
        "thm2_numeric", params, acc.real(), float(Fraction(1, m**k)), tail, tol, cap, use_tail=False
    )


def _product_numerator_raw(kvec: Index, r: int, t: complex, cap: int):
    """Truncated ``sum (1 - t^{m_1}) ... (1 - t^{m_r}) / prod s_j^{k_j}``."""
    if t == 1:
        return REAL(0)
    dtype = COMPLEX if complex(t).imag != 0 else REAL

    def transfer(j):
        if j <= r:
            return lambda u: _transfer_geometric(u, t, one_minus=True)
        return _transfer_plain

    v = _nested(kvec, cap, transfer, dtype=dtype)
    return _sequential_total(v[:, 0])


def check_thm3_numeric(n: int, k: int, t: complex, trunc: TruncationSpec | int, tol: float) -> NumericCheck:
    """Product-numerator sum over ``I'(k, r)`` vs ``sum (1 - t^m)/m^k``.

    ``extra`` also carries the residual of the intermediate form with numerators
    ``1 - (1 - t^{m_1}) ... (1 - t^{m_r})`` against ``sum t^m / m^k``.
    """
    _check_divergence(n, k)
    t = complex(t)
    if abs(t) > 1:
        raise ValueError(f"need |t| <= 1, got t={t}")
    cap = _cap(trunc)
    lhs = ExactAccumulator()
    zetas = ExactAccumulator()
    tail = 0.0
    for r in range(1, n + 1):
        for kvec in enumerate_index_set_prime(k, n, r):
            lhs.add(_product_numerator_raw(kvec, r, t, cap))
            zetas.add(_mzv_raw(kvec, cap))
            tail += 2**r * tail_estimate(kvec, 0, cap)
    if t == 1:
        rhs = 0j
    else:
        rhs = _rhs_series(k, cap, (1 - t**m for m in range(1, cap + 1)))
    tail += 2 * cap ** (1 - k) / (k - 1)
    lhs_val = lhs.value()
    inter_lhs = zetas.value() - lhs_val
    inter_rhs = _rhs_series(k, cap, (t**m for m in range(1, cap + 1)))
    extra = {
        "intermediate_lhs": inter_lhs,
        "intermediate_rhs": inter_rhs,
        "intermediate_residual": abs(inter_lhs - inter_rhs),
    }
    params = {"n": n, "k": k, "t": _fmt_complex(t)}
    return NumericCheck("thm3_numeric", params, lhs_val, rhs, tail, tol, cap, extra=extra)


def check_sum_formula_numeric(n: int, k: int, trunc: TruncationSpec | int, tol: float) -> NumericCheck:
    """``sum_{I(k,1)} zeta(k)`` vs ``zeta(k)``, both truncated at the same cap."""
    _check_divergence(n, k)
    cap = _cap(trunc)
    acc = ExactAccumulator()
    tail = 0.0
    for kvec in enumerate_index_set(k, n, 1):
        acc.add(_mzv_raw(kvec, cap))
        tail += tail_estimate(kvec, 0, cap)
    rhs = eval_zeta(k, cap)
    params = {"n": n, "k": k}
    return NumericCheck("sum_formula_numeric", params, acc.real(), rhs.value, tail + rhs.tail_estimate, tol, cap)
