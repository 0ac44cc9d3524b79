"""Exact rational evaluation of the finite pieces of the proof.

All arithmetic is done with :class:`fractions.Fraction`, so every check is a
structural equality of reduced rationals, never a tolerance comparison.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .combinatorics import (
    Index,
    SubsetJ,
    chain_partition_holds,
    compositions,
    enumerate_chain_set,
    enumerate_index_set,
    subset_to_shuffle,
)

Rational = Fraction


@dataclass(frozen=True)
class PVector:
    """``(p_start, p_start+1, ...)``; entries past what a formula needs are ignored."""

    entries: tuple[int, ...]
    start: int = 1

    def __post_init__(self) -> None:
        entries = tuple(int(p) for p in self.entries)
        if any(p < 1 for p in entries):
            raise ValueError(f"p entries must be positive: {entries}")
        if self.start < 1:
            raise ValueError(f"start must be positive, got {self.start}")
        object.__setattr__(self, "entries", entries)

    def __getitem__(self, i: int) -> int:
        j = i - self.start
        if not 0 <= j < len(self.entries):
            raise IndexError(f"p_{i} not available (have p_{self.start}..p_{self.start + len(self.entries) - 1})")
        return self.entries[j]

    def span(self, a: int, b: int) -> int:
        """``p_a + ... + p_{b-1}`` (0 if ``b <= a``)."""
        return sum(self[i] for i in range(a, b))


@dataclass
class IdentityCheckResult:
    identity_name: str
    parameters: dict
    lhs: Fraction
    rhs: Fraction
    passed: bool = field(init=False)

    def __post_init__(self) -> None:
        self.passed = self.lhs == self.rhs

    @property
    def residual(self) -> Fraction:
        return self.lhs - self.rhs


def eval_A(l: int, m: int) -> Fraction:
    """``A_l``: sum of ``B_{1,l}(p)`` over ``p in N^{l-1}`` with ``p_1 + ... + p_{l-1} < m``."""
    if l < 1 or m < 1:
        raise ValueError(f"need l >= 1 and m >= 1, got l={l}, m={m}")
    if l == 1:
        return Fraction(1)
    # partial sums stay below m, so every denominator divides lcm(1..m-1)^(l-1)
    common = math.lcm(*range(1, m)) ** (l - 1)
    num = 0
    for s in range(l - 1, m):
        for p in compositions(s, l - 1):
            num += common // math.prod(itertools.accumulate(p))
    return Fraction(num, common)


def eval_A_chain(l: int, m: int) -> Fraction:
    """``A_l`` in decreasing-chain form ``sum 1/(q_1...q_{l-1})`` over ``m > q_1 > ... > q_{l-1} >= 1``."""
    if l < 1 or m < 1:
        raise ValueError(f"need l >= 1 and m >= 1, got l={l}, m={m}")
    return sum(
        (Fraction(1, math.prod(q)) for q in itertools.combinations(range(1, m), l - 1)),
        Fraction(0),
    )


def eval_B(l: int, r: int, p: PVector) -> Fraction:
    """``1 / (p_l (p_l + p_{l+1}) ... (p_l + ... + p_{r-1}))``; 1 when ``r = l``."""
    if l > r:
        raise ValueError(f"need l <= r, got l={l}, r={r}")
    denom, acc = 1, 0
    for i in range(l, r):
        acc += p[i]
        denom *= acc
    return Fraction(1, denom)


def eval_C(l: int, r: int, p: PVector, kvec: Index, m: int) -> Fraction:
    """``prod_{j=r}^{n} (m + p_l + ... + p_{j-1})^{-k_j}``."""
    n = kvec.depth
    if not l <= r <= n:
        raise ValueError(f"need l <= r <= n, got l={l}, r={r}, n={n}")
    base = m + p.span(l, r)
    denom = base ** kvec[r]
    for j in range(r + 1, n + 1):
        base += p[j - 1]
        denom *= base ** kvec[j]
    return Fraction(1, denom)


def check_partial_fraction(x: Fraction, y: Fraction, K: int) -> IdentityCheckResult:
    """``sum_{i=1}^K x^{-i} y (x+y)^{-(K+1-i)} + (x+y)^{-K} = x^{-K}``."""
    x, y = Fraction(x), Fraction(y)
    if x == 0 or y == 0 or x + y == 0:
        raise ValueError(f"degenerate input x={x}, y={y}")
    if K < 1:
        raise ValueError(f"K must be positive, got {K}")
    s = x + y
    lhs = sum((y / (x**i * s ** (K + 1 - i)) for i in range(1, K + 1)), Fraction(0))
    lhs += 1 / s**K
    return IdentityCheckResult("partial_fraction", {"x": x, "y": y, "K": K}, lhs, 1 / x**K)


def _nested_reciprocal(zs: Sequence[Fraction]) -> Fraction:
    """``1 / (z_1 (z_1 + z_2) ... (z_1 + ... + z_s))``."""
    out, acc = Fraction(1), Fraction(0)
    for z in zs:
        acc += z
        if acc == 0:
            raise ZeroDivisionError(f"vanishing partial sum in {list(zs)}")
        out /= acc
    return out


def interleavings(xs: Sequence, ys: Sequence) -> Iterable[tuple]:
    """All shuffles of ``xs`` and ``ys`` preserving the order inside each."""
    s, t = len(xs), len(ys)
    for slots in itertools.combinations(range(s + t), s):
        z, xi, yi = [], iter(xs), iter(ys)
        chosen = set(slots)
        for pos in range(s + t):
            z.append(next(xi) if pos in chosen else next(yi))
        yield tuple(z)


def check_shuffle_lemma(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> IdentityCheckResult:
    xs = [Fraction(x) for x in xs]
    ys = [Fraction(y) for y in ys]
    lhs = sum((_nested_reciprocal(z) for z in interleavings(xs, ys)), Fraction(0))
    rhs = _nested_reciprocal(xs) * _nested_reciprocal(ys)
    return IdentityCheckResult(
        "shuffle_lemma",
        {"xs": xs, "ys": ys, "s": len(xs), "t": len(ys)},
        lhs,
        rhs,
    )


def eval_D_definition(l: int, p: PVector, k: int, n: int, m: int) -> Fraction:
    """``D_l(p) = sum_{r=l}^n B_{l,r}(p) sum_{I(k,r)} C_{l,r}(p, k)``."""
    if not 1 <= l <= n:
        raise ValueError(f"need 1 <= l <= n, got l={l}, n={n}")
    total = Fraction(0)
    for r in range(l, n + 1):
        inner = sum((eval_C(l, r, p, kv, m) for kv in enumerate_index_set(k, n, r)), Fraction(0))
        total += eval_B(l, r, p) * inner
    return total


def eval_D_closed(l: int, p: PVector, k: int, n: int, m: int) -> Fraction:
    """Closed form ``B_{l,n-1}(p) m^{-(k-n+1)} (1/P - 1/(m+P))`` with ``P = p_l + ... + p_{n-1}``.

    The formula needs at least one ``p`` coordinate; ``l = n`` falls back
    to the defining sum.
    """
    if not 1 <= l <= n:
        raise ValueError(f"need 1 <= l <= n, got l={l}, n={n}")
    if k < n + 1:
        raise ValueError(f"need k >= n + 1, got k={k}, n={n}")
    if l == n:
        return eval_D_definition(l, p, k, n, m)
    P = p.span(l, n)
    return eval_B(l, n - 1, p) * Fraction(1, m ** (k - n + 1)) * (Fraction(1, P) - Fraction(1, m + P))


def check_telescoping(l: int, t: int, p: PVector, k: int, n: int, m: int) -> IdentityCheckResult:
    """Partial sums of ``D_l`` over ``r = l..t`` collapse to one ``B_{l,t}`` term."""
    if not l <= t <= n - 1:
        raise ValueError(f"need l <= t <= n - 1, got l={l}, t={t}, n={n}")
    lhs = Fraction(0)
    for r in range(l, t + 1):
        inner = sum((eval_C(l, r, p, kv, m) for kv in enumerate_index_set(k, n, r)), Fraction(0))
        lhs += eval_B(l, r, p) * inner
    rhs = eval_B(l, t, p) * sum(
        (Fraction(1, m ** kv[t]) * eval_C(l, t + 1, p, kv, m) for kv in enumerate_index_set(k, n, t)),
        Fraction(0),
    )
    params = {"l": l, "t": t, "p": p.entries, "p_start": p.start, "k": k, "n": n, "m": m}
    return IdentityCheckResult("telescoping", params, lhs, rhs)


@lru_cache(maxsize=None)
def chain_sum(m: int, n: int, l: int) -> Fraction:
    """``sum_{q in Q_l} 1/(q_1 ... q_{n-1})`` by enumerating ``Q_l``."""
    if n == 1:
        return Fraction(len(enumerate_chain_set(m, n, l)))
    # every q_i divides lcm(1..m), so the products divide its (n-1)st power
    common = math.lcm(*range(1, m + 1)) ** (n - 1)
    num = sum(common // math.prod(c.entries) for c in enumerate_chain_set(m, n, l))
    return Fraction(num, common)


def _elementary(xs: Sequence[Fraction], degree: int) -> Fraction:
    e = [Fraction(1)] + [Fraction(0)] * degree
    for x in xs:
        for j in range(degree, 0, -1):
            e[j] += x * e[j - 1]
    return e[degree]


def _complete(xs: Sequence[Fraction], degree: int) -> Fraction:
    h = [Fraction(1)] + [Fraction(0)] * degree
    for x in xs:
        for j in range(1, degree + 1):
            h[j] += x * h[j - 1]
    return h[degree]


def chain_sum_factored(m: int, n: int, l: int) -> Fraction:
    """Same sum, using that ``Q_l`` is a product of a strict and a weak chain.

    The strict part contributes ``e_{l-1}(1, 1/2, ..., 1/(m-1))`` and the weak
    part ``h_{n-l}(1, 1/2, ..., 1/m)``.
    """
    if not 1 <= l <= n + 1:
        raise ValueError(f"need 1 <= l <= n + 1, got l={l}, n={n}")
    if l == n + 1:
        return Fraction(0)
    recips = [Fraction(1, q) for q in range(1, m + 1)]
    return _elementary(recips[:-1], l - 1) * _complete(recips, n - l)


def sum_S_closed(k: int, n: int, m: int, l: int) -> Fraction:
    """``sum_{|J|=l} S(k, m, J) = m^{-(k-n+1)} sum_{Q_l} 1/(q_1...q_{n-1})``."""
    if k < n + 1:
        raise ValueError(f"need k >= n + 1, got k={k}, n={n}")
    if not 1 <= l <= n or m < 1:
        raise ValueError(f"need 1 <= l <= n and m >= 1, got l={l}, n={n}, m={m}")
    return chain_sum(m, n, l) / m ** (k - n + 1)


def check_inclusion_exclusion(n: int, m: int, check_partition: bool = True) -> IdentityCheckResult:
    """Alternating chain sums equal ``1/m^{n-1}``; optionally also the set decompositions."""
    lhs = sum(((-1) ** (l - 1) * chain_sum_factored(m, n, l) for l in range(1, n + 1)), Fraction(0))
    res = IdentityCheckResult("inclusion_exclusion", {"n": n, "m": m}, lhs, Fraction(1, m ** (n - 1)))
    if check_partition:
        res.parameters["partition"] = chain_partition_holds(m, n)
        res.passed = res.passed and res.parameters["partition"]
    return res


def check_thm2_closed(k: int, n: int, m: int) -> IdentityCheckResult:
    if k < n + 1:
        raise ValueError(f"need k >= n + 1, got k={k}, n={n}")
    lhs = sum(((-1) ** (l - 1) * sum_S_closed(k, n, m, l) for l in range(1, n + 1)), Fraction(0))
    return IdentityCheckResult("thm2_closed", {"k": k, "n": n, "m": m}, lhs, Fraction(1, m**k))


def check_numerator_identity(t: Fraction, ms: Sequence[int], r: int) -> IdentityCheckResult:
    """Alternating sum of ``t^{sum_J m_j}`` over ``J != {}``, ``max J <= r`` vs ``1 - prod(1 - t^{m_j})``."""
    t = Fraction(t)
    if r < 1 or len(ms) < r or any(mj < 1 for mj in ms[:r]):
        raise ValueError(f"need r >= 1 and positive m_1..m_r, got r={r}, ms={list(ms)}")
    lhs = Fraction(0)
    for size in range(1, r + 1):
        for J in itertools.combinations(range(r), size):
            lhs += (-1) ** (size - 1) * t ** sum(ms[j] for j in J)
    rhs = 1 - math.prod((1 - t ** ms[j] for j in range(r)), start=Fraction(1))
    return IdentityCheckResult("numerator_identity", {"t": t, "ms": tuple(ms[:r]), "r": r}, lhs, rhs)


def eval_S_via_sigma(k: int, n: int, m: int, J: SubsetJ, cap: int) -> Fraction:
    """``S(k, m, J)`` in the shuffle parameterization, free ``p_l..p_{n-1}`` capped at ``cap``.

    With ``sigma`` the shuffle attached to ``J``, the constrained coordinates
    ``p_1..p_{l-1}`` satisfy ``p_1 + ... + p_{l-1} < m`` and the summand is
    ``1/(p_{s(1)} ... (p_{s(1)} + ... + p_{s(r-1)}))`` times
    ``sum_{I(k,r)} C_{l,r}(p, k)`` where ``s = sigma^{-1}``.
    """
    if k < n + 1:
        raise ValueError(f"need k >= n + 1, got k={k}, n={n}")
    if cap < 1:
        raise ValueError(f"cap must be positive, got {cap}")
    l, r = J.cardinality(), J.maximum()
    inv = subset_to_shuffle(J).inverse()
    indices = enumerate_index_set(k, n, r)
    heads = [h for s in range(l - 1, m) for h in compositions(s, l - 1)]
    total = Fraction(0)
    for head in heads:
        for free in itertools.product(range(1, cap + 1), repeat=n - l):
            p = PVector(head + free, 1)
            lead = _nested_reciprocal([p[inv[j - 1]] for j in range(1, r)])
            total += lead * sum((eval_C(l, r, p, kv, m) for kv in indices), Fraction(0))
    return total


def sample_positive_rationals(rng: random.Random, count: int, max_num: int = 20, max_den: int = 20) -> list[Fraction]:
    return [Fraction(rng.randint(1, max_num), rng.randint(1, max_den)) for _ in range(count)]


def sample_nonzero_pair(rng: random.Random, bound: int = 20) -> tuple[Fraction, Fraction]:
    """Random nonzero ``x``, ``y`` with ``x + y != 0``."""
    while True:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        y = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if x != 0 and y != 0 and x + y != 0:
            return x, y
