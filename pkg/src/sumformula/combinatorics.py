"""Finite combinatorial objects behind the sum formula for multiple L-values.

Index sets ``I(k, r)`` and ``I'(k, r)``, subsets ``J`` of ``{1, ..., n}``,
shuffle permutations ``Sh(l, r)``, truncated solution sets ``M(m, J)`` and
the chain sets ``Q_l``.  Every enumeration is lexicographic and
duplicate-free.  Positions are 1-based throughout to match the usual
indexing ``k_1, ..., k_n``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np


@dataclass(frozen=True)
class Index:
    """A composition ``(k_1, ..., k_n)`` of the weight ``k``."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        if not parts:
            raise ValueError("an index needs at least one part")
        if any(p < 1 for p in parts):
            raise ValueError(f"index parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def depth(self) -> int:
        return len(self.parts)

    def __getitem__(self, j: int) -> int:
        """1-based access ``k_j``."""
        if not 1 <= j <= len(self.parts):
            raise IndexError(j)
        return self.parts[j - 1]

    def is_admissible(self) -> bool:
        return self.parts[-1] >= 2

    def in_index_set(self, r: int) -> bool:
        """Membership in ``I(k, r)``: ``k_n >= 2`` and ``k_1 = ... = k_{r-1} = 1``."""
        if r > self.depth:
            return False
        return self.is_admissible() and all(p == 1 for p in self.parts[: r - 1])

    def leading_ones(self) -> int:
        """The unique ``r`` with ``self`` in ``I'(k, r)``."""
        r = 1
        while r < self.depth and self.parts[r - 1] == 1:
            r += 1
        return r

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class SubsetJ:
    """A nonempty subset of ``{1, ..., n}``, stored sorted."""

    members: tuple[int, ...]
    ambient_depth: int

    def __post_init__(self) -> None:
        members = tuple(sorted(set(int(j) for j in self.members)))
        if not members:
            raise ValueError("J must be nonempty")
        if len(members) != len(self.members):
            raise ValueError(f"duplicate members in {self.members}")
        if members[0] < 1 or members[-1] > self.ambient_depth:
            raise ValueError(f"members {members} not inside 1..{self.ambient_depth}")
        object.__setattr__(self, "members", members)

    def cardinality(self) -> int:
        return len(self.members)

    def maximum(self) -> int:
        return self.members[-1]

    def __contains__(self, j: object) -> bool:
        return j in self.members

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"


@dataclass(frozen=True)
class Shuffle:
    """A bijection of ``{1, ..., r-1}``, increasing on ``{1..l-1}`` and ``{l..r-1}``.

    ``mapping[i - 1]`` is the image of ``i``.
    """

    mapping: tuple[int, ...]
    l: int
    r: int

    def __post_init__(self) -> None:
        if not 1 <= self.l <= self.r:
            raise ValueError(f"need 1 <= l <= r, got l={self.l}, r={self.r}")
        mapping = tuple(self.mapping)
        if sorted(mapping) != list(range(1, self.r)):
            raise ValueError(f"{mapping} is not a permutation of 1..{self.r - 1}")
        first, second = mapping[: self.l - 1], mapping[self.l - 1 :]
        if list(first) != sorted(first) or list(second) != sorted(second):
            raise ValueError(f"{mapping} is not monotone on both blocks")
        object.__setattr__(self, "mapping", mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    def inverse(self) -> tuple[int, ...]:
        """``inv[j - 1] = sigma^{-1}(j)``."""
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping, start=1):
            inv[j - 1] = i
        return tuple(inv)


@dataclass(frozen=True)
class ChainVector:
    """An element ``(q_1, ..., q_{n-1})`` of ``Q_l``."""

    entries: tuple[int, ...]
    split_index: int

    def is_chain(self, m: int) -> bool:
        l, q = self.split_index, self.entries
        head, tail = q[: l - 1], q[l - 1 :]
        if any(a <= b for a, b in zip(head, head[1:])):
            return False
        if head and not (m > head[0] and head[-1] >= 1):
            return False
        if any(a > b for a, b in zip(tail, tail[1:])):
            return False
        return not tail or (tail[0] >= 1 and tail[-1] <= m)


def _check_weight_depth(k: int, n: int) -> None:
    if n < 1:
        raise ValueError(f"depth must be positive, got n={n}")
    if k <= n:
        raise ValueError(f"no admissible index of weight {k} and depth {n} (need k >= n+1)")


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Compositions of ``total`` into ``parts`` positive parts, lexicographic."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_index_set(k: int, n: int, r: int) -> list[Index]:
    """``I(k, r)`` in lexicographic order; empty for ``r = n + 1``."""
    _check_weight_depth(k, n)
    if not 1 <= r <= n + 1:
        raise ValueError(f"r must lie in 1..{n + 1}, got {r}")
    if r == n + 1:
        return []
    prefix = (1,) * (r - 1)
    free = n - r + 1
    # the last part is >= 2: shift it down by one and compose.
    out = []
    for tail in compositions(k - (r - 1) - 1, free):
        parts = prefix + tail[:-1] + (tail[-1] + 1,)
        out.append(Index(parts))
    return out


def enumerate_index_set_prime(k: int, n: int, r: int) -> list[Index]:
    """``I'(k, r) = I(k, r) \\ I(k, r + 1)``."""
    _check_weight_depth(k, n)
    if not 1 <= r <= n:
        raise ValueError(f"r must lie in 1..{n}, got {r}")
    drop = set(enumerate_index_set(k, n, r + 1))
    return [idx for idx in enumerate_index_set(k, n, r) if idx not in drop]


def enumerate_subsets(n: int, l: int, r: int) -> list[SubsetJ]:
    """All ``J`` in ``{1..n}`` with ``|J| = l`` and ``max J = r``."""
    if l > r:
        raise ValueError(f"no subset of size {l} has maximum {r}")
    if not 1 <= l or not r <= n:
        raise ValueError(f"need 1 <= l <= r <= n, got l={l}, r={r}, n={n}")
    return [
        SubsetJ(head + (r,), n)
        for head in itertools.combinations(range(1, r), l - 1)
    ]


def all_subsets(n: int) -> list[SubsetJ]:
    """Every nonempty ``J`` in ``{1..n}``, ordered by ``(max J, |J|)`` then lexicographically."""
    return [J for r in range(1, n + 1) for l in range(1, r + 1) for J in enumerate_subsets(n, l, r)]


def enumerate_shuffles(l: int, r: int) -> list[Shuffle]:
    """``Sh(l, r)`` ordered lexicographically by mapping."""
    if not 1 <= l <= r:
        raise ValueError(f"need 1 <= l <= r, got l={l}, r={r}")
    size = r - 1
    out = []
    for image in itertools.combinations(range(1, r), l - 1):
        rest = [j for j in range(1, r) if j not in image]
        out.append(Shuffle(tuple(image) + tuple(rest), l, r))
    out.sort(key=lambda s: s.mapping)
    assert all(len(s.mapping) == size for s in out)
    return out


def shuffle_to_subset(s: Shuffle, n: int | None = None) -> SubsetJ:
    """``sigma({1, ..., l-1}) | {r}``."""
    image = s.mapping[: s.l - 1]
    return SubsetJ(tuple(image) + (s.r,), s.r if n is None else n)


def subset_to_shuffle(J: SubsetJ) -> Shuffle:
    """Inverse of :func:`shuffle_to_subset`."""
    r, l = J.maximum(), J.cardinality()
    head = J.members[:-1]
    rest = tuple(j for j in range(1, r) if j not in head)
    return Shuffle(head + rest, l, r)


def enumerate_chain_set(m: int, n: int, l: int) -> list[ChainVector]:
    """``Q_l``: ``m > q_1 > ... > q_{l-1} >= 1`` and ``1 <= q_l <= ... <= q_{n-1} <= m``.

    ``l = n + 1`` gives the empty list.
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if not 1 <= l <= n + 1:
        raise ValueError(f"need 1 <= l <= n + 1, got l={l}, n={n}")
    if l == n + 1:
        return []
    heads = [
        tuple(reversed(c)) for c in itertools.combinations(range(1, m), l - 1)
    ]
    heads.sort()
    tails = list(itertools.combinations_with_replacement(range(1, m + 1), n - l))
    return [ChainVector(h + t, l) for h in heads for t in tails]


def enumerate_constrained_tuples(m: int, J: SubsetJ, n: int, cap: int) -> list[tuple[int, ...]]:
    """Truncation of ``M(m, J)``: ``sum_{j in J} m_j = m`` and ``m_j <= cap`` off ``J``."""
    if cap < 1:
        raise ValueError(f"cap must be positive, got {cap}")
    if J.ambient_depth != n:
        raise ValueError(f"J lives in 1..{J.ambient_depth}, expected 1..{n}")
    if m < J.cardinality():
        raise ValueError(f"m={m} cannot be split into {J.cardinality()} positive parts")
    free = [j for j in range(1, n + 1) if j not in J]
    out = []
    for constrained in compositions(m, J.cardinality()):
        for rest in itertools.product(range(1, cap + 1), repeat=len(free)):
            tup = [0] * n
            for j, v in zip(J.members, constrained):
                tup[j - 1] = v
            for j, v in zip(free, rest):
                tup[j - 1] = v
            out.append(tuple(tup))
    out.sort()
    return out


def chain_array(m: int, n: int, l: int) -> np.ndarray:
    """``Q_l`` as an integer array of shape ``(|Q_l|, n - 1)``, same order as :func:`enumerate_chain_set`."""
    if l == n + 1:
        return np.zeros((0, n - 1), dtype=np.int64)
    heads = sorted(tuple(reversed(c)) for c in itertools.combinations(range(1, m), l - 1))
    tails = list(itertools.combinations_with_replacement(range(1, m + 1), n - l))
    heads = np.array(heads, dtype=np.int64).reshape(len(heads), l - 1)
    tails = np.array(tails, dtype=np.int64).reshape(len(tails), n - l)
    return np.hstack([np.repeat(heads, len(tails), axis=0), np.tile(tails, (len(heads), 1))])


def chain_membership(q: np.ndarray, m: int, l: int) -> np.ndarray:
    """Row-wise test of ``q in Q_l`` (``Q_{n+1}`` is empty)."""
    width = q.shape[1]
    if l > width + 1:
        return np.zeros(len(q), dtype=bool)
    head, tail = q[:, : l - 1], q[:, l - 1 :]
    ok = np.ones(len(q), dtype=bool)
    if head.shape[1]:
        ok &= head[:, 0] < m
        ok &= head[:, -1] >= 1
        ok &= np.all(head[:, :-1] > head[:, 1:], axis=1)
    if tail.shape[1]:
        ok &= tail[:, 0] >= 1
        ok &= tail[:, -1] <= m
        ok &= np.all(tail[:, :-1] <= tail[:, 1:], axis=1)
    return ok


def chain_partition_holds(m: int, n: int) -> bool:
    """``Q_1 = {(m,...,m)} + (Q_1 & Q_2)`` and ``Q_l = (Q_l & Q_{l-1}) + (Q_l & Q_{l+1})``, disjointly.

    Both sides of each decomposition lie inside ``Q_l``, so it is enough
    that every element of ``Q_l`` falls in exactly one of the two parts.
    """
    for l in range(1, n + 1):
        q = chain_array(m, n, l)
        if not chain_membership(q, m, l).all():
            return False
        if l == 1:
            first = np.all(q == m, axis=1)
            if first.sum() != 1:
                return False
        else:
            first = chain_membership(q, m, l - 1)
        second = chain_membership(q, m, l + 1)
        if not np.all(first ^ second):
            return False
    return True
