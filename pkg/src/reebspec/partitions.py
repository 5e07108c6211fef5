"""Beatty and Tamura partition sequences over Q(sqrt(d)), exactly.

Tamura's composite sets A_j = { sum_k floor(n * a_j / a_k) : n >= 1 } tile
the positive integers whenever the weight ratios are pairwise irrational;
for m = 2 they reduce to the classical Rayleigh pair of Beatty sequences
with 1/alpha + 1/beta = 1.  Every floor here is certified in exact
arithmetic, so a "partition" verdict up to N is a proof, not a
floating-point impression.  The scanners stream the m generators through a
k-way merge, which needs no table and reports the smallest violating value
together with both producing (set, n) witnesses.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .errors import HypothesisViolation
from .quadfield import (
    QuadIrrational,
    _floor_scaled,
    floor_product,
    pairwise_rational_ratio,
)

__all__ = [
    "TamuraFamily",
    "PartitionReport",
    "tamura_element",
    "verify_partition",
    "beatty_set",
    "rayleigh_conjugate",
    "rayleigh_pair",
    "uspensky_scan",
]

# above this bound the per-value owner table is not materialized
OWNER_TABLE_LIMIT = 10**6


class TamuraFamily:
    """The m generators n -> sum_k floor(n * a_j / a_k) for fixed weights.

    Each generator is strictly increasing in n because the k = j term alone
    advances by exactly one per step.  The irrationality hypothesis is
    checked at construction for m >= 2.
    """

    def __init__(self, weights):
        weights = tuple(weights)
        if not weights:
            raise ValueError("need at least one weight")
        for w in weights:
            if not isinstance(w, QuadIrrational):
                raise TypeError(f"weights must be QuadIrrational, got {type(w).__name__}")
            if w.sign() <= 0:
                raise ValueError(f"weights must be positive, got {w}")
        violation = pairwise_rational_ratio(weights)
        if violation is not None:
            raise HypothesisViolation.rational_ratio(*violation)
        self.weights = weights
        self._d = weights[0].d
        self._ratio_triples = [
            [(aj / ak).scaled_triple() for ak in weights] for aj in weights
        ]

    @property
    def m(self):
        return len(self.weights)

    def element(self, j, n):
        if not 1 <= j <= self.m:
            raise ValueError(f"set label j must be in 1..{self.m}, got {j}")
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        total = 0
        d = self._d
        for p, q, c in self._ratio_triples[j - 1]:
            total += _floor_scaled(n * p, n * q, c, d)
        return total

    def generator(self, j, limit):
        """Yield (value, j, n) with value ascending, stopping past limit."""
        triples = self._ratio_triples[j - 1]
        d = self._d
        n = 1
        while True:
            total = 0
            for p, q, c in triples:
                total += _floor_scaled(n * p, n * q, c, d)
            if total > limit:
                return
            yield (total, j, n)
            n += 1


def tamura_element(weights, j, n):
    """The n-th element of A_j, exactly."""
    return TamuraFamily(weights).element(j, n)


@dataclass
class PartitionReport:
    """Outcome of scanning a family of integer sets against [1..limit].

    verdict is "partition" when the sets tile [1..limit] exactly (for the
    Uspensky scanner read it as "no witness <= limit"); "collision" and
    "gap" carry the smallest violating value.  For collisions, `first` and
    `second` are the two producing (set label, n) pairs.  `owners` maps each
    covered value to its set label (index 0 unused) and is materialized for
    limits up to OWNER_TABLE_LIMIT; `counts` tallies elements per set over
    the scanned range.
    """

    limit: int
    verdict: str
    value: int | None = None
    first: tuple | None = None
    second: tuple | None = None
    owners: list | None = field(default=None, repr=False)
    counts: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.verdict == "partition"

    def members(self, j):
        """Values in [1..limit] owned by set j (needs the owner table)."""
        if self.owners is None:
            raise ValueError("owner table was not materialized for this scan")
        return [v for v in range(1, self.limit + 1) if self.owners[v] == j]


def _scan_cover(streams, limit, collect_owners):
    owners = [0] * (limit + 1) if collect_owners else None
    counts = {}
    expected = 1
    prev = None
    for item in heapq.merge(*streams):
        value, j, n = item
        counts[j] = counts.get(j, 0) + 1
        if prev is not None and value == prev[0]:
            return PartitionReport(
                limit=limit, verdict="collision", value=value,
                first=(prev[1], prev[2]), second=(j, n), counts=counts)
        if value > expected:
            return PartitionReport(
                limit=limit, verdict="gap", value=expected, counts=counts)
        if owners is not None:
            owners[value] = j
        expected += 1
        prev = item
    if expected <= limit:
        return PartitionReport(
            limit=limit, verdict="gap", value=expected, counts=counts)
    return PartitionReport(
        limit=limit, verdict="partition", owners=owners, counts=counts)


def verify_partition(weights, limit, collect_owners=None):
    """Scan the Tamura sets of `weights` against [1..limit].

    Enumeration per set stops at the first element past the limit, which is
    sound because each generator is strictly increasing.  Violations are
    data (a report), not errors; a rational weight ratio raises
    HypothesisViolation before any scanning.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    family = TamuraFamily(weights)
    if collect_owners is None:
        collect_owners = limit <= OWNER_TABLE_LIMIT
    streams = [family.generator(j, limit) for j in range(1, family.m + 1)]
    return _scan_cover(streams, limit, collect_owners)


def _require_beatty_slope(alpha):
    if alpha.is_rational():
        raise HypothesisViolation(
            f"alpha = {alpha} is rational; a Beatty slope must be irrational")
    if not alpha > 1:
        raise HypothesisViolation(f"alpha = {alpha} is not > 1")


def _beatty_generator(alpha, label, limit):
    n = 1
    while True:
        value = floor_product(n, alpha)
        if value > limit:
            return
        yield (value, label, n)
        n += 1


def beatty_set(alpha, limit):
    """The Beatty sequence values floor(n*alpha) up to limit, alpha > 1
    irrational."""
    _require_beatty_slope(alpha)
    return [value for value, _, _ in _beatty_generator(alpha, 1, limit)]


def rayleigh_conjugate(alpha):
    """beta = alpha/(alpha - 1), the exact solution of 1/alpha + 1/beta = 1."""
    _require_beatty_slope(alpha)
    return alpha / (alpha - 1)


def rayleigh_pair(alpha, limit, collect_owners=None):
    """Scan the Beatty pair (alpha, alpha/(alpha-1)) against [1..limit]."""
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    beta = rayleigh_conjugate(alpha)
    if collect_owners is None:
        collect_owners = limit <= OWNER_TABLE_LIMIT
    streams = [_beatty_generator(alpha, 1, limit),
               _beatty_generator(beta, 2, limit)]
    return _scan_cover(streams, limit, collect_owners)


def _naive_beatty_generator(a, label, limit):
    # floor(n*a) is only nondecreasing when a < 1: skip values below 1 and
    # collapse repeats, since a set contains each value once
    last = None
    n = 1
    while True:
        value = floor_product(n, a)
        if value > limit:
            return
        if value >= 1 and value != last:
            yield (value, label, n)
            last = value
        n += 1


def uspensky_scan(weights, limit):
    """Hunt for a witness that the naive sets {floor(n*a_i)} fail to tile.

    For m >= 3 such a witness (a collision or a gap) always exists; the scan
    exhibits the smallest one below the limit.  A "partition" verdict only
    means no witness turned up yet — it never refutes anything.
    """
    weights = tuple(weights)
    if len(weights) < 3:
        raise ValueError(
            f"the naive-family scan needs m >= 3 sets, got {len(weights)}")
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    for w in weights:
        if w.sign() <= 0:
            raise ValueError(f"weights must be positive, got {w}")
    streams = [
        _naive_beatty_generator(a, i + 1, limit)
        for i, a in enumerate(weights)
    ]
    return _scan_cover(streams, limit, collect_owners=False)
