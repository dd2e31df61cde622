"""Brute-force oracles and allocation property reports.

Coalitions are compared as n-bit masks (bit x-1 set for agent x), which
keeps the exhaustive checks cheap up to n = 16 and feasible to n = 25.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .allocation import (
    Coalition,
    Designation,
    allocation_counts,
    gen_coalition,
    kappa,
    ndca_allocate,
    vbfr_allocate,
    vbfr_counts,
)
from .dcvc import dcvc_allocate, dcvc_counts
from .increment_array import IncrementArray, check_ia, period

POWERSET_LIMIT = 25
EXHAUSTIVE_LIMIT = 16

ALGORITHMS = tuple(v.value for v in Designation) + ("dcvc", "vbfr")


def to_mask(members: Iterable[int]) -> int:
    m = 0
    for x in members:
        m |= 1 << (x - 1)
    return m


def from_mask(mask: int) -> Tuple[int, ...]:
    out = []
    x = 1
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return tuple(out)


def brute_force_powerset(n: int) -> range:
    """All non-empty subsets of 1..n as masks 1..2^n - 1."""
    if not 1 <= n <= POWERSET_LIMIT:
        raise ValueError(f"powerset oracle supports 1 <= n <= {POWERSET_LIMIT}, got {n}")
    return range(1, 1 << n)


def coalition_to_ia(members: Iterable[int], n: int) -> Tuple[int, IncrementArray]:
    """Starting agent (the minimum) and the IA that regenerates ``members``."""
    c = sorted(set(members))
    if not c:
        raise ValueError("empty coalition")
    if c[0] < 1 or c[-1] > n:
        raise ValueError(f"members {c} outside 1..{n}")
    s = len(c)
    t = [c[k + 1] - c[k] - 1 for k in range(s - 1)]
    t.append((n - s) - sum(t))
    return c[0], tuple(t)


def distinct_coalitions(ia: Sequence[int], n: int) -> List[frozenset]:
    t = check_ia(ia, n)
    seen: List[frozenset] = []
    for x in range(1, n + 1):
        c = frozenset(gen_coalition(x, t, n))
        if c not in seen:
            seen.append(c)
    return seen


def duplicate_structure_check(ia: Sequence[int], n: int) -> bool:
    """Exactly ``stride`` distinct coalitions, equal iff starts agree mod stride."""
    t = check_ia(ia, n)
    stride = period(t, n).stride
    generated = [frozenset(gen_coalition(x, t, n)) for x in range(1, n + 1)]
    if len(set(generated)) != stride:
        return False
    for i in range(n):
        for j in range(i + 1, n):
            same = generated[i] == generated[j]
            if same != ((j - i) % stride == 0):
                return False
    return True


def _allocator(algorithm: str) -> Callable[[int, int], List[Coalition]]:
    if algorithm == "dcvc":
        return lambda x, n: list(dcvc_allocate(x, n).coalitions())
    if algorithm == "vbfr":
        return lambda x, n: [c for s in range(1, n + 1) for c in vbfr_allocate(x, n, s)]
    variant = Designation(algorithm)
    return lambda x, n: list(ndca_allocate(x, n, variant).coalitions())


def allocation_count_table(n: int, algorithm: str) -> List[List[int]]:
    if algorithm == "dcvc":
        return dcvc_counts(n)
    if algorithm == "vbfr":
        return vbfr_counts(n)
    return allocation_counts(n, Designation(algorithm))


def global_coalition_masks(n: int, algorithm: str) -> List[int]:
    allocate = _allocator(algorithm)
    return [to_mask(c) for x in range(1, n + 1) for c in allocate(x, n)]


@dataclass
class VerificationReport:
    n: int
    variant: str
    exhaustive: bool
    complete: bool
    redundant_pairs: int
    self_interest_violations: Optional[int]
    per_size_imbalance_max: int
    aggregate_imbalance: int
    kappa: int
    kappa_match: bool
    per_agent_totals: List[int]
    per_size_imbalance: List[int] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _expected_failures(r: VerificationReport) -> List[str]:
    out = []
    if not r.complete:
        out.append("incomplete")
    if r.redundant_pairs:
        out.append(f"{r.redundant_pairs} redundant coalitions")
    if r.self_interest_violations and r.variant != "dcvc":
        out.append(f"{r.self_interest_violations} self-interest violations")
    if r.variant == Designation.PER_SIZE.value:
        if r.per_size_imbalance_max > 1:
            out.append(f"per-size imbalance {r.per_size_imbalance_max} > 1")
        if not r.kappa_match:
            out.append(f"aggregate imbalance {r.aggregate_imbalance} != kappa {r.kappa}")
    if r.variant in (Designation.GLOBAL.value, "dcvc") and r.aggregate_imbalance > 1:
        out.append(f"aggregate imbalance {r.aggregate_imbalance} > 1")
    if r.variant == Designation.GLOBAL_BY_SIZE.value and (
        r.aggregate_imbalance > 1 or r.per_size_imbalance_max > 1
    ):
        out.append("size-ordered global offset exceeded an imbalance of 1")
    return out


def check_allocation_properties(
    n: int, algorithm: str = Designation.PER_SIZE.value, exhaustive: Optional[bool] = None
) -> VerificationReport:
    """Run every agent and compare against the powerset oracle.

    With ``exhaustive=False`` (the default above n = 16) only the per-agent
    counts are computed; completeness is then judged by the total count.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    if not 1 <= n <= POWERSET_LIMIT:
        raise ValueError(f"verification supports 1 <= n <= {POWERSET_LIMIT}, got {n}")
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_LIMIT

    if exhaustive:
        allocate = _allocator(algorithm)
        counts = [[0] * (n + 1) for _ in range(n)]
        seen = bytearray(1 << n)
        redundant = 0
        violations = 0
        for x in range(1, n + 1):
            bit = 1 << (x - 1)
            for c in allocate(x, n):
                m = to_mask(c)
                counts[x - 1][len(c)] += 1
                if seen[m]:
                    redundant += 1
                seen[m] = 1
                if not m & bit:
                    violations += 1
        complete = all(seen[m] for m in brute_force_powerset(n))
        self_interest: Optional[int] = violations
    else:
        counts = allocation_count_table(n, algorithm)
        total = sum(map(sum, counts))
        complete = total == (1 << n) - 1
        redundant = max(0, total - ((1 << n) - 1))
        # Membership is guaranteed by construction for N-DCA and VBFR;
        # without materialising coalitions it is not measured here.
        self_interest = None

    totals = [sum(row) for row in counts]
    per_size = [
        max(row[s] for row in counts) - min(row[s] for row in counts)
        for s in range(1, n + 1)
    ]
    agg = max(totals) - min(totals)
    k = kappa(n)
    report = VerificationReport(
        n=n,
        variant=algorithm,
        exhaustive=exhaustive,
        complete=complete,
        redundant_pairs=redundant,
        self_interest_violations=self_interest,
        per_size_imbalance_max=max(per_size),
        aggregate_imbalance=agg,
        kappa=k,
        kappa_match=agg == k,
        per_agent_totals=totals,
        per_size_imbalance=per_size,
    )
    report.failures = _expected_failures(report)
    return report


def cross_algorithm_equivalence(n: int) -> bool:
    """Every N-DCA variant and DCVC cover the same global coalition set."""
    if not 1 <= n <= EXHAUSTIVE_LIMIT:
        raise ValueError(f"equivalence check supports 1 <= n <= {EXHAUSTIVE_LIMIT}")
    reference = sorted(global_coalition_masks(n, "dcvc"))
    return all(
        sorted(global_coalition_masks(n, v.value)) == reference for v in Designation
    )
