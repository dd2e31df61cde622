"""N-DCA: per-agent coalition allocation from canonical increment arrays.

Every agent runs the same FKM enumeration, turns each necklace into its
increment array and generates ``C(x, t)`` for every aperiodic IA.  A
periodic IA produces only ``stride`` distinct coalitions, so a
designation scheme picks which agents evaluate it.  Nothing but the
agent id and n is needed, so agents never communicate.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, Iterator, List, NamedTuple, Sequence, Tuple

from .increment_array import IncrementArray, check_ia, find_period, gen_inc_array
from .necklace import _fkm_raw, count_aperiodic_fixed_density

Coalition = Tuple[int, ...]


class Designation(str, enum.Enum):
    """How periodic IAs are shared out between agents.

    PER_SIZE
        Rotating window with an independent offset h[s] per size.
        Per-size imbalance <= 1.
    GLOBAL
        One offset H advanced after every periodic IA in FKM encounter
        order.  Aggregate imbalance <= 1.
    GLOBAL_BY_SIZE
        One offset carried across sizes in ascending s; within a size the
        IAs keep FKM order.  Both imbalances <= 1.
    LOWEST_ID
        Agents 1..stride evaluate every periodic IA.
    """

    PER_SIZE = "per-size"
    GLOBAL = "global"
    GLOBAL_BY_SIZE = "global-by-size"
    LOWEST_ID = "lowest-id"


def to_agent(value: int, n: int) -> int:
    """Map any integer onto an agent id in 1..n (0 becomes n)."""
    return (value - 1) % n + 1


def _check_agent(x: int, n: int) -> None:
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not 1 <= x <= n:
        raise ValueError(f"agent {x} outside 1..{n}")


def cumulative_increments(ia: Sequence[int], n: int) -> Tuple[int, ...]:
    """phi_1..phi_{s+1}: 0, then running sums of (t_k + 1); ends at n."""
    t = check_ia(ia, n)
    if not t:
        raise ValueError("empty IA")
    phi = [0]
    for v in t:
        phi.append(phi[-1] + v + 1)
    return tuple(phi)


def gen_coalition(x: int, ia: Sequence[int], n: int) -> Coalition:
    """Members of C(x, t) in generation order, starting with x."""
    members = [x]
    phi = 0
    for i in range(len(ia) - 1):
        phi += ia[i] + 1
        members.append((x - 1 + phi) % n + 1)
    return tuple(members)


def designation_test(x: int, h: int, d: int, n: int) -> bool:
    """Is agent x inside the window of d consecutive agents starting at h+1?"""
    return (x - 1 - h) % n < d


def size_block_offsets(n: int) -> List[int]:
    """Starting offset of each size's slot block when sizes run in order.

    Size s owns ``binom(n, s) - n * |aperiodic IAs of size s|`` slots.
    Index 0 is unused.
    """
    h = [0] * (n + 1)
    acc = 0
    for s in range(1, n + 1):
        h[s] = acc
        acc += comb(n, s) - n * count_aperiodic_fixed_density(n, s)
    return h


@dataclass
class DesignationState:
    n: int
    variant: Designation
    per_size_offsets: List[int]
    global_offset: int = 0

    @classmethod
    def start(cls, n: int, variant: Designation | str) -> "DesignationState":
        variant = Designation(variant)
        if variant is Designation.GLOBAL_BY_SIZE:
            h = size_block_offsets(n)
        else:
            h = [0] * (n + 1)
        return cls(n=n, variant=variant, per_size_offsets=h)

    def offset(self, s: int) -> int:
        if self.variant is Designation.GLOBAL:
            return self.global_offset
        if self.variant is Designation.LOWEST_ID:
            return 0
        return self.per_size_offsets[s]

    def advance(self, s: int, d: int) -> None:
        if self.variant is Designation.GLOBAL:
            self.global_offset += d
        elif self.variant is not Designation.LOWEST_ID:
            self.per_size_offsets[s] += d

    def designate(self, x: int, s: int, d: int) -> bool:
        """Test agent x for the next periodic IA of size s, then advance."""
        hit = designation_test(x, self.offset(s), d, self.n)
        self.advance(s, d)
        return hit


class Assignment(NamedTuple):
    ia: IncrementArray
    periodic: bool
    coalition: Coalition


@dataclass
class AgentAllocation:
    agent: int
    n: int
    by_size: Dict[int, List[Coalition]] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(len(v) for v in self.by_size.values())

    def counts(self) -> List[int]:
        """Per-size counts indexed 0..n (index 0 always 0)."""
        return [len(self.by_size.get(s, ())) for s in range(self.n + 1)]

    def coalitions(self) -> Iterator[Coalition]:
        for s in sorted(self.by_size):
            yield from self.by_size[s]


def iter_assignments(
    x: int, n: int, variant: Designation | str = Designation.PER_SIZE
) -> Iterator[Assignment]:
    """Stream agent x's coalitions in FKM order."""
    _check_agent(x, n)
    state = DesignationState.start(n, variant)
    for a in _fkm_raw(n, 2):
        t = gen_inc_array(a[1:])
        s = len(t)
        if s == 0:
            continue
        p = find_period(t)
        if p == s:
            yield Assignment(t, False, gen_coalition(x, t, n))
        elif state.designate(x, s, n * p // s):
            yield Assignment(t, True, gen_coalition(x, t, n))


def ndca_allocate(
    x: int, n: int, variant: Designation | str = Designation.PER_SIZE
) -> AgentAllocation:
    alloc = AgentAllocation(agent=x, n=n)
    for item in iter_assignments(x, n, variant):
        alloc.by_size.setdefault(len(item.ia), []).append(item.coalition)
    return alloc


@dataclass(frozen=True)
class IACensus:
    """One FKM pass summarised: enough to count any agent's allocation."""

    n: int
    aperiodic: Tuple[int, ...]  # per size, index 0..n
    periodic: Tuple[Tuple[int, IncrementArray, int], ...]  # (s, ia, stride), FKM order
    total_ias: int

    def periodic_by_size(self, s: int) -> List[Tuple[IncrementArray, int]]:
        return [(t, d) for size, t, d in self.periodic if size == s]


@lru_cache(maxsize=32)
def ia_census(n: int) -> IACensus:
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    aperiodic = [0] * (n + 1)
    periodic = []
    total = 0
    for a in _fkm_raw(n, 2):
        t = gen_inc_array(a[1:])
        s = len(t)
        if s == 0:
            continue
        total += 1
        p = find_period(t)
        if p == s:
            aperiodic[s] += 1
        else:
            periodic.append((s, t, n * p // s))
    return IACensus(n, tuple(aperiodic), tuple(periodic), total)


class Window(NamedTuple):
    size: int
    ia: IncrementArray
    stride: int
    offset: int
    agents: Tuple[int, ...]


def designation_windows(n: int, variant: Designation | str) -> List[Window]:
    """Designated agents for every periodic IA, in the order offsets advance."""
    variant = Designation(variant)
    census = ia_census(n)
    state = DesignationState.start(n, variant)
    entries = list(census.periodic)
    if variant is Designation.GLOBAL_BY_SIZE:
        entries.sort(key=lambda e: e[0])  # stable: FKM order within a size
    out = []
    for s, t, d in entries:
        h = state.offset(s)
        agents = tuple(to_agent(h + k + 1, n) for k in range(d))
        state.advance(s, d)
        out.append(Window(s, t, d, h, agents))
    return out


def allocation_counts(n: int, variant: Designation | str) -> List[List[int]]:
    """|CV_x^s| for every agent: rows indexed by x-1, columns by s (0..n).

    Count-level equivalent of running ndca_allocate for every agent, from a
    single enumeration pass.
    """
    census = ia_census(n)
    counts = [list(census.aperiodic) for _ in range(n)]
    for w in designation_windows(n, variant):
        for agent in w.agents:
            counts[agent - 1][w.size] += 1
    return counts


def kappa(n: int) -> int:
    """Number of sizes s in 1..n with binom(n, s) not divisible by n."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return sum(1 for s in range(1, n + 1) if comb(n, s) % n)


def vbfr_allocate(x: int, n: int, s: int) -> List[Coalition]:
    """Size-s subsets of 1..n whose smallest member is x, in lex order."""
    _check_agent(x, n)
    if not 1 <= s <= n:
        raise ValueError(f"size {s} outside 1..{n}")
    out: List[Coalition] = []

    def extend(prefix: List[int], nxt: int) -> None:
        if len(prefix) == s:
            out.append(tuple(prefix))
            return
        for m in range(nxt, n - (s - len(prefix)) + 2):
            prefix.append(m)
            extend(prefix, m + 1)
            prefix.pop()

    extend([x], x + 1)
    return out


def vbfr_counts(n: int) -> List[List[int]]:
    return [
        [0] + [comb(n - x, s - 1) for s in range(1, n + 1)] for x in range(1, n + 1)
    ]
