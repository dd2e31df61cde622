"""DCVC baseline: contiguous shares of reverse-lexicographic coalition lists.

For each size s the list L_s holds every size-s coalition in
reverse-lexicographic order, from {n-s+1..n} down to {1..s}.  Agent i
takes the block of k = floor(|L_s| / n) entries starting at (i-1)k + 1;
the leftover entries are dealt out by a counter alpha that starts at 1
and is carried from L_1 through L_n.
"""
from __future__ import annotations

from math import comb
from typing import List, Sequence, Tuple

from .allocation import AgentAllocation, Coalition, _check_agent

# Index arithmetic is modelled on unsigned 64-bit words; the first list
# that does not fit is the central one at n = 68.
INDEX_LIMIT = 2**64 - 1


class IndexOverflowError(OverflowError):
    """A list length or index exceeds the 64-bit index arithmetic."""


def list_length(n: int, s: int) -> int:
    if not 0 <= s <= n:
        raise ValueError(f"size {s} outside 0..{n}")
    length = comb(n, s)
    if length > INDEX_LIMIT:
        raise IndexOverflowError(
            f"|L_{s}| = C({n},{s}) = {length} exceeds the 64-bit index range"
        )
    return length


def coalition_at_index(n: int, s: int, idx: int) -> Coalition:
    """The idx-th (1-based) coalition of L_s, members ascending."""
    length = list_length(n, s)
    if not 1 <= idx <= length:
        raise ValueError(f"index {idx} outside 1..{length}")
    # Descending position idx is ascending-lex rank (length - idx).
    rank = length - idx
    members = []
    m = 1
    for slot in range(s, 0, -1):
        # Greedy: skip blocks of combinations that start with m.
        while True:
            block = comb(n - m, slot - 1)
            if rank < block:
                break
            rank -= block
            m += 1
        members.append(m)
        m += 1
    return tuple(members)


def index_of_coalition(n: int, members: Sequence[int]) -> int:
    """Inverse of coalition_at_index."""
    c = sorted(members)
    s = len(c)
    length = list_length(n, s)
    rank = 0
    prev = 0
    for pos, m in enumerate(c):
        slot = s - pos
        for skipped in range(prev + 1, m):
            rank += comb(n - skipped, slot - 1)
        prev = m
    return length - rank


def predecessor(members: Sequence[int], n: int) -> Coalition:
    """Next coalition of L_s after ``members`` (its lexicographic predecessor).

    Scans from the right for the first position that can be decremented,
    then fills the tail with the largest ids.
    """
    c = list(sorted(members))
    s = len(c)
    if s == 0:
        raise ValueError("empty coalition")
    for i in range(s - 1, -1, -1):
        floor = c[i - 1] if i > 0 else 0
        if c[i] - 1 > floor:
            c[i] -= 1
            for j in range(i + 1, s):
                c[j] = n - s + j + 1
            return tuple(c)
    raise ValueError(f"{tuple(c)} is the last coalition of L_{s}")


def _share(n: int, s: int) -> Tuple[int, int]:
    length = list_length(n, s)
    k = length // n
    return k, length - n * k


def dcvc_allocate(x: int, n: int) -> AgentAllocation:
    _check_agent(x, n)
    # Fail before generating anything if any list is out of range.
    shares = [_share(n, s) for s in range(n + 1)]
    alloc = AgentAllocation(agent=x, n=n)
    alpha = 1
    for s in range(1, n + 1):
        k, remainder = shares[s]
        out: List[Coalition] = []
        if k:
            c = coalition_at_index(n, s, (x - 1) * k + 1)
            out.append(c)
            for _ in range(k - 1):
                c = predecessor(c, n)
                out.append(c)
        for j in range(remainder):
            if alpha == x:
                out.append(coalition_at_index(n, s, n * k + j + 1))
            alpha = alpha + 1 if alpha < n else 1
        if out:
            alloc.by_size[s] = out
    return alloc


def dcvc_counts(n: int) -> List[List[int]]:
    """|CV_x^s| for every agent under DCVC, by arithmetic alone."""
    shares = [_share(n, s) for s in range(n + 1)]
    counts = [[0] * (n + 1) for _ in range(n)]
    alpha = 1
    for s in range(1, n + 1):
        k, remainder = shares[s]
        for row in counts:
            row[s] = k
        for _ in range(remainder):
            counts[alpha - 1][s] += 1
            alpha = alpha + 1 if alpha < n else 1
    return counts
