"""Increment arrays: run-length encodings of canonical necklaces.

An increment array (IA) of size s for n agents is a tuple of s
non-negative offsets summing to n - s.  Offset i counts the agents
skipped between the (i+1)-th and (i+2)-th coalition member, cyclically.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from .necklace import Necklace, divisors

IncrementArray = Tuple[int, ...]


@dataclass(frozen=True)
class PeriodInfo:
    period: int
    repetitions: int
    stride: int

    @property
    def periodic(self) -> bool:
        return self.repetitions > 1


def check_ia(ia: Sequence[int], n: int) -> IncrementArray:
    t = tuple(ia)
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if len(t) > n:
        raise ValueError(f"IA of size {len(t)} exceeds n={n}")
    if any(v < 0 for v in t):
        raise ValueError(f"IA has negative offsets: {t}")
    if sum(t) != n - len(t):
        raise ValueError(f"IA {t} sums to {sum(t)}, expected n - s = {n - len(t)}")
    return t


def gen_inc_array(necklace: Sequence[int]) -> IncrementArray:
    """Run-length encode a canonical necklace into its increment array.

    Counts the black beads after each white bead; the first white bead's
    leading count is skipped and the trailing run is appended as the
    cyclic wrap-around element.  An all-black necklace gives ``()``.
    """
    t = []
    j = 0
    s = 0
    for bead in necklace:
        if bead == 1:
            j += 1
        else:
            if s > 0:
                t.append(j)
            j = 0
            s += 1
    if s == 0:
        return ()
    t.append(j)
    return tuple(t)


def ia_to_necklace(ia: Sequence[int], n: int) -> Necklace:
    """Inverse encoding: ``0 1^t0 0 1^t1 ... 0 1^t(s-1)``."""
    t = check_ia(ia, n)
    if not t:
        raise ValueError("empty IA has no white bead to anchor the string")
    beads = []
    for v in t:
        beads.append(0)
        beads.extend([1] * v)
    return tuple(beads)


def find_period(ia: Sequence[int]) -> int:
    """Smallest divisor p of s such that ia is s/p copies of ia[:p]."""
    s = len(ia)
    if s < 1:
        raise ValueError("period of an empty IA is undefined")
    for p in divisors(s):
        periodic = True
        for k in range(p, s):
            if ia[k] != ia[k % p]:
                periodic = False
                break
        if periodic:
            return p
    return s  # unreachable: p = s always matches


def period(ia: Sequence[int], n: int) -> PeriodInfo:
    p = find_period(ia)
    mu = len(ia) // p
    if n % mu:
        raise ValueError(f"repetition count {mu} does not divide n={n}; not a valid IA")
    return PeriodInfo(period=p, repetitions=mu, stride=n // mu)


def canonical_shift(ia: Sequence[int]) -> IncrementArray:
    t = tuple(ia)
    if not t:
        raise ValueError("canonical shift of an empty IA is undefined")
    return min(t[k:] + t[:k] for k in range(len(t)))


def circular_shifts(ia: Sequence[int]) -> list[IncrementArray]:
    t = tuple(ia)
    return [t[k:] + t[:k] for k in range(len(t))]
