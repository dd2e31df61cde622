"""Two-colour necklace enumeration (FKM) and closed-form necklace counts.

Beads are encoded as 0 = white (agent included) and 1 = black (agent
omitted).  A necklace is carried around as a tuple of bead values holding
its canonical, lexicographically least rotation.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb, gcd
from typing import Callable, Iterator, List, Sequence, Tuple

Necklace = Tuple[int, ...]


@lru_cache(maxsize=None)
def divisors(m: int) -> Tuple[int, ...]:
    """Positive divisors of ``m`` in increasing order (trial division)."""
    if m < 1:
        raise ValueError(f"divisors need m >= 1, got {m}")
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return tuple(small + large[::-1])


def _prime_factors(m: int) -> List[int]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def euler_totient(d: int) -> int:
    if d < 1:
        raise ValueError(f"totient needs d >= 1, got {d}")
    result = d
    for p in _prime_factors(d):
        result -= result // p
    return result


def mobius(d: int) -> int:
    if d < 1:
        raise ValueError(f"mobius needs d >= 1, got {d}")
    sign = 1
    m = d
    for p in _prime_factors(d):
        m //= p
        if m % p == 0:
            return 0
        sign = -sign
    return sign


def count_necklaces(n: int, k: int = 2) -> int:
    """Number of k-ary necklaces of length n.

    Python integers are unbounded, so the count is always exact; the
    division by n is checked rather than assumed.
    """
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    total = sum(euler_totient(d) * k ** (n // d) for d in divisors(n))
    q, r = divmod(total, n)
    if r:
        raise ArithmeticError(f"necklace sum {total} not divisible by {n}")
    return q


def count_fixed_density_necklaces(n: int, s: int) -> int:
    """Number of binary necklaces of length n with exactly s white beads."""
    if n < 1 or not 0 <= s <= n:
        raise ValueError(f"need n >= 1 and 0 <= s <= n, got n={n}, s={s}")
    total = sum(
        euler_totient(d) * comb(n // d, s // d) for d in divisors(gcd(n, s))
    )
    q, r = divmod(total, n)
    if r:
        raise ArithmeticError(f"fixed-density sum {total} not divisible by {n}")
    return q


def count_aperiodic_fixed_density(n: int, s: int) -> int:
    """Number of aperiodic (primitive) binary necklaces of length n, density s.

    Used to size the per-size slot blocks of the size-ordered global offset
    without a second enumeration pass.
    """
    if n < 1 or not 0 <= s <= n:
        raise ValueError(f"need n >= 1 and 0 <= s <= n, got n={n}, s={s}")
    total = sum(mobius(d) * comb(n // d, s // d) for d in divisors(gcd(n, s)))
    q, r = divmod(total, n)
    if r:
        raise ArithmeticError(f"primitive sum {total} not divisible by {n}")
    return q


def _fkm_raw(n: int, k: int = 2) -> Iterator[List[int]]:
    # Yields the live 1-indexed working array (a[0] is the sentinel 0).
    # Callers must not keep or mutate it.
    a = [0] * (n + 1)
    yield a
    i = n
    while True:
        a[i] += 1
        for j in range(1, n - i + 1):
            a[j + i] = a[j]
        if n % i == 0:
            yield a
        i = n
        while a[i] == k - 1:
            i -= 1
        if i == 0:
            return


def fkm(n: int, k: int = 2) -> Iterator[Necklace]:
    """Yield every k-ary necklace of length n in lexicographic order.

    The all-zeros necklace comes first and ``(k-1)^n`` last.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if k < 2:
        raise ValueError(f"FKM needs k >= 2, got {k}")
    for a in _fkm_raw(n, k):
        yield tuple(a[1:])


def fkm_enumerate(n: int, k: int, visitor: Callable[[Necklace], object]) -> None:
    for necklace in fkm(n, k):
        visitor(necklace)


def is_canonical_necklace(beads: Sequence[int]) -> bool:
    """True iff ``beads`` is lexicographically <= each of its rotations."""
    b = tuple(beads)
    if not b:
        raise ValueError("empty bead sequence")
    return all(b <= b[r:] + b[:r] for r in range(1, len(b)))


def canonical_rotation(beads: Sequence[int]) -> Necklace:
    b = tuple(beads)
    return min(b[r:] + b[:r] for r in range(len(b)))
