import pytest
from hypothesis import given, settings, strategies as st

from ndca.allocation import gen_coalition
from ndca.increment_array import (
    PeriodInfo,
    canonical_shift,
    check_ia,
    circular_shifts,
    find_period,
    gen_inc_array,
    ia_to_necklace,
    period,
)
from ndca.necklace import fkm

from oracles import periodic_closure


def beads(word):
    return tuple(int(c) for c in word)


@st.composite
def increment_arrays(draw, max_n=16):
    n = draw(st.integers(1, max_n))
    s = draw(st.integers(1, n))
    cuts = sorted(draw(st.lists(st.integers(0, n - s), min_size=s - 1, max_size=s - 1)))
    bounds = [0] + cuts + [n - s]
    return n, tuple(b - a for a, b in zip(bounds, bounds[1:]))


@pytest.mark.parametrize("word, ia", [
    ("001101", (0, 2, 1)),
    ("000000", (0, 0, 0, 0, 0, 0)),
    ("011111", (5,)),
    ("111111", ()),
])
def test_gen_inc_array_examples(word, ia):
    assert gen_inc_array(beads(word)) == ia


@pytest.mark.parametrize("ia, n, word", [
    ((0, 2, 1), 6, "001101"),
    ((1, 1, 1), 6, "010101"),
    ((8,), 9, "011111111"),
])
def test_ia_to_necklace_examples(ia, n, word):
    assert ia_to_necklace(ia, n) == beads(word)


def test_ia_to_necklace_rejects_bad_sum():
    with pytest.raises(ValueError):
        ia_to_necklace((1, 1), 6)
    with pytest.raises(ValueError):
        ia_to_necklace((), 6)


def test_check_ia_rejects_negative_and_oversize():
    with pytest.raises(ValueError):
        check_ia((-1, 5), 6)
    with pytest.raises(ValueError):
        check_ia((0,) * 7, 6)


@pytest.mark.parametrize("ia, n, expected", [
    ((1, 1, 1), 6, PeriodInfo(1, 3, 2)),
    ((0, 1, 0, 1), 6, PeriodInfo(2, 2, 3)),
    ((0, 1, 2), 6, PeriodInfo(3, 1, 6)),
    ((0,) * 6, 6, PeriodInfo(1, 6, 1)),
])
def test_period_examples(ia, n, expected):
    info = period(ia, n)
    assert info == expected
    assert info.periodic == (expected.repetitions > 1)


def test_period_rejects_empty():
    with pytest.raises(ValueError):
        find_period(())


@pytest.mark.parametrize("ia, expected", [
    ((2, 0, 1), (0, 1, 2)),
    ((0, 0, 3), (0, 0, 3)),
    ((1, 0, 2), (0, 2, 1)),
])
def test_canonical_shift_examples(ia, expected):
    assert canonical_shift(ia) == expected


def test_circular_shifts():
    assert circular_shifts((0, 1, 2)) == [(0, 1, 2), (1, 2, 0), (2, 0, 1)]


@settings(max_examples=300)
@given(increment_arrays())
def test_roundtrip_from_ia(case):
    n, t = case
    word = ia_to_necklace(t, n)
    assert len(word) == n
    assert gen_inc_array(word) == t


@settings(max_examples=300)
@given(increment_arrays())
def test_period_agrees_with_shift_closure(case):
    n, t = case
    info = period(t, n)
    assert info.period == periodic_closure(t)
    assert info.period * info.repetitions == len(t)
    assert info.stride * info.repetitions == n


@settings(max_examples=300)
@given(increment_arrays())
def test_canonical_shift_idempotent_and_rotation_invariant(case):
    _, t = case
    c = canonical_shift(t)
    assert canonical_shift(c) == c
    for u in circular_shifts(t):
        assert canonical_shift(u) == c


@settings(max_examples=200)
@given(increment_arrays(max_n=12), st.data())
def test_order_preservation(case, data):
    n, t = case
    s = len(t)
    cuts = sorted(data.draw(st.lists(st.integers(0, n - s), min_size=s - 1, max_size=s - 1)))
    bounds = [0] + cuts + [n - s]
    u = tuple(b - a for a, b in zip(bounds, bounds[1:]))
    assert (t < u) == (ia_to_necklace(t, n) < ia_to_necklace(u, n))


@pytest.mark.parametrize("n", range(1, 15))
def test_fkm_output_roundtrips_with_sum_invariant(n):
    for word in fkm(n):
        t = gen_inc_array(word)
        if not t:
            assert word == (1,) * n
            continue
        assert sum(t) == n - len(t)
        assert ia_to_necklace(t, n) == word


def _union(t, n):
    return {frozenset(gen_coalition(x, t, n)) for x in range(1, n + 1)}


@pytest.mark.parametrize("n", range(1, 11))
def test_rotated_ias_generate_same_coalitions(n):
    for word in fkm(n):
        t = gen_inc_array(word)
        if not t:
            continue
        reference = _union(t, n)
        for u in circular_shifts(t)[1:]:
            assert _union(u, n) == reference


@pytest.mark.parametrize("n", range(1, 11))
def test_distinct_classes_generate_disjoint_coalitions(n):
    by_size = {}
    for word in fkm(n):
        t = gen_inc_array(word)
        if t:
            by_size.setdefault(len(t), []).append(_union(t, n))
    for unions in by_size.values():
        for i, a in enumerate(unions):
            for b in unions[i + 1:]:
                assert not a & b
