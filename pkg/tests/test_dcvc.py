from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from ndca.dcvc import (
    INDEX_LIMIT,
    IndexOverflowError,
    coalition_at_index,
    dcvc_allocate,
    dcvc_counts,
    index_of_coalition,
    list_length,
    predecessor,
)

from oracles import all_subsets, reverse_lex_list


@pytest.mark.parametrize("n, s, idx, expected", [
    (6, 3, 1, (4, 5, 6)),
    (6, 3, 20, (1, 2, 3)),
    (6, 3, 4, (3, 4, 5)),
])
def test_coalition_at_index_examples(n, s, idx, expected):
    assert coalition_at_index(n, s, idx) == expected


@pytest.mark.parametrize("n", range(1, 11))
def test_unranking_matches_sorted_list(n):
    for s in range(1, n + 1):
        reference = reverse_lex_list(n, s)
        assert [coalition_at_index(n, s, i) for i in range(1, len(reference) + 1)] == reference
        assert [index_of_coalition(n, c) for c in reference] == list(range(1, len(reference) + 1))


def test_index_out_of_range():
    with pytest.raises(ValueError):
        coalition_at_index(6, 3, 0)
    with pytest.raises(ValueError):
        coalition_at_index(6, 3, 21)


@pytest.mark.parametrize("c, n, expected", [
    ((4, 5, 6), 6, (3, 5, 6)),
    ((2, 3, 4), 6, (1, 5, 6)),
    ((1, 2, 4), 6, (1, 2, 3)),
])
def test_predecessor_examples(c, n, expected):
    assert predecessor(c, n) == expected


@pytest.mark.parametrize("n", range(1, 11))
def test_predecessor_walks_the_list(n):
    for s in range(1, n + 1):
        reference = reverse_lex_list(n, s)
        for a, b in zip(reference, reference[1:]):
            assert predecessor(a, n) == b
        with pytest.raises(ValueError):
            predecessor(reference[-1], n)


def test_predecessor_rejects_empty():
    with pytest.raises(ValueError):
        predecessor((), 6)


@settings(max_examples=200)
@given(st.integers(1, 60).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(1, n)).flatmap(
        lambda ns: st.tuples(st.just(ns[0]), st.just(ns[1]),
                             st.integers(1, comb(ns[0], ns[1]))))))
def test_rank_unrank_roundtrip(case):
    n, s, idx = case
    c = coalition_at_index(n, s, idx)
    assert len(c) == s and list(c) == sorted(set(c))
    assert index_of_coalition(n, c) == idx


def test_overflow_first_appears_at_68():
    assert all(comb(67, s) <= INDEX_LIMIT for s in range(68))
    list_length(67, 33)
    with pytest.raises(IndexOverflowError):
        list_length(68, 34)
    with pytest.raises(IndexOverflowError):
        dcvc_allocate(1, 68)
    # The failure is an OverflowError, never a silently wrapped value.
    assert issubclass(IndexOverflowError, OverflowError)


@pytest.mark.parametrize("x, members", [
    (3, [(2, 4, 5), (2, 3, 6), (2, 3, 5)]),
    (4, [(2, 3, 4), (1, 5, 6), (1, 4, 6), (1, 2, 4)]),
    (2, [(3, 4, 5), (2, 5, 6), (2, 4, 6)]),
])
def test_six_agent_size3_shares(x, members):
    assert dcvc_allocate(x, 6).by_size[3] == members


def test_self_interest_violation_witness():
    assert (2, 4, 5) in dcvc_allocate(3, 6).by_size[3]
    assert 3 not in (2, 4, 5)


@pytest.mark.parametrize("n, total", [
    (5, 7), (8, 32), (10, 103), (12, 342), (14, 1171), (15, 2185), (17, 7711),
])
def test_agent1_totals(n, total):
    assert dcvc_allocate(1, n).total == total
    assert sum(dcvc_counts(n)[0]) == total


@pytest.mark.parametrize("n, total", [(20, 52429), (22, 190651), (25, 1342178)])
def test_agent1_totals_by_counting(n, total):
    assert sum(dcvc_counts(n)[0]) == total


@pytest.mark.parametrize("n", range(1, 11))
def test_partition_and_balance(n):
    seen = []
    for x in range(1, n + 1):
        alloc = dcvc_allocate(x, n)
        assert alloc.counts() == dcvc_counts(n)[x - 1]
        seen.extend(frozenset(c) for c in alloc.coalitions())
    assert len(seen) == len(set(seen))
    assert set(seen) == all_subsets(n)


@pytest.mark.parametrize("n", range(1, 21))
def test_aggregate_balance_to_20(n):
    totals = [sum(r) for r in dcvc_counts(n)]
    assert max(totals) - min(totals) <= 1
