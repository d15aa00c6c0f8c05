"""Partition parsing, normalization, and evaluator matching."""

import pytest
from hypothesis import given, strategies as st

from ordstat.errors import DomainError, UnsupportedShapeError
from ordstat.partition import (Partition, dimension_of, match_theorem,
                               normalize)


def test_parse_format_round_trip():
    text = "K=10;Ks=8;groups=[1-3][4-6][7-8]"
    p = Partition.parse(text)
    assert p.K == 10 and p.Ks == 8
    assert p.groups == ((1, 2, 3), (4, 5, 6), (7, 8))
    assert p.format() == text


def test_parse_mixed_items():
    p = Partition.parse("K=6;Ks=6;groups=[1,3-4][2][5-6]")
    assert p.groups == ((1, 3, 4), (2,), (5, 6))
    # Format canonicalizes each group into run form.
    assert p.format() == "K=6;Ks=6;groups=[1,3-4][2][5-6]"


def test_groups_canonicalized():
    p = Partition(5, 5, ((3, 1, 2), (5, 4)))
    assert p.groups == ((1, 2, 3), (4, 5))


@pytest.mark.parametrize("text", [
    "K=4;Ks=2;groups=",
    "K=4;groups=[1-2]",
    "K=4;Ks=2;groups=[2-1]",
    "K=4;Ks=2;groups=[1,]",
    "garbage",
])
def test_parse_rejects(text):
    with pytest.raises(DomainError):
        Partition.parse(text)


def test_constructor_rejects():
    with pytest.raises(DomainError):
        Partition(4, 5, ((1, 2, 3, 4, 5),))       # Ks > K
    with pytest.raises(DomainError):
        Partition(4, 3, ((1, 2), (2, 3)))          # overlap
    with pytest.raises(DomainError):
        Partition(4, 3, ((1, 2),))                 # missing rank 3
    with pytest.raises(DomainError):
        Partition(4, 3, ((1, 2, 3), ()))           # empty group
    with pytest.raises(DomainError):
        Partition(4.0, 3, ((1, 2, 3),))            # non-int K


def test_normalize_splits_runs_and_merges():
    p = Partition(6, 5, ((1, 2, 5), (3, 4)))
    n = normalize(p)
    assert n.fine_groups == ((1, 2), (3, 4), (5,))
    assert n.reduction_plan == (((0, 2), 0),)
    assert n.separated_last
    assert n.sources == (0, 1, 0)
    assert dimension_of(n) == 3


def test_normalize_isolates_rank_ks():
    n = normalize(Partition(6, 5, ((1, 2, 3, 4, 5),)))
    assert n.fine_groups == ((1, 2, 3, 4), (5,))
    assert n.reduction_plan == (((0, 1), 0),)
    assert n.separated_last


def test_normalize_keeps_full_selection_whole():
    n = normalize(Partition(5, 5, ((1, 2, 3, 4, 5),)))
    assert n.fine_groups == ((1, 2, 3, 4, 5),)
    assert n.reduction_plan == ()
    assert not n.separated_last


def test_normalize_idempotent():
    n = normalize(Partition(6, 5, ((1, 2, 5), (3, 4))))
    again = normalize(n.as_partition())
    assert again.fine_groups == n.fine_groups
    assert again.reduction_plan == ()


@pytest.mark.parametrize("text,tid,m,swap", [
    ("K=3;Ks=3;groups=[1-3]", "T1", None, False),
    ("K=5;Ks=3;groups=[1-3]", "T4", None, False),
    ("K=4;Ks=4;groups=[2][1,3-4]", "T2", 2, False),
    ("K=4;Ks=4;groups=[2-4][1]", "T2", 1, True),
    ("K=5;Ks=5;groups=[1-2][3-5]", "T3", 2, False),
    ("K=5;Ks=5;groups=[3-5][1-2]", "T3", 2, True),
    ("K=5;Ks=4;groups=[1][2-4]", "T5a", 1, False),
    ("K=6;Ks=5;groups=[3][1-2,4-5]", "T5b", 3, False),
    ("K=5;Ks=4;groups=[3][1-2,4]", "T5c", 3, False),
    ("K=5;Ks=4;groups=[4][1-3]", "T5d", 4, False),
    ("K=4;Ks=2;groups=[1][2]", "T5d", 1, False),
    ("K=6;Ks=4;groups=[1-2][3-4]", "T6", 2, False),
    ("K=6;Ks=4;groups=[3-4][1-2]", "T6", 2, True),
])
def test_match_theorem(text, tid, m, swap):
    got = match_theorem(Partition.parse(text))
    assert got.id == tid
    assert got.m == m
    assert got.swap is swap


def test_match_rejects_interleaved_pair():
    with pytest.raises(UnsupportedShapeError) as exc:
        match_theorem(Partition.parse("K=4;Ks=4;groups=[1,3][2,4]"))
    assert exc.value.nearest


def test_match_rejects_three_groups_with_merge_hint():
    with pytest.raises(UnsupportedShapeError) as exc:
        match_theorem(Partition.parse("K=10;Ks=8;groups=[1-3][4-6][7-8]"))
    assert "K=10;Ks=8;groups=[1-3][4-8]" in exc.value.nearest


@st.composite
def partitions(draw):
    Ks = draw(st.integers(1, 8))
    K = draw(st.integers(Ks, 10))
    labels = draw(st.lists(st.integers(0, 3), min_size=Ks, max_size=Ks))
    groups = {}
    for rank, lab in enumerate(labels, start=1):
        groups.setdefault(lab, []).append(rank)
    return Partition(K, Ks, tuple(tuple(g) for g in groups.values()))


@given(partitions())
def test_round_trip_property(p):
    assert Partition.parse(p.format()) == p


@given(partitions())
def test_normalize_property(p):
    n = normalize(p)
    flat = [r for g in n.fine_groups for r in g]
    assert sorted(flat) == list(range(1, p.Ks + 1))
    for g in n.fine_groups:
        assert list(g) == list(range(g[0], g[-1] + 1))   # contiguous
    assert flat == sorted(flat)                           # ordered by rank
    if p.Ks < p.K:
        assert (p.Ks,) in n.fine_groups
    covered = {fi for fis, _ in n.reduction_plan for fi in fis}
    assert covered <= set(range(len(n.fine_groups)))
    assert len(n.sources) == len(n.fine_groups)
