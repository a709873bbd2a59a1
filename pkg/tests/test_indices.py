import itertools
import math

import pytest
from hypothesis import given, strategies as st

from mzvlab.indices import (
    PATTERNS,
    T1_A,
    T1_B,
    T2_G1,
    T2_G2,
    T2_G3,
    T2_G4,
    T2_G5,
    AdmissibilityError,
    BlockPattern,
    CONCAT,
    EmptyDomainError,
    Index,
    MERGE,
    MalformedWordError,
    ShapeError,
    admissible_indices,
    assemble,
    compositions,
    dual,
    index_to_word,
    weak_compositions,
    word_to_index,
)


def brute_compositions(total, parts):
    return sorted(
        c for c in itertools.product(range(1, total + 1), repeat=parts) if sum(c) == total
    )


@pytest.mark.parametrize("total", range(1, 9))
def test_compositions_match_brute_force(total):
    for parts in range(1, total + 1):
        got = compositions(total, parts)
        assert got == brute_compositions(total, parts)
        assert len(got) == math.comb(total - 1, parts - 1)


def test_composition_examples():
    assert compositions(3, 2) == [(1, 2), (2, 1)]
    assert compositions(4, 1) == [(4,)]
    assert compositions(5, 5) == [(1,) * 5]


def test_compositions_empty_domain():
    with pytest.raises(EmptyDomainError):
        compositions(2, 3)
    with pytest.raises(EmptyDomainError):
        compositions(3, 0)


@pytest.mark.parametrize("total,parts", [(0, 1), (0, 3), (2, 2), (4, 3), (6, 4)])
def test_weak_compositions(total, parts):
    got = weak_compositions(total, parts)
    brute = sorted(
        c for c in itertools.product(range(total + 1), repeat=parts) if sum(c) == total
    )
    assert got == brute
    assert len(got) == math.comb(total + parts - 1, parts - 1)


def test_weak_compositions_errors():
    with pytest.raises(EmptyDomainError):
        weak_compositions(-1, 2)
    with pytest.raises(EmptyDomainError):
        weak_compositions(2, 0)


def test_admissible_counts():
    # 2^(w-2) admissible indices of weight w
    for w in range(2, 12):
        assert len(admissible_indices(w)) == 2 ** (w - 2)
    assert sum(len(admissible_indices(w)) for w in range(2, 9)) == 127
    assert admissible_indices(4, 2) == [Index((1, 3)), Index((2, 2))]
    assert admissible_indices(1) == []


def test_index_basics():
    ix = Index.parse("1, 3")
    assert ix == (1, 3)
    assert ix.weight == 4 and ix.depth == 2 and ix.admissible
    assert str(ix) == "1,3"
    assert repr(ix) == "Index((1, 3))"
    assert not Index((2, 1)).admissible
    with pytest.raises(AdmissibilityError):
        Index((2, 1)).require_admissible()
    for bad in ("", "0,2", "a", "1,,2", "-1,3"):
        with pytest.raises(ValueError):
            Index.parse(bad)


def test_words():
    assert index_to_word((1, 2)) == "YYX"
    assert index_to_word((3,)) == "YXX"
    assert word_to_index("YXYXX") == (2, 3)
    for bad in ("", "XY", "YZX"):
        with pytest.raises(MalformedWordError):
            word_to_index(bad)


def test_dual_examples():
    assert dual((3,)) == (1, 2)
    assert dual((2,)) == (2,)
    assert dual((1, 1, 2)) == (4,)
    assert dual((2, 2)) == (2, 2)
    assert dual((1, 3)) == (1, 3)
    with pytest.raises(AdmissibilityError):
        dual((2, 1))


admissible = st.lists(st.integers(1, 5), min_size=0, max_size=5).flatmap(
    lambda head: st.integers(2, 6).map(lambda last: Index(head + [last]))
)


@given(admissible)
def test_word_roundtrip(ix):
    assert word_to_index(index_to_word(ix)) == ix
    assert len(index_to_word(ix)) == ix.weight


@given(admissible)
def test_dual_is_involution(ix):
    d = dual(ix)
    assert d.admissible
    assert dual(d) == ix
    assert d.weight == ix.weight
    assert d.depth == ix.weight - ix.depth


def test_assemble_examples():
    assert assemble([(1,), (1,), (1,)], T1_B) == (1, 3)
    assert assemble([(1,), (1,)], T1_A) == (2, 2)
    assert assemble([(1, 1), (2,)], T1_A) == (1, 2, 3)
    assert assemble([(1,), (1,), (1,)], T2_G1) == (2, 2, 2)
    assert assemble([(1,), (1,), (1,), (1,)], T2_G2) == (1, 3, 2)
    assert assemble([(1,), (1,), (1,), (1,)], T2_G4) == (2, 1, 3)
    assert assemble([(1,)] * 5, T2_G3) == (1, 2, 3)
    assert assemble([(1,)] * 5, T2_G5) == (1, 1, 4)


def test_assemble_slots_and_shape():
    with pytest.raises(ShapeError):
        assemble([(1,), (1,)], T1_B)
    with pytest.raises(ShapeError):
        assemble([(1,), ()], T1_A)
    assert assemble([(1, 2), (1,)], T1_A, slots=[(2, 3), (1, 1)]) == (1, 3, 2)
    with pytest.raises(ShapeError):
        assemble([(1, 2), (1,)], T1_A, slots=[(1, 3), (1, 1)])


def test_pattern_validation():
    with pytest.raises(ValueError):
        BlockPattern("bad", (CONCAT,), (True,))
    assert set(PATTERNS) == {"T1-A", "T1-B", "T2-G1", "T2-G2", "T2-G3", "T2-G4", "T2-G5"}
    assert T2_G5.n_blocks == 5 and T2_G5.n_merges == 2 and T2_G5.n_caps == 1
    assert T1_B.junctions == (CONCAT, MERGE)


@pytest.mark.parametrize("pattern", list(PATTERNS.values()), ids=lambda p: p.name)
def test_assembled_weight_and_depth(pattern):
    # block j is a composition of a_j + b_j + 1 into a_j + 1 parts
    n = pattern.n_blocks
    for k in range(4):
        for l in range(4 - k):
            if k + l > 6:
                continue
            for a in weak_compositions(k, n):
                for b in weak_compositions(l, n):
                    choices = [compositions(x + y + 1, x + 1) for x, y in zip(a, b)]
                    for blocks in itertools.product(*choices):
                        ix = assemble(blocks, pattern)
                        assert ix.admissible
                        assert ix.weight == k + l + n + pattern.n_caps
                        assert ix.depth == k + n - pattern.n_merges
