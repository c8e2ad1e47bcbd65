"""Tests for pattern bookkeeping, enumeration, and the triangularity decision."""

import numpy as np
import pytest

from logmod import (
    BlockStructure,
    NotTransitive,
    Pattern,
    TooLarge,
    decide_logmodular,
    enumerate_patterns,
    transitive_closure,
)


def test_from_pairs_adds_diagonal():
    p = Pattern.from_pairs(2, [(1, 2)])
    assert sorted(p.pairs) == [(1, 1), (1, 2), (2, 2)]
    assert p.n == 2


def test_from_pairs_rejects_out_of_range():
    with pytest.raises(ValueError):
        Pattern.from_pairs(2, [(1, 3)])
    with pytest.raises(ValueError):
        Pattern.from_pairs(2, [(0, 1)])


def test_constructors_and_masks():
    ut = Pattern.upper_triangular(3)
    assert sorted(ut.pairs) == [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]
    assert np.array_equal(ut.mask(), np.triu(np.ones((3, 3), dtype=bool)))
    assert np.array_equal(Pattern.lower_triangular(3).mask(), np.tril(np.ones((3, 3), dtype=bool)))
    assert np.array_equal(Pattern.diagonal(3).mask(), np.eye(3, dtype=bool))
    assert np.array_equal(Pattern.full(3).mask(), np.ones((3, 3), dtype=bool))
    assert ut.transpose() == Pattern.lower_triangular(3)


def test_transitive_closure():
    chain = Pattern.from_pairs(3, [(1, 2), (2, 3)])
    assert not chain.is_transitive()
    closed = transitive_closure(chain)
    assert closed.is_transitive()
    assert (1, 3) in closed.pairs
    # closure of an already transitive pattern is a fixed point
    assert transitive_closure(closed) == closed


def test_enumeration_counts():
    # numbers of reflexive-transitive patterns (preorders) on n points
    assert len(enumerate_patterns(1)) == 1
    assert len(enumerate_patterns(2)) == 4
    assert len(enumerate_patterns(3)) == 29
    assert len(enumerate_patterns(4)) == 355


def test_enumeration_size_cap():
    with pytest.raises(TooLarge):
        enumerate_patterns(5)


def test_decide_requires_transitive():
    chain = Pattern.from_pairs(3, [(1, 2), (2, 3)])
    with pytest.raises(NotTransitive):
        decide_logmodular(chain)


def test_decide_upper_triangular_yes():
    verdict = decide_logmodular(Pattern.upper_triangular(4))
    assert verdict.is_logmodular
    assert verdict.witness is None
    cert = verdict.certificate
    assert tuple(cert.permutation) == (1, 2, 3, 4)
    assert tuple(cert.block_sizes) == (1, 1, 1, 1)


def test_decide_lower_triangular_reverses_order():
    # lower-triangular is upper-triangular after reversing the index order
    verdict = decide_logmodular(Pattern.lower_triangular(2))
    assert verdict.is_logmodular
    assert tuple(verdict.certificate.permutation) == (2, 1)


def test_decide_diagonal_no_with_witness():
    verdict = decide_logmodular(Pattern.diagonal(2))
    assert not verdict.is_logmodular
    assert verdict.certificate is None
    # lexicographically least incomparable pair
    assert tuple(verdict.witness) == (1, 2)


def test_decide_merged_block_case():
    # indices 1 and 3 are mutually comparable (one block); 2 precedes both
    p = Pattern.from_pairs(3, [(1, 3), (3, 1), (2, 1), (2, 3)])
    verdict = decide_logmodular(p)
    assert verdict.is_logmodular
    cert = verdict.certificate
    assert tuple(cert.permutation) == (2, 1, 3)
    assert tuple(cert.block_sizes) == (1, 2)
    # the permuted mask must be block upper triangular
    perm = np.array(cert.permutation) - 1
    permuted = p.mask()[np.ix_(perm, perm)]
    row_block = np.repeat(np.arange(len(cert.block_sizes)), cert.block_sizes)
    for i in range(3):
        for j in range(3):
            if row_block[i] <= row_block[j]:
                assert permuted[i, j]
            else:
                assert not permuted[i, j]


def test_every_small_pattern_gets_verdict_or_witness():
    for n in (1, 2, 3):
        for p in enumerate_patterns(n):
            verdict = decide_logmodular(p)
            if verdict.is_logmodular:
                cert = verdict.certificate
                assert sum(cert.block_sizes) == n
                assert sorted(cert.permutation) == list(range(1, n + 1))
            else:
                i, j = verdict.witness
                assert (i, j) not in p.pairs and (j, i) not in p.pairs


def test_block_structure_validation():
    with pytest.raises(ValueError):
        BlockStructure((1, 3), (2,))  # not a bijection on 1..n
    with pytest.raises(ValueError):
        BlockStructure((1, 2), (1,))  # sizes do not sum to n
    with pytest.raises(ValueError):
        BlockStructure((1, 2), (2, 0))  # zero-size block
