"""Internals of the vectorized pair-sum engine.

The end-to-end contract (histograms equal to brute-force enumeration,
shard additivity through the public interface) is covered with the moment
tests; these pin the building blocks against the scalar permutation code.
"""

from math import comb, factorial

import numpy as np
import pytest

from immom.partitions import partition_index, partition_list
from immom.symgroup import Permutation, all_permutations, all_subsets
from immom.tsum import cycle_keyer, histogram_shard_sizes, perm_data, t_histogram_vec


def test_cycle_keyer_matches_scalar_cycle_type():
    for m in (1, 2, 3, 4, 6, 8):
        classify = cycle_keyer(m)
        perms = list(all_permutations(m))
        imgs = np.array([p.img for p in perms], dtype=np.uint8)
        keys = classify(imgs)
        index = partition_index(m)
        expect = np.array([index[p.cycle_type().parts] for p in perms])
        np.testing.assert_array_equal(keys, expect)


def test_perm_data_tables():
    pd = perm_data(4)
    assert pd.size == factorial(4)
    perms = list(all_permutations(4))
    # composition table: MT[a, b] ranks "apply b first, then a"
    for a in (0, 5, 17, 23):
        for b in (1, 8, 22):
            composed = perms[a] * perms[b]
            assert tuple(pd.P[pd.MT[a, b]]) == composed.img
    # inverse table
    for a in range(pd.size):
        assert tuple(pd.P[pd.INV[a]]) == perms[a].inverse().img
    # class labels
    index = partition_index(4)
    for a in range(pd.size):
        assert pd.cls_of[a] == index[perms[a].cycle_type().parts]


def test_perm_data_cached_and_bounded():
    assert perm_data(3) is perm_data(3)
    with pytest.raises(ValueError):
        perm_data(7)


def test_shard_axis_size_closed_form():
    # for nonempty B the shardable axis is the square of the number of
    # minimal coset representatives, which counts the images of B:
    # choose(n, |B|); for empty B it is all of V x V
    for n in (1, 2, 3, 4):
        for B in all_subsets(n):
            expect = comb(n, len(B)) ** 2 if B else factorial(n) ** 2
            assert histogram_shard_sizes(n, B) == expect


def test_vec_histogram_vector_layout_and_shard_additivity():
    lam = (2, 1)
    A, B = frozenset({1}), frozenset({2, 3})
    whole = t_histogram_vec(lam, A, B)
    assert whole.dtype == np.int64
    assert whole.shape == (len(partition_list(6)),)
    summed = np.zeros_like(whole)
    for shard in range(4):
        summed += t_histogram_vec(lam, A, B, shards=4, shard=shard)
    np.testing.assert_array_equal(summed, whole)


def test_vec_histogram_validates():
    with pytest.raises(ValueError):
        t_histogram_vec((2, 1), frozenset({4}), frozenset())
    with pytest.raises(ValueError):
        t_histogram_vec((2, 1), frozenset(), frozenset(), shards=2, shard=2)
