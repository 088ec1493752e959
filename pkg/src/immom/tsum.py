"""Vectorized engine behind the fourth-moment character sums.

For a shape lam of n and swap sets A, B inside {1..n}, the quantity driving
the fourth moment is a histogram over cycle types c of S_2n of

    sum of hatchi(pi) * hatchi(gamma)  over pairs pi, gamma in V
    with cycle_type(eps_A * pi * eps_B * gamma) = c,

where V is the block-diagonal copy of S_n x S_n in S_2n and hatchi is the
product character.  Enumerating all |V|^2 pairs is hopeless beyond n=4, so
the pair sum is factored through the double coset decomposition of V by
K = V intersect eps_B V eps_B: writing pi = t * kappa over a transversal of
V/K, the inner kappa sum becomes an integer matrix product and each product
permutation is visited once per (transversal element, second factor) pair,
|V|^2/|K| composites in all.  The matrix product runs in float64, which is
exact here because every partial sum is an integer far below 2**53 (checked
at run time), so the histogram is bit-identical to the naive enumeration.

Histograms are additive over a shard split of the transversal rows, which
is what the worker interface exposes; merging shards in any order gives
identical integers.
"""

from __future__ import annotations

from functools import cache
from itertools import permutations as _itertools_permutations

import numpy as np

from .characters import character_table
from .partitions import as_partition, hook_product, partition_list

_MAX_ENGINE_N = 6  # composition tables are (n!)^2; beyond 6 they do not fit


class _PermData:
    """Lexicographic arrays for S_n: images, composition table, inverses,
    and the conjugacy class index of every element."""

    def __init__(self, n):
        if n > _MAX_ENGINE_N:
            raise ValueError(
                f"composition tables for S_{n} would need ({n}!)^2 entries; "
                f"the engine supports n <= {_MAX_ENGINE_N}"
            )
        self.n = n
        P = np.array(list(_itertools_permutations(range(n))), dtype=np.uint8)
        self.P = P
        self.size = len(P)
        self._powers = (n ** np.arange(n - 1, -1, -1)).astype(np.int64)
        self._codes = P.astype(np.int64) @ self._powers
        MT = np.empty((self.size, self.size), dtype=np.int32)
        for a in range(self.size):
            MT[a] = self.rank(P[a][P])
        self.MT = MT
        self.INV = self.rank(np.argsort(P, axis=1))
        index = {mu.parts: i for i, mu in enumerate(partition_list(n))}
        self.cls_of = np.array(
            [index[_cycle_type_of_row(row)] for row in P], dtype=np.uint8
        )

    def rank(self, rows):
        """Indices of permutation rows (N, n) in lexicographic order."""
        return np.searchsorted(self._codes, rows.astype(np.int64) @ self._powers)


def _cycle_type_of_row(img):
    seen = [False] * len(img)
    out = []
    for s in range(len(img)):
        if seen[s]:
            continue
        length, j = 0, s
        while not seen[j]:
            seen[j] = True
            j = img[j]
            length += 1
        out.append(length)
    out.sort(reverse=True)
    return tuple(out)


@cache
def perm_data(n) -> _PermData:
    return _PermData(n)


@cache
def cycle_keyer(m):
    """A classifier mapping batches of permutations of degree m to class
    indices (canonical partition order).

    The key is the vector of fixed-point counts of the first floor(m/2)
    powers: parts above m/2 occur at most once, so those counts pin down
    the cycle type, and a dense lookup table turns keys into indices.
    """
    parts_list = partition_list(m)
    radix = m + 1
    depth = m // 2
    lut = np.full(radix**depth if depth else 1, 255, dtype=np.uint8)
    for ci, mu in enumerate(parts_list):
        counts: dict[int, int] = {}
        for part in mu.parts:
            counts[part] = counts.get(part, 0) + 1
        key = 0
        for t in range(depth, 0, -1):
            f = sum(length * k for length, k in counts.items() if t % length == 0)
            key = key * radix + f
        assert lut[key] == 255, "fixed-point keys must separate classes"
        lut[key] = ci

    def classify(batch):
        batch = np.ascontiguousarray(batch)
        ar = np.arange(m, dtype=batch.dtype)
        key = np.zeros(len(batch), dtype=np.int64)
        power = batch
        scale = 1
        for t in range(1, depth + 1):
            if t > 1:
                power = np.take_along_axis(batch, power, axis=1)
            key += (power == ar).sum(axis=1, dtype=np.int64) * scale
            scale *= radix
        return lut[key]

    return classify


@cache
def _pair_images(n):
    """All of V as 2n-symbol image rows, ordered by i_plus * n! + i_minus."""
    pd = perm_data(n)
    left = np.repeat(pd.P, pd.size, axis=0)
    right = np.tile(pd.P, (pd.size, 1)) + np.uint8(n)
    return np.concatenate([left, right], axis=1)


@cache
def _subset_data(n, b_points):
    """Members of S_n preserving the 0-based point set, and the minimal
    coset representatives of S_n over that Young subgroup (one per image
    set of the points)."""
    pd = perm_data(n)
    if not b_points:
        return np.arange(pd.size), np.array([0])
    idx = np.array(b_points)
    images = pd.P[:, idx]
    members = np.where(np.isin(images, idx).all(axis=1))[0]
    bits = np.bitwise_or.reduce(
        np.left_shift(np.int64(1), images.astype(np.int64)), axis=1
    )
    _, first = np.unique(bits, return_index=True)
    return members, np.sort(first)


def _epsilon_images(n, points):
    img = np.arange(2 * n, dtype=np.uint8)
    for i in points:
        img[i], img[n + i] = n + i, i
    return img


_KEY_CACHE: dict = {}
_KEY_CACHE_LIMIT = 1 << 24  # cache cycle-type keys only when they fit easily


def t_histogram_vec(lam, A, B, shards=1, shard=0):
    """One shard of the weighted cycle-type histogram for eps_A, eps_B.

    A and B are 1-based subsets of {1..n}; the result is an int64 vector
    aligned with partition_list(2n).  Summing over shard = 0..shards-1
    (in any order) gives the full histogram.
    """
    lam = as_partition(lam)
    n = lam.n
    a_pts = tuple(sorted(i - 1 for i in A))
    b_pts = tuple(sorted(i - 1 for i in B))
    if any(not 0 <= p < n for p in a_pts + b_pts):
        raise ValueError("swap sets must lie inside 1..n")
    if len(a_pts) > len(b_pts):
        # product order around conjugation-invariant weights: the histogram
        # for (A, B) equals the one for (B, A), so decompose by the larger set
        a_pts, b_pts = b_pts, a_pts
    if not (0 <= shard < shards):
        raise ValueError("need 0 <= shard < shards")

    pd = perm_data(n)
    table = character_table(n)
    chi_perm = table.row(lam)[pd.cls_of].astype(np.float64)
    chi2d = np.outer(chi_perm, chi_perm)
    chimax = int(np.abs(table.row(lam)).max())
    classify = cycle_keyer(2 * n)
    ncls = len(partition_list(2 * n))
    V2n = _pair_images(n)
    size = pd.size

    if not b_pts:
        # sigma = rho = identity: the pi sum is the self-convolution of an
        # irreducible character, so each product u gets weight H^2 hatchi(u)
        h2 = float(hook_product(lam)) ** 2
        keys = _cached_keys(n, (), (), lambda: classify(V2n))
        rows = np.arange(size * size)[shard::shards]
        weights = h2 * chi2d.ravel()[rows]
        hist = np.bincount(keys[rows], weights=weights, minlength=ncls)
        return _to_int64(hist)

    members, trans = _subset_data(n, b_pts)
    sigma2n = _epsilon_images(n, a_pts)
    rho2n = _epsilon_images(n, b_pts)
    ksize = len(members) ** 2
    if ksize * chimax**4 >= 2**53:
        raise RuntimeError("character sums too large for exact float64 matmul")

    # conjugated inverses rho kappa^-1 rho for every kappa in K, as V pairs
    PL = pd.P[pd.INV[members]]
    m = len(members)
    k_inv = np.concatenate(
        [np.repeat(PL, m, axis=0), np.tile(PL, (m, 1)) + np.uint8(n)], axis=1
    )
    g2n = rho2n[k_inv[:, rho2n]]
    gp = pd.rank(g2n[:, :n])
    gm = pd.rank(g2n[:, n:] - n)

    # transversal pairs owned by this shard
    t_pairs = [(a, b) for a in trans for b in trans]
    own = t_pairs[shard::shards]
    if not own:
        return np.zeros(ncls, dtype=np.int64)
    ta = np.array([p[0] for p in own])
    tb = np.array([p[1] for p in own])
    # hatchi(t kappa) for every owned transversal pair and kappa = (c, d):
    # outer over the two components, flattened in kappa order c * m + d
    compA = pd.MT[ta[:, None], members[None, :]]
    compB = pd.MT[tb[:, None], members[None, :]]
    chiM1 = chi2d[compA[:, :, None], compB[:, None, :]].reshape(len(own), ksize)

    t2n = np.concatenate([pd.P[ta], pd.P[tb] + np.uint8(n)], axis=1)
    E = sigma2n[t2n[:, rho2n]]

    cached = None
    if len(trans) ** 2 * size * size <= _KEY_CACHE_LIMIT:
        def build():
            full_t2n = np.concatenate(
                [pd.P[[p[0] for p in t_pairs]],
                 pd.P[[p[1] for p in t_pairs]] + np.uint8(n)], axis=1
            )
            full_E = sigma2n[full_t2n[:, rho2n]]
            out = np.empty((len(t_pairs), size * size), dtype=np.uint8)
            for i in range(len(t_pairs)):
                out[i] = classify(full_E[i][V2n])
            return out
        cached = _cached_keys(n, a_pts, b_pts, build)

    maxC = ksize * float(chimax) ** 4
    block = _block_size(len(own), ksize, maxC, 2 * n)
    hist = np.zeros(ncls, dtype=np.int64)
    own_index = np.arange(len(t_pairs))[shard::shards]
    for v0 in range(0, size * size, block):
        v1 = min(v0 + block, size * size)
        vp = np.arange(v0, v1) // size
        vm = np.arange(v0, v1) % size
        chiM2 = chi2d[pd.MT[gp[:, None], vp[None, :]],
                      pd.MT[gm[:, None], vm[None, :]]]
        C = chiM1 @ chiM2
        if cached is not None:
            keys = cached[own_index][:, v0:v1]
        else:
            composed = E[:, V2n[v0:v1]]
            keys = classify(composed.reshape(-1, 2 * n)).reshape(len(own), v1 - v0)
        part = np.bincount(keys.ravel(), weights=C.ravel(), minlength=ncls)
        hist += _to_int64(part)
    return hist


def _cached_keys(n, a_pts, b_pts, build):
    key = (n, a_pts, b_pts)
    if key not in _KEY_CACHE:
        _KEY_CACHE[key] = build()
    return _KEY_CACHE[key]


def _block_size(t_rows, ksize, maxC, width):
    """Column block bounded so each bincount stays exactly representable
    in float64 and intermediate arrays stay modest."""
    exact = int(2**52 / max(t_rows * maxC, 1.0))
    mem = (1 << 26) // max(t_rows * width, ksize * 8, 1)
    return max(256, min(exact, mem))


def _to_int64(hist):
    out = np.rint(hist)
    if not np.array_equal(out, hist):
        raise RuntimeError("histogram accumulation lost exactness")
    return out.astype(np.int64)


def histogram_shard_sizes(n, B):
    """Number of transversal pairs for the set B (the shardable axis)."""
    b_pts = tuple(sorted(i - 1 for i in B))
    if not b_pts:
        return perm_data(n).size ** 2
    _, trans = _subset_data(n, b_pts)
    return len(trans) ** 2
