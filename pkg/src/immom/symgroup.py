"""Permutations of {1..m} and the special elements of S_2n used throughout.

The doubled group S_2n acts on 2n symbols; a pair (p, q) of permutations of
{1..n} embeds block-diagonally (symbol i for the plus block, n+i for the
minus block), epsilon(A) swaps i with n+i for i in A, and theta(l, k) is the
involution exchanging {1..k} with {l+1..l+k}.  Serialized forms are always
1-indexed one-line notation; in-memory images are 0-indexed.
"""

from __future__ import annotations

from itertools import permutations as _itertools_permutations

from .partitions import Partition


class Permutation:
    """Permutation of {1..m}, stored as a tuple of 0-indexed images."""

    __slots__ = ("img",)

    def __init__(self, img):
        img = tuple(img)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation of 0..{len(img)-1}: {img}")
        object.__setattr__(self, "img", img)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def one_line(cls, images):
        """Build from 1-indexed one-line notation, e.g. [2, 3, 1]."""
        return cls(tuple(i - 1 for i in images))

    @classmethod
    def identity(cls, m):
        return cls(range(m))

    def to_one_line(self):
        """1-indexed one-line notation (the serialized form)."""
        return tuple(i + 1 for i in self.img)

    @property
    def degree(self):
        return len(self.img)

    def __call__(self, i):
        """Image of the 1-indexed point i."""
        return self.img[i - 1] + 1

    def __mul__(self, other):
        """Composition self o other: apply other first."""
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(self.img[j] for j in other.img)

    def inverse(self):
        inv = [0] * len(self.img)
        for i, j in enumerate(self.img):
            inv[j] = i
        return Permutation(inv)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.img == other.img

    def __hash__(self):
        return hash(self.img)

    def __repr__(self):
        return f"Permutation.one_line({list(self.to_one_line())})"

    def cycle_type(self) -> Partition:
        """Cycle lengths, as a partition of the degree."""
        seen = [False] * len(self.img)
        lengths = []
        for start in range(len(self.img)):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = self.img[j]
                length += 1
            lengths.append(length)
        lengths.sort(reverse=True)
        return Partition(lengths)

    def sign(self) -> int:
        ct = self.cycle_type()
        return -1 if (self.degree - len(ct.parts)) % 2 else 1


def all_permutations(m):
    """Yield the permutations of {1..m} in lexicographic one-line order."""
    for img in _itertools_permutations(range(m)):
        yield Permutation(img)


def interval(hi, lo=0):
    """The 1-indexed index set {lo+1, ..., hi} (empty when hi <= lo)."""
    return frozenset(range(lo + 1, hi + 1))


def all_subsets(n):
    """Yield the subsets of {1..n} in bitmask order (deterministic)."""
    for mask in range(1 << n):
        yield frozenset(i + 1 for i in range(n) if mask >> i & 1)


def embed_pair(p: Permutation, q: Permutation) -> Permutation:
    """Block-diagonal embedding of (p, q) into S_2n.

    Symbols 1..n carry p and symbols n+1..2n carry q: the flattening sends
    the plus copy of i to i and the minus copy to n+i.
    """
    n = p.degree
    if q.degree != n:
        raise ValueError("both factors must act on the same number of symbols")
    return Permutation(tuple(p.img) + tuple(n + j for j in q.img))


def epsilon(A, n) -> Permutation:
    """The involution of S_2n swapping i and n+i for each 1-indexed i in A."""
    img = list(range(2 * n))
    for i in A:
        if not 1 <= i <= n:
            raise ValueError(f"subset element {i} outside 1..{n}")
        img[i - 1], img[n + i - 1] = n + i - 1, i - 1
    return Permutation(img)


def theta(l, k, n) -> Permutation:
    """The involution of S_n exchanging {1..k} with {l+1..l+k} (k <= l).

    Points i <= k go up to i+l, points in {l+1..l+k} come down by l, and
    everything else is fixed.
    """
    if not 0 <= k <= l or l + k > n:
        raise ValueError(f"need 0 <= k <= l and l+k <= n, got l={l} k={k} n={n}")
    img = list(range(n))
    for i in range(k):
        img[i], img[l + i] = l + i, i
    return Permutation(img)
