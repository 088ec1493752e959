"""Irreducible characters of symmetric groups.

Characters are computed by the Murnaghan-Nakayama rule in beta-set form:
a border strip of length r is removed from the first-column hook lengths
by replacing some b with b-r, and the sign is (-1)^(number of beta entries
jumped over).  Values are exact integers, memoized on (shape, class).
"""

from __future__ import annotations

import csv
from functools import cache
from math import factorial

import numpy as np

from .partitions import Partition, as_partition, partition_list


@cache
def _chi(lam: tuple, mu: tuple) -> int:
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    length = len(lam)
    beta = [lam[i] + length - 1 - i for i in range(length)]
    beta_set = set(beta)
    total = 0
    for b in beta:
        if b < r or b - r in beta_set:
            continue
        height = sum(1 for x in beta if b - r < x < b)
        new_beta = sorted(beta_set - {b} | {b - r}, reverse=True)
        new_lam = tuple(x - (length - 1 - i) for i, x in enumerate(new_beta))
        while new_lam and new_lam[-1] == 0:
            new_lam = new_lam[:-1]
        term = _chi(new_lam, rest)
        total += -term if height % 2 else term
    return total


def character(lam, mu) -> int:
    """Character value of the irrep lam on the class with cycle type mu."""
    lam, mu = as_partition(lam), as_partition(mu)
    if lam.n != mu.n:
        raise ValueError("shape and cycle type must partition the same number")
    return _chi(lam.parts, mu.parts)


def character_of(lam, perm) -> int:
    """Character of the irrep lam evaluated at a Permutation."""
    return character(lam, perm.cycle_type())


def hat_character(lam, p_plus, p_minus) -> int:
    """Character of the outer square irrep on the block pair (p_plus, p_minus).

    The doubled group of block-diagonal pairs carries the irrep lam x lam,
    whose character at (p, q) is chi(p) * chi(q).
    """
    return character_of(lam, p_plus) * character_of(lam, p_minus)


def class_size(mu) -> int:
    """Number of permutations with cycle type mu."""
    mu = as_partition(mu)
    z = 1
    counts: dict[int, int] = {}
    for part in mu.parts:
        counts[part] = counts.get(part, 0) + 1
    for part, k in counts.items():
        z *= part**k * factorial(k)
    return factorial(mu.n) // z


class CharacterTable:
    """Full character table of S_m, frozen after construction.

    Rows are irreps and columns are classes, both in the canonical
    reverse lexicographic partition order.  Reads after construction are
    plain lookups with no locking or mutation.
    """

    def __init__(self, m: int):
        self.m = m
        self.partitions = partition_list(m)
        self.index = {p.parts: i for i, p in enumerate(self.partitions)}
        k = len(self.partitions)
        values = np.zeros((k, k), dtype=np.int64)
        for i, lam in enumerate(self.partitions):
            for j, mu in enumerate(self.partitions):
                values[i, j] = _chi(lam.parts, mu.parts)
        values.setflags(write=False)
        self.values = values
        self.class_sizes = tuple(class_size(mu) for mu in self.partitions)

    def row(self, lam) -> np.ndarray:
        """Character values of irrep lam on every class (canonical order)."""
        return self.values[self.index[as_partition(lam).parts]]

    def value(self, lam, mu) -> int:
        lam, mu = as_partition(lam), as_partition(mu)
        return int(self.values[self.index[lam.parts], self.index[mu.parts]])

    def to_csv(self, target) -> None:
        """Dump the table for inspection: rows are irreps, columns are
        cycle-type classes, both in the canonical partition order.  Accepts
        a path or an open text file."""

        def _write(fh):
            writer = csv.writer(fh)
            writer.writerow(["shape"] + [str(mu) for mu in self.partitions])
            for lam, row in zip(self.partitions, self.values):
                writer.writerow([str(lam)] + [int(v) for v in row])

        if hasattr(target, "write"):
            _write(target)
        else:
            with open(target, "w", encoding="utf-8", newline="") as fh:
                _write(fh)


@cache
def character_table(m: int) -> CharacterTable:
    """The character table of S_m (built once per process)."""
    return CharacterTable(m)
