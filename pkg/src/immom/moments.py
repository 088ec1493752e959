"""Exact moments of immanants of submatrices of Haar unitaries.

For a shape lam of n, the immanant of the top-left n x n block M of a Haar
d x d unitary has mean absolute square n!/N(lam, d), and fourth moment

    sum over xi of 2n:  A_xi(lam) / (H(xi) N(xi, d)),

where the integer coefficients A_xi come from character-weighted cycle-type
histograms of products eps_A pi eps_B gamma over the block-diagonal group V.
The production path sums a small set of representatives (A, B) with integer
multiplicities; the *_direct functions do the same job by unreduced
enumeration over every swap pair and are kept as oracles for small n.

The d -> infinity scale of the fourth moment is an integer J(lam), computed
here by its own factored character sum (j_pair / leading_coefficient), which
is an independent check on the rational pipeline.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from math import comb, factorial

import numpy as np

from .characters import character, character_of, character_table
from .partitions import (
    Partition,
    as_partition,
    dominates,
    Dominance,
    hook_product,
    partition_list,
    unitary_numerator,
)
from .ratfun import RationalFunction
from .symgroup import Permutation, all_permutations, all_subsets, embed_pair, epsilon, interval, theta
from .tsum import cycle_keyer, t_histogram_vec
from . import tsum

SECOND_MOMENT_LIMIT = 5
LEADING_LIMIT = 9


def mean(lam) -> RationalFunction:
    """Mean of |Imm_lam M|^2 over Haar unitaries: n! / N(lam, d)."""
    lam = as_partition(lam)
    return RationalFunction.ratio(factorial(lam.n), unitary_numerator(lam))


def det_moment(n, t) -> RationalFunction:
    """Moment of |det M|^(2t): the reciprocal dimension 1/dim((t^n), d)."""
    if t < 0 or n < 1:
        raise ValueError("need n >= 1 and t >= 0")
    if t == 0:
        return RationalFunction.from_integer(1)
    block = Partition((t,) * n)
    return RationalFunction.ratio(hook_product(block), unitary_numerator(block))


def perm_fourth_conjecture(n) -> RationalFunction:
    """Conjectured closed form for the fourth moment of the permanent."""
    total = RationalFunction(0)
    for k in range(n // 2 + 1):
        shape = Partition((2 * n - 2 * k, 2 * k) if k else (2 * n,))
        coeff = Fraction(
            (2 * n - 4 * k + 1) * factorial(n - k),
            factorial(k) * factorial(2 * n - 2 * k + 1),
        )
        scale = Fraction(factorial(n)) ** 2 * 4 ** (n - 2 * k) * coeff**2
        total += scale * RationalFunction.ratio(
            hook_product(shape), unitary_numerator(shape)
        )
    return total


# ---------------------------------------------------------------------------
# fourth moment via cycle-type histograms


def representatives(n):
    """The (multiplicity, A, B) list replacing the full swap-pair double sum.

    A = {1..l} and B = {l-j+1..l+k}; the multiplicity counts how many of
    the 4^n swap pairs the representative stands for.
    """
    reps = []
    for l in range(n + 1):
        for j in range(l + 1):
            for k in range(min(n - l - j, l - j) + 1):
                zeta = 4 // ((1 + (k == n - l - j)) * (1 + (k == l - j)))
                mult = comb(n, l) * comb(l, j) * comb(n - l, k) * zeta
                reps.append((mult, interval(l), interval(l + k, l - j)))
    assert sum(m for m, _, _ in reps) == 4**n
    return reps


def t_histogram(lam, A, B, shards=1, shard=None):
    """Weighted cycle-type histogram for the swap pair (A, B) as a dict.

    Weights sum hatchi(pi) hatchi(gamma) over pairs whose product
    eps_A pi eps_B gamma lies in each class of S_2n; zero entries are
    dropped.  With shard=None all shards are summed.
    """
    lam = as_partition(lam)
    if shard is None:
        hist = sum(t_histogram_vec(lam, A, B, shards, s) for s in range(shards))
    else:
        hist = t_histogram_vec(lam, A, B, shards, shard)
    classes = partition_list(2 * lam.n)
    return {classes[i]: int(v) for i, v in enumerate(hist) if v}


def _histogram_shard(parts, A, B, shards, shard):
    return t_histogram_vec(Partition(parts), A, B, shards, shard).tolist()


def _class_coefficients(lam, workers=1):
    """A_xi for every partition xi of 2n, as exact integers."""
    lam = as_partition(lam)
    n = lam.n
    classes = partition_list(2 * n)
    total = [0] * len(classes)
    reps = representatives(n)
    if workers > 1:
        from multiprocessing import get_context

        tasks = [(i, s) for i in range(len(reps)) for s in range(workers)]
        args = [(lam.parts, reps[i][1], reps[i][2], workers, s) for i, s in tasks]
        with get_context("fork").Pool(workers) as pool:
            partials = pool.starmap(_histogram_shard, args)
        for (i, _), part in zip(tasks, partials):
            mult = reps[i][0]
            for c, v in enumerate(part):
                total[c] += mult * v
    else:
        for mult, A, B in reps:
            hist = t_histogram_vec(lam, A, B)
            for c, v in enumerate(hist.tolist()):
                total[c] += mult * v
    table = character_table(2 * n)
    coeffs = {}
    for xi in classes:
        row = table.row(xi)
        a = sum(total[c] * int(row[c]) for c in range(len(classes)))
        if a:
            coeffs[xi] = a
    return coeffs


def _assemble_rational(coeffs):
    total = RationalFunction(0)
    for xi, a in coeffs.items():
        total += RationalFunction.ratio(
            a, unitary_numerator(xi), den_scalar=hook_product(xi)
        )
    return total


@dataclass(frozen=True)
class SecondMomentReport:
    lam: Partition
    n: int
    value: RationalFunction
    class_coefficients: dict
    wall_time_s: float
    workers: int


def second_moment_report(lam, workers=1, limit=None) -> SecondMomentReport:
    """Fourth moment of |Imm_lam| with coefficient and timing metadata.

    Always recomputes (timings are honest); second_moment() is the cached
    value-only variant.  The default size guard stops at n = 5; pass a
    larger limit explicitly to go beyond it.
    """
    lam = as_partition(lam)
    n = lam.n
    cap = SECOND_MOMENT_LIMIT if limit is None else limit
    if n > cap:
        raise ValueError(
            f"|lam| = {n} exceeds the fourth-moment guard ({cap}); "
            f"pass a larger limit to override"
        )
    t0 = time.perf_counter()
    coeffs = _class_coefficients(lam, workers=workers)
    value = _assemble_rational(coeffs)
    return SecondMomentReport(
        lam=lam,
        n=n,
        value=value,
        class_coefficients=coeffs,
        wall_time_s=time.perf_counter() - t0,
        workers=workers,
    )


@cache
def _second_moment_cached(parts, limit):
    return second_moment_report(Partition(parts), limit=limit).value


def second_moment(lam, workers=1, limit=None) -> RationalFunction:
    """Fourth moment of |Imm_lam M| as an exact rational function of d."""
    lam = as_partition(lam)
    if workers > 1:
        return second_moment_report(lam, workers=workers, limit=limit).value
    return _second_moment_cached(lam.parts, limit)


# ---------------------------------------------------------------------------
# unreduced oracles (small n only; deliberately dumb)

_DIRECT_LIMIT = 3


def _weighted_pairs(lam):
    lam = as_partition(lam)
    n = lam.n
    out = []
    for p in all_permutations(n):
        cp = character_of(lam, p)
        for q in all_permutations(n):
            w = cp * character_of(lam, q)
            out.append((embed_pair(p, q), w))
    return out


def t_histogram_direct(lam, A, B):
    """The histogram by brute enumeration of every (pi, gamma) pair."""
    lam = as_partition(lam)
    n = lam.n
    if n > _DIRECT_LIMIT:
        raise ValueError("direct enumeration is for n <= 3")
    sigma, rho = epsilon(A, n), epsilon(B, n)
    pairs = _weighted_pairs(lam)
    acc: dict[Partition, int] = {}
    for pi, w1 in pairs:
        left = sigma * pi * rho
        for gamma, w2 in pairs:
            if not w1 * w2:
                continue
            ct = (left * gamma).cycle_type()
            acc[ct] = acc.get(ct, 0) + w1 * w2
    return {ct: v for ct, v in acc.items() if v}


def second_moment_direct(lam) -> RationalFunction:
    """Fourth moment by summing every swap pair with direct histograms."""
    lam = as_partition(lam)
    n = lam.n
    if n > _DIRECT_LIMIT:
        raise ValueError("direct enumeration is for n <= 3")
    total: dict[Partition, int] = {}
    for A in all_subsets(n):
        for B in all_subsets(n):
            for ct, v in t_histogram_direct(lam, A, B).items():
                total[ct] = total.get(ct, 0) + v
    coeffs = {}
    for xi in partition_list(2 * n):
        a = sum(v * character(xi, ct) for ct, v in total.items())
        if a:
            coeffs[xi] = a
    return _assemble_rational(coeffs)


# ---------------------------------------------------------------------------
# leading coefficients


def j_pair(lam, l, k) -> int:
    """Paired character sum for swap sizes (l, k).

    Equals the sum over x+, x- in S_l and y+, y- in S_(n-l) of the product
    F[x+,y+] F[x-,y-] F[x-,y+] F[x+,y-] with F[x,y] the character of
    theta(l,k) composed with the block permutation x (+) y; collapsing the
    y sums first turns it into the sum of squares of an integer Gram
    matrix, which is how it is evaluated.
    """
    lam = as_partition(lam)
    n = lam.n
    th = np.array(theta(l, k, n).img, dtype=np.uint8)
    x_side = np.array(
        [perm + tuple(range(l, n)) for perm in _perm_tuples(l)], dtype=np.uint8
    )
    y_side = np.array(
        [tuple(range(l)) + tuple(i + l for i in perm) for perm in _perm_tuples(n - l)],
        dtype=np.uint8,
    )
    combined = np.empty((len(x_side), len(y_side), n), dtype=np.uint8)
    combined[:] = x_side[:, None, :]
    combined[:, :, l:] = y_side[None, :, l:]
    composed = th[combined]
    chi_row = character_table(n).row(lam)
    chimax = int(np.abs(chi_row).max())
    if len(y_side) * chimax * chimax >= 2**53:
        raise RuntimeError("character sums too large for exact float64 matmul")
    cls = cycle_keyer(n)(composed.reshape(-1, n))
    F = chi_row[cls].reshape(len(x_side), len(y_side)).astype(np.float64)
    G = F @ F.T
    Gi = np.rint(G)
    if not np.array_equal(Gi, G):
        raise RuntimeError("gram accumulation lost exactness")
    return sum(int(g) ** 2 for g in Gi.ravel())


def _perm_tuples(m):
    from itertools import permutations

    return list(permutations(range(m)))


def leading_coefficient(lam, limit=None) -> int:
    """The integer J(lam) scaling the fourth moment's d^(-2n) tail."""
    lam = as_partition(lam)
    n = lam.n
    cap = LEADING_LIMIT if limit is None else limit
    if n > cap:
        raise ValueError(
            f"|lam| = {n} exceeds the leading-coefficient guard ({cap}); "
            f"pass a larger limit to override"
        )
    total = 0
    for l in range(n // 2 + 1):
        double = 1 if 2 * l == n else 2
        inner = sum(
            comb(l, k) * comb(n - l, k) * j_pair(lam, l, k) for k in range(l + 1)
        )
        total += double * comb(n, l) * inner
    return total


def j_pair_direct(lam, A, B) -> int:
    """Membership-test evaluation of the paired sum for eps_A, eps_B."""
    lam = as_partition(lam)
    n = lam.n
    if n > 4:
        raise ValueError("direct pair enumeration is for n <= 4")
    sigma, rho = epsilon(A, n), epsilon(B, n)
    total = 0
    for pi, w in _weighted_pairs(lam):
        if not w:
            continue
        g = (sigma * pi * rho).inverse()
        if all(v < n for v in g.img[:n]):
            gp = Permutation(g.img[:n])
            gm = Permutation(v - n for v in g.img[n:])
            total += w * character_of(lam, gp) * character_of(lam, gm)
    return total


def leading_coefficient_direct(lam) -> int:
    """J(lam) by brute force over every swap pair (n <= 4)."""
    lam = as_partition(lam)
    n = lam.n
    total = 0
    for A in all_subsets(n):
        for B in all_subsets(n):
            total += j_pair_direct(lam, A, B)
    return total


# ---------------------------------------------------------------------------
# dominance ordering of means


def mean_dominance_check(n, d):
    """Violations of 'higher in dominance order => smaller mean' at d.

    Returns a list of (lam, mu) pairs with lam strictly dominating mu but
    mean(lam)(d) > mean(mu)(d); empty means the ordering holds.
    """
    parts = partition_list(n)
    values = {lam: mean(lam).evaluate(d) for lam in parts}
    bad = []
    for lam in parts:
        for mu in parts:
            if dominates(lam, mu) is Dominance.GREATER and values[lam] > values[mu]:
                bad.append((lam, mu))
    return bad


# ---------------------------------------------------------------------------
# report payloads


def rational_payload(f: RationalFunction) -> dict:
    """JSON-ready exact form: prefactor, ascending numerator coefficients,
    denominator scalar, and [offset, multiplicity] factor pairs."""
    return {
        "prefactor": f.prefactor,
        "numerator_coeffs": list(f.numer),
        "denominator_scalar": f.den.scalar,
        "denominator_factors": [[c, m] for c, m in f.den.factors.items()],
    }


def report(kind, lam=None, n=None, value=None, integer=None, d=None, wall_time_s=None):
    """Assemble the standard JSON report dict (schema version 1)."""
    out = {"schema_version": 1, "kind": kind}
    if lam is not None:
        lam = as_partition(lam)
        out["lambda"] = list(lam.parts)
        out["n"] = lam.n
    elif n is not None:
        out["n"] = n
    if value is not None:
        payload = rational_payload(value)
        payload["machine"] = value.to_machine()
        payload["display"] = value.to_display()
        out["rational"] = payload
        if d is not None:
            q = value.evaluate(d)
            out["d"] = d
            out["value"] = f"{q.numerator}/{q.denominator}"
    if integer is not None:
        out["integer"] = integer
    if wall_time_s is not None:
        out["wall_time_s"] = wall_time_s
    return out
