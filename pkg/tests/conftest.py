"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's own enumeration and
solver code paths: words are generated by raw recursion over the matrix,
point equality goes through expansions, and the coboundary oracle runs
rational Gaussian elimination plus explicit orbit sums.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest

from shiftgroups import make_point, validate_matrix
from shiftgroups.sft_core import EpPoint, SftSpec


@pytest.fixture(scope="session")
def golden() -> SftSpec:
    return validate_matrix([[1, 1], [1, 0]])


@pytest.fixture(scope="session")
def full2() -> SftSpec:
    return validate_matrix([[1, 1], [1, 1]])


@pytest.fixture(scope="session")
def full3() -> SftSpec:
    return validate_matrix([[1, 1, 1], [1, 1, 1], [1, 1, 1]])


def oracle_words(rows, k):
    """All admissible length-k words by brute filtering, independent of the
    library's enumerator."""
    n = len(rows)
    if k == 0:
        return [()]
    out = []
    for cand in product(range(1, n + 1), repeat=k):
        if all(rows[cand[i] - 1][cand[i + 1] - 1] == 1 for i in range(k - 1)):
            out.append(cand)
    return out


def oracle_cycles(rows, max_len):
    """Rotation-class representatives of primitive cycle words, brute force."""
    seen = set()
    out = []
    for p in range(1, max_len + 1):
        for w in oracle_words(rows, p):
            if rows[w[-1] - 1][w[0] - 1] != 1:
                continue
            if any(p % d == 0 and w == w[:d] * (p // d) for d in range(1, p)):
                continue
            rep = min(w[i:] + w[:i] for i in range(p))
            if rep not in seen:
                seen.add(rep)
                out.append(rep)
    return out


def expansion_equal(x: EpPoint, y: EpPoint) -> bool:
    """Point equality via the expansion bound, not canonical forms."""
    from math import gcd
    lcm = len(x.cyc) * len(y.cyc) // gcd(len(x.cyc), len(y.cyc))
    probe = max(len(x.pre), len(y.pre)) + lcm + max(len(x.cyc), len(y.cyc))
    return x.expand(probe) == y.expand(probe)


def oracle_orbit_sum(f, cycle):
    """Sum of f over the periodic orbit of a cycle word, via raw expansion."""
    p = len(cycle)
    stream = cycle * ((f.depth // p) + 2)
    return sum(f.values[tuple(stream[i: i + f.depth])] for i in range(p))


def oracle_coboundary_verdict(spec: SftSpec, f, g_depth: int = 4,
                              orbit_len: int = 8) -> str:
    """Independent SAT/UNSAT decision: orbit sums up to ``orbit_len`` first,
    then rational Gaussian elimination for g of depth ``g_depth`` with an
    integrality check on the solution line."""
    rows = [list(r) for r in spec.a]
    for cycle in oracle_cycles(rows, orbit_len):
        if oracle_orbit_sum(f, cycle) != 0:
            return "unsat"
    unknowns = oracle_words(rows, g_depth)
    index = {w: i for i, w in enumerate(unknowns)}
    system = []
    for w in oracle_words(rows, g_depth + 1):
        row = [Fraction(0)] * len(unknowns)
        row[index[w[: g_depth]]] += 1
        row[index[w[1:]]] -= 1
        system.append((row, Fraction(f.values[w[: f.depth]])))
    # gaussian elimination over the rationals
    rows_ = [r[:] + [rhs] for r, rhs in system]
    cols = len(unknowns)
    pivot_rows = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(rows_)) if rows_[i][c] != 0), None)
        if pivot is None:
            continue
        rows_[r], rows_[pivot] = rows_[pivot], rows_[r]
        pv = rows_[r][c]
        rows_[r] = [v / pv for v in rows_[r]]
        for i in range(len(rows_)):
            if i != r and rows_[i][c] != 0:
                factor = rows_[i][c]
                rows_[i] = [a - factor * b for a, b in zip(rows_[i], rows_[r])]
        pivot_rows.append((r, c))
        r += 1
    for i in range(r, len(rows_)):
        if rows_[i][cols] != 0:
            return "unsat"
    solution = [Fraction(0)] * cols
    for ri, ci in pivot_rows:
        solution[ci] = rows_[ri][cols]
    fractional = {v - v.__floor__() for v in solution}
    return "sat" if len(fractional) == 1 else "unsat"


def random_walk_point(spec: SftSpec, rng: random.Random,
                      max_pre: int = 4, max_cycle: int = 4) -> EpPoint:
    while True:
        length = rng.randint(1, max_pre + max_cycle)
        walk = [rng.randint(1, spec.n)]
        for _ in range(length - 1):
            walk.append(rng.choice(spec.followers(walk[-1])))
        cut = rng.randint(max(0, len(walk) - max_cycle), len(walk) - 1)
        u, v = walk[: cut], walk[cut:]
        if spec.allows(v[-1], v[0]):
            return make_point(spec, tuple(u), tuple(v))
