"""One-sided topological Markov shifts presented by 0/1 transition matrices.

A space is the set of right-infinite sequences over symbols 1..n whose
consecutive pairs are allowed by the matrix, together with the left shift.
This module holds the matrix validation, admissible-word enumeration,
eventually periodic points (the exact-evaluation substrate: every point we
ever touch is of the form u followed by a repeating cycle v), cylinder
partitions, and the determinant/Smith-form invariants.

Symbols are 1-based throughout.  Words are tuples of ints; they serialize as
digit strings for alphabets up to 9 symbols and comma-separated integers
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .errors import (
    BadArgument,
    EmptyRowOrColumn,
    InadmissibleWord,
    NotSquare,
    NotZeroOne,
    ParseError,
    Permutation,
    Reducible,
    checked_i64,
)

Word = tuple[int, ...]

EMPTY_WORD: Word = ()


@dataclass(frozen=True)
class SftSpec:
    """A validated transition matrix and the shift space it presents.

    Accepted matrices are square over {0,1}, irreducible and not a
    permutation; the flags are computed, never taken on trust.
    """

    n: int
    a: tuple[tuple[int, ...], ...]
    irreducible: bool
    primitive: bool
    permutation: bool

    def allows(self, i: int, j: int) -> bool:
        return self.a[i - 1][j - 1] == 1

    def followers(self, i: int) -> tuple[int, ...]:
        """Symbols that may follow ``i``; all symbols when ``i`` is None."""
        if i is None:
            return tuple(range(1, self.n + 1))
        return tuple(j for j in range(1, self.n + 1) if self.allows(i, j))

    def row(self, i: int) -> tuple[int, ...]:
        return self.a[i - 1]

    def is_admissible(self, word: Sequence[int]) -> bool:
        for s in word:
            if not 1 <= s <= self.n:
                return False
        return all(self.allows(word[i], word[i + 1]) for i in range(len(word) - 1))

    def check_admissible(self, word: Sequence[int]) -> Word:
        w = tuple(word)
        if not self.is_admissible(w):
            raise InadmissibleWord(f"word {format_word(w, self.n)} is not admissible")
        return w


def _strongly_connected(a: Sequence[Sequence[int]]) -> bool:
    n = len(a)

    def reach(start: int, mat) -> set[int]:
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in range(n):
                if mat[u][v] and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    transpose = [[a[j][i] for j in range(n)] for i in range(n)]
    return len(reach(0, a)) == n and len(reach(0, transpose)) == n


def _period(a: Sequence[Sequence[int]]) -> int:
    """gcd of cycle lengths of a strongly connected graph (BFS level trick)."""
    n = len(a)
    level = [-1] * n
    level[0] = 0
    queue = [0]
    g = 0
    while queue:
        u = queue.pop(0)
        for v in range(n):
            if a[u][v]:
                if level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
                else:
                    g = gcd(g, level[u] + 1 - level[v])
    return abs(g)


def validate_matrix(raw: Sequence[Sequence[int]]) -> SftSpec:
    """Validate a 0/1 grid and compute its flags.

    Rejects non-square grids, entries outside {0,1}, empty rows or columns,
    reducible matrices, and permutation matrices.
    """
    rows = [tuple(r) for r in raw]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NotSquare("matrix must be square and nonempty")
    for r in rows:
        for e in r:
            if e not in (0, 1):
                raise NotZeroOne(f"entry {e!r} is not 0 or 1")
    a = tuple(rows)
    for i in range(n):
        if not any(a[i][j] for j in range(n)):
            raise EmptyRowOrColumn(f"row {i + 1} has no 1")
        if not any(a[j][i] for j in range(n)):
            raise EmptyRowOrColumn(f"column {i + 1} has no 1")
    permutation = all(sum(a[i]) == 1 for i in range(n)) and all(
        sum(a[j][i] for j in range(n)) == 1 for i in range(n)
    )
    irreducible = _strongly_connected(a)
    if not irreducible:
        raise Reducible("transition graph is not strongly connected")
    if permutation:
        raise Permutation("permutation matrices are excluded")
    primitive = _period(a) == 1
    return SftSpec(n=n, a=a, irreducible=irreducible, primitive=primitive,
                   permutation=permutation)


@lru_cache(maxsize=None)
def _words_cached(spec: SftSpec, k: int) -> tuple[Word, ...]:
    if k == 0:
        return (EMPTY_WORD,)
    if k == 1:
        return tuple((s,) for s in range(1, spec.n + 1))
    out: list[Word] = []
    for w in _words_cached(spec, k - 1):
        for s in spec.followers(w[-1]):
            out.append(w + (s,))
    return tuple(out)


def enumerate_words(spec: SftSpec, k: int) -> list[Word]:
    """All admissible words of length ``k`` in lexicographic order."""
    if k < 0:
        raise BadArgument("word length must be nonnegative")
    return list(_words_cached(spec, k))


def format_word(word: Sequence[int], n: int) -> str:
    w = tuple(word)
    if not w:
        return "-"
    if n <= 9:
        return "".join(str(s) for s in w)
    return ",".join(str(s) for s in w)


def parse_word(text: str, spec: SftSpec) -> Word:
    """Parse a word literal; "-" and "" denote the empty word."""
    text = text.strip()
    if text in ("", "-"):
        return EMPTY_WORD
    try:
        if spec.n <= 9 and "," not in text:
            symbols = tuple(int(c) for c in text)
        else:
            symbols = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise ParseError(f"cannot parse word {text!r}") from exc
    return spec.check_admissible(symbols)


def _primitive_root(v: Word) -> Word:
    """Shortest word whose repetition equals the repetition of ``v``."""
    p = len(v)
    for d in range(1, p + 1):
        if p % d == 0 and v == v[: d] * (p // d):
            return v[: d]
    return v


def _rotate_right(v: Word) -> Word:
    return v[-1:] + v[:-1]


@dataclass(frozen=True)
class EpPoint:
    """An eventually periodic point: preperiod ``pre`` then cycle ``cyc`` forever.

    Instances are canonical: the cycle is primitive and the preperiod cannot
    be shortened, so structural equality decides point equality.  Use
    :func:`make_point` (or the shift/word helpers) rather than the raw
    constructor.
    """

    spec: SftSpec
    pre: Word
    cyc: Word

    def expand(self, k: int) -> Word:
        """First ``k`` symbols of the sequence."""
        if k <= len(self.pre):
            return self.pre[:k]
        need = k - len(self.pre)
        reps = -(-need // len(self.cyc))
        return self.pre + (self.cyc * reps)[:need]

    def symbol(self, i: int) -> int:
        """Symbol at 0-based position ``i``."""
        if i < len(self.pre):
            return self.pre[i]
        return self.cyc[(i - len(self.pre)) % len(self.cyc)]

    def shift(self, m: int = 1) -> "EpPoint":
        return shift_point(self.spec, self, m)

    def starts_with(self, word: Word) -> bool:
        return self.expand(len(word)) == word

    def __str__(self) -> str:
        return f"{format_word(self.pre, self.spec.n) if self.pre else ''}|" \
               f"{format_word(self.cyc, self.spec.n)}"


def make_point(spec: SftSpec, pre: Sequence[int], cyc: Sequence[int]) -> EpPoint:
    """Build the canonical point ``pre`` followed by ``cyc`` repeated forever."""
    u = tuple(pre)
    v = tuple(cyc)
    if not v:
        raise BadArgument("cycle must be nonempty")
    spec.check_admissible(u + v + v)  # checks both junctions at once
    v = _primitive_root(v)
    while u and u[-1] == v[-1]:
        u = u[:-1]
        v = _rotate_right(v)
    return EpPoint(spec=spec, pre=u, cyc=v)


def parse_point(text: str, spec: SftSpec) -> EpPoint:
    """Parse a point literal "<u>|<v>"; empty or "-" before "|" means no preperiod."""
    if "|" not in text:
        raise ParseError(f"point literal {text!r} lacks '|'")
    u_text, v_text = text.split("|", 1)
    u = parse_word(u_text, spec)
    v = parse_word(v_text, spec)
    if not v:
        raise ParseError("point literal needs a nonempty cycle")
    return make_point(spec, u, v)


def shift_point(spec: SftSpec, x: EpPoint, m: int) -> EpPoint:
    """The image of ``x`` under ``m`` applications of the shift."""
    if m < 0:
        raise BadArgument("shift exponent must be nonnegative")
    if x.spec != spec:
        raise BadArgument("point belongs to a different space")
    u, v = x.pre, x.cyc
    if m <= len(u):
        return make_point(spec, u[m:], v)
    r = (m - len(u)) % len(v)
    return make_point(spec, EMPTY_WORD, v[r:] + v[:r])


def prepend_word(word: Word, x: EpPoint) -> EpPoint:
    """The point ``word`` followed by ``x`` (junction must be admissible)."""
    return make_point(x.spec, word + x.pre, x.cyc)


def complete_word(spec: SftSpec, word: Word, mode: str = "least") -> EpPoint:
    """A canonical point of the cylinder of ``word``.

    The continuation follows the smallest admissible symbol ("least"), the
    largest ("greatest"), or alternates between the two ("alternate"); the
    walk stops as soon as its internal state repeats, which yields the cycle.
    Distinct modes give points with distinct tails whenever the graph ever
    branches, which it does for every accepted matrix.
    """
    if word and not spec.is_admissible(word):
        raise InadmissibleWord(f"word {format_word(word, spec.n)} is not admissible")
    state = word[-1] if word else None
    parity = 0
    seen: dict[tuple, int] = {}
    tail: list[int] = []
    while True:
        key = (state, parity if mode == "alternate" else 0)
        if key in seen:
            start = seen[key]
            u = word + tuple(tail[:start])
            v = tuple(tail[start:])
            return make_point(spec, u, v)
        seen[key] = len(tail)
        options = spec.followers(state) if state is not None else tuple(range(1, spec.n + 1))
        if mode == "least":
            nxt = options[0]
        elif mode == "greatest":
            nxt = options[-1]
        elif mode == "alternate":
            nxt = options[0] if parity == 0 else options[-1]
            parity ^= 1
        else:
            raise BadArgument(f"unknown completion mode {mode!r}")
        tail.append(nxt)
        state = nxt


def cylinder_representatives(spec: SftSpec, word: Word) -> list[EpPoint]:
    """Three deterministic points of the cylinder of ``word`` with diverse tails."""
    return [complete_word(spec, word, mode) for mode in ("least", "greatest", "alternate")]


def check_cylinder_partition(spec: SftSpec, words: Iterable[Word]) -> list[Word]:
    """Verify that the cylinders of ``words`` are disjoint and cover the space.

    Returns the words sorted lexicographically.  The singleton {empty word}
    counts as the trivial partition.
    """
    given = [tuple(w) for w in words]
    ws = sorted(set(given))
    if not ws:
        raise BadArgument("a partition needs at least one word")
    if len(ws) != len(given):
        raise BadArgument("partition words repeat")
    for w in ws:
        if not spec.is_admissible(w):
            raise InadmissibleWord(f"word {format_word(w, spec.n)} is not admissible")
    if ws == [EMPTY_WORD]:
        return ws
    if any(w == EMPTY_WORD for w in ws):
        raise BadArgument("the empty word cannot share a partition")
    # pairwise prefix-freeness
    for i in range(len(ws) - 1):
        w, nxt = ws[i], ws[i + 1]
        if nxt[: len(w)] == w:
            raise BadArgument(
                f"{format_word(w, spec.n)} is a prefix of {format_word(nxt, spec.n)}")
    # coverage: every admissible word of maximal length has a member prefix
    depth = max(len(w) for w in ws)
    members = set(ws)
    for long in enumerate_words(spec, depth):
        if not any(long[: k] in members for k in range(1, depth + 1)):
            raise BadArgument(
                f"cylinder of {format_word(long, spec.n)} is not covered")
    return ws


@dataclass(frozen=True)
class FlowInvariants:
    """det(id - A), its sign, and the elementary divisors of id - A^t.

    The divisor list keeps only entries different from 1 (zeros stand for
    free summands), so the trivial group is the empty list.
    """

    det_id_minus_a: int
    sign: int
    bf_group: tuple[int, ...]


def _determinant(mat: list[list[int]]) -> int:
    """Fraction-free (Bareiss) determinant over the integers."""
    m = [row[:] for row in mat]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = checked_i64(
                    (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev)
        prev = m[k][k]
    return checked_i64(sign * m[n - 1][n - 1])


def _smith_divisors(mat: list[list[int]]) -> list[int]:
    """Diagonal of the Smith normal form, nonnegative, in divisibility order."""
    m = [row[:] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    divisors: list[int] = []
    top = 0
    while top < min(rows, cols):
        # locate a nonzero pivot with least absolute value
        pivot = None
        for i in range(top, rows):
            for j in range(top, cols):
                if m[i][j] != 0 and (pivot is None or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        m[top], m[i] = m[i], m[top]
        for r in range(rows):
            m[r][top], m[r][j] = m[r][j], m[r][top]
        while True:
            dirty = False
            for i in range(top + 1, rows):
                if m[i][top] != 0:
                    q = m[i][top] // m[top][top]
                    for j in range(top, cols):
                        m[i][j] = checked_i64(m[i][j] - q * m[top][j])
                    if m[i][top] != 0:  # remainder became new, smaller pivot
                        m[top], m[i] = m[i], m[top]
                        dirty = True
            for j in range(top + 1, cols):
                if m[top][j] != 0:
                    q = m[top][j] // m[top][top]
                    for r in range(rows):
                        m[r][j] = checked_i64(m[r][j] - q * m[r][top])
                    if m[top][j] != 0:
                        for r in range(rows):
                            m[r][top], m[r][j] = m[r][j], m[r][top]
                        dirty = True
            if not dirty:
                break
        divisors.append(abs(m[top][top]))
        top += 1
    while len(divisors) < min(rows, cols):
        divisors.append(0)
    # enforce the divisibility chain d1 | d2 | ...
    for i in range(len(divisors)):
        for j in range(i + 1, len(divisors)):
            a, b = divisors[i], divisors[j]
            if a == 0 and b != 0:
                divisors[i], divisors[j] = b, 0
            elif a != 0 and b % a != 0:
                g = gcd(a, b)
                divisors[i], divisors[j] = g, a * b // g
    return divisors


def flow_invariants(spec: SftSpec) -> FlowInvariants:
    """Determinant sign of id - A and the group Z^n / (id - A^t) Z^n."""
    n = spec.n
    id_minus_a = [[(1 if i == j else 0) - spec.a[i][j] for j in range(n)] for i in range(n)]
    id_minus_at = [[(1 if i == j else 0) - spec.a[j][i] for j in range(n)] for i in range(n)]
    det = _determinant(id_minus_a)
    sign = (det > 0) - (det < 0)
    divisors = tuple(d for d in _smith_divisors(id_minus_at) if d != 1)
    return FlowInvariants(det_id_minus_a=det, sign=sign, bf_group=divisors)


# Frequently used spaces in tests and docs.
FULL_2_SHIFT = ((1, 1), (1, 1))
GOLDEN_MEAN = ((1, 1), (1, 0))
