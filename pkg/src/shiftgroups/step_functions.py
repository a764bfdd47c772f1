"""Integer-valued continuous functions on a shift space.

On a compact zero-dimensional shift space every continuous function into the
integers is locally constant, hence determined by one value per admissible
word of some finite depth.  That representation is fully general and is what
this module manipulates: pointwise algebra, composition with powers of the
shift, orbit sums with constant or function-valued exponents, and an exact
decision procedure for the equation f = g - g o sigma.

Functions are kept in canonical form (least depth), so structural equality
is function equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Union

from .errors import (
    BadArgument,
    DuplicateWord,
    InadmissibleWord,
    MissingWord,
    NegativeExponent,
    ParseError,
    SpecMismatch,
    checked_i64,
)
from .sft_core import (
    EMPTY_WORD,
    EpPoint,
    SftSpec,
    Word,
    enumerate_words,
    format_word,
    make_point,
    parse_word,
)


@dataclass(frozen=True, eq=False)
class StepFunction:
    """A depth-``depth`` locally constant function, one value per word."""

    spec: SftSpec
    depth: int
    values: Mapping[Word, int]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StepFunction):
            return NotImplemented
        return (self.spec == other.spec and self.depth == other.depth
                and dict(self.values) == dict(other.values))

    def __call__(self, x: EpPoint) -> int:
        return evaluate(self, x)

    def value_on(self, word: Word) -> int:
        """Value on the cylinder of ``word``; needs len(word) >= depth."""
        if len(word) < self.depth:
            raise BadArgument(
                f"word {format_word(word, self.spec.n)} is shorter than depth {self.depth}")
        return self.values[word[: self.depth]]

    def is_zero(self) -> bool:
        return self.depth == 0 and self.values[EMPTY_WORD] == 0

    def is_constant(self) -> bool:
        return self.depth == 0

    def constant_value(self) -> int:
        if self.depth != 0:
            raise BadArgument("function is not constant")
        return self.values[EMPTY_WORD]

    def min_value(self) -> int:
        return min(self.values.values())

    def max_value(self) -> int:
        return max(self.values.values())

    def support(self) -> list[Word]:
        """Cylinder words (at canonical depth) with nonzero value."""
        return [w for w in sorted(self.values) if self.values[w] != 0]

    # pointwise abelian-group structure

    def _binary(self, other: "StepFunction", op) -> "StepFunction":
        if self.spec != other.spec:
            raise SpecMismatch("step functions live on different spaces")
        d = max(self.depth, other.depth)
        vals = {w: checked_i64(op(self.values[w[: self.depth]],
                                  other.values[w[: other.depth]]))
                for w in enumerate_words(self.spec, d)}
        return _canonical(self.spec, d, vals)

    def __add__(self, other: "StepFunction") -> "StepFunction":
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self) -> "StepFunction":
        return _canonical(self.spec, self.depth,
                          {w: -v for w, v in self.values.items()})

    def __rmul__(self, m: int) -> "StepFunction":
        if not isinstance(m, int):
            return NotImplemented
        return _canonical(self.spec, self.depth,
                          {w: checked_i64(m * v) for w, v in self.values.items()})

    def __str__(self) -> str:
        inner = ", ".join(f"{format_word(w, self.spec.n)}:{v}"
                          for w, v in sorted(self.values.items()))
        return f"{{{inner}}}"


def _canonical(spec: SftSpec, depth: int, values: dict[Word, int]) -> StepFunction:
    """Reduce to the least depth at which all sibling values agree."""
    while depth > 0:
        parents: dict[Word, int] = {}
        ok = True
        for w, v in values.items():
            p = w[:-1]
            if p in parents:
                if parents[p] != v:
                    ok = False
                    break
            else:
                parents[p] = v
        if not ok:
            break
        values = parents
        depth -= 1
    return StepFunction(spec=spec, depth=depth, values=dict(values))


def canonical_function(spec: SftSpec, depth: int, values: dict[Word, int]) -> StepFunction:
    """Public entry to the canonical constructor for other modules."""
    return _canonical(spec, depth, values)


def constant(spec: SftSpec, value: int) -> StepFunction:
    return StepFunction(spec=spec, depth=0, values={EMPTY_WORD: checked_i64(value)})


def make_step_function(
    spec: SftSpec,
    depth: int,
    values: Union[Mapping, Iterable[tuple]],
) -> StepFunction:
    """Build a function from values keyed exactly by the admissible depth words.

    Keys may be words (tuples) or word literals.  The result is canonical,
    so the stored depth may come out smaller than ``depth``.
    """
    if depth < 0:
        raise BadArgument("depth must be nonnegative")
    items = values.items() if isinstance(values, Mapping) else list(values)
    table: dict[Word, int] = {}
    for key, value in items:
        w = parse_word(key, spec) if isinstance(key, str) else tuple(key)
        if len(w) != depth or not spec.is_admissible(w):
            raise InadmissibleWord(
                f"key {format_word(w, spec.n)} is not an admissible depth-{depth} word")
        if w in table:
            raise DuplicateWord(f"word {format_word(w, spec.n)} appears twice")
        table[w] = checked_i64(int(value))
    for w in enumerate_words(spec, depth):
        if w not in table:
            raise MissingWord(f"no value for word {format_word(w, spec.n)}")
    return _canonical(spec, depth, table)


def from_cylinders(spec: SftSpec, pairs: Mapping, default: int = 0) -> StepFunction:
    """Function equal to a given value on each listed cylinder, ``default`` elsewhere.

    Cylinder words may have mixed lengths but must not overlap.
    """
    parsed = {}
    for key, value in pairs.items():
        w = parse_word(key, spec) if isinstance(key, str) else spec.check_admissible(key)
        parsed[w] = int(value)
    depth = max((len(w) for w in parsed), default=0)
    vals = {}
    for w in enumerate_words(spec, depth):
        hits = [v for p, v in parsed.items() if w[: len(p)] == p]
        if len(hits) > 1:
            raise DuplicateWord("cylinders overlap")
        vals[w] = checked_i64(hits[0] if hits else default)
    return _canonical(spec, depth, vals)


def evaluate(f: StepFunction, x: EpPoint) -> int:
    """f(x), read off the depth prefix of the expansion of ``x``."""
    if f.spec != x.spec:
        raise SpecMismatch("point belongs to a different space")
    return f.values[x.expand(f.depth)]


def compose_shift(f: StepFunction, m: int = 1) -> StepFunction:
    """The function x -> f(sigma^m(x))."""
    if m < 0:
        raise BadArgument("shift exponent must be nonnegative")
    if m == 0:
        return f
    d = f.depth + m
    vals = {w: f.values[w[m: m + f.depth]] for w in enumerate_words(f.spec, d)}
    return _canonical(f.spec, d, vals)


def orbit_sum(f: StepFunction, m: Union[int, StepFunction]) -> StepFunction:
    """The m-term orbit sum x -> f(x) + f(sigma x) + ... + f(sigma^(m-1) x).

    ``m`` may be a nonnegative integer or a nonnegative step function, in
    which case the number of terms varies with the point.
    """
    spec = f.spec
    if isinstance(m, int):
        if m < 0:
            raise NegativeExponent("orbit sums need a nonnegative exponent")
        exponent = constant(spec, m)
    else:
        if m.spec != spec:
            raise SpecMismatch("exponent lives on a different space")
        if m.min_value() < 0:
            raise NegativeExponent("orbit sums need a nonnegative exponent")
        exponent = m
    top = exponent.max_value()
    d = max(exponent.depth, (top - 1 + f.depth) if top > 0 else 0)
    vals: dict[Word, int] = {}
    for w in enumerate_words(spec, d):
        count = exponent.values[w[: exponent.depth]]
        total = 0
        for i in range(count):
            total = checked_i64(total + f.values[w[i: i + f.depth]])
        vals[w] = total
    return _canonical(spec, d, vals)


class Outcome(Enum):
    SAT = "sat"
    UNSAT = "unsat"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CoboundaryCertificate:
    """Either an explicit g with f = g - g o sigma, or a periodic orbit on
    which f sums to a nonzero integer (no coboundary can do that)."""

    outcome: Outcome
    g: StepFunction | None = None
    cycle: Word | None = None
    cycle_sum: int | None = None


def periodic_cycles(spec: SftSpec, max_len: int) -> list[Word]:
    """Primitive cycle words up to ``max_len``, one per rotation class,
    ordered by length then lexicographically."""
    out: list[Word] = []
    for p in range(1, max_len + 1):
        for w in enumerate_words(spec, p):
            if not spec.allows(w[-1], w[0]):
                continue
            if _primitive(w) != w:
                continue
            if min(w[i:] + w[: i] for i in range(p)) != w:
                continue  # one representative per rotation class
            out.append(w)
    return out


def _primitive(v: Word) -> Word:
    p = len(v)
    for d in range(1, p + 1):
        if p % d == 0 and v == v[: d] * (p // d):
            return v[: d]
    return v


def cycle_sum(f: StepFunction, cycle: Word) -> int:
    """Sum of f over the periodic orbit of the cycle word."""
    x = make_point(f.spec, EMPTY_WORD, cycle)
    total = 0
    for i in range(len(cycle)):
        total = checked_i64(total + evaluate(f, x))
        x = x.shift(1)
    return total


def is_sigma_coboundary(
    f: StepFunction,
    search_depth: int | None = None,
    cycle_bound: int | None = None,
) -> CoboundaryCertificate:
    """Decide whether f = g - g o sigma for some step function g.

    Fast path: sum f over every primitive periodic orbit up to
    ``cycle_bound``; a nonzero sum settles the matter.  Otherwise set up the
    exact difference system on depth-``search_depth`` cylinders (unknowns
    g_w, one equation per one-symbol extension) and propagate potentials
    along a spanning tree of the word-overlap graph.  An inconsistent edge
    means some periodic orbit sums to a nonzero value; that orbit is
    extracted as a certificate.  The system is complete: whenever f is a
    coboundary at all, a witness of depth max(depth(f) - 1, 0) exists, so
    the answer is never left open for valid bounds.
    """
    spec = f.spec
    if search_depth is None:
        search_depth = f.depth + 2
    if cycle_bound is None:
        cycle_bound = 2 * spec.n + f.depth
    if search_depth < f.depth:
        raise BadArgument("search depth must reach the depth of f")
    if cycle_bound < 1:
        raise BadArgument("cycle bound must be positive")

    for cycle in periodic_cycles(spec, cycle_bound):
        s = cycle_sum(f, cycle)
        if s != 0:
            return CoboundaryCertificate(Outcome.UNSAT, cycle=cycle, cycle_sum=s)

    d = max(search_depth, 1)
    nodes = enumerate_words(spec, d)
    edges: list[tuple[Word, Word, int]] = []  # g(u) - g(v) = c on edge u -> v
    for w in enumerate_words(spec, d + 1):
        edges.append((w[: d], w[1:], f.values[w[: f.depth]]))

    index = {u: i for i, u in enumerate(nodes)}
    adj: dict[Word, list[tuple[Word, int]]] = {u: [] for u in nodes}
    for u, v, c in edges:
        adj[u].append((v, c))

    potential: dict[Word, int] = {nodes[0]: 0}
    queue = [nodes[0]]
    while queue:
        u = queue.pop(0)
        for v, c in adj[u]:
            if v not in potential:
                potential[v] = checked_i64(potential[u] - c)
                queue.append(v)
    # irreducibility makes the overlap graph strongly connected
    consistent = all(potential[u] - potential[v] == c for u, v, c in edges)
    if consistent:
        g = _canonical(spec, d, {u: potential[u] for u in nodes})
        return CoboundaryCertificate(Outcome.SAT, g=g)

    cycle = _nonzero_cycle(nodes, index, edges)
    if cycle is None:
        return CoboundaryCertificate(Outcome.INCONCLUSIVE)
    s = cycle_sum(f, cycle)
    return CoboundaryCertificate(Outcome.UNSAT, cycle=cycle, cycle_sum=s)


def _nonzero_cycle(nodes, index, edges) -> Word | None:
    """A primitive cycle word whose edge weights do not sum to zero.

    Bellman-Ford negative-cycle extraction, run on the weights and on their
    negation; one of the two must find a cycle once the potential check has
    failed.
    """
    for flip in (1, -1):
        n = len(nodes)
        dist = [0] * n
        pred = [-1] * n
        arc = [(index[u], index[v], flip * c) for u, v, c in edges]
        marked = -1
        for _ in range(n):
            marked = -1
            for ui, vi, c in arc:
                if dist[ui] + c < dist[vi]:
                    dist[vi] = dist[ui] + c
                    pred[vi] = ui
                    marked = vi
            if marked < 0:
                break
        if marked < 0:
            continue
        # walk predecessors n steps to land inside the cycle, then collect it
        v = marked
        for _ in range(n):
            v = pred[v]
        cycle_nodes = [v]
        u = pred[v]
        while u != v:
            cycle_nodes.append(u)
            u = pred[u]
        cycle_nodes.reverse()
        word = tuple(nodes[i][0] for i in cycle_nodes)
        word = _primitive(word)
        rotations = [word[i:] + word[: i] for i in range(len(word))]
        return min(rotations)
    return None


def parse_function_text(text: str, spec: SftSpec) -> StepFunction:
    """Parse the function file format: "depth d" then "<word> <int>" lines in
    lexicographic order."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("depth"):
        raise ParseError("function file must start with 'depth d'")
    try:
        depth = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise ParseError("malformed depth line") from exc
    pairs: list[tuple[Word, int]] = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"malformed function line {ln!r}")
        w = parse_word(parts[0], spec)
        try:
            v = int(parts[1])
        except ValueError as exc:
            raise ParseError(f"malformed integer in {ln!r}") from exc
        pairs.append((w, v))
    words = [w for w, _ in pairs]
    if words != sorted(words):
        raise ParseError("function lines must be in lexicographic order")
    return make_step_function(spec, depth, pairs)


def format_function_text(f: StepFunction) -> str:
    lines = [f"depth {f.depth}"]
    for w in sorted(f.values):
        lines.append(f"{format_word(w, f.spec.n)} {f.values[w]}")
    return "\n".join(lines) + "\n"
