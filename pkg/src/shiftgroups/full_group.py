"""Elements of the continuous full group as prefix-exchange tables.

A table is a finite list of pairs (src, dst): on the cylinder of src the
homeomorphism rewrites the prefix src to dst and keeps the tail verbatim.
For this to be a well-defined homeomorphism the src words and the dst words
must each partition the space and each pair must end in symbols with equal
follower sets.  Every element carries the obvious integer data: on the src
cylinder the map satisfies sigma^k(tau(x)) = sigma^l(x) with l = len(src),
k = len(dst), and the difference d = l - k does not depend on how the table
is presented.

Tables are canonical (coarsest presentation, sorted by src), so structural
equality decides equality in the group.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    BadArgument,
    BadSymbols,
    DstNotPartition,
    FollowerMismatch,
    ParseError,
    SpecMismatch,
    SrcNotPartition,
)
from .sft_core import (
    EMPTY_WORD,
    EpPoint,
    SftSpec,
    Word,
    check_cylinder_partition,
    enumerate_words,
    format_word,
    parse_word,
    prepend_word,
    shift_point,
)
from .step_functions import StepFunction, _canonical


@dataclass(frozen=True, eq=False)
class TableHomeo:
    """A full-group element as a canonical prefix-exchange table."""

    spec: SftSpec
    pairs: tuple[tuple[Word, Word], ...]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TableHomeo):
            return NotImplemented
        return self.spec == other.spec and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash((self.spec, self.pairs))

    def is_identity(self) -> bool:
        return self.pairs == ((EMPTY_WORD, EMPTY_WORD),)

    def src_depth(self) -> int:
        return max(len(s) for s, _ in self.pairs)

    def dst_depth(self) -> int:
        return max(len(d) for _, d in self.pairs)

    def pair_for(self, x: EpPoint) -> tuple[Word, Word]:
        """The unique pair whose src is a prefix of ``x``."""
        for s, d in self.pairs:
            if x.starts_with(s):
                return s, d
        raise AssertionError("table srcs fail to cover the space")

    def __call__(self, x: EpPoint) -> EpPoint:
        return apply(self, x)

    def __str__(self) -> str:
        n = self.spec.n
        return ", ".join(
            f"{format_word(s, n)}->{format_word(d, n)}" for s, d in self.pairs)


@dataclass(frozen=True)
class KldData:
    """The (l, k) exponent functions of a presentation and their difference d.

    d is presentation-independent; l and k are data of the particular table
    they were read from.
    """

    l: StepFunction
    k: StepFunction
    d: StepFunction


def _followers_of(spec: SftSpec, word: Word) -> tuple[int, ...]:
    if word == EMPTY_WORD:
        return tuple(range(1, spec.n + 1))
    return spec.followers(word[-1])


def _canonical_pairs(spec: SftSpec,
                     pairs: Sequence[tuple[Word, Word]]) -> tuple[tuple[Word, Word], ...]:
    """Merge sibling pairs whose action agrees until no merge applies."""
    table = {tuple(s): tuple(d) for s, d in pairs}
    changed = True
    while changed:
        changed = False
        parents: dict[tuple[Word, Word], set[int]] = {}
        for s, d in table.items():
            if s and d and s[-1] == d[-1]:
                parents.setdefault((s[:-1], d[:-1]), set()).add(s[-1])
        for (ps, pd), syms in sorted(parents.items(), key=lambda kv: (-len(kv[0][0]), kv[0])):
            need = set(_followers_of(spec, ps))
            if need != set(_followers_of(spec, pd)):
                continue
            if syms != need:
                continue
            if any(table.get(ps + (a,)) != pd + (a,) for a in need):
                continue
            for a in need:
                del table[ps + (a,)]
            table[ps] = pd
            changed = True
            break
    return tuple(sorted(table.items()))


def validate_table(spec: SftSpec, pairs: Sequence[tuple]) -> TableHomeo:
    """Validate prefix-exchange pairs and return the canonical element.

    Both projections must be cylinder partitions and each pair must end in
    symbols with the same matrix row, which makes the induced map a
    homeomorphism in the full group with the tails preserved verbatim.
    """
    norm: list[tuple[Word, Word]] = []
    for s, d in pairs:
        sw = parse_word(s, spec) if isinstance(s, str) else spec.check_admissible(s)
        dw = parse_word(d, spec) if isinstance(d, str) else spec.check_admissible(d)
        norm.append((sw, dw))
    if not norm:
        raise SrcNotPartition("a table needs at least one pair")
    try:
        check_cylinder_partition(spec, [s for s, _ in norm])
    except BadArgument as exc:
        raise SrcNotPartition(str(exc)) from exc
    try:
        check_cylinder_partition(spec, [d for _, d in norm])
    except BadArgument as exc:
        raise DstNotPartition(str(exc)) from exc
    for s, d in norm:
        if (s == EMPTY_WORD) != (d == EMPTY_WORD):
            raise FollowerMismatch("the empty word can only map to itself")
        if s != EMPTY_WORD and spec.row(s[-1]) != spec.row(d[-1]):
            raise FollowerMismatch(
                f"{format_word(s, spec.n)} and {format_word(d, spec.n)} "
                "end in symbols with different follower sets")
    return TableHomeo(spec=spec, pairs=_canonical_pairs(spec, norm))


def identity(spec: SftSpec) -> TableHomeo:
    return TableHomeo(spec=spec, pairs=((EMPTY_WORD, EMPTY_WORD),))


def apply(tau: TableHomeo, x: EpPoint) -> EpPoint:
    """Exact image of a point under the table map."""
    if tau.spec != x.spec:
        raise SpecMismatch("point belongs to a different space")
    s, d = tau.pair_for(x)
    tail = shift_point(tau.spec, x, len(s))
    return prepend_word(d, tail)


def compose(tau2: TableHomeo, tau1: TableHomeo) -> TableHomeo:
    """The element tau2 after tau1, built by refining tau1 against tau2."""
    pairs = [(s, d) for s, d, _, _ in _compose_refinement(tau2, tau1)]
    return TableHomeo(spec=_compose_spec(tau2, tau1),
                      pairs=_canonical_pairs(tau1.spec, pairs))


def _compose_spec(tau2: TableHomeo, tau1: TableHomeo) -> SftSpec:
    if tau2.spec != tau1.spec:
        raise SpecMismatch("tables live on different spaces")
    return tau1.spec


def _compose_refinement(tau2: TableHomeo, tau1: TableHomeo
                        ) -> list[tuple[Word, Word, int, int]]:
    """Composition pieces (src, dst, l, k) where the exponents track both
    stages: l = len(s1) + len(s2) and k = len(d1) + len(d2) through the
    middle space, so the composition laws for (l, k) hold on the nose."""
    out: list[tuple[Word, Word, int, int]] = []
    for s1, d1 in tau1.pairs:
        for s2, d2 in tau2.pairs:
            if len(d1) <= len(s2):
                if s2[: len(d1)] != d1:
                    continue
                ext = s2[len(d1):]
                # x = s1 ext t  ->  tau1 -> s2 t  ->  tau2 -> d2 t
                if ext and s1 != EMPTY_WORD and not tau1.spec.allows(s1[-1], ext[0]):
                    continue
                out.append((s1 + ext, d2, len(s1) + len(s2), len(d1) + len(d2)))
            else:
                if d1[: len(s2)] != s2:
                    continue
                rest = d1[len(s2):]
                # x = s1 t  ->  tau1 -> s2 rest t  ->  tau2 -> d2 rest t
                out.append((s1, d2 + rest, len(s1) + len(s2), len(d1) + len(d2)))
    return out


def invert(tau: TableHomeo) -> TableHomeo:
    """The inverse element; pairs swap roles."""
    return TableHomeo(spec=tau.spec,
                      pairs=_canonical_pairs(tau.spec, [(d, s) for s, d in tau.pairs]))


def _table_function(tau: TableHomeo, per_pair) -> StepFunction:
    depth = tau.src_depth()
    vals = {}
    for w in enumerate_words(tau.spec, depth):
        for s, d in tau.pairs:
            if w[: len(s)] == s:
                vals[w] = per_pair(s, d)
                break
        else:
            raise AssertionError("table srcs fail to cover the space")
    return _canonical(tau.spec, depth, vals)


def cocycle_data(tau: TableHomeo) -> KldData:
    """The (l, k, d) step functions read from the canonical table."""
    l = _table_function(tau, lambda s, d: len(s))
    k = _table_function(tau, lambda s, d: len(d))
    return KldData(l=l, k=k, d=l - k)


def raw_cocycle_data(spec: SftSpec, pairs: Sequence[tuple[Word, Word]]) -> KldData:
    """(l, k, d) of an explicit pair list without canonical merging."""
    depth = max(len(s) for s, _ in pairs)
    lv, kv = {}, {}
    for w in enumerate_words(spec, depth):
        for s, d in sorted(pairs):
            if w[: len(s)] == s:
                lv[w] = len(s)
                kv[w] = len(d)
                break
        else:
            raise AssertionError("pair srcs fail to cover the space")
    l = _canonical(spec, depth, lv)
    k = _canonical(spec, depth, kv)
    return KldData(l=l, k=k, d=l - k)


def compose_cocycle_data(tau2: TableHomeo, tau1: TableHomeo) -> KldData:
    """(l, k, d) of the composition with exponents summed through the middle
    stage.

    These are the data for which the composition laws l = l1 + l2 o tau1 and
    k = k1 + k2 o tau1 hold exactly; the canonical table of the composition
    generally presents smaller exponents with the same difference d.
    """
    spec = _compose_spec(tau2, tau1)
    pieces = _compose_refinement(tau2, tau1)
    depth = max(len(s) for s, _, _, _ in pieces)
    lv, kv = {}, {}
    for w in enumerate_words(spec, depth):
        for s, d, l, k in sorted(pieces):
            if w[: len(s)] == s:
                lv[w] = l
                kv[w] = k
                break
        else:
            raise AssertionError("pair srcs fail to cover the space")
    l_fn = _canonical(spec, depth, lv)
    k_fn = _canonical(spec, depth, kv)
    return KldData(l=l_fn, k=k_fn, d=l_fn - k_fn)


def compose_with_table(f: StepFunction, tau: TableHomeo) -> StepFunction:
    """The function x -> f(tau(x)), exact."""
    if f.spec != tau.spec:
        raise SpecMismatch("function and table live on different spaces")
    depth = tau.src_depth() + f.depth
    vals = {}
    for w in enumerate_words(tau.spec, depth):
        for s, d in tau.pairs:
            if w[: len(s)] == s:
                image = d + w[len(s):]
                vals[w] = f.values[image[: f.depth]]
                break
        else:
            raise AssertionError("table srcs fail to cover the space")
    return _canonical(tau.spec, depth, vals)


def gen_swap(spec: SftSpec, a: int, b: int, m: int = 1) -> TableHomeo:
    """The involution exchanging the cylinders of a^m b and a^(m-1) b.

    On the longer cylinder it acts as the shift itself, which makes this
    family the workhorse for probing cocycles.  Requires a != b, the
    transition a -> b, and a -> a when m >= 2.
    """
    if not (1 <= a <= spec.n and 1 <= b <= spec.n):
        raise BadSymbols("symbols out of range")
    if a == b:
        raise BadSymbols("need two distinct symbols")
    if m < 1:
        raise BadSymbols("run length must be at least 1")
    if not spec.allows(a, b):
        raise BadSymbols(f"transition {a}->{b} is absent")
    if m >= 2 and not spec.allows(a, a):
        raise BadSymbols(f"transition {a}->{a} is absent")
    long = (a,) * m + (b,)
    short = (a,) * (m - 1) + (b,)
    pairs: list[tuple[Word, Word]] = [(long, short), (short, long)]
    # identity elsewhere, classified by the length j of the leading a-run
    for j in range(m + 1):
        run = (a,) * j
        if not spec.is_admissible(run):
            break
        for c in range(1, spec.n + 1) if j == 0 else spec.followers(a):
            if c == a:
                continue
            if j == m - 1 and c == b:
                continue  # the short swap word
            if j == m and c == b:
                continue  # the long swap word
            word = run + (c,)
            if spec.is_admissible(word):
                pairs.append((word, word))
    run = (a,) * (m + 1)
    if spec.is_admissible(run):
        pairs.append((run, run))
    return validate_table(spec, pairs)


def generator_family(spec: SftSpec, max_run: int = 2) -> list[TableHomeo]:
    """All valid swap generators with run length up to ``max_run``,
    ordered by (a, b, m)."""
    out = []
    for a in range(1, spec.n + 1):
        for b in range(1, spec.n + 1):
            if a == b:
                continue
            for m in range(1, max_run + 1):
                try:
                    out.append(gen_swap(spec, a, b, m))
                except BadSymbols:
                    continue
    return out


def sample_element(spec: SftSpec, rng: random.Random, length: int = 3,
                   max_run: int = 2) -> TableHomeo:
    """A reproducible pseudo-random element: a word in the swap generators."""
    gens = generator_family(spec, max_run)
    tau = identity(spec)
    for _ in range(length):
        tau = compose(rng.choice(gens), tau)
    return tau


def parse_table_text(text: str, spec: SftSpec) -> TableHomeo:
    """Parse the table file format: one "<src> <dst>" line per pair, "-" = empty."""
    pairs = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"malformed table line {ln!r}")
        pairs.append((parse_word(parts[0], spec), parse_word(parts[1], spec)))
    if not pairs:
        raise ParseError("table file is empty")
    return validate_table(spec, pairs)


def format_table_text(tau: TableHomeo) -> str:
    n = tau.spec.n
    return "\n".join(f"{format_word(s, n)} {format_word(d, n)}"
                     for s, d in tau.pairs) + "\n"
