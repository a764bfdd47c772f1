"""Cocycles of full-group elements and the subgroup predicates built on them.

For a step function f and a table element tau, the basic quantity is

    rho(f, tau)(x) = sum_{i=0}^{l(x)} f(sigma^i x) - sum_{j=0}^{k(x)} f(sigma^j tau(x)),

with both sums inclusive of the upper index and (l, k) any exponent data for
tau; the value does not depend on that choice.  With f = 1 the inclusive
convention makes rho equal to d = l - k, and that identity is kept under
regression test because it is the easiest convention to get wrong.

The membership predicates here are exact: local constancy turns the
universal quantifier over the space into a finite check on cylinders.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadArgument, SpecMismatch
from .full_group import (
    TableHomeo,
    cocycle_data,
    compose_with_table,
    gen_swap,
)
from .sft_core import Word, enumerate_words
from .step_functions import (
    StepFunction,
    canonical_function,
    compose_shift,
    constant,
)
from .errors import BadSymbols


@dataclass(frozen=True)
class RhoTable:
    """The function x -> rho(f, tau)(x) together with its ingredients."""

    tau: TableHomeo
    f: StepFunction
    table: StepFunction


def _inclusive_sum(f: StepFunction, word: Word, upper: int) -> int:
    """sum_{i=0}^{upper} of f read at successive offsets into ``word``."""
    total = 0
    for i in range(upper + 1):
        total += f.values[word[i: i + f.depth]]
    return total


def rho(f: StepFunction, tau: TableHomeo) -> RhoTable:
    """The cocycle table of f at tau, exact on each cylinder."""
    if f.spec != tau.spec:
        raise SpecMismatch("function and element live on different spaces")
    spec = tau.spec
    depth = tau.src_depth() + f.depth
    vals = {}
    for w in enumerate_words(spec, depth):
        s, d = _pair_at(tau, w)
        image = d + w[len(s):]
        vals[w] = _inclusive_sum(f, w, len(s)) - _inclusive_sum(f, image, len(d))
    return RhoTable(tau=tau, f=f, table=canonical_function(spec, depth, vals))


def _pair_at(tau: TableHomeo, w: Word) -> tuple[Word, Word]:
    for s, d in tau.pairs:
        if w[: len(s)] == s:
            return s, d
    raise AssertionError("table srcs fail to cover the space")


def psi_tau(tau: TableHomeo, f: StepFunction) -> StepFunction:
    """The transfer of f along tau built from the shifted exponent data.

    With l' = l o sigma + k + 1 and k' = k o sigma + l, the value at x is
    the inclusive sum of f along tau(x) up to l'(x) minus the inclusive sum
    along tau(sigma x) up to k'(x).  Its class modulo sigma-coboundaries
    agrees with that of f.
    """
    if f.spec != tau.spec:
        raise SpecMismatch("function and element live on different spaces")
    spec = tau.spec
    s_depth = tau.src_depth()
    depth = 2 * s_depth + f.depth + 1
    vals = {}
    for w in enumerate_words(spec, depth):
        s, d = _pair_at(tau, w)
        s1, d1 = _pair_at(tau, w[1:])
        upper_l = len(s1) + len(d) + 1
        upper_k = len(d1) + len(s)
        image = d + w[len(s):]
        image_shift = d1 + w[1 + len(s1):]
        vals[w] = (_inclusive_sum(f, image, upper_l)
                   - _inclusive_sum(f, image_shift, upper_k))
    return canonical_function(spec, depth, vals)


def delta(g: StepFunction, tau: TableHomeo) -> StepFunction:
    """The coboundary x -> g(x) - g(tau(x))."""
    return g - compose_with_table(g, tau)


def one_b(b: StepFunction) -> StepFunction:
    """The function 1 - b + b o sigma; its cocycle subgroup is the coboundary
    subgroup of b."""
    return constant(b.spec, 1) - b + compose_shift(b, 1)


@dataclass(frozen=True)
class MembershipResult:
    """Outcome of a subgroup test, with the residual function and, when the
    test fails, a cylinder word where the defining identity breaks."""

    member: bool
    residual: StepFunction
    witness: Word | None

    def __bool__(self) -> bool:
        return self.member


def _verdict(residual: StepFunction) -> MembershipResult:
    support = residual.support()
    if support:
        return MembershipResult(member=False, residual=residual, witness=support[0])
    return MembershipResult(member=True, residual=residual, witness=None)


def subgroup_membership(tau: TableHomeo, mode: str,
                        fn: StepFunction | None = None) -> MembershipResult:
    """Exact membership tests.

    mode "af":         d_tau vanishes everywhere.
    mode "cocycle":    rho(fn, tau) vanishes everywhere.
    mode "coboundary": d_tau equals fn - fn o tau everywhere.
    """
    if mode == "af":
        return _verdict(cocycle_data(tau).d)
    if fn is None:
        raise BadArgument(f"mode {mode!r} needs a function argument")
    if fn.spec != tau.spec:
        raise SpecMismatch("function and element live on different spaces")
    if mode == "cocycle":
        return _verdict(rho(fn, tau).table)
    if mode == "coboundary":
        return _verdict(cocycle_data(tau).d - delta(fn, tau))
    raise BadArgument(f"unknown membership mode {mode!r}")


@dataclass(frozen=True)
class ZeroProbeResult:
    """Either confirmation that f vanishes, or a swap generator together with
    a cylinder where its cocycle table against f is nonzero."""

    zero: bool
    generator: TableHomeo | None = None
    params: tuple[int, int, int] | None = None
    word: Word | None = None
    value: int | None = None


def zero_probe(f: StepFunction) -> ZeroProbeResult:
    """Constructive version of: the cocycle of f vanishes against every
    element iff f is zero.

    Scans the swap generators in the fixed order (a ascending, b ascending,
    run length ascending) and returns the first nonzero cocycle entry.  Run
    lengths up to max(2, depth(f)) suffice: on the long swap cylinder the
    generator acts as the shift, where the cocycle reduces to f itself.
    """
    spec = f.spec
    if f.is_zero():
        return ZeroProbeResult(zero=True)
    max_run = max(2, f.depth)
    for a in range(1, spec.n + 1):
        for b in range(1, spec.n + 1):
            if a == b:
                continue
            for m in range(1, max_run + 1):
                try:
                    tau = gen_swap(spec, a, b, m)
                except BadSymbols:
                    continue
                table = rho(f, tau).table
                support = table.support()
                if support:
                    w = support[0]
                    return ZeroProbeResult(zero=False, generator=tau,
                                           params=(a, b, m), word=w,
                                           value=table.values[w])
    raise AssertionError("nonzero function escaped every swap generator")
