"""Orbit-equivalence witnesses between two shift spaces and their cocycles.

A witness is a homeomorphism given constructively as a chain of stages, each
either a prefix-code coder (a complete variable-length code: the input
partitions its space, blocks rewrite to nonempty output blocks, junctions
stay admissible both ways) or a full-group table element.  The inverse chain
is derived and validated, never supplied.

From a witness the cocycle exponents (k1, l1) and (k2, l2) are derived per
cylinder: the least pair in (k+l, k) order for which
sigma^k(h(sigma x)) = sigma^l(h(x)) holds on three deterministic
representatives of the cylinder, with automatic refinement when no pair is
constant across them.  Downstream identities re-validate the tables, and
every certificate this module emits is checked exactly before it is
returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .errors import (
    BadArgument,
    BoundExceeded,
    DepthCapExceeded,
    IdentityElement,
    InadmissibleWord,
    InverseInvalid,
    JunctionInadmissible,
    NotGammaScoe,
    NotPartition,
    ShiftGroupsError,
    SpecMismatch,
    StageMismatch,
)
from .full_group import (
    TableHomeo,
    apply as apply_table,
    cocycle_data,
    compose,
    generator_family,
    identity,
    invert,
    validate_table,
)
from .cocycle_lab import rho
from .sft_core import (
    EpPoint,
    SftSpec,
    Word,
    check_cylinder_partition,
    cylinder_representatives,
    enumerate_words,
    format_word,
    make_point,
    shift_point,
)
from .step_functions import (
    Outcome,
    StepFunction,
    canonical_function,
    compose_shift,
    constant,
    evaluate,
    is_sigma_coboundary,
)

DEFAULT_DEPTH = 8
DEFAULT_BOUND = 16
DEFAULT_DEPTH_CAP = 24


@dataclass(frozen=True)
class CoderStage:
    """One prefix-code stage: in-blocks over ``source`` rewrite to out-blocks
    over ``target``."""

    source: SftSpec
    target: SftSpec
    pairs: tuple[tuple[Word, Word], ...]

    def swapped(self) -> "CoderStage":
        return CoderStage(source=self.target, target=self.source,
                          pairs=tuple((o, i) for i, o in self.pairs))


@dataclass(frozen=True)
class TableStage:
    """One full-group stage acting inside a single space."""

    table: TableHomeo


Stage = Union[CoderStage, TableStage]


def _check_coder(stage: CoderStage) -> None:
    src, tgt = stage.source, stage.target
    if not stage.pairs:
        raise NotPartition("a coder needs at least one pair")
    for i, o in stage.pairs:
        if not i or not o:
            raise NotPartition("coder blocks must be nonempty")
        src.check_admissible(i)
        tgt.check_admissible(o)
    try:
        check_cylinder_partition(src, [i for i, _ in stage.pairs])
    except BadArgument as exc:
        raise NotPartition(str(exc)) from exc
    for i, o in stage.pairs:
        for i2, o2 in stage.pairs:
            if src.allows(i[-1], i2[0]) and not tgt.allows(o[-1], o2[0]):
                raise JunctionInadmissible(
                    f"blocks {format_word(i, src.n)}->{format_word(o, tgt.n)} and "
                    f"{format_word(i2, src.n)}->{format_word(o2, tgt.n)} "
                    "emit an inadmissible junction")


def _stage_spaces(stage: Stage) -> tuple[SftSpec, SftSpec]:
    if isinstance(stage, TableStage):
        return stage.table.spec, stage.table.spec
    return stage.source, stage.target


def _invert_stage(stage: Stage) -> Stage:
    if isinstance(stage, TableStage):
        return TableStage(table=invert(stage.table))
    swapped = stage.swapped()
    try:
        _check_coder(swapped)
    except (NotPartition, JunctionInadmissible, InadmissibleWord) as exc:
        raise InverseInvalid(f"inverse coder is not valid: {exc}") from exc
    return swapped


@dataclass(frozen=True)
class CoeWitness:
    """A validated homeomorphism chain from ``source`` to ``target``."""

    source: SftSpec
    target: SftSpec
    chain: tuple[Stage, ...]
    inverse_chain: tuple[Stage, ...]

    def inverse(self) -> "CoeWitness":
        return CoeWitness(source=self.target, target=self.source,
                          chain=self.inverse_chain, inverse_chain=self.chain)

    def __call__(self, x: EpPoint) -> EpPoint:
        return apply_witness(self, x)

    def extended_by(self, tau: TableHomeo) -> "CoeWitness":
        """The witness followed by a table element on the target space."""
        if tau.spec != self.target:
            raise SpecMismatch("extension table lives off the target space")
        return CoeWitness(
            source=self.source, target=self.target,
            chain=self.chain + (TableStage(tau),),
            inverse_chain=(TableStage(invert(tau)),) + self.inverse_chain)

    def as_table(self) -> TableHomeo:
        """Collapse an all-table self-witness into one group element."""
        if self.source != self.target:
            raise BadArgument("witness is not a self-map")
        tau = identity(self.source)
        for stage in self.chain:
            if not isinstance(stage, TableStage):
                raise BadArgument("witness contains a coder stage")
            tau = compose(stage.table, tau)
        return tau


def validate_witness(source: SftSpec, target: SftSpec,
                     stages: Sequence[Stage]) -> CoeWitness:
    """Check stage composition and both directions of every coder."""
    if not stages:
        raise StageMismatch("a witness needs at least one stage")
    current = source
    for stage in stages:
        s_in, s_out = _stage_spaces(stage)
        if s_in != current:
            raise StageMismatch("stage source does not match the running space")
        if isinstance(stage, CoderStage):
            _check_coder(stage)
        current = s_out
    if current != target:
        raise StageMismatch("chain does not end on the target space")
    inverse = tuple(_invert_stage(stage) for stage in reversed(stages))
    return CoeWitness(source=source, target=target,
                      chain=tuple(stages), inverse_chain=inverse)


def self_witness(tau: TableHomeo) -> CoeWitness:
    """The element ``tau`` viewed as a witness from its space to itself."""
    return validate_witness(tau.spec, tau.spec, [TableStage(tau)])


def identity_witness(spec: SftSpec) -> CoeWitness:
    return self_witness(identity(spec))


def _apply_coder(stage: CoderStage, x: EpPoint) -> EpPoint:
    """Block-rewrite an eventually periodic point; the block parse of the
    periodic tail recurs, which yields the output cycle."""
    seen: dict[EpPoint, int] = {}
    emitted: list[int] = []
    p = x
    while p not in seen:
        seen[p] = len(emitted)
        for i, o in stage.pairs:
            if p.starts_with(i):
                emitted.extend(o)
                p = shift_point(stage.source, p, len(i))
                break
        else:
            raise AssertionError("coder blocks fail to cover the space")
    start = seen[p]
    return make_point(stage.target, tuple(emitted[: start]), tuple(emitted[start:]))


def apply_witness(h: CoeWitness, x: EpPoint, direction: str = "forward") -> EpPoint:
    """Exact image of a point under the witness or its inverse."""
    if direction == "forward":
        stages, start = h.chain, h.source
    elif direction == "inverse":
        stages, start = h.inverse_chain, h.target
    else:
        raise BadArgument(f"unknown direction {direction!r}")
    if x.spec != start:
        raise SpecMismatch("point belongs to a different space")
    for stage in stages:
        if isinstance(stage, TableStage):
            x = apply_table(stage.table, x)
        else:
            x = _apply_coder(stage, x)
    return x


def _mixed_to_function(spec: SftSpec, mapping: dict[Word, int]) -> StepFunction:
    """Assemble a step function from constants on a refined cylinder partition."""
    depth = max((len(w) for w in mapping), default=0)
    vals = {}
    for w in enumerate_words(spec, depth):
        for k in range(0, depth + 1):
            if w[: k] in mapping:
                vals[w] = mapping[w[: k]]
                break
        else:
            raise AssertionError("mapping words fail to cover the space")
    return canonical_function(spec, depth, vals)


def stabilize(spec: SftSpec, fn: Callable[[EpPoint], int], start_depth: int,
              depth_cap: int = DEFAULT_DEPTH_CAP) -> StepFunction:
    """Turn a pointwise-evaluable locally constant function into a step
    function: evaluate on three representatives per cylinder and refine any
    cylinder on which they disagree."""
    mapping: dict[Word, int] = {}
    queue = list(enumerate_words(spec, max(start_depth, 1)))
    while queue:
        w = queue.pop(0)
        vals = [fn(x) for x in cylinder_representatives(spec, w)]
        if all(v == vals[0] for v in vals):
            mapping[w] = vals[0]
            continue
        if len(w) >= depth_cap:
            raise DepthCapExceeded(
                f"no constancy at depth {depth_cap} on {format_word(w, spec.n)}")
        queue.extend(w + (c,) for c in spec.followers(w[-1]))
    return _mixed_to_function(spec, mapping)


@dataclass(frozen=True)
class CocycleTables:
    """Derived exponent data of a witness: sigma^k1(h(sigma x)) = sigma^l1(h x)
    on the source, and the symmetric relation for the inverse on the target."""

    k1: StepFunction
    l1: StepFunction
    c1: StepFunction
    k2: StepFunction
    l2: StepFunction
    c2: StepFunction


def _least_pair(images: list[tuple[EpPoint, EpPoint]], bound: int
                ) -> tuple[tuple[int, int] | None, bool]:
    """Least (k+l, k) pair with sigma^k(first) = sigma^l(second) on every
    listed image pair; also reports whether any pair worked on the first."""
    any_on_first = False
    for total in range(0, 2 * bound + 1):
        for k in range(max(0, total - bound), min(total, bound) + 1):
            l = total - k
            hsx0, hx0 = images[0]
            if hsx0.shift(k) != hx0.shift(l):
                continue
            any_on_first = True
            if all(hsx.shift(k) == hx.shift(l) for hsx, hx in images[1:]):
                return (k, l), True
    return None, any_on_first


def _derive_direction(h: CoeWitness, direction: str, depth: int, bound: int,
                      depth_cap: int) -> tuple[StepFunction, StepFunction]:
    spec = h.source if direction == "forward" else h.target
    k_map: dict[Word, int] = {}
    l_map: dict[Word, int] = {}
    queue = list(enumerate_words(spec, max(depth, 1)))
    while queue:
        w = queue.pop(0)
        reps = cylinder_representatives(spec, w)
        images = [(apply_witness(h, x.shift(1), direction),
                   apply_witness(h, x, direction)) for x in reps]
        pair, any_on_first = _least_pair(images, bound)
        if pair is not None:
            k_map[w], l_map[w] = pair
            continue
        if not any_on_first:
            raise BoundExceeded(
                f"no exponent pair up to {bound} on {format_word(w, spec.n)}")
        if len(w) >= depth_cap:
            raise DepthCapExceeded(
                f"exponents not constant at depth {depth_cap} "
                f"on {format_word(w, spec.n)}")
        queue.extend(w + (c,) for c in spec.followers(w[-1]))
    return _mixed_to_function(spec, k_map), _mixed_to_function(spec, l_map)


def derive_cocycles(h: CoeWitness, depth: int = DEFAULT_DEPTH,
                    bound: int = DEFAULT_BOUND,
                    depth_cap: int = DEFAULT_DEPTH_CAP) -> CocycleTables:
    """Exponent tables of the witness in both directions."""
    if depth < 1 or bound < 1:
        raise BadArgument("depth and bound must be positive")
    k1, l1 = _derive_direction(h, "forward", depth, bound, depth_cap)
    k2, l2 = _derive_direction(h, "inverse", depth, bound, depth_cap)
    return CocycleTables(k1=k1, l1=l1, c1=l1 - k1, k2=k2, l2=l2, c2=l2 - k2)


def psi_h(h: CoeWitness, f: StepFunction,
          tables: CocycleTables | None = None) -> StepFunction:
    """Pull a function on the target back to the source along the witness:

        z -> sum_{i=0}^{l1(z)} f(sigma^i(h z)) - sum_{j=0}^{k1(z)} f(sigma^j(h sigma z)),

    inclusive sums.  Applied to the constant 1 this returns c1."""
    if f.spec != h.target:
        raise SpecMismatch("function must live on the target space")
    if tables is None:
        tables = derive_cocycles(h)
    k1, l1 = tables.k1, tables.l1

    def value(x: EpPoint) -> int:
        hx = apply_witness(h, x)
        hsx = apply_witness(h, x.shift(1))
        lx = evaluate(l1, x)
        kx = evaluate(k1, x)
        return (sum(evaluate(f, hx.shift(i)) for i in range(lx + 1))
                - sum(evaluate(f, hsx.shift(j)) for j in range(kx + 1)))

    start = max(1, max(k1.depth, l1.depth), f.depth)
    return stabilize(h.source, value, start)


def transport(h: CoeWitness, f: StepFunction) -> StepFunction:
    """The function f o h^{-1} on the target space."""
    if f.spec != h.source:
        raise SpecMismatch("function must live on the source space")

    def value(y: EpPoint) -> int:
        return evaluate(f, apply_witness(h, y, "inverse"))

    return stabilize(h.target, value, max(1, f.depth))


def _find_rewrite(w: Word, reps: list[EpPoint], images: list[EpPoint],
                  shift_bound: int) -> Word | None:
    """A nonempty output word omega with image = omega + tail-after-w on all
    representatives, or None.  Pieces that drop the whole prefix (empty
    omega) are not representable as one pair and must be refined first."""
    tails = [x.shift(len(w)) for x in reps]
    for j in range(1, shift_bound + 1):
        prefix = images[0].expand(j)
        if all(y.expand(j) == prefix for y in images[1:]) and all(
                y.shift(j) == t for y, t in zip(images, tails)):
            return prefix
    return None


def _rewrite_holds_below(spec: SftSpec, w: Word, omega: Word, image) -> bool:
    """Re-check a candidate rewrite on the representatives of every child
    cylinder; their tails differ from the parent's, which defeats sporadic
    shift-aligned matches."""
    for c in spec.followers(w[-1]):
        for x in cylinder_representatives(spec, w + (c,)):
            tail = x.shift(len(w))
            try:
                expected = make_point(spec, omega + tail.pre, tail.cyc)
            except ShiftGroupsError:
                return False
            if image(x) != expected:
                return False
    return True


def xi_h(h: CoeWitness, tau: TableHomeo, start_depth: int = 1,
         depth_cap: int = DEFAULT_DEPTH_CAP) -> TableHomeo:
    """Conjugate a source element through the witness: h o tau o h^{-1}.

    The result is assembled as a prefix-exchange table by searching, per
    cylinder of the target, for the rewrite word the conjugate applies, then
    validated structurally and re-checked pointwise on a deeper sample.
    """
    if tau.spec != h.source:
        raise SpecMismatch("element must live on the source space")
    target = h.target

    def image(y: EpPoint) -> EpPoint:
        return apply_witness(h, apply_table(tau, apply_witness(h, y, "inverse")))

    shift_bound = 4 * (depth_cap + tau.src_depth() + tau.dst_depth() + 4)
    attempt = max(1, start_depth)
    while attempt <= depth_cap:
        pairs: dict[Word, Word] = {}
        queue = list(enumerate_words(target, attempt))
        while queue:
            w = queue.pop(0)
            reps = cylinder_representatives(target, w)
            omega = _find_rewrite(w, reps, [image(x) for x in reps], shift_bound)
            if omega is not None and _rewrite_holds_below(target, w, omega, image):
                pairs[w] = omega
                continue
            if len(w) >= depth_cap:
                raise DepthCapExceeded(
                    f"no rewrite word at depth {depth_cap} on {format_word(w, target.n)}")
            queue.extend(w + (c,) for c in target.followers(w[-1]))
        try:
            conjugate = validate_table(target, sorted(pairs.items()))
        except ShiftGroupsError:
            attempt += 2  # representatives were fooled; restart deeper
            continue
        if _verify_conjugate(conjugate, image):
            return conjugate
        attempt += 2
    raise DepthCapExceeded("conjugation table failed pointwise verification")


def _verify_conjugate(candidate: TableHomeo, image) -> bool:
    spec = candidate.spec
    probe = min(candidate.src_depth() + 1, 12)
    for w in enumerate_words(spec, probe):
        for x in cylinder_representatives(spec, w):
            if apply_table(candidate, x) != image(x):
                return False
    return True


def phi_h_rho(h: CoeWitness, f: StepFunction, phi: TableHomeo) -> StepFunction:
    """The transported cocycle y -> rho(f, conjugate of phi)(h^{-1}(y)).

    Equals the cocycle of the pulled-back function at phi itself; that
    identity is the exactness check for the whole transport machinery.
    """
    if f.spec != h.source:
        raise SpecMismatch("function must live on the source space")
    if phi.spec != h.target:
        raise SpecMismatch("element must live on the target space")
    pulled = xi_h(h.inverse(), phi)
    table = rho(f, pulled).table
    return transport(h, table)


@dataclass(frozen=True)
class ScoeCertificate:
    """Strong-continuity certificate for a witness.

    SAT carries b1 (source) and b2 (target) with c = 1 + b - b o sigma in
    each direction, plus the constant value of b1 + b2 o h.  UNSAT carries a
    periodic cycle word whose c-sum differs from its period, together with
    the space the cycle lives on.
    """

    outcome: Outcome
    b1: StepFunction | None = None
    b2: StepFunction | None = None
    pair_constant: int | None = None
    cycle: Word | None = None
    cycle_space: str | None = None
    cycle_sum: int | None = None


def scoe_solve(h: CoeWitness, tables: CocycleTables | None = None,
               search_depth: int | None = None,
               cycle_bound: int | None = None) -> ScoeCertificate:
    """Decide whether the witness cocycles have the strong form
    c = 1 + b - b o sigma, with explicit b or an exact periodic obstruction."""
    if tables is None:
        tables = derive_cocycles(h)
    f1 = tables.c1 - constant(h.source, 1)
    cert1 = is_sigma_coboundary(f1, search_depth, cycle_bound)
    if cert1.outcome is Outcome.UNSAT:
        period = len(cert1.cycle)
        return ScoeCertificate(Outcome.UNSAT, cycle=cert1.cycle,
                               cycle_space="source",
                               cycle_sum=cert1.cycle_sum + period)
    if cert1.outcome is Outcome.INCONCLUSIVE:
        return ScoeCertificate(Outcome.INCONCLUSIVE)
    f2 = tables.c2 - constant(h.target, 1)
    cert2 = is_sigma_coboundary(f2, search_depth, cycle_bound)
    if cert2.outcome is Outcome.UNSAT:
        period = len(cert2.cycle)
        return ScoeCertificate(Outcome.UNSAT, cycle=cert2.cycle,
                               cycle_space="target",
                               cycle_sum=cert2.cycle_sum + period)
    if cert2.outcome is Outcome.INCONCLUSIVE:
        return ScoeCertificate(Outcome.INCONCLUSIVE)
    b1, b2 = cert1.g, cert2.g
    paired = b1 + transport(h.inverse(), b2)
    if not paired.is_constant():
        raise AssertionError("b1 + b2 o h failed to be constant")
    return ScoeCertificate(Outcome.SAT, b1=b1, b2=b2,
                           pair_constant=paired.constant_value())


@dataclass(frozen=True)
class GammaScoeResult:
    holds: bool
    residual: StepFunction
    c1: StepFunction

    def __bool__(self) -> bool:
        return self.holds


def gamma_scoe_verify(h: CoeWitness, tau: TableHomeo,
                      tables: CocycleTables | None = None) -> GammaScoeResult:
    """Check the identity c1 = 1 - d_tau + d_tau o sigma exactly."""
    if tau.spec != h.source:
        raise SpecMismatch("element must live on the source space")
    if tables is None:
        tables = derive_cocycles(h)
    d = cocycle_data(tau).d
    expected = constant(h.source, 1) - d + compose_shift(d, 1)
    residual = tables.c1 - expected
    return GammaScoeResult(holds=residual.is_zero(), residual=residual,
                           c1=tables.c1)


def verify_eventual_conjugacy(h: CoeWitness, lag: int,
                              depth: int = DEFAULT_DEPTH) -> bool:
    """Check sigma^lag(h(sigma x)) = sigma^(lag+1)(h(x)) on every depth
    cylinder.

    The identity holds on a whole cylinder precisely when the derived
    exponents there are (k1, k1 + 1) with k1 <= lag, so the check goes
    through the cocycle tables.  Sampling the closing identity directly on
    eventually periodic representatives would be unsound: their images can
    land on shift-fixed tails where any large lag closes the diagram."""
    if lag < 0:
        raise BadArgument("lag must be nonnegative")
    tables = derive_cocycles(h, depth=depth)
    if tables.c1 != constant(h.source, 1):
        return False
    return lag >= tables.k1.max_value()


def construct_eventual_conjugacy(h: CoeWitness, tau: TableHomeo,
                                 tables: CocycleTables | None = None,
                                 depth: int = DEFAULT_DEPTH
                                 ) -> tuple[CoeWitness, int]:
    """Convert a witness whose cocycle has the form 1 - d_tau + d_tau o sigma
    into an eventual conjugacy.

    Post-composes with the conjugate of the inverse element.  The lag is the
    maximum of the forward exponents k1 and of -d over the correcting
    element, raised when the corrected witness needs a larger exponent than
    that estimate."""
    if tables is None:
        tables = derive_cocycles(h)
    check = gamma_scoe_verify(h, tau, tables)
    if not check.holds:
        raise NotGammaScoe("cocycle is not 1 - d + d o sigma for this element")
    tau2 = xi_h(h, invert(tau))
    corrected = h.extended_by(tau2)
    d2 = cocycle_data(tau2).d
    lag = max(tables.k1.max_value(), (-d2).max_value(), 0)
    corrected_tables = derive_cocycles(corrected, depth=depth)
    if corrected_tables.c1 != constant(h.source, 1):
        raise AssertionError("corrected witness failed to reach unit cocycle")
    lag = max(lag, corrected_tables.k1.max_value())
    if not verify_eventual_conjugacy(corrected, lag, depth):
        raise AssertionError("constructed witness failed the lag verification")
    return corrected, lag


def noncommuting_witness(h: TableHomeo,
                         generators: Sequence[TableHomeo] | None = None,
                         probe_depth: int = 3
                         ) -> tuple[TableHomeo, EpPoint] | None:
    """A generator and a point where a non-identity element fails to commute.

    Searches the supplied generators (default: the swap family) against a
    deterministic point set.  None means the sample commuted everywhere,
    which is inconclusive, not a proof.
    """
    if h.is_identity():
        raise IdentityElement("commutation probe needs a non-identity element")
    spec = h.spec
    gens = list(generators) if generators is not None else generator_family(spec)
    points: list[EpPoint] = []
    seen: set[EpPoint] = set()
    top = max(probe_depth, h.src_depth() + 1)
    for k in range(1, top + 1):
        for w in enumerate_words(spec, k):
            for x in cylinder_representatives(spec, w):
                if x not in seen:
                    seen.add(x)
                    points.append(x)
    for tau in gens:
        for x in points:
            if apply_table(h, apply_table(tau, x)) != apply_table(tau, apply_table(h, x)):
                return tau, x
    return None
