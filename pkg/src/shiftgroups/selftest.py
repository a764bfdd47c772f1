"""Deterministic property suites runnable from the CLI.

Each suite checks one Invariants & Properties block from the module
contracts; all randomness flows from the single seed, so two runs with the
same seed do identical work.  The pytest suite reuses these functions.
"""

from __future__ import annotations

import random
from typing import Callable

from .cocycle_lab import delta, one_b, psi_tau, rho, subgroup_membership, zero_probe
from .full_group import (
    apply,
    cocycle_data,
    compose,
    compose_cocycle_data,
    compose_with_table,
    gen_swap,
    generator_family,
    identity,
    invert,
    raw_cocycle_data,
    sample_element,
    validate_table,
)
from .orbit_equiv import (
    CoderStage,
    CoeWitness,
    apply_witness,
    construct_eventual_conjugacy,
    derive_cocycles,
    gamma_scoe_verify,
    identity_witness,
    psi_h,
    scoe_solve,
    self_witness,
    transport,
    validate_witness,
    verify_eventual_conjugacy,
    xi_h,
)
from .sft_core import (
    EpPoint,
    FULL_2_SHIFT,
    GOLDEN_MEAN,
    SftSpec,
    enumerate_words,
    flow_invariants,
    make_point,
    validate_matrix,
)
from .step_functions import (
    Outcome,
    StepFunction,
    compose_shift,
    constant,
    cycle_sum,
    evaluate,
    is_sigma_coboundary,
    make_step_function,
    orbit_sum,
    periodic_cycles,
)


def golden_spec() -> SftSpec:
    return validate_matrix(GOLDEN_MEAN)


def full2_spec() -> SftSpec:
    return validate_matrix(FULL_2_SHIFT)


def worked_witness() -> CoeWitness:
    """The golden-mean to full-2-shift coder from the worked example pair."""
    golden, full2 = golden_spec(), full2_spec()
    stage = CoderStage(source=golden, target=full2,
                       pairs=(((1,), (1,)), ((2, 1), (2,))))
    return validate_witness(golden, full2, [stage])


def random_function(spec: SftSpec, rng: random.Random, max_depth: int = 2,
                    lo: int = -3, hi: int = 3) -> StepFunction:
    d = rng.randint(0, max_depth)
    return make_step_function(
        spec, d, {w: rng.randint(lo, hi) for w in enumerate_words(spec, d)})


def random_point(spec: SftSpec, rng: random.Random, max_pre: int = 4,
                 max_cycle: int = 4) -> EpPoint:
    while True:
        length = rng.randint(1, max_pre + max_cycle)
        walk = [rng.randint(1, spec.n)]
        for _ in range(length - 1):
            walk.append(rng.choice(spec.followers(walk[-1])))
        cut = rng.randint(max(0, len(walk) - max_cycle), len(walk) - 1)
        u, v = walk[: cut], walk[cut:]
        if spec.allows(v[-1], v[0]):
            return make_point(spec, tuple(u), tuple(v))


def _both_specs() -> list[SftSpec]:
    return [full2_spec(), golden_spec()]


# --- sft_core -------------------------------------------------------------

def suite_words_extend(rng: random.Random) -> str:
    checked = 0
    for spec in _both_specs():
        for k in range(0, 6):
            words = set(enumerate_words(spec, k))
            prefixes = {w[: k] for w in enumerate_words(spec, k + 1)}
            assert prefixes == words
            checked += len(words)
    return f"{checked} words"


def suite_shift_semigroup(rng: random.Random) -> str:
    for spec in _both_specs():
        for _ in range(40):
            x = random_point(spec, rng)
            for m in range(0, 17, 4):
                assert x.shift(m + 1) == x.shift(m).shift(1)
    return "80 points, lags to 16"


def suite_flow_agreement(rng: random.Random) -> str:
    a = flow_invariants(full2_spec())
    b = flow_invariants(golden_spec())
    assert (a.sign, a.bf_group) == (b.sign, b.bf_group) == (-1, ())
    return f"sign={a.sign} group=trivial on both"


def suite_point_equality(rng: random.Random) -> str:
    for spec in _both_specs():
        points = [random_point(spec, rng) for _ in range(30)]
        for x in points:
            assert x == x
            for y in points:
                probe = (max(len(x.pre), len(y.pre))
                         + _lcm(len(x.cyc), len(y.cyc))
                         + max(len(x.cyc), len(y.cyc)))
                agree = x.expand(probe) == y.expand(probe)
                assert agree == (x == y)
                assert (x == y) == (y == x)
    return "60 points against the expansion oracle"


def _lcm(a: int, b: int) -> int:
    from math import gcd
    return a * b // gcd(a, b)


# --- step_functions -------------------------------------------------------

def suite_orbit_sum_additivity(rng: random.Random) -> str:
    for spec in _both_specs():
        for _ in range(25):
            f = random_function(spec, rng, 3)
            n, m = rng.randint(0, 6), rng.randint(0, 6)
            fn_sum = orbit_sum(f, n + m)
            split = orbit_sum(f, m) + compose_shift(orbit_sum(f, n), m)
            assert fn_sum == split
            for _ in range(2):
                x = random_point(spec, rng)
                assert evaluate(fn_sum, x) == (
                    evaluate(orbit_sum(f, m), x)
                    + evaluate(orbit_sum(f, n), x.shift(m)))
    return "50 random (f, n, m)"


def suite_coboundary_roundtrip(rng: random.Random) -> str:
    for spec in _both_specs():
        for _ in range(25):
            g = random_function(spec, rng, 3, -4, 4)
            f = g - compose_shift(g, 1)
            cert = is_sigma_coboundary(f)
            assert cert.outcome is Outcome.SAT
            assert cert.g - compose_shift(cert.g, 1) == f
    return "50 round trips"


def suite_certificate_exclusivity(rng: random.Random) -> str:
    unsat = 0
    for spec in _both_specs():
        for _ in range(40):
            f = random_function(spec, rng, 2, -2, 2)
            cert = is_sigma_coboundary(f)
            if cert.outcome is Outcome.UNSAT:
                unsat += 1
                assert cycle_sum(f, cert.cycle) == cert.cycle_sum != 0
            else:
                assert cert.outcome is Outcome.SAT
                assert cert.g - compose_shift(cert.g, 1) == f
    return f"80 functions, {unsat} obstructions verified"


def suite_function_algebra(rng: random.Random) -> str:
    for spec in _both_specs():
        for _ in range(20):
            f = random_function(spec, rng)
            g = random_function(spec, rng)
            x = random_point(spec, rng)
            assert evaluate(f + g, x) == evaluate(f, x) + evaluate(g, x)
            assert evaluate(-f, x) == -evaluate(f, x)
            assert evaluate(3 * f, x) == 3 * evaluate(f, x)
            assert evaluate(compose_shift(f, 2), x) == evaluate(f, x.shift(2))
    return "40 pointwise algebra checks"


# --- full_group -----------------------------------------------------------

def suite_group_axioms(rng: random.Random) -> str:
    checked = 0
    for spec in _both_specs():
        gens = generator_family(spec)[: 4]
        elements = [identity(spec)] + gens[:]
        for g1 in gens:
            for g2 in gens:
                elements.append(compose(g1, g2))
        for g1 in gens:
            for g2 in gens:
                for g3 in gens:
                    left = compose(compose(g1, g2), g3)
                    right = compose(g1, compose(g2, g3))
                    assert left == right
                    checked += 1
        for tau in elements:
            assert compose(invert(tau), tau).is_identity()
            assert compose(tau, invert(tau)).is_identity()
    return f"{checked} associativity triples plus inverses"


def suite_composition_laws(rng: random.Random) -> str:
    count = 0
    for spec in _both_specs():
        for _ in range(50):
            t1 = sample_element(spec, rng, 2)
            t2 = sample_element(spec, rng, 2)
            d1, d2 = cocycle_data(t1), cocycle_data(t2)
            raw = compose_cocycle_data(t2, t1)
            assert raw.l == d1.l + compose_with_table(d2.l, t1)
            assert raw.k == d1.k + compose_with_table(d2.k, t1)
            assert raw.d == d1.d + compose_with_table(d2.d, t1)
            assert cocycle_data(compose(t2, t1)).d == raw.d
            count += 1
    return f"{count} generator-word pairs"


def suite_d_presentation_invariance(rng: random.Random) -> str:
    for spec in _both_specs():
        for _ in range(20):
            tau = sample_element(spec, rng, 2)
            split = []
            refined_one = False
            for s, d in tau.pairs:
                if not refined_one and s:
                    for c in spec.followers(s[-1]):
                        split.append((s + (c,), d + (c,)))
                    refined_one = True
                else:
                    split.append((s, d))
            if not refined_one:
                continue
            assert raw_cocycle_data(spec, split).d == cocycle_data(tau).d
            assert validate_table(spec, split) == tau
    return "40 split presentations"


def suite_table_relation(rng: random.Random) -> str:
    for spec in _both_specs():
        for _ in range(25):
            tau = sample_element(spec, rng, 3)
            data = cocycle_data(tau)
            for _ in range(4):
                x = random_point(spec, rng)
                k = evaluate(data.k, x)
                l = evaluate(data.l, x)
                assert apply(tau, x).shift(k) == x.shift(l)
    return "50 elements, 4 points each"


# --- cocycle_lab ----------------------------------------------------------

def suite_cocycle_chain_rule(rng: random.Random) -> str:
    count = 0
    for spec in _both_specs():
        for _ in range(50):
            f = random_function(spec, rng, 2)
            t1 = sample_element(spec, rng, 2)
            t2 = sample_element(spec, rng, 2)
            lhs = rho(f, compose(t2, t1)).table
            rhs = rho(f, t1).table + compose_with_table(rho(f, t2).table, t1)
            assert lhs == rhs
            count += 1
    return f"{count} (f, tau1, tau2) triples"


def suite_cocycle_inverse_law(rng: random.Random) -> str:
    for spec in _both_specs():
        for _ in range(25):
            f = random_function(spec, rng, 2)
            tau = sample_element(spec, rng, 2)
            ti = invert(tau)
            assert rho(f, ti).table == -compose_with_table(rho(f, tau).table, ti)
    return "50 inverse identities"


def _membership_modes(spec: SftSpec, rng: random.Random):
    f = random_function(spec, rng, 1)
    b = random_function(spec, rng, 1)
    return [("af", None), ("cocycle", f), ("coboundary", b)]


def suite_membership_closure(rng: random.Random) -> str:
    checked = 0
    for spec in _both_specs():
        gens = generator_family(spec)
        for mode, fn in _membership_modes(spec, rng):
            members = [identity(spec)]
            for tau in gens:
                if subgroup_membership(tau, mode, fn).member:
                    members.append(tau)
            for t1 in members:
                for t2 in members:
                    assert subgroup_membership(compose(t2, t1), mode, fn).member
                    checked += 1
                assert subgroup_membership(invert(t1), mode, fn).member
    return f"{checked} closure products"


def suite_membership_scaling(rng: random.Random) -> str:
    for spec in _both_specs():
        f = random_function(spec, rng, 1)
        b = random_function(spec, rng, 1)
        for tau in generator_family(spec) + [sample_element(spec, rng, 2)]:
            base = subgroup_membership(tau, "cocycle", f).member
            for m in (-2, -1, 2, 3):
                assert subgroup_membership(tau, "cocycle", m * f).member == base
            base_b = subgroup_membership(tau, "coboundary", b).member
            for m in (-2, -1, 2, 3):
                shifted = b + constant(spec, m)
                assert subgroup_membership(tau, "coboundary", shifted).member == base_b
    return "scaling and shift invariance on the generator family"


def suite_af_coincidences(rng: random.Random) -> str:
    count = 0
    for spec in _both_specs():
        one = constant(spec, 1)
        zero = constant(spec, 0)
        samples = generator_family(spec) + [
            sample_element(spec, rng, 2) for _ in range(6)]
        for tau in samples:
            af = subgroup_membership(tau, "af").member
            assert af == subgroup_membership(tau, "cocycle", one).member
            assert af == subgroup_membership(tau, "coboundary", zero).member
            count += 1
    return f"{count} elements"


def suite_transfer_cycle_sums(rng: random.Random) -> str:
    for spec in _both_specs():
        cycles = periodic_cycles(spec, 6)
        for _ in range(10):
            f = random_function(spec, rng, 2)
            tau = sample_element(spec, rng, 2)
            moved = psi_tau(tau, f)
            for cycle in cycles:
                assert cycle_sum(moved, cycle) == cycle_sum(f, cycle)
    return "20 transfers over all orbits to length 6"


def suite_one_b_equivalence(rng: random.Random) -> str:
    count = 0
    for spec in _both_specs():
        for _ in range(8):
            b = random_function(spec, rng, 1)
            fn = one_b(b)
            for tau in generator_family(spec):
                assert (subgroup_membership(tau, "coboundary", b).member
                        == subgroup_membership(tau, "cocycle", fn).member)
                count += 1
    return f"{count} (tau, b) agreements"


def suite_function_cocycle_injectivity(rng: random.Random) -> str:
    for spec in _both_specs():
        assert zero_probe(constant(spec, 0)).zero
        for _ in range(10):
            f = random_function(spec, rng, 2)
            probe = zero_probe(f)
            assert probe.zero == f.is_zero()
            if not probe.zero:
                table = rho(f, probe.generator).table
                assert table.values[probe.word[: table.depth]] == probe.value != 0
        for _ in range(10):
            g = random_function(spec, rng, 2)
            f = g - compose_shift(g, 1)
            for tau in generator_family(spec):
                assert rho(f, tau).table == delta(g, tau)
    return "probes plus coboundary-to-coboundary law"


# --- orbit_equiv ----------------------------------------------------------

def _sat_witnesses(rng: random.Random) -> list[CoeWitness]:
    full2 = full2_spec()
    return [self_witness(gen_swap(full2, 1, 2, 1)),
            self_witness(sample_element(full2, rng, 2))]


def suite_witness_soundness(rng: random.Random) -> str:
    witnesses = [worked_witness()] + _sat_witnesses(rng)
    total = 0
    for h in witnesses:
        tables = derive_cocycles(h)
        for _ in range(34):
            x = random_point(h.source, rng)
            k1 = evaluate(tables.k1, x)
            l1 = evaluate(tables.l1, x)
            assert apply_witness(h, x.shift(1)).shift(k1) == apply_witness(h, x).shift(l1)
            y = random_point(h.target, rng)
            k2 = evaluate(tables.k2, y)
            l2 = evaluate(tables.l2, y)
            assert (apply_witness(h, y.shift(1), "inverse").shift(k2)
                    == apply_witness(h, y, "inverse").shift(l2))
            total += 2
    return f"{total} cocycle relations at random points"


def suite_pullback_homomorphism(rng: random.Random) -> str:
    for h in [worked_witness()] + _sat_witnesses(rng)[:1]:
        tables = derive_cocycles(h)
        inv_tables = derive_cocycles(h.inverse())
        for _ in range(6):
            f = random_function(h.target, rng, 2)
            g = random_function(h.target, rng, 2)
            assert psi_h(h, f + g, tables) == psi_h(h, f, tables) + psi_h(h, g, tables)
            back = psi_h(h.inverse(), psi_h(h, f, tables), inv_tables)
            assert back == f
        assert psi_h(h, constant(h.target, 1), tables) == tables.c1
    return "additivity, inversion, and the unit image"


def suite_conjugation_homomorphism(rng: random.Random) -> str:
    count = 0
    for h in [worked_witness(), _sat_witnesses(rng)[0]]:
        for _ in range(3):
            t1 = sample_element(h.source, rng, 1)
            t2 = sample_element(h.source, rng, 1)
            assert xi_h(h, compose(t2, t1)) == compose(xi_h(h, t2), xi_h(h, t1))
            assert xi_h(h, invert(t1)) == invert(xi_h(h, t1))
            count += 1
    return f"{count} conjugation pairs"


def suite_subgroup_transport(rng: random.Random) -> str:
    full2 = full2_spec()
    checked = 0
    for h in _sat_witnesses(rng):
        cert = scoe_solve(h)
        assert cert.outcome is Outcome.SAT
        pairs = [(gen_swap(full2, 1, 2, 1),
                  make_step_function(full2, 2, {(1, 1): 0, (1, 2): 1,
                                                (2, 1): 0, (2, 2): 0})),
                 (gen_swap(full2, 2, 1, 1),
                  make_step_function(full2, 2, {(1, 1): 0, (1, 2): 0,
                                                (2, 1): 1, (2, 2): 0}))]
        for tau, f in pairs:
            assert subgroup_membership(tau, "coboundary", f).member
            moved = transport(h, f + cert.b1)
            assert subgroup_membership(xi_h(h, tau), "coboundary", moved).member
            checked += 1
    return f"{checked} transported memberships"


def suite_strong_form_constants(rng: random.Random) -> str:
    for h in _sat_witnesses(rng):
        tables = derive_cocycles(h)
        cert = scoe_solve(h, tables)
        n1_fn = tables.c1 - (cert.b1 - compose_shift(cert.b1, 1))
        n2_fn = tables.c2 - (cert.b2 - compose_shift(cert.b2, 1))
        assert n1_fn.is_constant() and n2_fn.is_constant()
        n1, n2 = n1_fn.constant_value(), n2_fn.constant_value()
        assert n1 * n2 == 1 and n1 == 1 and n2 == 1
    return "constants equal 1 on SAT witnesses"


def suite_inverse_cocycle_identities(rng: random.Random) -> str:
    for spec in _both_specs():
        for _ in range(3):
            tau = sample_element(spec, rng, 2)
            h = self_witness(tau)
            tables = derive_cocycles(h)
            assert gamma_scoe_verify(h, tau, tables).holds
            conj = xi_h(h, invert(tau))
            d = cocycle_data(tau).d
            dp = cocycle_data(conj).d
            assert transport(h, d) == -dp
            assert tables.c2 == constant(spec, 1) - dp + compose_shift(dp, 1)
    return "6 self-witnesses"


def suite_unit_cocycle_propagates(rng: random.Random) -> str:
    full2 = full2_spec()
    relabel = CoderStage(source=full2, target=full2,
                         pairs=(((1,), (2,)), ((2,), (1,))))
    witnesses = [identity_witness(full2),
                 validate_witness(full2, full2, [relabel])]
    tau = sample_element(full2, rng, 2)
    corrected, _ = construct_eventual_conjugacy(self_witness(tau), tau)
    witnesses.append(corrected)
    for h in witnesses:
        tables = derive_cocycles(h)
        assert tables.c1 == constant(h.source, 1)
        assert tables.c2 == constant(h.target, 1)
    return "3 eventual conjugacies"


def suite_eventual_construction(rng: random.Random) -> str:
    for spec in _both_specs():
        for _ in range(3):
            tau = sample_element(spec, rng, 2)
            h = self_witness(tau)
            corrected, lag = construct_eventual_conjugacy(h, tau)
            assert corrected.as_table().is_identity()
            assert verify_eventual_conjugacy(corrected, lag)
    return "6 constructions reach the identity"


# --- cli ------------------------------------------------------------------

def _cli_corpus(tmp: str) -> dict[str, str]:
    import pathlib
    base = pathlib.Path(tmp)
    files = {
        "golden.mat": "2\n1 1\n1 0\n",
        "full2.mat": "2\n1 1\n1 1\n",
        "f.fn": "depth 1\n1 0\n2 -1\n",
        "zero.fn": "depth 0\n- 0\n",
        "tau12.tab": "11 11\n12 2\n2 12\n",
        "witness_gf.wit": ("source\n2\n1 1\n1 0\n"
                           "target\n2\n1 1\n1 1\n"
                           "stage coder\n1 1\n21 2\n"),
        "bad.mat": "2\n0 1\n1 0\n",
    }
    for name, text in files.items():
        (base / name).write_text(text, encoding="utf-8")
    return {name: str(base / name) for name in files}


def suite_cli_exit_codes(rng: random.Random) -> str:
    import contextlib
    import io
    import tempfile
    from . import cli

    with tempfile.TemporaryDirectory() as tmp:
        paths = _cli_corpus(tmp)
        cases = [
            (["matrix", "invariants", paths["golden.mat"]], 0),
            (["matrix", "check", paths["bad.mat"]], 2),
            (["fn", "coboundary", paths["golden.mat"], paths["f.fn"]], 1),
            (["fn", "coboundary", paths["golden.mat"], paths["zero.fn"]], 0),
            (["coe", "scoe", paths["witness_gf.wit"]], 1),
            (["coe", "check", paths["witness_gf.wit"]], 0),
            (["cocycle", "member", paths["full2.mat"], paths["tau12.tab"],
              "--mode", "af"], 1),
            (["probe", "zero", paths["full2.mat"], paths["zero.fn"]], 0),
        ]
        for argv, expected in cases:
            with contextlib.redirect_stdout(io.StringIO()):
                code = cli.run(argv)
            assert code == expected, (argv, code, expected)
    return f"{len(cases)} exit codes"


def suite_cli_output_stability(rng: random.Random) -> str:
    import contextlib
    import io
    import tempfile
    from . import cli

    with tempfile.TemporaryDirectory() as tmp:
        paths = _cli_corpus(tmp)
        commands = [
            ["matrix", "invariants", "--structured", paths["golden.mat"]],
            ["coe", "derive", "--structured", paths["witness_gf.wit"]],
            ["group", "data", "--structured", paths["full2.mat"], paths["tau12.tab"]],
        ]
        for argv in commands:
            outputs = []
            for _ in range(2):
                buf = io.StringIO()
                with contextlib.redirect_stdout(buf):
                    cli.run(argv)
                outputs.append(buf.getvalue())
            assert outputs[0] == outputs[1]
    return "3 structured commands byte-stable"


SUITES: list[tuple[str, Callable[[random.Random], str]]] = [
    ("sft.words_extend", suite_words_extend),
    ("sft.shift_semigroup", suite_shift_semigroup),
    ("sft.flow_agreement", suite_flow_agreement),
    ("sft.point_equality", suite_point_equality),
    ("fn.orbit_sum_additivity", suite_orbit_sum_additivity),
    ("fn.coboundary_roundtrip", suite_coboundary_roundtrip),
    ("fn.certificate_exclusivity", suite_certificate_exclusivity),
    ("fn.function_algebra", suite_function_algebra),
    ("group.axioms", suite_group_axioms),
    ("group.composition_laws", suite_composition_laws),
    ("group.d_invariance", suite_d_presentation_invariance),
    ("group.table_relation", suite_table_relation),
    ("cocycle.chain_rule", suite_cocycle_chain_rule),
    ("cocycle.inverse_law", suite_cocycle_inverse_law),
    ("cocycle.membership_closure", suite_membership_closure),
    ("cocycle.membership_scaling", suite_membership_scaling),
    ("cocycle.af_coincidences", suite_af_coincidences),
    ("cocycle.transfer_cycle_sums", suite_transfer_cycle_sums),
    ("cocycle.one_b_equivalence", suite_one_b_equivalence),
    ("cocycle.injectivity_probe", suite_function_cocycle_injectivity),
    ("coe.witness_soundness", suite_witness_soundness),
    ("coe.pullback_homomorphism", suite_pullback_homomorphism),
    ("coe.conjugation_homomorphism", suite_conjugation_homomorphism),
    ("coe.subgroup_transport", suite_subgroup_transport),
    ("coe.strong_form_constants", suite_strong_form_constants),
    ("coe.inverse_cocycle_identities", suite_inverse_cocycle_identities),
    ("coe.unit_cocycle_propagates", suite_unit_cocycle_propagates),
    ("coe.eventual_construction", suite_eventual_construction),
    ("cli.exit_codes", suite_cli_exit_codes),
    ("cli.output_stability", suite_cli_output_stability),
]


def run_selftest(seed: int = 0, only: str | None = None,
                 printer=None) -> bool:
    """Run all suites (or those whose name contains ``only``); report one
    fact per suite through ``printer`` and return overall success."""
    emit = printer if printer is not None else (lambda k, v: print(f"{k}={v}"))
    ok = True
    for name, fn in SUITES:
        if only and only not in name:
            continue
        rng = random.Random(f"{seed}:{name}")
        try:
            detail = fn(rng)
            emit(name, f"ok ({detail})")
        except AssertionError as exc:
            ok = False
            emit(name, f"FAIL ({exc})")
    return ok
