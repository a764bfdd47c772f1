"""Acceptance criteria, one test per criterion, each printing a verdict line.

Everything here is exact (zero tolerance): equalities are structural
equalities of canonical objects.  Time limits are asserted with wall-clock
measurements.
"""

import contextlib
import random
import time

import shiftgroups as sg
from shiftgroups import (
    cocycle_data,
    compose,
    compose_cocycle_data,
    compose_shift,
    constant,
    construct_eventual_conjugacy,
    derive_cocycles,
    evaluate,
    flow_invariants,
    gamma_scoe_verify,
    gen_swap,
    invert,
    is_sigma_coboundary,
    make_point,
    make_step_function,
    noncommuting_witness,
    one_b,
    orbit_sum,
    psi_h,
    psi_tau,
    rho,
    sample_element,
    scoe_solve,
    self_witness,
    subgroup_membership,
    transport,
    validate_table,
    validate_witness,
    verify_eventual_conjugacy,
    xi_h,
)
from shiftgroups.full_group import compose_with_table, generator_family
from shiftgroups.orbit_equiv import CoderStage
from shiftgroups.selftest import run_selftest
from shiftgroups.step_functions import Outcome, cycle_sum

from conftest import oracle_coboundary_verdict, random_walk_point


@contextlib.contextmanager
def criterion(number, name, limit=None):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} {name}: FAIL")
        raise
    elapsed = time.monotonic() - start
    if limit is not None:
        assert elapsed < limit, f"criterion {number} took {elapsed:.1f}s (limit {limit}s)"
    print(f"ACCEPTANCE {number} {name}: PASS ({elapsed:.2f}s)")


def specs():
    return [sg.validate_matrix([[1, 1], [1, 1]]),
            sg.validate_matrix([[1, 1], [1, 0]])]


def random_function(spec, rng, max_depth, lo=-3, hi=3):
    d = rng.randint(0, max_depth)
    return make_step_function(
        spec, d, {w: rng.randint(lo, hi) for w in sg.enumerate_words(spec, d)})


def test_criterion_1_composition_laws():
    with criterion(1, "composition laws for l, k, d", limit=5.0):
        rng = random.Random(101)
        count = 0
        for spec in specs():
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
        assert count >= 100


def test_criterion_2_cocycle_suite():
    with criterion(2, "cocycle chain rule, inverse law, residual laws, orbit sums",
                   limit=10.0):
        rng = random.Random(102)
        count = 0
        for spec in specs():
            for _ in range(50):
                f = random_function(spec, rng, 3)
                t1 = sample_element(spec, rng, 2)
                t2 = sample_element(spec, rng, 2)
                # chain rule
                assert rho(f, compose(t2, t1)).table == \
                    rho(f, t1).table + compose_with_table(rho(f, t2).table, t1)
                # inverse law
                ti = invert(t1)
                assert rho(f, ti).table == -compose_with_table(rho(f, t1).table, ti)
                # residual law (i)
                table = rho(f, t1).table
                assert table - compose_shift(table, 1) == f - psi_tau(t1, f)
                # residual law (ii)
                assert rho(f, t1).table - rho(compose_shift(f, 1), t1).table == \
                    f - compose_with_table(f, t1)
                # orbit-sum splitting
                n, m = rng.randint(0, 6), rng.randint(0, 6)
                assert orbit_sum(f, n + m) == \
                    orbit_sum(f, m) + compose_shift(orbit_sum(f, n), m)
                for _ in range(1):
                    x = random_walk_point(spec, rng)
                    assert evaluate(orbit_sum(f, n + m), x) == \
                        evaluate(orbit_sum(f, m), x) + \
                        evaluate(orbit_sum(f, n), x.shift(m))
                count += 1
        assert count >= 100


def test_criterion_3_unit_cocycle_is_d():
    with criterion(3, "inclusive-sum convention: rho of 1 equals d"):
        rng = random.Random(103)
        for spec in specs():
            one = constant(spec, 1)
            sampled = generator_family(spec) + \
                [sample_element(spec, rng, length) for length in (1, 2, 3)
                 for _ in range(10)]
            for tau in sampled:
                assert rho(one, tau).table == cocycle_data(tau).d


def test_criterion_4_subgroup_suite():
    with criterion(4, "subgroup coincidences, scaling, shift, one_b"):
        rng = random.Random(104)
        count = 0
        for spec in specs():
            one = constant(spec, 1)
            zero = constant(spec, 0)
            for _ in range(100):
                tau = sample_element(spec, rng, rng.randint(1, 2))
                f = random_function(spec, rng, 1)
                b = random_function(spec, rng, 1)
                af = subgroup_membership(tau, "af").member
                assert af == subgroup_membership(tau, "cocycle", one).member
                assert af == subgroup_membership(tau, "coboundary", zero).member
                base = subgroup_membership(tau, "cocycle", f).member
                for m in (-2, -1, 2, 3):
                    assert subgroup_membership(tau, "cocycle", m * f).member == base
                base_b = subgroup_membership(tau, "coboundary", b).member
                for m in (-2, -1, 2, 3):
                    assert subgroup_membership(
                        tau, "coboundary", b + constant(spec, m)).member == base_b
                assert base_b == subgroup_membership(tau, "cocycle", one_b(b)).member
                count += 1
        assert count >= 200


def test_criterion_5_worked_generator():
    with criterion(5, "swap generator d-table and coboundary membership"):
        full2 = sg.validate_matrix([[1, 1], [1, 1]])
        tau = gen_swap(full2, 1, 2, 1)
        assert tau.pairs == (((1, 1), (1, 1)), ((1, 2), (2,)), ((2,), (1, 2)))
        d = cocycle_data(tau).d
        assert d == make_step_function(
            full2, 2, {"11": 0, "12": 1, "21": -1, "22": -1})
        # spelled on the three defining cylinders
        assert evaluate(d, make_point(full2, (1, 2), (1,))) == 1
        assert evaluate(d, make_point(full2, (2,), (1,))) == -1
        assert evaluate(d, make_point(full2, (1, 1), (1,))) == 0
        b_mu = make_step_function(full2, 2, {"11": 0, "12": 1, "21": 0, "22": 0})
        assert subgroup_membership(tau, "coboundary", b_mu).member
        assert sg.delta(b_mu, tau) == d


def test_criterion_6_worked_pair(golden, full2):
    with criterion(6, "golden-mean to full-shift worked pair", limit=30.0):
        stage = CoderStage(source=golden, target=full2,
                           pairs=(((1,), (1,)), ((2, 1), (2,))))
        h = validate_witness(golden, full2, [stage])
        tables = derive_cocycles(h)
        assert tables.c1 == make_step_function(golden, 1, {"1": 1, "2": 0})
        assert psi_h(h, constant(full2, 1), tables) == tables.c1
        rng = random.Random(106)
        for _ in range(20):
            f = random_function(golden, rng, 2, -2, 2)
            phi = sample_element(full2, rng, 2)
            assert sg.phi_h_rho(h, f, phi) == \
                rho(psi_h(h.inverse(), f), phi).table
        cert = scoe_solve(h, tables)
        assert cert.outcome is Outcome.UNSAT
        assert cert.cycle == (1, 2)
        inv_a = flow_invariants(golden)
        inv_b = flow_invariants(full2)
        assert inv_a.sign == inv_b.sign == -1
        assert inv_a.bf_group == inv_b.bf_group == ()


def test_criterion_7_gamma_scoe_to_eventual():
    with criterion(7, "strong-from-element witnesses become eventual conjugacies",
                   limit=30.0):
        rng = random.Random(107)
        count = 0
        for spec in specs():
            for _ in range(10):
                tau = sample_element(spec, rng, 2)
                h = self_witness(tau)
                tables = derive_cocycles(h)
                assert gamma_scoe_verify(h, tau, tables).holds
                corrected, lag = construct_eventual_conjugacy(h, tau, tables)
                assert corrected.as_table().is_identity()
                assert verify_eventual_conjugacy(corrected, lag)
                conj = xi_h(h, invert(tau))
                assert transport(h, cocycle_data(tau).d) == -cocycle_data(conj).d
                count += 1
        assert count >= 20


def test_criterion_8_solver_oracle_equivalence(golden):
    with criterion(8, "coboundary solver agrees with the brute-force oracle",
                   limit=60.0):
        words = sg.enumerate_words(golden, 2)
        assert len(words) == 3
        from itertools import product
        disagreements = 0
        total = 0
        for values in product(range(-2, 3), repeat=3):
            f = make_step_function(golden, 2, dict(zip(words, values)))
            cert = is_sigma_coboundary(f, search_depth=max(2, f.depth),
                                       cycle_bound=8)
            verdict = ("sat" if cert.outcome is Outcome.SAT
                       else "unsat" if cert.outcome is Outcome.UNSAT
                       else "inconclusive")
            oracle = oracle_coboundary_verdict(golden, f, g_depth=4, orbit_len=8)
            total += 1
            if verdict != oracle:
                disagreements += 1
            # certificates must check out either way
            if cert.outcome is Outcome.SAT:
                assert cert.g - compose_shift(cert.g, 1) == f
            else:
                assert cycle_sum(f, cert.cycle) == cert.cycle_sum != 0
        assert total == 125
        assert disagreements == 0


def test_criterion_9_noncommuting_corpus(full2, golden):
    with criterion(9, "noncommuting witness for a fixed ten-element corpus",
                   limit=5.0):
        corpus = [
            gen_swap(full2, 1, 2, 1),
            gen_swap(full2, 2, 1, 1),
            gen_swap(full2, 1, 2, 2),
            gen_swap(full2, 2, 1, 2),
            validate_table(full2, [("12", "21"), ("21", "12"),
                                   ("11", "11"), ("22", "22")]),
            compose(gen_swap(full2, 1, 2, 1), gen_swap(full2, 2, 1, 1)),
            gen_swap(golden, 1, 2, 1),
            gen_swap(golden, 2, 1, 1),
            gen_swap(golden, 1, 2, 2),
            compose(gen_swap(golden, 1, 2, 1), gen_swap(golden, 2, 1, 1)),
        ]
        assert len(corpus) == 10
        for h in corpus:
            assert not h.is_identity()
            found = noncommuting_witness(h)
            assert found is not None, str(h)
            tau, x = found
            assert sg.apply(h, sg.apply(tau, x)) != sg.apply(tau, sg.apply(h, x))


def test_criterion_10_selftest_deterministic():
    with criterion(10, "full selftest under three minutes, deterministic",
                   limit=200.0):
        outputs = []
        elapsed = []
        for _ in range(2):
            lines = []
            start = time.monotonic()
            ok = run_selftest(seed=7, printer=lambda k, v: lines.append((k, v)))
            elapsed.append(time.monotonic() - start)
            assert ok
            outputs.append(lines)
        assert outputs[0] == outputs[1]
        assert max(elapsed) < 180.0
