import random

import pytest

import shiftgroups as sg
from shiftgroups import (
    apply_witness,
    cocycle_data,
    compose,
    compose_shift,
    constant,
    construct_eventual_conjugacy,
    derive_cocycles,
    evaluate,
    gamma_scoe_verify,
    gen_swap,
    identity,
    identity_witness,
    invert,
    make_point,
    make_step_function,
    noncommuting_witness,
    phi_h_rho,
    psi_h,
    rho,
    sample_element,
    scoe_solve,
    self_witness,
    transport,
    validate_witness,
    verify_eventual_conjugacy,
    xi_h,
)
from shiftgroups.errors import (
    IdentityElement,
    InverseInvalid,
    JunctionInadmissible,
    NotGammaScoe,
    NotPartition,
    StageMismatch,
)
from shiftgroups.orbit_equiv import CoderStage, TableStage, stabilize
from shiftgroups.step_functions import Outcome

from conftest import random_walk_point


@pytest.fixture(scope="module")
def worked(golden_module, full2_module):
    stage = CoderStage(source=golden_module, target=full2_module,
                       pairs=(((1,), (1,)), ((2, 1), (2,))))
    return validate_witness(golden_module, full2_module, [stage])


@pytest.fixture(scope="module")
def golden_module():
    return sg.validate_matrix([[1, 1], [1, 0]])


@pytest.fixture(scope="module")
def full2_module():
    return sg.validate_matrix([[1, 1], [1, 1]])


def random_function(spec, rng, max_depth=2, lo=-2, hi=2):
    d = rng.randint(0, max_depth)
    return make_step_function(
        spec, d, {w: rng.randint(lo, hi) for w in sg.enumerate_words(spec, d)})


class TestValidateWitness:
    def test_worked_witness_valid(self, worked):
        assert len(worked.chain) == 1
        inverse = worked.inverse_chain[0]
        assert inverse.pairs == (((1,), (1,)), ((2,), (2, 1)))

    def test_table_stage_always_invertible(self, full2_module):
        h = self_witness(gen_swap(full2_module, 1, 2, 1))
        assert isinstance(h.inverse_chain[0], TableStage)

    def test_junction_inadmissible(self, golden_module, full2_module):
        stage = CoderStage(source=full2_module, target=golden_module,
                           pairs=(((1,), (2,)), ((2,), (1,))))
        with pytest.raises(JunctionInadmissible):
            validate_witness(full2_module, golden_module, [stage])

    def test_input_gap_rejected(self, golden_module, full2_module):
        stage = CoderStage(source=golden_module, target=full2_module,
                           pairs=(((1,), (1,)),))
        with pytest.raises(NotPartition):
            validate_witness(golden_module, full2_module, [stage])

    def test_noninjective_coder_rejected(self, golden_module, full2_module):
        # both blocks emit the same output word: inverse fails to partition
        stage = CoderStage(source=golden_module, target=full2_module,
                           pairs=(((1,), (1,)), ((2, 1), (1,))))
        with pytest.raises(InverseInvalid):
            validate_witness(golden_module, full2_module, [stage])

    def test_stage_mismatch(self, golden_module, full2_module):
        stage = TableStage(table=gen_swap(full2_module, 1, 2, 1))
        with pytest.raises(StageMismatch):
            validate_witness(golden_module, golden_module, [stage])

    def test_chain_must_end_on_target(self, golden_module, full2_module):
        stage = TableStage(table=gen_swap(golden_module, 1, 2, 1))
        with pytest.raises(StageMismatch):
            validate_witness(golden_module, full2_module, [stage])


class TestApplyWitness:
    def test_worked_examples(self, worked, golden_module, full2_module):
        assert apply_witness(worked, make_point(golden_module, (), (1,))) == \
            make_point(full2_module, (), (1,))
        assert apply_witness(worked, make_point(golden_module, (), (2, 1))) == \
            make_point(full2_module, (), (2,))

    def test_round_trip(self, worked, golden_module):
        rng = random.Random(3)
        for _ in range(100):
            x = random_walk_point(golden_module, rng)
            assert apply_witness(worked, apply_witness(worked, x), "inverse") == x

    def test_multi_stage_chain(self, golden_module, full2_module):
        coder = CoderStage(source=golden_module, target=full2_module,
                           pairs=(((1,), (1,)), ((2, 1), (2,))))
        tau = gen_swap(full2_module, 1, 2, 1)
        pre = gen_swap(golden_module, 1, 2, 1)
        h = validate_witness(golden_module, full2_module,
                             [TableStage(table=pre), coder, TableStage(table=tau)])
        rng = random.Random(4)
        for _ in range(40):
            x = random_walk_point(golden_module, rng)
            direct = sg.apply(tau, apply_witness(
                validate_witness(golden_module, full2_module, [coder]),
                sg.apply(pre, x)))
            assert apply_witness(h, x) == direct
            assert apply_witness(h, direct, "inverse") == x


class TestDeriveCocycles:
    def test_worked_pair_tables(self, worked, golden_module, full2_module):
        t = derive_cocycles(worked)
        assert t.c1 == make_step_function(golden_module, 1, {"1": 1, "2": 0})
        assert t.c2 == make_step_function(full2_module, 1, {"1": 1, "2": 2})
        assert t.k1 == make_step_function(golden_module, 1, {"1": 0, "2": 1})
        assert t.l1 == constant(golden_module, 1)

    def test_identity_witness(self, full2_module):
        t = derive_cocycles(identity_witness(full2_module))
        assert t.c1 == constant(full2_module, 1)
        assert t.k1.is_zero() and t.k2.is_zero()
        assert t.c2 == constant(full2_module, 1)

    def test_self_witness_formula(self, full2_module):
        tau = gen_swap(full2_module, 1, 2, 1)
        t = derive_cocycles(self_witness(tau))
        d = cocycle_data(tau).d
        assert t.c1 == constant(full2_module, 1) - d + compose_shift(d, 1)
        for pre, expected in (((1, 1, 2), 2), ((1, 2), -1), ((2, 1, 2), 3)):
            assert evaluate(t.c1, make_point(full2_module, pre, (1,))) == expected

    def test_soundness_on_random_points(self, worked, golden_module, full2_module):
        rng = random.Random(7)
        t = derive_cocycles(worked)
        for _ in range(100):
            x = random_walk_point(golden_module, rng)
            assert apply_witness(worked, x.shift(1)).shift(evaluate(t.k1, x)) == \
                apply_witness(worked, x).shift(evaluate(t.l1, x))
            y = random_walk_point(full2_module, rng)
            assert apply_witness(worked, y.shift(1), "inverse").shift(evaluate(t.k2, y)) == \
                apply_witness(worked, y, "inverse").shift(evaluate(t.l2, y))


class TestStabilize:
    def test_reproduces_step_function(self, golden_module):
        rng = random.Random(8)
        for _ in range(10):
            f = random_function(golden_module, rng, 3)
            rebuilt = stabilize(golden_module, lambda x: evaluate(f, x),
                                start_depth=1)
            assert rebuilt == f

    def test_non_locally_constant_hits_cap(self, full2_module):
        from shiftgroups.errors import DepthCapExceeded
        with pytest.raises(DepthCapExceeded):
            stabilize(full2_module, lambda x: len(x.pre) % 2,
                      start_depth=1, depth_cap=6)


class TestDeriveBounds:
    def test_bound_exceeded(self, full2_module):
        from shiftgroups.errors import BoundExceeded
        h = self_witness(gen_swap(full2_module, 1, 2, 1))
        with pytest.raises(BoundExceeded):
            derive_cocycles(h, depth=3, bound=1)


class TestPsiH:
    def test_unit_gives_c1(self, worked, full2_module):
        t = derive_cocycles(worked)
        assert psi_h(worked, constant(full2_module, 1), t) == t.c1

    def test_additive(self, worked, full2_module):
        rng = random.Random(9)
        t = derive_cocycles(worked)
        for _ in range(10):
            f = random_function(full2_module, rng)
            g = random_function(full2_module, rng)
            assert psi_h(worked, f + g, t) == psi_h(worked, f, t) + psi_h(worked, g, t)

    def test_inverse_composition(self, worked, full2_module):
        rng = random.Random(10)
        t = derive_cocycles(worked)
        ti = derive_cocycles(worked.inverse())
        for _ in range(8):
            f = random_function(full2_module, rng, 3)
            assert psi_h(worked.inverse(), psi_h(worked, f, t), ti) == f

    def test_identity_witness_fixes_functions(self, full2_module):
        rng = random.Random(11)
        h = identity_witness(full2_module)
        t = derive_cocycles(h)
        for _ in range(10):
            f = random_function(full2_module, rng)
            assert psi_h(h, f, t) == f

    def test_matches_pointwise_oracle(self, worked, full2_module, golden_module):
        # independent evaluation of the inclusive sums along the two images
        rng = random.Random(22)
        t = derive_cocycles(worked)
        for _ in range(8):
            f = random_function(full2_module, rng)
            table = psi_h(worked, f, t)
            for _ in range(6):
                x = random_walk_point(golden_module, rng)
                hx = apply_witness(worked, x)
                hsx = apply_witness(worked, x.shift(1))
                expected = (
                    sum(evaluate(f, hx.shift(i))
                        for i in range(evaluate(t.l1, x) + 1))
                    - sum(evaluate(f, hsx.shift(j))
                          for j in range(evaluate(t.k1, x) + 1)))
                assert evaluate(table, x) == expected


class TestXiH:
    def test_self_conjugation_fixes_element(self, full2_module):
        tau = gen_swap(full2_module, 1, 2, 1)
        assert xi_h(self_witness(tau), tau) == tau

    def test_through_coder(self, worked, golden_module, full2_module):
        tau = gen_swap(golden_module, 1, 2, 1)
        conj = xi_h(worked, tau)
        assert conj.spec == full2_module
        rng = random.Random(12)
        for _ in range(40):
            y = random_walk_point(full2_module, rng)
            expected = apply_witness(
                worked, sg.apply(tau, apply_witness(worked, y, "inverse")))
            assert sg.apply(conj, y) == expected

    def test_group_homomorphism(self, worked, golden_module):
        rng = random.Random(13)
        for _ in range(4):
            t1 = sample_element(golden_module, rng, 1)
            t2 = sample_element(golden_module, rng, 1)
            assert xi_h(worked, compose(t2, t1)) == \
                compose(xi_h(worked, t2), xi_h(worked, t1))
            assert xi_h(worked, invert(t1)) == invert(xi_h(worked, t1))

    def test_d_transform_law(self, worked, golden_module):
        # the conjugate's d at h(x) equals the c1 sums along the two legs
        t = derive_cocycles(worked)
        rng = random.Random(14)
        for _ in range(6):
            tau = sample_element(golden_module, rng, 2)
            conj = xi_h(worked, tau)
            data = cocycle_data(tau)
            d_conj = cocycle_data(conj).d
            for _ in range(8):
                x = random_walk_point(golden_module, rng)
                n = evaluate(data.l, x)
                m = evaluate(data.k, x)
                lhs = evaluate(d_conj, apply_witness(worked, x))
                c1_n = sum(evaluate(t.c1, x.shift(i)) for i in range(n))
                tx = sg.apply(tau, x)
                c1_m = sum(evaluate(t.c1, tx.shift(i)) for i in range(m))
                assert lhs == c1_n - c1_m


class TestPhiH:
    def test_transported_cocycle_identity(self, worked, golden_module, full2_module):
        rng = random.Random(15)
        for _ in range(10):
            f = random_function(golden_module, rng)
            phi = sample_element(full2_module, rng, 2)
            assert phi_h_rho(worked, f, phi) == \
                rho(psi_h(worked.inverse(), f), phi).table

    def test_identity_element_gives_zero(self, worked, golden_module, full2_module):
        rng = random.Random(16)
        f = random_function(golden_module, rng)
        assert phi_h_rho(worked, f, identity(full2_module)).is_zero()

    def test_unit_function_scoe_decomposition(self, full2_module):
        # on a strongly continuous self-witness the transported d splits as
        # d plus the coboundary of b2
        tau = gen_swap(full2_module, 1, 2, 1)
        h = self_witness(tau)
        cert = scoe_solve(h)
        assert cert.outcome is Outcome.SAT
        rng = random.Random(17)
        for _ in range(4):
            phi = sample_element(full2_module, rng, 2)
            lhs = phi_h_rho(h, constant(full2_module, 1), phi)
            rhs = cocycle_data(phi).d + sg.delta(cert.b2, phi)
            assert lhs == rhs


class TestScoeSolve:
    def test_identity_witness_sat(self, full2_module):
        cert = scoe_solve(identity_witness(full2_module))
        assert cert.outcome is Outcome.SAT
        assert cert.b1.is_zero() and cert.b2.is_zero()
        assert cert.pair_constant == 0

    def test_worked_pair_unsat(self, worked):
        cert = scoe_solve(worked)
        assert cert.outcome is Outcome.UNSAT
        assert cert.cycle == (1, 2) and cert.cycle_space == "source"
        assert cert.cycle_sum == 1  # orbit length 2, c1 sums to 1

    def test_self_witness_sat_with_minus_d(self, full2_module):
        tau = gen_swap(full2_module, 1, 2, 1)
        cert = scoe_solve(self_witness(tau))
        assert cert.outcome is Outcome.SAT
        assert (cert.b1 - (-cocycle_data(tau).d)).is_constant()

    def test_pair_constant_consistency(self, full2_module):
        rng = random.Random(18)
        for _ in range(4):
            tau = sample_element(full2_module, rng, 2)
            cert = scoe_solve(self_witness(tau))
            assert cert.outcome is Outcome.SAT
            assert cert.pair_constant is not None


class TestGammaScoe:
    def test_identity_on_identity(self, full2_module):
        h = identity_witness(full2_module)
        assert gamma_scoe_verify(h, identity(full2_module)).holds

    def test_self_witness_passes_with_itself(self, full2_module):
        tau = gen_swap(full2_module, 1, 2, 1)
        assert gamma_scoe_verify(self_witness(tau), tau).holds

    def test_worked_pair_fails_with_identity(self, worked, golden_module):
        result = gamma_scoe_verify(worked, identity(golden_module))
        assert not result.holds
        assert result.residual == make_step_function(
            golden_module, 1, {"1": 0, "2": -1})


class TestEventualConjugacy:
    def test_identity_witness_lag_zero(self, full2_module):
        assert verify_eventual_conjugacy(identity_witness(full2_module), 0, depth=4)

    def test_worked_pair_never_verifies(self, worked):
        for lag in range(0, 9):
            assert not verify_eventual_conjugacy(worked, lag, depth=5)

    def test_construction_from_self_witness(self, full2_module):
        tau = gen_swap(full2_module, 1, 2, 1)
        h = self_witness(tau)
        corrected, lag = construct_eventual_conjugacy(h, tau)
        assert corrected.as_table().is_identity()
        assert verify_eventual_conjugacy(corrected, lag)

    def test_construction_requires_gamma(self, worked, golden_module):
        with pytest.raises(NotGammaScoe):
            construct_eventual_conjugacy(worked, identity(golden_module))

    def test_inverse_element_identities(self, golden_module, full2_module):
        rng = random.Random(19)
        for spec in (golden_module, full2_module):
            for _ in range(3):
                tau = sample_element(spec, rng, 2)
                h = self_witness(tau)
                t = derive_cocycles(h)
                conj = xi_h(h, invert(tau))
                d = cocycle_data(tau).d
                dp = cocycle_data(conj).d
                assert transport(h, d) == -dp
                assert t.c2 == constant(spec, 1) - dp + compose_shift(dp, 1)

    def test_unit_cocycle_propagates(self, full2_module):
        relabel = CoderStage(source=full2_module, target=full2_module,
                             pairs=(((1,), (2,)), ((2,), (1,))))
        h = validate_witness(full2_module, full2_module, [relabel])
        t = derive_cocycles(h)
        assert t.c1 == constant(full2_module, 1)
        assert t.c2 == constant(full2_module, 1)
        assert verify_eventual_conjugacy(h, 0, depth=4)


class TestNoncommuting:
    def test_finds_witness_for_swap(self, full2_module):
        found = noncommuting_witness(gen_swap(full2_module, 1, 2, 1))
        assert found is not None
        tau, x = found
        assert sg.apply(gen_swap(full2_module, 1, 2, 1), sg.apply(tau, x)) != \
            sg.apply(tau, sg.apply(gen_swap(full2_module, 1, 2, 1), x))

    def test_identity_rejected(self, full2_module):
        with pytest.raises(IdentityElement):
            noncommuting_witness(identity(full2_module))

    def test_depth_two_swap(self, full2_module):
        tau = sg.validate_table(
            full2_module, [("12", "21"), ("21", "12"), ("11", "11"), ("22", "22")])
        found = noncommuting_witness(tau)
        assert found is not None

    def test_commutes_on_sample_is_reported(self, full2_module):
        # every element commutes with itself: restricting the generator set
        # produces the inconclusive outcome, not a fabricated witness
        tau = gen_swap(full2_module, 1, 2, 1)
        assert noncommuting_witness(tau, generators=[tau]) is None
