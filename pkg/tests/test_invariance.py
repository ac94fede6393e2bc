import random
from fractions import Fraction

import pytest

from maxplus import (
    NEG_INF,
    ConsistencyKind,
    InvarianceKind,
    LiftedSystem,
    NotStarMatrix,
    PtegSystem,
    TropicalMatrix,
    check_consistency,
    closure_sequence,
    invariant_member,
    iterate_shrink,
    lift_system,
    maximal_invariant,
    roundtrip_closure,
    shrink_generator,
    shrink_generator_unrolled,
)

from helpers import random_system

NEG = "-inf"


def two_node_generator_expected(k):
    """Closed form of the k-step generator for the two-node window system."""
    return TropicalMatrix(
        [
            [0, NEG, NEG, NEG],
            [1 + k, 0, -1 + k, -1],
            [2, NEG, 0, NEG],
            [2 + k, NEG, k, 0],
        ]
    )


def all_eps_system(n=2):
    eps = TropicalMatrix.epsilon(n)
    return PtegSystem(dynamics=eps, backward=eps, within=eps)


class TestLift:
    def test_two_node_blocks(self, two_node):
        lifted = lift_system(two_node)
        assert lifted.constraint == TropicalMatrix(
            [
                [NEG, NEG, NEG, NEG],
                [0, NEG, NEG, -1],
                [2, NEG, NEG, NEG],
                [NEG, NEG, 0, NEG],
            ]
        )
        assert lifted.size == 2

    def test_shift_and_injection_patterns(self, two_node):
        lifted = lift_system(two_node)
        eps, eye = TropicalMatrix.epsilon(2), TropicalMatrix.identity(2)
        assert lifted.dynamics == TropicalMatrix.from_blocks([[eps, eye], [eps, eps]])
        assert lifted.input_map == TropicalMatrix.from_blocks([[eps], [eye]])

    def test_structure_checked_on_construction(self, two_node):
        lifted = lift_system(two_node)
        with pytest.raises(ValueError):
            LiftedSystem(
                dynamics=TropicalMatrix.epsilon(4),
                input_map=lifted.input_map,
                constraint=lifted.constraint,
            )

    def test_unconstrained_system(self):
        lifted = lift_system(all_eps_system())
        assert lifted.constraint == TropicalMatrix.epsilon(4)

    def test_railway_constraint(self, railway):
        system = railway(-14)
        lifted = lift_system(system)
        assert lifted.constraint.shape == (8, 8)
        assert lifted.constraint[3, 7] == Fraction(-14)
        assert lifted.constraint.top_left(4, 4) == TropicalMatrix.epsilon(4)
        bottom_left = TropicalMatrix(
            [row[:4] for row in lifted.constraint.to_rows()[4:]]
        )
        assert bottom_left == system.forward


class TestRoundtripClosure:
    def test_no_constraints_gives_identity(self):
        system = PtegSystem(
            dynamics=TropicalMatrix([[3, NEG], [NEG, NEG]]),
            backward=TropicalMatrix.epsilon(2),
            within=TropicalMatrix.epsilon(2),
        )
        assert roundtrip_closure(system) == TropicalMatrix.identity(2)

    def test_two_node(self, two_node):
        assert roundtrip_closure(two_node) == TropicalMatrix([[0, NEG], [0, 0]])

    def test_railway(self, railway):
        expected = TropicalMatrix(
            [
                [0, NEG, NEG, NEG],
                [NEG, 0, NEG, -5],
                [NEG, NEG, 0, -5],
                [NEG, NEG, NEG, 0],
            ]
        )
        closure = roundtrip_closure(railway(-14))
        assert closure == expected
        assert closure.rmax_valued


class TestShrinkGenerator:
    def test_two_node_closed_form(self, two_node):
        for k in range(5):
            assert shrink_generator(two_node, k) == two_node_generator_expected(k)

    def test_unconstrained_system_stays_at_identity(self):
        system = all_eps_system()
        for k in range(4):
            assert shrink_generator(system, k) == TropicalMatrix.identity(4)

    def test_unrolled_corner_at_step_zero(self, two_node):
        lifted = lift_system(two_node)
        assert shrink_generator_unrolled(two_node, 0) == lifted.constraint.star()

    def test_matches_unrolled_oracle(self):
        rng = random.Random(4401)
        for _ in range(30):
            system = random_system(rng, rng.randint(1, 2))
            for k in range(5):
                assert shrink_generator(system, k) == shrink_generator_unrolled(
                    system, k
                )

    def test_railway_divergence_shows_in_generator(self, railway):
        system = railway(-13)
        assert shrink_generator(system, 1).rmax_valued
        assert not shrink_generator(system, 2).rmax_valued
        assert not shrink_generator_unrolled(system, 2).rmax_valued

    def test_negative_step_rejected(self, two_node):
        with pytest.raises(ValueError):
            shrink_generator(two_node, -1)


class TestGeneratorChain:
    def test_nesting(self):
        rng = random.Random(4402)
        for _ in range(15):
            system = random_system(rng, rng.randint(1, 2))
            previous = shrink_generator(system, 0)
            for k in range(1, 5):
                current = shrink_generator(system, k)
                if not (previous.rmax_valued and current.rmax_valued):
                    break
                # image of the later generator is contained in the earlier one
                assert previous @ current == current
                previous = current

    def test_finite_generators_are_star_matrices(self):
        rng = random.Random(4403)
        for _ in range(15):
            system = random_system(rng, rng.randint(1, 2))
            for k in range(4):
                generator = shrink_generator(system, k)
                if generator.rmax_valued:
                    assert generator.is_star_matrix()


class TestIterateShrink:
    def test_railway_converges_in_two_steps(self, railway):
        report = iterate_shrink(railway(-14))
        assert report.kind is InvarianceKind.CONVERGED_NON_EMPTY
        assert report.step == 2
        generator = report.invariant_generator
        assert generator is not None and generator.finite is False  # has -inf entries
        assert generator.rmax_valued and generator.is_star_matrix()
        # the stabilized generator, reachable from any later step
        assert generator == shrink_generator(railway(-14), 17)
        assert report.generators[-1] == generator

    def test_railway_empties_in_two_steps(self, railway):
        report = iterate_shrink(railway(-13))
        assert report.kind is InvarianceKind.REAL_EMPTY_AT_STEP
        assert report.step == 2
        assert report.invariant_generator is None
        assert not report.generators[-1].rmax_valued
        assert all(m.rmax_valued for m in report.generators[:-1])

    def test_two_node_never_settles(self, two_node):
        report = iterate_shrink(two_node)
        assert report.kind is InvarianceKind.NON_CONVERGENT_WEAK_OPEN
        assert report.step == 40  # default probe bound 10 * n^2
        assert report.invariant_generator is None
        assert len(report.generators) == 41
        assert all(m.rmax_valued for m in report.generators)

    def test_probe_bound_respected(self, two_node):
        report = iterate_shrink(two_node, probe_bound=7)
        assert report.step == 7
        assert len(report.generators) == 8

    def test_slow_divergence_needs_larger_probe(self, railway):
        system = railway(Fraction("-13.9"))
        report = iterate_shrink(system)
        assert report.kind is InvarianceKind.REAL_EMPTY_AT_STEP
        assert report.step == 20
        capped = iterate_shrink(system, probe_bound=10)
        assert capped.kind is InvarianceKind.NON_CONVERGENT_WEAK_OPEN

    def test_verdict_coherence(self):
        rng = random.Random(4404)
        pairing = {
            InvarianceKind.CONVERGED_NON_EMPTY: ConsistencyKind.CONSISTENT,
            InvarianceKind.REAL_EMPTY_AT_STEP: ConsistencyKind.NOT_WEAKLY_CONSISTENT,
            InvarianceKind.NON_CONVERGENT_WEAK_OPEN: ConsistencyKind.NOT_CONSISTENT_WEAK_OPEN,
        }
        for _ in range(40):
            system = random_system(rng, rng.randint(1, 3))
            probe = 10 * system.size**2
            report = iterate_shrink(system, probe)
            # closure divergence shows one index later than generator divergence
            verdict = check_consistency(system, probe + 1)
            assert pairing[report.kind] is verdict.kind


class TestMaximalInvariant:
    def test_present_for_feasible_window(self, railway):
        generator = maximal_invariant(railway(-14))
        assert generator is not None
        assert generator.top_left(4, 4) == closure_sequence(railway(-14), 16)[16]

    def test_absent_when_emptied(self, railway):
        assert maximal_invariant(railway(-13)) is None

    def test_absent_when_never_settling(self, two_node):
        assert maximal_invariant(two_node) is None


class TestInvariantMember:
    def test_identity_generator(self):
        assert invariant_member(TropicalMatrix.identity(4), [0, -1, 2, 3])

    def test_generator_columns_belong(self, railway):
        generator = maximal_invariant(railway(-14))
        for j in range(generator.cols):
            assert invariant_member(generator, generator.column_values(j))

    def test_window_violation_rejected(self, railway):
        generator = maximal_invariant(railway(-14))
        # membership forces x4 >= -14 + x8; this vector breaks that bound
        violating = [0, 0, 0, 0, 0, 0, 0, 15]
        assert not invariant_member(generator, violating)

    def test_requires_star_matrix(self):
        with pytest.raises(NotStarMatrix):
            invariant_member(TropicalMatrix([[1, NEG], [NEG, NEG]]), [0, 0])


class TestOneStepInvariance:
    def test_witness_for_feasible_window(self, railway):
        system = railway(-14)
        generator = maximal_invariant(system)
        n = system.size
        fixed_closure = closure_sequence(system, 16)[16]
        anchored = (fixed_closure + roundtrip_closure(system)).star()
        constraint = lift_system(system).constraint
        checked = 0
        for j in range(generator.cols):
            column = generator.column_values(j)
            second = column[n:]
            if any(v == NEG_INF for v in second):
                continue
            checked += 1
            successor = (
                anchored @ system.forward @ TropicalMatrix.column(second)
            ).column_values()
            stacked = TropicalMatrix.column(second + successor)
            assert (constraint @ stacked) <= stacked
        assert checked > 0
