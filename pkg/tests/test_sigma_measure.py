from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_systems
from emergent_space.dynsys import Subset, Universe, build_system, reach
from emergent_space.errors import (
    NotAnAtom,
    NotMeasurable,
    NotProbabilistic,
    PartialFunction,
    PartialProperty,
    StateSpaceTooLarge,
)
from emergent_space.sigma_measure import (
    Measure,
    PropertyFn,
    SigmaAlgebra,
    expectation,
    generate_sigma,
    sigma_from_reachability,
    validate_measure,
)
from oracles import powerset, sigma_closure


@pytest.fixture
def u5():
    return Universe.of([1, 2, 3, 4, 5])


@pytest.fixture
def even_prime(u5):
    p_even = PropertyFn.from_predicate("even", u5, lambda l: int(l) % 2 == 0)
    p_prime = PropertyFn.from_predicate("prime", u5, lambda l: int(l) in (2, 3, 5))
    return p_even, p_prime


#: the thirteen member sets quoted for the even/prime example
QUOTED_SETS = {
    frozenset(),
    frozenset({"2", "4"}),
    frozenset({"1", "3", "5"}),
    frozenset({"2", "3", "5"}),
    frozenset({"2", "3", "4", "5"}),
    frozenset({"2"}),
    frozenset({"1", "2", "3", "5"}),
    frozenset({"1", "2", "4"}),
    frozenset({"1", "3", "4", "5"}),
    frozenset({"1"}),
    frozenset({"3", "5"}),
    frozenset({"4"}),
    frozenset({"1", "2", "3", "4", "5"}),
}


class TestGenerateSigma:
    def test_even_prime_atoms_and_closure(self, u5, even_prime):
        algebra = generate_sigma(list(even_prime), u5)
        assert [a.labels() for a in algebra.atoms] == [
            ("1",), ("2",), ("4",), ("3", "5")
        ]
        members = {frozenset(s.labels()) for s in algebra.sets()}
        # independent oracle: closure of {A_even, A_prime} under complement,
        # union and intersection
        oracle = sigma_closure(u5.labels, [{"2", "4"}, {"2", "3", "5"}])
        assert members == oracle
        assert len(members) == 16
        assert QUOTED_SETS <= members
        assert members - QUOTED_SETS == {
            frozenset({"1", "2"}),
            frozenset({"1", "4"}),
            frozenset({"3", "4", "5"}),
        }

    def test_even_and_not_prime_is_four(self, u5, even_prime):
        p_even, p_prime = even_prime
        got = p_even.support(u5) & p_prime.support(u5).complement()
        assert got.labels() == ("4",)

    def test_single_property(self, u5, even_prime):
        algebra = generate_sigma([even_prime[0]], u5)
        assert [s.labels() for s in algebra.sets()] == [
            (), ("2", "4"), ("1", "3", "5"), ("1", "2", "3", "4", "5")
        ]

    def test_no_properties_trivial_algebra(self, u5):
        algebra = generate_sigma([], u5)
        assert len(algebra.atoms) == 1
        assert algebra.n_sets == 2

    def test_partial_property_rejected(self, u5):
        with pytest.raises(PartialProperty):
            generate_sigma([PropertyFn("p", {"1": 1})], u5)

    def test_set_count_is_power_of_atoms(self, u5, even_prime):
        algebra = generate_sigma(list(even_prime), u5)
        assert algebra.n_sets == 2 ** len(algebra.atoms) == len(algebra.sets())


class TestSigmaFromReachability:
    def test_two_cycles(self, shift2_on4):
        algebra = sigma_from_reachability(shift2_on4, 1)
        assert [a.labels() for a in algebra.atoms] == [("1", "3"), ("2", "4")]
        # oracle: the closure generated by every subset's reachability domain
        domains = {
            frozenset(
                reach(shift2_on4, shift2_on4.subset(sub), 1).members.labels()
            )
            for sub in powerset(shift2_on4.labels)
        }
        oracle = sigma_closure(shift2_on4.labels, domains)
        assert {frozenset(s.labels()) for s in algebra.sets()} == oracle

    def test_identity_gives_power_set(self, identity3):
        assert sigma_from_reachability(identity3, 1).n_sets == 8

    def test_saturated_cycle_gives_trivial_algebra(self, cyclic5):
        algebra = sigma_from_reachability(cyclic5, 5)
        assert algebra.n_sets == 2

    def test_cap(self):
        labels = list(range(21))
        sys = build_system(labels, {i: i for i in labels})
        with pytest.raises(StateSpaceTooLarge):
            sigma_from_reachability(sys, 1)


@settings(max_examples=40, deadline=None)
@given(sys=small_systems(max_states=6), data=st.data())
def test_reachability_algebra_matches_full_generator_oracle(sys, data):
    horizon = data.draw(st.integers(0, 3))
    algebra = sigma_from_reachability(sys, horizon)
    domains = {
        frozenset(reach(sys, Subset(sys.universe, m), horizon).members.labels())
        for m in range(1 << sys.size)
    }
    oracle = sigma_closure(sys.labels, domains)
    assert {frozenset(s.labels()) for s in algebra.sets()} == oracle


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_generated_family_closed_and_idempotent(data):
    n = data.draw(st.integers(1, 6))
    universe = Universe.of(list(range(1, n + 1)))
    k = data.draw(st.integers(0, 3))
    props = [
        PropertyFn(
            f"p{i}",
            {lab: data.draw(st.integers(0, 1)) for lab in universe.labels},
        )
        for i in range(k)
    ]
    algebra = generate_sigma(props, universe)
    members = {s.mask for s in algebra.sets()}
    full = universe.full_mask()
    assert 0 in members and full in members
    for a in members:
        assert full & ~a in members
        for b in members:
            assert a | b in members
            assert a & b in members
    # regenerating from the atom indicators reproduces the same algebra
    again = generate_sigma(algebra.indicator_properties(), universe)
    assert [a.mask for a in again.atoms] == [a.mask for a in algebra.atoms]


class TestMeasure:
    def test_uniform_expectation_is_mean(self, u5):
        atoms = tuple(Subset.from_labels(u5, [lab]) for lab in u5.labels)
        m = Measure.uniform(SigmaAlgebra(u5, atoms))
        assert expectation(lambda lab: float(lab), m) == pytest.approx(3.0, abs=1e-12)

    def test_constant_one_normalization(self, u5, even_prime):
        algebra = generate_sigma(list(even_prime), u5)
        m = Measure.uniform(algebra)
        assert expectation(lambda lab: 1.0, m) == pytest.approx(1.0, abs=1e-12)

    def test_two_point_second_moment(self, u5):
        atoms = tuple(Subset.from_labels(u5, [lab]) for lab in u5.labels)
        algebra = SigmaAlgebra(u5, atoms)
        m = Measure.from_point_weights(algebra, {1: 0.5, 2: 0.5})
        assert expectation(lambda lab: float(lab) ** 2, m) == pytest.approx(2.5, abs=1e-12)

    def test_expectation_linear_and_monotone(self, u5):
        atoms = tuple(Subset.from_labels(u5, [lab]) for lab in u5.labels)
        algebra = SigmaAlgebra(u5, atoms)
        m = Measure.from_point_weights(algebra, {"1": 0.25, "3": 0.5, "5": 0.25})
        f = {lab: float(lab) for lab in u5.labels}
        g = {lab: float(lab) ** 2 / 10 for lab in u5.labels}
        ef = expectation(f, m)
        eg = expectation(g, m)
        combined = {lab: 2.0 * f[lab] + 3.0 * g[lab] for lab in u5.labels}
        assert expectation(combined, m) == pytest.approx(2 * ef + 3 * eg, abs=1e-12)
        bigger = {lab: f[lab] + 1.0 for lab in u5.labels}
        assert expectation(bigger, m) >= ef

    def test_partial_function_rejected(self, u5):
        atoms = tuple(Subset.from_labels(u5, [lab]) for lab in u5.labels)
        m = Measure.uniform(SigmaAlgebra(u5, atoms))
        with pytest.raises(PartialFunction):
            expectation({"1": 1.0}, m)

    def test_not_probabilistic_rejected(self, u5):
        atoms = tuple(Subset.from_labels(u5, [lab]) for lab in u5.labels)
        algebra = SigmaAlgebra(u5, atoms)
        m = Measure.from_point_weights(algebra, {"1": 0.5})
        with pytest.raises(NotProbabilistic):
            expectation(lambda lab: 1.0, m)

    def test_atom_weights_reject_non_atoms(self, u5, even_prime):
        algebra = generate_sigma(list(even_prime), u5)
        with pytest.raises(NotAnAtom):
            Measure.from_atom_weights(algebra, {("1", "2"): 1.0})
        m = Measure.from_atom_weights(
            algebra, {("1",): 0.1, ("2",): 0.2, ("4",): 0.3, ("3", "5"): 0.4}
        )
        assert m.total == pytest.approx(1.0, abs=1e-15)

    def test_label_key_for_singleton_atoms_only(self, u5, even_prime):
        algebra = generate_sigma(list(even_prime), u5)
        with pytest.raises(NotAnAtom):
            Measure.from_atom_weights(algebra, {"3": 1.0})  # {3,5} is the atom

    def test_mu_additive_on_disjoint_members(self, u5, even_prime):
        algebra = generate_sigma(list(even_prime), u5)
        m = Measure.from_point_weights(
            algebra, {lab: 0.2 for lab in u5.labels}
        )
        sets = algebra.sets()
        for a in sets:
            for b in sets:
                if a.mask & b.mask == 0:
                    assert m.mu(a | b) == pytest.approx(
                        m.mu(a) + m.mu(b), abs=1e-12
                    )

    def test_mu_rejects_non_members(self, u5, even_prime):
        algebra = generate_sigma(list(even_prime), u5)
        m = Measure.uniform(algebra)
        with pytest.raises(NotMeasurable):
            m.mu(Subset.from_labels(u5, [3]))


class TestValidateMeasure:
    def test_uniform_passes_all_checks(self, u5):
        atoms = tuple(Subset.from_labels(u5, [lab]) for lab in u5.labels)
        report = validate_measure(Measure.uniform(SigmaAlgebra(u5, atoms)))
        assert report.non_negative and report.additive
        assert report.normalization_deviation == pytest.approx(0.0, abs=1e-15)

    def test_mass_deficit_reported(self, u5):
        atoms = tuple(Subset.from_labels(u5, [lab]) for lab in u5.labels)
        algebra = SigmaAlgebra(u5, atoms)
        m = Measure.from_point_weights(algebra, {"1": 0.4, "2": 0.5})
        report = validate_measure(m)
        assert report.normalization_deviation == pytest.approx(0.1, abs=1e-12)
        assert not report.probabilistic_ok

    def test_negative_weight_flagged(self, u5):
        atoms = tuple(Subset.from_labels(u5, [lab]) for lab in u5.labels)
        algebra = SigmaAlgebra(u5, atoms)
        m = Measure.from_point_weights(algebra, {"1": 1.2, "2": -0.2})
        report = validate_measure(m)
        assert not report.non_negative
        assert report.min_weight == pytest.approx(-0.2, abs=1e-12)
