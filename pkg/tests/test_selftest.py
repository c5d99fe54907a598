"""Tests for the reproductions and the property suites."""

from app.selftest import (
    check_critical_points_exist,
    check_field_invariants,
    run_examples,
    run_selftest,
)
from app.toric.corpus import random_instance, regression_corpus
from app.toric.polytope import validate

import random


class TestCorpus:
    """Tests for the random instance generator."""

    def test_instances_valid(self):
        rng = random.Random(5)
        for _ in range(40):
            inst = random_instance(rng)
            assert validate(inst.polytope, inst.point).valid
            assert inst.polytope.dimension <= 4
            assert inst.polytope.facet_count <= 8
            assert inst.rho.field.degree <= 6

    def test_corpus_deterministic(self):
        assert regression_corpus(8, seed=3) == regression_corpus(8, seed=3)

    def test_doubled_instances_bounded(self):
        for inst in regression_corpus(12, seed=2):
            assert inst.polytope.facet_count <= 8
            if inst.doubled:
                assert inst.polytope.dimension % 2 == 0


class TestReproductions:
    """Each worked example reproduces."""

    def test_all_examples_pass(self):
        items = run_examples()
        assert [i.name for i in items] == [
            "blowup_example",
            "odd_projective_spaces",
            "even_obstruction",
            "rp_products",
            "product_bounds",
        ]
        failed = [(i.name, i.detail) for i in items if not i.passed]
        assert not failed

    def test_filter_by_builtin(self):
        assert [i.name for i in run_examples("rp_product")] == ["rp_products"]

    def test_critical_points_exist(self):
        passed, detail = check_critical_points_exist()
        assert passed, detail

    def test_field_invariants(self):
        passed, detail = check_field_invariants()
        assert passed, detail


class TestSelftest:
    """The full selftest on a small corpus."""

    def test_small_corpus_passes(self):
        items = run_selftest(corpus_size=12, seed=1729)
        assert len(items) == 9
        failed = [(i.name, i.detail) for i in items if not i.passed]
        assert not failed
