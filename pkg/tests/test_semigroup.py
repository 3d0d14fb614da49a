import random
from itertools import combinations_with_replacement

import pytest
from sympy import Poly, QQ, groebner, symbols

from app.exceptions import ResourceLimitError
from app.services.certificate import replay
from app.services.exponents import ExponentVector, relations_of, term_order_less
from app.services.grading import RelationSet
from app.services.oracle import bfs_oracle
from app.services.semigroup import (
    Verdict,
    complete,
    decide,
    decision_to_model,
    normal_form_table,
    reduce,
    reduce_randomly,
)


def _vector(labels, *names):
    return ExponentVector.of(labels, names)


def _all_vectors(labels, max_degree):
    for degree in range(1, max_degree + 1):
        for combination in combinations_with_replacement(labels, degree):
            yield ExponentVector.of(labels, combination)


class TestTermOrder:
    def test_degree_first(self):
        labels = ("x", "y")
        assert term_order_less(_vector(labels, "x"), _vector(labels, "y", "y"))

    def test_earlier_label_weighs_more(self):
        labels = ("x", "y")
        assert term_order_less(_vector(labels, "y"), _vector(labels, "x"))
        assert term_order_less(_vector(labels, "x", "y"), _vector(labels, "x", "x"))
        assert term_order_less(_vector(labels, "y", "y"), _vector(labels, "x", "y"))


class TestSl2:
    def test_embeddable_with_identity_forms(self, sl2_relations):
        decision = decide(sl2_relations)
        assert decision.verdict is Verdict.EMBEDDABLE
        assert decision.embeddable
        assert decision.collision is None
        assert {label: str(form) for label, form in decision.normal_forms.items()} == {"e": "e", "f": "f", "h": "h"}

    def test_completion_adds_idempotent_h(self, sl2_relations):
        rules = complete(sl2_relations)
        labels = sl2_relations.labels
        assert (_vector(labels, "h", "h"), _vector(labels, "h")) in {(r.lhs, r.rhs) for r in rules}
        assert reduce(_vector(labels, "h", "h", "h", "e"), rules) == _vector(labels, "e")

    def test_decision_model(self, sl2_relations):
        model = decision_to_model(decide(sl2_relations))
        assert model.verdict == "EMBEDDABLE"
        assert model.normal_forms == {"e": "e", "f": "f", "h": "h"}
        assert model.certificate is None


class TestCollisions:
    def test_chain_collision(self, chain_collision_relations):
        decision = decide(chain_collision_relations)
        assert decision.verdict is Verdict.NOT_EMBEDDABLE
        assert decision.collision == ("d", "e")
        assert decision.normal_forms is None
        replay(decision.certificate, relations_of(chain_collision_relations))

    def test_paper_relations_force_d1_equal_d2(self, paper_relations):
        decision = decide(paper_relations)
        assert decision.verdict is Verdict.NOT_EMBEDDABLE
        assert decision.collision == ("d1", "d2")
        replay(decision.certificate, relations_of(paper_relations))

    def test_only_d1_and_d2_merge(self, paper_relations):
        forms = normal_form_table(complete(paper_relations), paper_relations.labels)
        merged = [label for label, form in forms.items() if list(forms.values()).count(form) > 1]
        assert merged == ["d1", "d2"]

    def test_no_relations(self):
        decision = decide(RelationSet(("g1", "g2"), ()))
        assert decision.embeddable
        assert decision.rules == ()

    def test_idempotent_label(self):
        decision = decide(RelationSet(("g",), (("g", "g", "g"),)))
        assert decision.embeddable
        assert [str(rule) for rule in decision.rules] == ["g+g -> g"]

    def test_rule_cap(self, paper_relations):
        with pytest.raises(ResourceLimitError, match="cap of 1 rules"):
            complete(paper_relations, max_rules=1)


def _groebner(relations: RelationSet):
    gens = symbols(f"t0:{len(relations.labels)}")
    index = {label: gens[i] for i, label in enumerate(relations.labels)}
    polys = [index[left] * index[right] - index[target] for left, right, target in relations]
    return gens, index, groebner(polys, *gens, order="grlex", domain=QQ)


class TestGroebnerCrossCheck:
    def test_paper_ideal_contains_d1_minus_d2(self, paper_relations):
        _, index, basis = _groebner(paper_relations)
        assert basis.contains(index["d1"] - index["d2"])
        assert not basis.contains(index["a"] - index["b1"])

    def test_sl2_ideal_separates_generators(self, sl2_relations):
        _, index, basis = _groebner(sl2_relations)
        assert not basis.contains(index["e"] - index["f"])
        assert basis.contains(index["h"] ** 2 - index["h"])

    def test_leading_terms_match_rule_heads(self, relation_corpus):
        for relations in [r for r in relation_corpus if len(r)][:60]:
            gens, _, basis = _groebner(relations)
            heads = {Poly(g, *gens).monoms(order="grlex")[0] for g in basis.exprs}
            assert heads == {rule.lhs.counts for rule in complete(relations)}, relations


class TestCorpus:
    """Properties over a fixed random corpus of relation sets."""

    def test_rules_are_oriented_and_interreduced(self, relation_corpus):
        for relations in relation_corpus:
            rules = complete(relations)
            for rule in rules:
                assert term_order_less(rule.rhs, rule.lhs)
                assert not any(other is not rule and other.lhs.divides(rule.lhs) for other in rules)

    @pytest.mark.slow
    def test_confluence(self, relation_corpus):
        rng = random.Random(7)
        for relations in relation_corpus:
            rules = complete(relations)
            for vector in _all_vectors(relations.labels, 6):
                assert reduce_randomly(vector, rules, rng) == reduce(vector, rules), (relations, vector)

    def test_relations_hold_in_quotient(self, relation_corpus):
        for relations in relation_corpus:
            rules = complete(relations)
            for relation in relations_of(relations):
                assert reduce(relation.left, rules) == reduce(relation.right, rules)

    def test_normal_forms_stay_nonzero(self, relation_corpus):
        for relations in relation_corpus:
            rules = complete(relations)
            for form in normal_form_table(rules, relations.labels).values():
                assert form.degree >= 1

    @pytest.mark.slow
    def test_verdict_is_invariant_under_label_order(self, relation_corpus):
        rng = random.Random(11)
        for relations in relation_corpus:
            shuffled = list(relations.labels)
            rng.shuffle(shuffled)
            permuted = RelationSet(tuple(shuffled), relations.triples)
            first, second = decide(relations), decide(permuted)
            assert first.verdict is second.verdict
            if not first.embeddable:
                assert len(set(first.collision)) == 2

    def test_certificates_replay(self, relation_corpus):
        for relations in relation_corpus:
            decision = decide(relations)
            if not decision.embeddable:
                replay(decision.certificate, relations_of(relations))
                label_a, label_b = decision.collision
                assert decision.certificate.chain[0] == ExponentVector.unit(relations.labels, label_a)
                assert decision.certificate.chain[-1] == ExponentVector.unit(relations.labels, label_b)

    @pytest.mark.slow
    def test_oracle_finds_nothing_when_embeddable(self, relation_corpus):
        for relations in relation_corpus:
            decision = decide(relations)
            oracle = bfs_oracle(relations, 6)
            if decision.embeddable:
                assert oracle.collision is None, relations
            elif oracle.collision is not None:
                rules = decision.rules
                first, second = oracle.collision
                labels = relations.labels
                assert reduce(ExponentVector.unit(labels, first), rules) == reduce(
                    ExponentVector.unit(labels, second), rules
                )
