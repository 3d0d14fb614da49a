"""Word problem of the commutative semigroup F(G)/≈ presented by property-(P) relations.

G embeds in *some* abelian semigroup satisfying (P) iff it embeds in the
universal one, F(G)/≈: any semigroup S with (P) receives a homomorphism from
F(G) that factors through ≈, so if two labels are identified in F(G)/≈ they are
identified in S as well; conversely F(G)/≈ itself satisfies (P). Deciding
embeddability therefore means computing normal forms of the generators under a
confluent rewriting system for ≈.

Completion is ground and commutative: rules rewrite exponent vectors, critical
pairs come from the componentwise maximum of two left-hand sides, and Dickson's
lemma bounds the process (it is Buchberger's algorithm on a binomial ideal).
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import count
from typing import Optional, Sequence

from app.api.schemas import DecisionModel, OracleModel
from app.config import settings
from app.exceptions import ResourceLimitError
from app.services.certificate import (
    CollisionCertificate,
    certificate_from_chain,
    certificate_to_model,
    render_certificate,
)
from app.services.exponents import (
    ExponentVector,
    Move,
    Relation,
    RuleLike,
    relations_of,
    reverse_chain,
    term_order_less,
    zero_shift,
)
from app.services.grading import RelationSet
from app.utils.logger import get_logger

logger = get_logger(__name__)

_rule_ids = count(1)


@dataclass(frozen=True, eq=False)
class RewriteRule(RuleLike):
    """lhs -> rhs with lhs greater in the term order; ``proof`` is a chain of moves from lhs to rhs."""

    lhs: ExponentVector
    rhs: ExponentVector
    proof: tuple[Move, ...]
    origin: str
    ident: int

    def __str__(self) -> str:
        return f"{self.lhs} -> {self.rhs}"


def _make_rule(lhs: ExponentVector, rhs: ExponentVector, proof: tuple[Move, ...], origin: str) -> RewriteRule:
    return RewriteRule(lhs, rhs, proof, origin, next(_rule_ids))


def _apply(rule: RuleLike, vector: ExponentVector) -> Optional[tuple[ExponentVector, Move]]:
    shift = vector.offset(rule.lhs)
    if shift is None:
        return None
    return vector.rewrite(rule.lhs, rule.rhs), Move(rule, shift, True)


def reduce_with_moves(
    vector: ExponentVector,
    rules: Sequence[RuleLike],
) -> tuple[ExponentVector, tuple[Move, ...]]:
    """Rewrite with the first applicable rule until none applies; return the moves taken."""
    moves: list[Move] = []
    current = vector
    while True:
        for rule in rules:
            step = _apply(rule, current)
            if step is not None:
                current, move = step
                moves.append(move)
                break
        else:
            return current, tuple(moves)


def reduce(vector: ExponentVector, rules: Sequence[RuleLike]) -> ExponentVector:
    """Normal form of ``vector``; each step strictly decreases the term order, so this terminates."""
    return reduce_with_moves(vector, rules)[0]


def reduce_randomly(vector: ExponentVector, rules: Sequence[RuleLike], rng: random.Random) -> ExponentVector:
    """Like reduce, but picks the applicable rule at random (used to test confluence)."""
    current = vector
    while True:
        applicable = [rule for rule in rules if rule.lhs.divides(current)]
        if not applicable:
            return current
        rule = rng.choice(applicable)
        current = current.rewrite(rule.lhs, rule.rhs)


Equation = tuple[ExponentVector, ExponentVector, tuple[Move, ...]]


class Completer:
    """FIFO Knuth-Bendix completion with interreduction after every added rule."""

    def __init__(self, relations: Sequence[Relation], labels: tuple[str, ...], max_rules: Optional[int] = None):
        self.relations = list(relations)
        self.labels = labels
        self.max_rules = max_rules or settings.max_rules
        self.rules: list[RewriteRule] = []
        self.pending: deque[Equation] = deque()
        self.critical_pairs = 0

    def run(self) -> list[RewriteRule]:
        no_shift = zero_shift(self.labels)
        for relation in self.relations:
            self.pending.append((relation.left, relation.right, (Move(relation, no_shift, True),)))

        while True:
            while self.pending:
                self._add_equation(*self.pending.popleft())
            # final sweep: every overlapping pair of the current system must be joinable
            for equation in self._all_critical_pairs():
                lhs, rhs, _ = equation
                if reduce(lhs, self.rules) != reduce(rhs, self.rules):
                    self.pending.append(equation)
            if not self.pending:
                break
            logger.debug(f"Final sweep reopened {len(self.pending)} critical pair(s)")

        logger.info(
            f"Completion finished: {len(self.rules)} rule(s) from {len(self.relations)} relation(s), "
            f"{self.critical_pairs} critical pair(s) examined"
        )
        return list(self.rules)

    def _add_equation(self, u: ExponentVector, v: ExponentVector, chain: tuple[Move, ...]) -> None:
        u_nf, u_moves = reduce_with_moves(u, self.rules)
        v_nf, v_moves = reduce_with_moves(v, self.rules)
        if u_nf == v_nf:
            return
        proof = reverse_chain(u_moves) + chain + v_moves
        if term_order_less(u_nf, v_nf):
            u_nf, v_nf, proof = v_nf, u_nf, reverse_chain(proof)
        origin = "relation" if len(chain) == 1 and isinstance(chain[0].source, Relation) else "derived"
        new = _make_rule(u_nf, v_nf, proof, origin)
        logger.debug(f"Rule {new.ident}: {new}")

        kept: list[RewriteRule] = []
        for rule in self.rules:
            if new.lhs.divides(rule.lhs):
                # the old rule is re-derived from the new system later
                self.pending.append((rule.lhs, rule.rhs, rule.proof))
            else:
                kept.append(rule)
        kept.append(new)
        self.rules = kept

        for position, rule in enumerate(self.rules):
            if rule is not new and new.lhs.divides(rule.rhs):
                rhs, moves = reduce_with_moves(rule.rhs, self.rules)
                self.rules[position] = _make_rule(rule.lhs, rhs, rule.proof + moves, "simplified")

        if len(self.rules) > self.max_rules:
            raise ResourceLimitError(f"Completion exceeded the cap of {self.max_rules} rules")

        for rule in self.rules:
            if rule is not new:
                equation = self._critical_pair(new, rule)
                if equation is not None:
                    self.pending.append(equation)

    def _critical_pair(self, first: RuleLike, second: RuleLike) -> Optional[Equation]:
        # disjoint left-hand sides always join at first.rhs + second.rhs
        if not (first.lhs.support() & second.lhs.support()):
            return None
        self.critical_pairs += 1
        overlap = first.lhs.lcm(second.lhs)
        first_shift = overlap.offset(first.lhs)
        second_shift = overlap.offset(second.lhs)
        left = first.rhs.shifted(first_shift)
        right = second.rhs.shifted(second_shift)
        chain = (Move(first, first_shift, False), Move(second, second_shift, True))
        return left, right, chain

    def _all_critical_pairs(self) -> list[Equation]:
        equations = []
        for i, first in enumerate(self.rules):
            for second in self.rules[i + 1:]:
                equation = self._critical_pair(first, second)
                if equation is not None:
                    equations.append(equation)
        return equations


def complete(relations: RelationSet, max_rules: Optional[int] = None) -> list[RewriteRule]:
    """A confluent, interreduced rewriting system presenting the congruence of ``relations``."""
    return Completer(relations_of(relations), relations.labels, max_rules).run()


class Verdict(str, Enum):
    EMBEDDABLE = "EMBEDDABLE"
    NOT_EMBEDDABLE = "NOT_EMBEDDABLE"


@dataclass(frozen=True)
class Decision:
    """Embeddability verdict; exactly one of ``normal_forms`` and ``certificate`` is set."""

    verdict: Verdict
    labels: tuple[str, ...]
    rules: tuple[RewriteRule, ...]
    normal_forms: Optional[dict[str, ExponentVector]] = None
    certificate: Optional[CollisionCertificate] = None

    def __post_init__(self):
        if (self.normal_forms is None) == (self.certificate is None):
            raise ValueError("A decision carries either a normal-form table or a certificate")

    @property
    def embeddable(self) -> bool:
        return self.verdict is Verdict.EMBEDDABLE

    @property
    def collision(self) -> Optional[tuple[str, str]]:
        if self.certificate is None:
            return None
        return self.certificate.label_a, self.certificate.label_b


def normal_form_table(rules: Sequence[RuleLike], labels: tuple[str, ...]) -> dict[str, ExponentVector]:
    return {label: reduce(ExponentVector.unit(labels, label), rules) for label in labels}


def decide(
    relations: RelationSet,
    max_rules: Optional[int] = None,
    max_certificate_steps: Optional[int] = None,
    max_certificate_vectors: Optional[int] = None,
    certificate_degree: Optional[int] = None,
) -> Decision:
    """Decide whether the labels stay pairwise distinct in F(G)/≈.

    A collision certificate is tidied into a single-peak chain when one exists
    within ``certificate_degree`` (the default oracle degree unless given).
    """
    labels = relations.labels
    input_relations = relations_of(relations)
    rules = Completer(input_relations, labels, max_rules).run()

    reductions = {label: reduce_with_moves(ExponentVector.unit(labels, label), rules) for label in labels}
    first_with_form: dict[ExponentVector, str] = {}
    for label in labels:
        form = reductions[label][0]
        if form in first_with_form:
            other = first_with_form[form]
            chain = reductions[other][1] + reverse_chain(reductions[label][1])
            certificate = certificate_from_chain(
                other, label, labels, chain, input_relations,
                max_steps=max_certificate_steps or settings.max_certificate_steps,
                max_vectors=max_certificate_vectors or settings.max_certificate_vectors,
                peak_degree=certificate_degree or settings.default_oracle_degree,
            )
            logger.info(f"NOT EMBEDDABLE: {other} = {label} ({len(certificate.steps)}-step certificate)")
            return Decision(Verdict.NOT_EMBEDDABLE, labels, tuple(rules), certificate=certificate)
        first_with_form[form] = label

    logger.info(f"EMBEDDABLE: {len(labels)} distinct normal form(s)")
    return Decision(
        Verdict.EMBEDDABLE,
        labels,
        tuple(rules),
        normal_forms={label: reductions[label][0] for label in labels},
    )


def decision_to_model(
    decision: Decision,
    style: Optional[str] = None,
    oracle: Optional[OracleModel] = None,
) -> DecisionModel:
    """Report model of a decision; ``style`` adds the rendered certificate."""
    certificate = decision.certificate
    return DecisionModel(
        verdict=decision.verdict.value,
        labels=list(decision.labels),
        rule_count=len(decision.rules),
        normal_forms=(
            {label: str(form) for label, form in decision.normal_forms.items()}
            if decision.normal_forms is not None else None
        ),
        collision=decision.collision,
        certificate=certificate_to_model(certificate) if certificate is not None else None,
        rendered_certificate=(
            render_certificate(certificate, style) if certificate is not None and style else None
        ),
        oracle=oracle,
    )
