"""Lie gradings: decompositions L = ⊕ L_g, their verification and the induced relations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple, Sequence

from app.api.schemas import GradingReport, GradingViolation
from app.exceptions import GradingError, InputError
from app.services.lie import LieAlgebra
from app.services.linalg import Subspace, Vector, contains, direct_sum_check, is_subspace, rref
from app.utils.logger import get_logger

logger = get_logger(__name__)


class RelationTriple(NamedTuple):
    """[L_left, L_right] lands in L_target, so left + right = target is required."""
    left: str
    right: str
    target: str


@dataclass(frozen=True)
class RelationSet:
    """The label set G and one triple per unordered label pair with a nonzero bracket."""

    labels: tuple[str, ...]
    triples: tuple[RelationTriple, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise InputError("Relation labels must be distinct")
        known = set(labels)
        seen: set[frozenset[str]] = set()
        triples = []
        for triple in self.triples:
            triple = RelationTriple(*triple)
            for name in triple:
                if name not in known:
                    raise InputError(f"Relation {tuple(triple)} uses undeclared label {name!r}")
            pair = frozenset((triple.left, triple.right))
            if pair in seen:
                raise InputError(f"The pair {{{triple.left}, {triple.right}}} appears in more than one relation")
            seen.add(pair)
            triples.append(triple)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "triples", tuple(triples))

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[RelationTriple]:
        return iter(self.triples)


@dataclass(frozen=True)
class Grading:
    """Labelled components of a Lie algebra, in label order."""

    algebra: LieAlgebra
    labels: tuple[str, ...]
    components: Mapping[str, Subspace]

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise InputError("Grading labels must be distinct")
        if set(self.components) != set(labels):
            raise InputError("Every label needs exactly one component")
        for label in labels:
            if self.components[label].ambient_dim != self.algebra.dim:
                raise InputError(f"Component {label!r} does not live in the algebra")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "components", {label: self.components[label] for label in labels})

    @classmethod
    def from_vectors(cls, algebra: LieAlgebra, components: Mapping[str, Sequence[Vector]]) -> "Grading":
        return cls(
            algebra,
            tuple(components),
            {label: rref(vectors, algebra.dim) for label, vectors in components.items()},
        )

    def components_of(self, vector: Vector) -> list[str]:
        """Labels whose component contains the nonzero ``vector``."""
        return [label for label in self.labels if contains(self.components[label], vector)]


def fine_grading_from_basis(algebra: LieAlgebra) -> Grading:
    """One label per basis element, L_u = k u."""
    return Grading(
        algebra,
        algebra.basis_names,
        {name: rref([algebra.basis_vector(name)], algebra.dim) for name in algebra.basis_names},
    )


def _pair_bracket(grading: Grading, left: str, right: str) -> Subspace:
    algebra = grading.algebra
    return rref(
        [
            algebra.bracket(u, v)
            for u in grading.components[left].vectors(algebra.space)
            for v in grading.components[right].vectors(algebra.space)
        ],
        algebra.dim,
    )


def _label_pairs(labels: Sequence[str]) -> Iterator[tuple[str, str]]:
    for i, left in enumerate(labels):
        for right in labels[i:]:
            yield left, right


def _scan(grading: Grading) -> tuple[list[GradingViolation], list[RelationTriple]]:
    violations: list[GradingViolation] = []
    triples: list[RelationTriple] = []

    for label in grading.labels:
        if grading.components[label].is_zero():
            violations.append(GradingViolation(labels=[label], reason="component is zero"))

    whole = Subspace.whole(grading.algebra.dim)
    is_direct = direct_sum_check(list(grading.components.values()), whole)
    if not is_direct:
        violations.append(GradingViolation(
            labels=list(grading.labels),
            reason="components do not form a direct sum equal to the algebra",
        ))

    for left, right in _label_pairs(grading.labels):
        image = _pair_bracket(grading, left, right)
        if image.is_zero():
            continue
        targets = [label for label in grading.labels if is_subspace(image, grading.components[label])]
        if not targets:
            violations.append(GradingViolation(
                labels=[left, right],
                reason=f"bracket span of dimension {image.dim} lies in no single component",
            ))
        elif len(targets) > 1:
            # independent components can only share the zero subspace
            assert not is_direct, f"bracket of {left}, {right} inside several components of a direct sum"
            violations.append(GradingViolation(
                labels=[left, right],
                reason=f"bracket span lies in several components: {targets}",
            ))
        else:
            triples.append(RelationTriple(left, right, targets[0]))
    return violations, triples


def verify_grading(grading: Grading) -> GradingReport:
    """Check nonzero components, the direct sum, and the single-target bracket rule.

    Every failing condition is reported, not only the first.
    """
    violations, triples = _scan(grading)
    report = GradingReport(
        valid=not violations,
        component_count=len(grading.labels),
        violations=violations,
        relation_count=len(triples),
    )
    logger.info(
        f"Grading with {report.component_count} components: "
        f"{'valid' if report.valid else f'{len(violations)} violation(s)'}, {len(triples)} relation(s)"
    )
    return report


def relation_set(grading: Grading) -> RelationSet:
    """The property-(P) relations of a valid grading, one per label pair with nonzero bracket."""
    violations, triples = _scan(grading)
    if violations:
        raise GradingError(
            f"Relations requested for an invalid grading ({len(violations)} violation(s)); "
            f"first: {violations[0].labels}: {violations[0].reason}"
        )
    return RelationSet(grading.labels, tuple(triples))
