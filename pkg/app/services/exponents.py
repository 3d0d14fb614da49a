"""Exponent vectors of the free abelian semigroup F(G) and the relations on it.

Monomial arithmetic is sympy's (``sympy.polys.monomials``); the term order is
``grlex``: total degree first, then lexicographic on the label order, where the
earlier label weighs more. So with labels (x, y): x+x > x+y > y+y and x > y.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from sympy.polys.monomials import monomial_deg, monomial_div, monomial_divides, monomial_lcm, monomial_mul
from sympy.polys.orderings import grlex

from app.exceptions import InputError
from app.services.grading import RelationSet, RelationTriple


@dataclass(frozen=True)
class ExponentVector:
    """A nonempty finite multiset of labels, as counts over a fixed label tuple."""

    counts: tuple[int, ...]
    labels: tuple[str, ...] = field(compare=False, repr=False)

    def __post_init__(self):
        if len(self.counts) != len(self.labels):
            raise InputError("Exponent vector and label universe differ in length")
        if any(c < 0 for c in self.counts):
            raise InputError(f"Negative exponent in {self.counts}")
        if not any(self.counts):
            # F(G) is a semigroup: there is no empty product
            raise InputError("The zero exponent vector is not an element of the free semigroup")

    @classmethod
    def unit(cls, labels: tuple[str, ...], label: str) -> "ExponentVector":
        try:
            index = labels.index(label)
        except ValueError:
            raise InputError(f"Unknown label {label!r}") from None
        counts = [0] * len(labels)
        counts[index] = 1
        return cls(tuple(counts), labels)

    @classmethod
    def of(cls, labels: tuple[str, ...], names: Sequence[str]) -> "ExponentVector":
        """e_n1 + e_n2 + ... for the given (repeatable) label names."""
        counts = [0] * len(labels)
        for name in names:
            try:
                counts[labels.index(name)] += 1
            except ValueError:
                raise InputError(f"Unknown label {name!r}") from None
        return cls(tuple(counts), labels)

    @property
    def degree(self) -> int:
        return monomial_deg(self.counts)

    @property
    def key(self) -> tuple[int, tuple[int, ...]]:
        return grlex(self.counts)

    def __add__(self, other: "ExponentVector") -> "ExponentVector":
        return ExponentVector(monomial_mul(self.counts, other.counts), self.labels)

    def divides(self, other: "ExponentVector") -> bool:
        """Componentwise self <= other."""
        return monomial_divides(self.counts, other.counts)

    def lcm(self, other: "ExponentVector") -> "ExponentVector":
        return ExponentVector(monomial_lcm(self.counts, other.counts), self.labels)

    def shifted(self, shift: tuple[int, ...]) -> "ExponentVector":
        return ExponentVector(monomial_mul(self.counts, shift), self.labels)

    def offset(self, smaller: "ExponentVector") -> Optional[tuple[int, ...]]:
        """The context c with self = smaller + c, or None (c may be all zero)."""
        return monomial_div(self.counts, smaller.counts)

    def rewrite(self, lhs: "ExponentVector", rhs: "ExponentVector") -> Optional["ExponentVector"]:
        """self - lhs + rhs when lhs divides self."""
        context = monomial_div(self.counts, lhs.counts)
        if context is None:
            return None
        return ExponentVector(monomial_mul(context, rhs.counts), self.labels)

    def names(self) -> list[str]:
        """Labels with multiplicity, in label order."""
        return [label for label, count in zip(self.labels, self.counts) for _ in range(count)]

    def support(self) -> set[str]:
        return {label for label, count in zip(self.labels, self.counts) if count}

    def render(self) -> str:
        return "+".join(self.names())

    def __str__(self) -> str:
        return self.render()


def term_order_less(u: ExponentVector, v: ExponentVector) -> bool:
    """Degree first, then lexicographic by label order with earlier labels weighing more."""
    if u.labels != v.labels:
        raise InputError("Exponent vectors over different label sets")
    return u.key < v.key


@dataclass(frozen=True)
class Relation:
    """e_g + e_g' = e_g'' coming from one grading triple."""

    left: ExponentVector
    right: ExponentVector
    provenance: RelationTriple
    index: int

    def __str__(self) -> str:
        return f"{self.left} = {self.right}"


def relations_of(relation_set: RelationSet) -> list[Relation]:
    labels = relation_set.labels
    return [
        Relation(
            ExponentVector.of(labels, (triple.left, triple.right)),
            ExponentVector.unit(labels, triple.target),
            triple,
            index,
        )
        for index, triple in enumerate(relation_set.triples)
    ]


@dataclass(frozen=True)
class Move:
    """Apply ``source`` (a relation or a rewrite rule) inside the context ``shift``.

    Forward turns shift + lhs into shift + rhs; backward undoes it.
    """

    source: Union[Relation, "RuleLike"]
    shift: tuple[int, ...]
    forward: bool

    def reversed(self) -> "Move":
        return Move(self.source, self.shift, not self.forward)


class RuleLike:
    """Marker base for objects that carry ``lhs``, ``rhs`` and a ``proof`` chain of moves."""

    lhs: ExponentVector
    rhs: ExponentVector
    proof: tuple[Move, ...]


def reverse_chain(chain: Sequence[Move]) -> tuple[Move, ...]:
    return tuple(move.reversed() for move in reversed(chain))


def zero_shift(labels: tuple[str, ...]) -> tuple[int, ...]:
    return (0,) * len(labels)
