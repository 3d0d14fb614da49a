"""Brute-force oracle: merge-find over every exponent vector up to a degree bound."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb
from typing import Optional

from app.api.schemas import OracleModel
from app.config import settings
from app.exceptions import CertificateError, InputError, ResourceLimitError
from app.services.certificate import CollisionCertificate, replay, shortest_chain
from app.services.exponents import ExponentVector, relations_of
from app.services.grading import RelationSet
from app.utils.logger import get_logger

logger = get_logger(__name__)


class UnionFind:
    def __init__(self) -> None:
        self.p: dict[int, int] = {}
        self.r: dict[int, int] = {}

    def find(self, x: int) -> int:
        p = self.p
        if x not in p:
            p[x] = x
            self.r[x] = 0
            return x
        # path halving
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        pa, pb = self.find(a), self.find(b)
        if pa == pb:
            return False
        ra, rb = self.r[pa], self.r[pb]
        if ra < rb:
            self.p[pa] = pb
        elif rb < ra:
            self.p[pb] = pa
        else:
            self.p[pb] = pa
            self.r[pa] = ra + 1
        return True


@dataclass(frozen=True)
class OracleResult:
    """A witnessed collision, or none up to ``max_degree`` (which proves nothing)."""

    max_degree: int
    vectors_enumerated: int
    collision: Optional[tuple[str, str]] = None
    witness: Optional[CollisionCertificate] = None

    @property
    def conclusive(self) -> bool:
        return self.collision is not None


def vector_count(label_count: int, max_degree: int) -> int:
    """Number of nonzero exponent vectors of degree <= max_degree."""
    return comb(label_count + max_degree, max_degree) - 1


def bfs_oracle(relations: RelationSet, max_degree: int, max_vectors: Optional[int] = None) -> OracleResult:
    """Merge every vector of degree <= ``max_degree`` with its single forward rewrites.

    Backward applications are the forward applications read from the other end,
    so the classes are exactly those of the equivalence restricted to the bound.
    """
    if max_degree < 2:
        raise InputError(f"The oracle needs a degree bound of at least 2, got {max_degree}")
    cap = max_vectors or settings.max_oracle_vectors
    labels = relations.labels
    total = vector_count(len(labels), max_degree)
    if total > cap:
        raise ResourceLimitError(
            f"The oracle would enumerate {total} vectors at degree {max_degree}; the cap is {cap}"
        )

    relation_list = relations_of(relations)
    ids: dict[ExponentVector, int] = {}
    for degree in range(1, max_degree + 1):
        for combination in combinations_with_replacement(range(len(labels)), degree):
            counts = [0] * len(labels)
            for index in combination:
                counts[index] += 1
            ids[ExponentVector(tuple(counts), labels)] = len(ids)

    classes = UnionFind()
    for vector, ident in ids.items():
        classes.find(ident)
        for relation in relation_list:
            image = vector.rewrite(relation.left, relation.right)
            if image is not None:
                classes.union(ident, ids[image])
    logger.debug(f"Oracle enumerated {len(ids)} vectors up to degree {max_degree}")

    units = [ExponentVector.unit(labels, label) for label in labels]
    for i, first in enumerate(units):
        for j in range(i + 1, len(units)):
            if classes.find(ids[first]) != classes.find(ids[units[j]]):
                continue
            found = shortest_chain(first, units[j], relation_list, max_degree, cap)
            if found is None:
                raise CertificateError(f"Oracle classes of {labels[i]} and {labels[j]} have no connecting chain")
            witness = CollisionCertificate(labels[i], labels[j], labels, tuple(found[0]), tuple(found[1]))
            replay(witness, relation_list)
            logger.info(f"Oracle collision {labels[i]} = {labels[j]} within degree {max_degree}")
            return OracleResult(max_degree, len(ids), (labels[i], labels[j]), witness)

    logger.info(f"Oracle: no collision up to degree {max_degree} (inconclusive)")
    return OracleResult(max_degree, len(ids))


def oracle_to_model(result: OracleResult, embeddable: Optional[bool] = None) -> OracleModel:
    """``agrees_with_decision`` is False only when the oracle found a collision the decision denies."""
    agrees = None
    if embeddable is not None:
        agrees = not (result.conclusive and embeddable)
    return OracleModel(
        max_degree=result.max_degree,
        vectors_enumerated=result.vectors_enumerated,
        collision=result.collision,
        conclusive=result.conclusive,
        agrees_with_decision=agrees,
    )
