"""Shared fixtures: the nine-dimensional construction, sl2-type relations and a random corpus."""
import random
from itertools import combinations_with_replacement
from pathlib import Path

import pytest

from app.services.grading import RelationSet, relation_set
from app.services.paper import build_L, build_operators

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

CORPUS_SIZE = 500
CORPUS_SEED = 20051215


def random_relation_set(rng: random.Random, max_labels: int = 8, max_relations: int = 12) -> RelationSet:
    """Labels g0..g{n-1} and distinct unordered pairs, each with a random target."""
    labels = tuple(f"g{i}" for i in range(rng.randint(1, max_labels)))
    pairs = list(combinations_with_replacement(labels, 2))
    chosen = rng.sample(pairs, rng.randint(0, min(max_relations, len(pairs))))
    return RelationSet(labels, tuple((left, right, rng.choice(labels)) for left, right in chosen))


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def paper_operators():
    return build_operators()


@pytest.fixture(scope="session")
def paper_L():
    """(L, fine grading) for the 16-dimensional semidirect sum."""
    return build_L()


@pytest.fixture(scope="session")
def paper_relations(paper_L):
    return relation_set(paper_L[1])


@pytest.fixture
def sl2_relations() -> RelationSet:
    return RelationSet(("e", "f", "h"), (("e", "h", "e"), ("f", "h", "f"), ("e", "f", "h")))


@pytest.fixture
def chain_collision_relations() -> RelationSet:
    """2a = b, a+b = c, 2b = d, a+c = e forces d = 4a = e."""
    return RelationSet(
        ("a", "b", "c", "d", "e"),
        (("a", "a", "b"), ("a", "b", "c"), ("b", "b", "d"), ("a", "c", "e")),
    )


@pytest.fixture(scope="session")
def relation_corpus() -> list[RelationSet]:
    rng = random.Random(CORPUS_SEED)
    return [random_relation_set(rng) for _ in range(CORPUS_SIZE)]
