"""Collision certificates: replayable chains of single relation applications.

A certificate proves e_a ≈ e_b by listing every intermediate exponent vector
and, for each step, the input relation applied and its direction. Nothing in
here trusts the completion that produced it: ``replay`` re-derives each vector.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterator, Literal, Optional, Sequence, Union

from sympy.polys.monomials import monomial_mul

from app.api.schemas import CertificateModel, CertificateStepModel
from app.exceptions import CertificateError, ResourceLimitError
from app.services.exponents import ExponentVector, Move, Relation
from app.utils.logger import get_logger

logger = get_logger(__name__)

Style = Literal["text", "bracket"]


@dataclass(frozen=True)
class CertificateStep:
    """Apply ``relation`` once: forward replaces left by right, backward right by left."""

    relation: Relation
    forward: bool

    @property
    def direction(self) -> str:
        return "forward" if self.forward else "backward"

    def flipped(self) -> "CertificateStep":
        return CertificateStep(self.relation, not self.forward)


@dataclass(frozen=True)
class CollisionCertificate:
    label_a: str
    label_b: str
    labels: tuple[str, ...]
    chain: tuple[ExponentVector, ...]
    steps: tuple[CertificateStep, ...]

    def __post_init__(self):
        if len(self.chain) != len(self.steps) + 1:
            raise CertificateError("A certificate chain has exactly one more vector than steps")

    def passes_through(self, vector: ExponentVector) -> bool:
        return vector in self.chain

    @property
    def max_degree(self) -> int:
        return max(v.degree for v in self.chain)


def apply_step(vector: ExponentVector, step: CertificateStep) -> Optional[ExponentVector]:
    """The vector after one application, or None when the relation side is not present."""
    relation = step.relation
    if step.forward:
        return vector.rewrite(relation.left, relation.right)
    return vector.rewrite(relation.right, relation.left)


def replay(certificate: CollisionCertificate, relations: Optional[Sequence[Relation]] = None) -> None:
    """Re-derive every vector of the chain; raises CertificateError on the first broken link.

    With ``relations`` given, every cited relation must also be one of them.
    """
    labels = certificate.labels
    if certificate.label_a == certificate.label_b:
        raise CertificateError("A collision needs two distinct labels")
    if certificate.chain[0] != ExponentVector.unit(labels, certificate.label_a):
        raise CertificateError(f"Chain does not start at {certificate.label_a}")
    if certificate.chain[-1] != ExponentVector.unit(labels, certificate.label_b):
        raise CertificateError(f"Chain does not end at {certificate.label_b}")
    allowed = None if relations is None else set(relations)
    for position, step in enumerate(certificate.steps):
        if allowed is not None and step.relation not in allowed:
            raise CertificateError(f"Step {position + 1} cites a relation that is not an input relation")
        result = apply_step(certificate.chain[position], step)
        if result is None or result != certificate.chain[position + 1]:
            raise CertificateError(
                f"Step {position + 1} ({step.direction} {step.relation}) does not turn "
                f"{certificate.chain[position]} into {certificate.chain[position + 1]}"
            )


# ---------------------------------------------------------------------------
# Proof expansion
# ---------------------------------------------------------------------------

FlatStep = tuple[Relation, tuple[int, ...], bool]


class ProofExpander:
    """Flattens chains of moves over rewrite rules into moves over input relations."""

    def __init__(self, max_steps: int):
        self.max_steps = max_steps
        self._cache: dict[int, tuple[FlatStep, ...]] = {}

    def expand(self, moves: Sequence[Move]) -> list[FlatStep]:
        flat: list[FlatStep] = []
        for move in moves:
            source = move.source
            if isinstance(source, Relation):
                flat.append((source, move.shift, move.forward))
            else:
                inner = self._rule(source)
                if not move.forward:
                    inner = tuple((r, s, not f) for r, s, f in reversed(inner))
                flat.extend((r, monomial_mul(s, move.shift), f) for r, s, f in inner)
            if len(flat) > self.max_steps:
                raise ResourceLimitError(f"Certificate expansion exceeded {self.max_steps} steps")
        return flat

    def _rule(self, rule) -> tuple[FlatStep, ...]:
        key = id(rule)
        if key not in self._cache:
            self._cache[key] = tuple(self.expand(rule.proof))
        return self._cache[key]


def expand_proof(moves: Sequence[Move], max_steps: int) -> list[FlatStep]:
    return ProofExpander(max_steps).expand(moves)


# ---------------------------------------------------------------------------
# Shortest chains
# ---------------------------------------------------------------------------


def neighbors(
    vector: ExponentVector,
    relations: Sequence[Relation],
    max_degree: int,
) -> Iterator[tuple[ExponentVector, CertificateStep]]:
    """Single applications from ``vector``, relations in order, forward before backward."""
    for relation in relations:
        forward = vector.rewrite(relation.left, relation.right)
        if forward is not None:
            yield forward, CertificateStep(relation, True)
        if vector.degree < max_degree:
            backward = vector.rewrite(relation.right, relation.left)
            if backward is not None:
                yield backward, CertificateStep(relation, False)


_Visit = tuple[int, Optional[ExponentVector], Optional[CertificateStep]]


def _explore(
    origin: ExponentVector,
    relations: Sequence[Relation],
    max_degree: int,
    limit: int,
) -> dict[ExponentVector, _Visit]:
    visited: dict[ExponentVector, _Visit] = {origin: (0, None, None)}
    queue = deque([origin])
    while queue:
        current = queue.popleft()
        distance = visited[current][0]
        for following, step in neighbors(current, relations, max_degree):
            if following in visited:
                continue
            visited[following] = (distance + 1, current, step)
            if len(visited) > limit:
                raise ResourceLimitError(f"Shortest-chain search exceeded {limit} vectors")
            queue.append(following)
    return visited


def _path_to(visited: dict[ExponentVector, _Visit], vector: ExponentVector):
    vectors = [vector]
    steps: list[CertificateStep] = []
    _, parent, step = visited[vector]
    while parent is not None:
        vectors.append(parent)
        steps.append(step)
        _, parent, step = visited[parent]
    vectors.reverse()
    steps.reverse()
    return vectors, steps


def shortest_chain(
    start: ExponentVector,
    goal: ExponentVector,
    relations: Sequence[Relation],
    max_degree: int,
    max_vectors: int,
) -> Optional[tuple[list[ExponentVector], list[CertificateStep]]]:
    """A shortest chain from ``start`` to ``goal`` through vectors of degree <= ``max_degree``.

    Both ends are explored completely, then the chains are joined at the
    meeting vector with the smallest total distance; ties go to the higher
    degree, then to the greater vector in the term order. Returns None when the
    two are not connected within the bound.
    """
    from_start = _explore(start, relations, max_degree, max_vectors)
    from_goal = _explore(goal, relations, max_degree, max_vectors)
    common = [v for v in from_start if v in from_goal]
    if not common:
        return None
    meet = max(common, key=lambda v: (-(from_start[v][0] + from_goal[v][0]), v.degree, v.key))
    return _join(from_start, from_goal, meet)


def _unfoldings(
    vector: ExponentVector,
    relations: Sequence[Relation],
) -> Iterator[tuple[ExponentVector, CertificateStep]]:
    """Backward applications only: one summand g'' becomes g + g'."""
    for relation in relations:
        unfolded = vector.rewrite(relation.right, relation.left)
        if unfolded is not None:
            yield unfolded, CertificateStep(relation, False)


def _join(
    from_start: dict[ExponentVector, _Visit],
    from_goal: dict[ExponentVector, _Visit],
    meet: ExponentVector,
) -> tuple[list[ExponentVector], list[CertificateStep]]:
    head_vectors, head_steps = _path_to(from_start, meet)
    tail_vectors, tail_steps = _path_to(from_goal, meet)
    tail_vectors.reverse()
    tail_steps = [step.flipped() for step in reversed(tail_steps)]
    return head_vectors + tail_vectors[1:], head_steps + tail_steps


def peak_chain(
    start: ExponentVector,
    goal: ExponentVector,
    relations: Sequence[Relation],
    max_degree: int,
    max_vectors: int,
) -> Optional[tuple[list[ExponentVector], list[CertificateStep]]]:
    """A chain that only unfolds from ``start`` to a common vector, then only folds down to ``goal``.

    Every unfolding raises the degree by one, so both sides are grown one
    degree at a time and the lowest common vector is the peak; ties go to the
    greater vector in the term order. Returns None when no peak exists within
    ``max_degree``.
    """
    if start.degree != goal.degree:
        return None
    from_start: dict[ExponentVector, _Visit] = {start: (0, None, None)}
    from_goal: dict[ExponentVector, _Visit] = {goal: (0, None, None)}
    layers = ([start], [goal])
    degree = start.degree
    while True:
        common = [v for v in layers[0] if v in from_goal]
        if common:
            return _join(from_start, from_goal, max(common, key=lambda v: v.key))
        if degree >= max_degree or not (layers[0] and layers[1]):
            return None
        grown = ([], [])
        for side, visited in enumerate((from_start, from_goal)):
            for current in layers[side]:
                distance = visited[current][0]
                for unfolded, step in _unfoldings(current, relations):
                    if unfolded in visited:
                        continue
                    visited[unfolded] = (distance + 1, current, step)
                    grown[side].append(unfolded)
            if len(from_start) + len(from_goal) > max_vectors:
                raise ResourceLimitError(f"Peak search exceeded {max_vectors} vectors")
        layers = grown
        degree += 1


def _without_loops(vectors: list[ExponentVector], steps: list[CertificateStep]):
    kept_vectors = [vectors[0]]
    kept_steps: list[CertificateStep] = []
    position = {vectors[0]: 0}
    for vector, step in zip(vectors[1:], steps):
        if vector in position:
            cut = position[vector]
            for dropped in kept_vectors[cut + 1:]:
                del position[dropped]
            del kept_vectors[cut + 1:]
            del kept_steps[cut:]
            continue
        position[vector] = len(kept_vectors)
        kept_vectors.append(vector)
        kept_steps.append(step)
    return kept_vectors, kept_steps


Chain = tuple[list[ExponentVector], list[CertificateStep]]


def _bounded(search: Callable[..., Optional[Chain]], label_a: str, label_b: str, *args) -> Optional[Chain]:
    try:
        return search(*args)
    except ResourceLimitError as e:
        logger.warning(f"Certificate tidying for {label_a} = {label_b} skipped {search.__name__}: {e}")
        return None


def certificate_from_chain(
    label_a: str,
    label_b: str,
    labels: tuple[str, ...],
    moves: Sequence[Move],
    relations: Sequence[Relation],
    max_steps: int,
    max_vectors: int,
    peak_degree: int = 6,
) -> CollisionCertificate:
    """Expand a proof chain from e_a to e_b into input-relation steps, replay it and tidy it.

    Tidying prefers a chain with a single peak, searched up to ``peak_degree``
    or the degree of the expanded proof, whichever is higher. Without one it
    takes a shortest chain within the proof's degree, and failing that the
    expanded proof with its loops cut out.
    """
    vectors = [ExponentVector.unit(labels, label_a)]
    steps: list[CertificateStep] = []
    for relation, _, forward in expand_proof(moves, max_steps):
        step = CertificateStep(relation, forward)
        following = apply_step(vectors[-1], step)
        if following is None:
            raise CertificateError(f"Expanded proof breaks at {vectors[-1]} ({step.direction} {relation})")
        vectors.append(following)
        steps.append(step)
    raw = CollisionCertificate(label_a, label_b, labels, tuple(vectors), tuple(steps))
    replay(raw, relations)
    logger.debug(f"Expanded proof of {label_a} = {label_b}: {len(steps)} step(s), degree {raw.max_degree}")

    start, goal = raw.chain[0], raw.chain[-1]
    tidy = _bounded(peak_chain, label_a, label_b,
                    start, goal, relations, max(peak_degree, raw.max_degree), max_vectors)
    if tidy is None:
        tidy = _bounded(shortest_chain, label_a, label_b, start, goal, relations, raw.max_degree, max_vectors)
    if tidy is None:
        tidy = _without_loops(vectors, steps)

    certificate = CollisionCertificate(label_a, label_b, labels, tuple(tidy[0]), tuple(tidy[1]))
    replay(certificate, relations)
    return certificate


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

Tree = Union[str, tuple["Tree", "Tree"]]


def _peak(certificate: CollisionCertificate) -> Optional[int]:
    """Index of the highest vector when the chain only climbs and then only descends."""
    directions = [step.forward for step in certificate.steps]
    peak = directions.index(True) if True in directions else len(directions)
    if any(not forward for forward in directions[peak:]):
        return None
    return peak


def _unfold(tree: Tree, target: str, left: str, right: str) -> tuple[Tree, bool]:
    """Replace the first leaf equal to ``target`` by the pair (left, right)."""
    if isinstance(tree, str):
        if tree == target:
            return (left, right), True
        return tree, False
    head, done = _unfold(tree[0], target, left, right)
    if done:
        return (head, tree[1]), True
    tail, done = _unfold(tree[1], target, left, right)
    return (tree[0], tail), done


def _leaves(tree: Tree) -> list[str]:
    if isinstance(tree, str):
        return [tree]
    return _leaves(tree[0]) + _leaves(tree[1])


def _bracket(tree: Tree) -> str:
    if isinstance(tree, str):
        return tree
    return f"[{_bracket(tree[0])},{_bracket(tree[1])}]"


def _grow(label: str, expansions: Sequence[CertificateStep]) -> list[Tree]:
    """Trees after each backward step, starting from the single leaf ``label``."""
    trees: list[Tree] = [label]
    for step in expansions:
        left, right, target = step.relation.provenance
        tree, done = _unfold(trees[-1], target, left, right)
        if not done:
            raise CertificateError(f"{target} is not a summand of {'+'.join(_leaves(trees[-1]))}")
        trees.append(tree)
    return trees


def _trees(certificate: CollisionCertificate) -> Optional[tuple[list[Tree], list[Tree]]]:
    peak = _peak(certificate)
    if peak is None:
        return None
    climb = certificate.steps[:peak]
    descent = [step.flipped() for step in reversed(certificate.steps[peak:])]
    return _grow(certificate.label_a, climb), _grow(certificate.label_b, descent)


def render_certificate(certificate: CollisionCertificate, style: Style = "text") -> str:
    """Human-readable derivation of a collision.

    ``text`` lists every intermediate sum, keeping summands in the order they
    were unfolded; ``bracket`` shows the two nested brackets that land in the
    two colliding components and needs a chain that climbs and then descends.
    """
    replay(certificate)
    shapes = _trees(certificate)

    if style == "bracket":
        if shapes is None:
            raise CertificateError("Bracket rendering needs a chain that only climbs and then only descends")
        left_trees, right_trees = shapes
        return (
            f"{_bracket(left_trees[-1])} = {certificate.label_a}, "
            f"while {_bracket(right_trees[-1])} = {certificate.label_b}"
        )
    if style != "text":
        raise CertificateError(f"Unknown certificate style {style!r}")

    if shapes is None:
        return " = ".join(str(v) for v in certificate.chain)
    left_trees, right_trees = shapes
    sums = ["+".join(_leaves(tree)) for tree in left_trees]
    descending = ["+".join(_leaves(tree)) for tree in reversed(right_trees)]
    if descending[0] == sums[-1]:
        descending = descending[1:]
    return " = ".join(sums + descending)


def certificate_to_model(certificate: CollisionCertificate) -> CertificateModel:
    return CertificateModel(
        labels=(certificate.label_a, certificate.label_b),
        chain=[str(v) for v in certificate.chain],
        steps=[
            CertificateStepModel(relation=tuple(step.relation.provenance), direction=step.direction)
            for step in certificate.steps
        ],
    )
