"""Associative and Lie spans generated by operators.

Products follow the juxtaposition convention ``(fg)(v) = f(g(v))``: the right
factor is applied first. This is the only reading under which x(a)=b1 together
with xy(a)=c2 is consistent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Literal, Mapping, Optional, Sequence, Union

from app.api.schemas import RelationCheckModel, RelationReport
from app.exceptions import InputError
from app.services.expressions import evaluate_chain
from app.services.linalg import BasedSpace, LinearMap, Subspace, Vector, contains, rref
from app.utils.logger import get_logger

logger = get_logger(__name__)

AssociativeWord = tuple[str, ...]
LieWord = Union[str, tuple["LieWord", "LieWord"]]
Word = Union[AssociativeWord, LieWord]
SpanKind = Literal["associative", "lie"]


def render_word(word: Word, kind: SpanKind) -> str:
    """``("y","z","x")`` -> ``"yzx"``; ``(("y","z"),"x")`` -> ``"[[y,z],x]"``."""
    if kind == "associative":
        separator = "" if all(len(name) == 1 for name in word) else "*"
        return separator.join(word)
    if isinstance(word, str):
        return word
    left, right = word
    return f"[{render_word(left, 'lie')},{render_word(right, 'lie')}]"


@dataclass(frozen=True)
class OperatorSet:
    """Named generators acting on one space; iteration order is input order."""

    space: BasedSpace
    maps: Mapping[str, LinearMap]

    def __post_init__(self):
        maps = dict(self.maps)
        for name, m in maps.items():
            if not name:
                raise InputError("Operator names must be non-empty")
            if m.space != self.space:
                raise InputError(f"Operator {name!r} acts on another space")
        object.__setattr__(self, "maps", maps)

    @property
    def names(self) -> list[str]:
        return list(self.maps)

    def __getitem__(self, name: str) -> LinearMap:
        try:
            return self.maps[name]
        except KeyError:
            raise InputError(f"Unknown generator {name!r}") from None

    def subset(self, names: Sequence[str]) -> "OperatorSet":
        return OperatorSet(self.space, {name: self[name] for name in names})


@dataclass(frozen=True)
class AlgebraSpan:
    """A span of operators together with the words that produced its basis."""

    space: BasedSpace
    kind: SpanKind
    words: tuple[Word, ...]
    maps: tuple[LinearMap, ...]
    span: Subspace

    @property
    def dim(self) -> int:
        return self.span.dim

    @property
    def word_names(self) -> list[str]:
        return [render_word(word, self.kind) for word in self.words]

    def named_maps(self) -> dict[str, LinearMap]:
        return dict(zip(self.word_names, self.maps))


def _check_same_space(f: LinearMap, g: LinearMap) -> None:
    if f.space != g.space:
        raise InputError("Operators act on different spaces")


def compose(f: LinearMap, g: LinearMap) -> LinearMap:
    """The product fg: apply g, then f."""
    _check_same_space(f, g)
    return LinearMap.from_matrix(f.space, f.matrix.matmul(g.matrix))


def commutator(f: LinearMap, g: LinearMap) -> LinearMap:
    """[f, g] = fg - gf."""
    _check_same_space(f, g)
    return LinearMap.from_matrix(f.space, f.matrix.matmul(g.matrix) - g.matrix.matmul(f.matrix))


def word_map(gens: OperatorSet, word: Word, kind: SpanKind) -> LinearMap:
    """Evaluate a stored word back to an operator."""
    if kind == "associative":
        result = gens[word[0]]
        for name in word[1:]:
            result = compose(result, gens[name])
        return result
    if isinstance(word, str):
        return gens[word]
    left, right = word
    return commutator(word_map(gens, left, "lie"), word_map(gens, right, "lie"))


def _closure(gens: OperatorSet, kind: SpanKind) -> AlgebraSpan:
    if not gens.maps:
        raise InputError("The generator set is empty")
    names = gens.names
    ambient = gens.space.dim ** 2
    words: list[Word] = []
    maps: list[LinearMap] = []
    span = Subspace.zero(ambient)

    def offer(word: Word, candidate: LinearMap) -> bool:
        nonlocal span
        if contains(span, candidate):
            return False
        words.append(word)
        maps.append(candidate)
        span = rref(span.basis + (candidate.flatten(),), ambient)
        return True

    frontier = [len(words) - 1 for name in names if offer(name if kind == "lie" else (name,), gens[name])]
    length = 1
    while frontier:
        length += 1
        level = []
        if kind == "associative":
            # right multiplication by generators reaches every word
            candidates = [
                (words[i] + (s,), compose(maps[i], gens[s]))
                for i in frontier for s in names
            ]
        else:
            # left-normed brackets [m, s]; generator pairs keep the earlier generator on the left
            candidates = [
                ((words[i], s), commutator(maps[i], gens[s]))
                for position, s in enumerate(names)
                for i in frontier
                if not (isinstance(words[i], str) and names.index(words[i]) >= position)
            ]
        for word, candidate in candidates:
            if offer(word, candidate):
                level.append(len(words) - 1)
        logger.debug(f"{kind} closure: length {length} added {len(level)} element(s)")
        frontier = level

    result = AlgebraSpan(gens.space, kind, tuple(words), tuple(maps), span)
    logger.info(f"{kind} closure of {names}: dimension {result.dim}")
    return result


def associative_closure(gens: OperatorSet) -> AlgebraSpan:
    """The associative (non-unital) algebra generated by ``gens``."""
    return _closure(gens, "associative")


def lie_closure(gens: OperatorSet) -> AlgebraSpan:
    """The Lie algebra generated by ``gens`` under the commutator."""
    return _closure(gens, "lie")


MapSource = Union[AlgebraSpan, Sequence[LinearMap]]


def _maps_of(source: MapSource) -> tuple[LinearMap, ...]:
    if isinstance(source, AlgebraSpan):
        return source.maps
    return tuple(source)


def maps_from_subspace(space: BasedSpace, subspace: Subspace) -> list[LinearMap]:
    return [LinearMap.from_flat(space, row) for row in subspace.basis]


def span_product(left: MapSource, right: MapSource, space: Optional[BasedSpace] = None) -> Subspace:
    """rref of all products fg with f from ``left`` and g from ``right``."""
    left_maps, right_maps = _maps_of(left), _maps_of(right)
    spaces = {m.space for m in left_maps + right_maps}
    if space is not None:
        spaces.add(space)
    if len(spaces) > 1:
        raise InputError("Spans act on different spaces")
    if not spaces:
        raise InputError("Cannot infer the space of two empty spans")
    ambient = spaces.pop().dim ** 2
    return rref([compose(f, g).flatten() for f in left_maps for g in right_maps], ambient)


def sandwich(op: LinearMap, middle: MapSource) -> Subspace:
    """Span of op·m·op over m in ``middle`` (xAx and friends)."""
    inner = span_product([op], middle, op.space)
    return span_product(maps_from_subspace(op.space, inner), [op], op.space)


def span_power(base: AlgebraSpan, exponent: int) -> Subspace:
    """base^exponent as a subspace of End(V)."""
    if exponent < 1:
        raise InputError("Span powers start at 1")
    current = base.span
    for _ in range(exponent - 1):
        current = span_product(maps_from_subspace(base.space, current), base, base.space)
    return current


def independence_constraints(maps: Sequence[LinearMap], vector: Vector) -> Subspace:
    """Equations forced on the coefficients of sum(alpha_i * maps[i]) = 0 by evaluating at ``vector``.

    Each echelon row is one linear equation in alpha_1..alpha_k.
    """
    images = [m.apply(vector) for m in maps]
    rows = [[image.coords[r] for image in images] for r in range(vector.space.dim)]
    return rref(rows, len(maps))


class OperatorContext:
    """Expression context evaluating names, products and brackets as operators."""

    def __init__(self, gens: OperatorSet):
        self.gens = gens
        self.names = gens.names

    def lookup(self, name: str) -> LinearMap:
        return self.gens[name]

    def zero(self) -> LinearMap:
        return LinearMap.zero(self.gens.space)

    def add(self, a: LinearMap, b: LinearMap) -> LinearMap:
        return a + b

    def scale(self, a: LinearMap, factor: Any) -> LinearMap:
        return a.scale(factor)

    def multiply(self, a: LinearMap, b: LinearMap) -> LinearMap:
        return compose(a, b)

    def bracket(self, a: LinearMap, b: LinearMap) -> LinearMap:
        return commutator(a, b)


def check_relations(gens: OperatorSet, claims: Sequence[str]) -> RelationReport:
    """Verify claimed identities such as ``"yx=0=x^2=y^2=z^2"`` or ``"xyz=xzy=zxy"``.

    A claim holds when every member of its chain evaluates to the same operator.
    """
    context = OperatorContext(gens)
    checks = []
    for claim in claims:
        values = evaluate_chain(claim, context)
        if len(values) < 2:
            raise InputError(f"A claim needs at least one '=': {claim!r}")
        holds = all(value == values[0] for value in values[1:])
        checks.append(RelationCheckModel(claim=claim, holds=holds))
        if not holds:
            logger.info(f"Relation {claim!r} does not hold")
    return RelationReport(checks=checks, all_hold=all(c.holds for c in checks))
