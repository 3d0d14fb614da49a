"""Lie algebras given by structure constants over a named basis."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from sympy.polys.domains import QQ

from app.api.schemas import AxiomReport
from app.exceptions import ClosureError, InputError
from app.services.expressions import evaluate as evaluate_expression
from app.services.linalg import BasedSpace, LinearMap, Subspace, Vector, express, rref
from app.services.operators import AlgebraSpan, commutator
from app.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class LieAlgebra:
    """Basis names plus the nonzero brackets [b_i, b_j] for i < j.

    Brackets with i >= j follow from the alternating law. ``realization`` holds
    one operator per basis element when the algebra was built from operators.
    """

    space: BasedSpace
    brackets: tuple[tuple[tuple[int, int], Vector], ...]
    realization: Optional[tuple[LinearMap, ...]] = None
    _table: dict[tuple[int, int], Vector] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        table: dict[tuple[int, int], Vector] = {}
        n = self.space.dim
        for (i, j), value in dict(self.brackets).items():
            if not (0 <= i < j < n):
                raise InputError(f"Bracket key ({i}, {j}) must satisfy 0 <= i < j < {n}")
            if value.space != self.space:
                raise InputError(f"Bracket ({i}, {j}) lives in another space")
            if not value.is_zero():
                table[(i, j)] = value
        if self.realization is not None and len(self.realization) != n:
            raise InputError("A realization needs one operator per basis element")
        object.__setattr__(self, "brackets", tuple(sorted(table.items(), key=lambda item: item[0])))
        object.__setattr__(self, "_table", table)

    @classmethod
    def from_structure_constants(
        cls,
        names: Sequence[str],
        brackets: Mapping[tuple[str, str], Mapping[str, Any]],
    ) -> "LieAlgebra":
        """Build from ``{(name_i, name_j): {name: coefficient}}``; either orientation is accepted."""
        space = BasedSpace(tuple(names))
        table: dict[tuple[int, int], Vector] = {}
        for (left, right), terms in brackets.items():
            i, j = space.index(left), space.index(right)
            if i == j:
                raise InputError(f"[{left},{left}] is zero by the alternating law")
            value = space.vector(terms)
            key = (i, j) if i < j else (j, i)
            if i > j:
                value = -value
            if key in table:
                raise InputError(f"Bracket [{left},{right}] given twice")
            table[key] = value
        return cls(space, tuple(table.items()))

    @property
    def basis_names(self) -> tuple[str, ...]:
        return self.space.basis_names

    @property
    def dim(self) -> int:
        return self.space.dim

    def basis_vector(self, name: str) -> Vector:
        return self.space.basis_vector(name)

    def bracket_basis(self, i: int, j: int) -> Vector:
        if i == j:
            return self.space.zero()
        if i < j:
            return self._table.get((i, j)) or self.space.zero()
        value = self._table.get((j, i))
        return -value if value is not None else self.space.zero()

    def bracket(self, u: Vector, v: Vector) -> Vector:
        if u.space != self.space or v.space != self.space:
            raise InputError("Bracket arguments live outside the algebra")
        coords = [QQ.zero] * self.dim
        for i, a in enumerate(u.coords):
            if not a:
                continue
            for j, b in enumerate(v.coords):
                if not b or i == j:
                    continue
                value = self.bracket_basis(i, j)
                weight = a * b
                for k, c in enumerate(value.coords):
                    if c:
                        coords[k] += weight * c
        return Vector(self.space, tuple(coords))

    def bracket_names(self, left: str, right: str) -> Vector:
        return self.bracket_basis(self.space.index(left), self.space.index(right))


@dataclass(frozen=True)
class CentralSeries:
    """Terms L^1 ⊇ L^2 ⊇ ... of a lower central (or derived) series."""

    terms: tuple[Subspace, ...]
    nilpotent: bool
    nilpotency_class: Optional[int]

    @property
    def dimensions(self) -> list[int]:
        return [term.dim for term in self.terms]


def from_operators(span: AlgebraSpan) -> LieAlgebra:
    """Structure constants of an operator span closed under the commutator.

    The basis names are the span's words, e.g. ``"[x,y]"`` and ``"[[y,z],x]"``.
    """
    names = tuple(span.word_names)
    space = BasedSpace(names)
    flat = [m.flatten() for m in span.maps]
    table: dict[tuple[int, int], Vector] = {}
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            value = commutator(span.maps[i], span.maps[j])
            if value.is_zero():
                continue
            coordinates = express(flat, value.flatten())
            if coordinates is None:
                raise ClosureError(f"[{names[i]},{names[j]}] leaves the span; it is not bracket-closed")
            table[(i, j)] = Vector(space, coordinates)
    algebra = LieAlgebra(space, tuple(table.items()), realization=span.maps)
    logger.info(f"Lie algebra of dimension {algebra.dim} with {len(table)} nonzero brackets")
    return algebra


def semidirect_sum(g: LieAlgebra, module: BasedSpace) -> LieAlgebra:
    """g ⊕ V with [f, v] = f(v) and V an abelian ideal."""
    if g.realization is None:
        raise InputError("The semidirect sum needs an operator realization of g")
    for name, op in zip(g.basis_names, g.realization):
        if op.space != module:
            raise InputError(f"The operator of {name!r} does not act on the given space")
    clash = set(g.basis_names) & set(module.basis_names)
    if clash:
        raise InputError(f"Basis names used in both g and V: {sorted(clash)}")

    space = BasedSpace(g.basis_names + module.basis_names)
    offset = g.dim
    zeros_g = (QQ.zero,) * g.dim
    table: dict[tuple[int, int], Vector] = {}
    for (i, j), value in g.brackets:
        table[(i, j)] = Vector(space, value.coords + (QQ.zero,) * module.dim)
    for i, op in enumerate(g.realization):
        for j, name in enumerate(module.basis_names):
            image = op.image(name)
            if not image.is_zero():
                table[(i, offset + j)] = Vector(space, zeros_g + image.coords)
    algebra = LieAlgebra(space, tuple(table.items()))
    logger.info(f"Semidirect sum of dimension {algebra.dim} ({g.dim} + {module.dim})")
    return algebra


def check_axioms(algebra: LieAlgebra) -> AxiomReport:
    """Check the alternating law and the Jacobi identity on every ordered basis triple."""
    n = algebra.dim
    names = algebra.basis_names
    table = [[algebra.bracket_basis(i, j) for j in range(n)] for i in range(n)]

    for i in range(n):
        if not table[i][i].is_zero():
            return AxiomReport(
                passed=False, dimension=n, triples_checked=0,
                first_violation=f"[{names[i]},{names[i]}] = {table[i][i]} is not zero",
                violation_triple=[names[i]],
            )
        for j in range(i + 1, n):
            if not (table[i][j] + table[j][i]).is_zero():
                return AxiomReport(
                    passed=False, dimension=n, triples_checked=0,
                    first_violation=f"[{names[i]},{names[j]}] + [{names[j]},{names[i]}] is not zero",
                    violation_triple=[names[i], names[j]],
                )

    def nested(i: int, j: int, k: int) -> list:
        # [[b_i, b_j], b_k] expanded through the table
        coords = [QQ.zero] * n
        for l, c in enumerate(table[i][j].coords):
            if c:
                for m, d in enumerate(table[l][k].coords):
                    if d:
                        coords[m] += c * d
        return coords

    checked = 0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                checked += 1
                total = [a + b + c for a, b, c in zip(nested(i, j, k), nested(j, k, i), nested(k, i, j))]
                if any(total):
                    jacobiator = Vector(algebra.space, tuple(total))
                    logger.info(f"Jacobi identity fails on ({names[i]}, {names[j]}, {names[k]})")
                    return AxiomReport(
                        passed=False, dimension=n, triples_checked=checked,
                        first_violation=(
                            f"Jacobi fails on ({names[i]}, {names[j]}, {names[k]}): jacobiator = {jacobiator}"
                        ),
                        violation_triple=[names[i], names[j], names[k]],
                    )
    return AxiomReport(passed=True, dimension=n, triples_checked=checked)


def _bracket_span(algebra: LieAlgebra, left: Subspace, right: Subspace) -> Subspace:
    left_vectors = left.vectors(algebra.space)
    right_vectors = right.vectors(algebra.space)
    return rref([algebra.bracket(u, v) for u in left_vectors for v in right_vectors], algebra.dim)


def _series(algebra: LieAlgebra, derived: bool) -> CentralSeries:
    whole = Subspace.whole(algebra.dim)
    terms = [whole]
    while not terms[-1].is_zero():
        current = terms[-1]
        following = _bracket_span(algebra, current, current if derived else whole)
        if following == current:
            break
        terms.append(following)
    nilpotent = terms[-1].is_zero()
    return CentralSeries(tuple(terms), nilpotent, len(terms) - 1 if nilpotent else None)


def lower_central_series(algebra: LieAlgebra) -> CentralSeries:
    """L ⊇ [L,L] ⊇ [[L,L],L] ⊇ ... until it stabilizes; the class is the number of steps to 0."""
    series = _series(algebra, derived=False)
    logger.info(f"Lower central series dimensions {series.dimensions}")
    return series


def derived_series(algebra: LieAlgebra) -> CentralSeries:
    """L ⊇ [L,L] ⊇ [[L,L],[L,L]] ⊇ ...; reaching 0 means solvable (the class field is the derived length)."""
    return _series(algebra, derived=True)


class LieContext:
    """Expression context over a Lie algebra: names and brackets only."""

    def __init__(self, algebra: LieAlgebra):
        self.algebra = algebra
        self.names = list(algebra.basis_names)

    def lookup(self, name: str) -> Vector:
        return self.algebra.basis_vector(name)

    def zero(self) -> Vector:
        return self.algebra.space.zero()

    def add(self, a: Vector, b: Vector) -> Vector:
        return a + b

    def scale(self, a: Vector, factor: Any) -> Vector:
        return a.scale(factor)

    def multiply(self, a: Vector, b: Vector) -> Vector:
        raise InputError("Juxtaposition is not defined in a Lie algebra; use brackets")

    def bracket(self, a: Vector, b: Vector) -> Vector:
        return self.algebra.bracket(a, b)


def evaluate(algebra: LieAlgebra, text: str) -> Vector:
    """Evaluate a bracket expression such as ``"[y,[z,[x,a]]]"``."""
    return evaluate_expression(text, LieContext(algebra))


def nested_bracket(algebra: LieAlgebra, names: Sequence[str]) -> Vector:
    """Right-normed bracket [n1,[n2,[...,nk]]]."""
    if not names:
        raise InputError("A nested bracket needs at least one name")
    value = algebra.basis_vector(names[-1])
    for name in reversed(names[:-1]):
        value = algebra.bracket(algebra.basis_vector(name), value)
    return value
