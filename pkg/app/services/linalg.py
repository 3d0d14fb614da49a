"""Exact rational linear algebra over named bases.

Scalars are elements of sympy's ``QQ`` domain; matrices are handed to
``DomainMatrix`` for products and row reduction, so nothing here ever rounds.
Subspaces are kept in reduced row-echelon form, which makes subspace equality
plain tuple equality.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Optional, Sequence

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from app.exceptions import InputError

# An element of QQ (PythonMPQ, or gmpy2.mpq when gmpy2 is installed).
Scalar = Any

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_scalar(text: str | int) -> Scalar:
    """Parse ``"1"``, ``"-3/2"`` (a unicode minus is accepted) or an int exactly."""
    if isinstance(text, bool):
        raise InputError(f"Not a rational number: {text!r}")
    if isinstance(text, int):
        return QQ(text)
    match = _RATIONAL.match(str(text).replace("−", "-"))
    if not match:
        raise InputError(f"Not a rational number: {text!r}")
    denominator = int(match.group(2) or 1)
    if denominator == 0:
        raise InputError(f"Zero denominator in {text!r}")
    return QQ(int(match.group(1)), denominator)


def format_scalar(value: Scalar) -> str:
    """Render a rational as ``"n"`` or ``"n/d"``."""
    value = QQ.convert(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _coerce(coords: Iterable[Any]) -> tuple[Scalar, ...]:
    return tuple(QQ.convert(c) for c in coords)


@dataclass(frozen=True)
class BasedSpace:
    """A finite-dimensional space with an ordered basis of distinct names."""

    basis_names: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = tuple(self.basis_names)
        for name in names:
            if not isinstance(name, str) or not name:
                raise InputError(f"Basis names must be non-empty strings, got {name!r}")
        if len(set(names)) != len(names):
            duplicates = sorted({n for n in names if names.count(n) > 1})
            raise InputError(f"Duplicate basis names: {duplicates}")
        object.__setattr__(self, "basis_names", names)
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(names)})

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"Unknown basis name {name!r}") from None

    def zero(self) -> "Vector":
        return Vector(self, (QQ.zero,) * self.dim)

    def basis_vector(self, name: str) -> "Vector":
        coords = [QQ.zero] * self.dim
        coords[self.index(name)] = QQ.one
        return Vector(self, tuple(coords))

    def vector(self, terms: Mapping[str, Any]) -> "Vector":
        """Build a vector from ``{basis name: coefficient}``."""
        coords = [QQ.zero] * self.dim
        for name, coefficient in terms.items():
            coords[self.index(name)] += QQ.convert(coefficient)
        return Vector(self, tuple(coords))


@dataclass(frozen=True)
class Vector:
    """Coordinates of an element of a BasedSpace."""

    space: BasedSpace
    coords: tuple[Scalar, ...]

    def __post_init__(self):
        coords = _coerce(self.coords)
        if len(coords) != self.space.dim:
            raise InputError(
                f"Vector has {len(coords)} coordinates but the space has dimension {self.space.dim}"
            )
        object.__setattr__(self, "coords", coords)

    def _check(self, other: "Vector") -> None:
        if other.space != self.space:
            raise InputError("Vectors live in different spaces")

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(self.space, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(self.space, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Vector":
        return Vector(self.space, tuple(-a for a in self.coords))

    def scale(self, factor: Any) -> "Vector":
        factor = QQ.convert(factor)
        return Vector(self.space, tuple(factor * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def coefficient(self, name: str) -> Scalar:
        return self.coords[self.space.index(name)]

    def support(self) -> list[tuple[str, Scalar]]:
        """Nonzero (name, coefficient) pairs in basis order."""
        return [(n, c) for n, c in zip(self.space.basis_names, self.coords) if c]

    def __str__(self) -> str:
        terms = self.support()
        if not terms:
            return "0"
        parts = []
        for name, coefficient in terms:
            if coefficient == 1:
                text = name
            elif coefficient == -1:
                text = f"-{name}"
            else:
                text = f"{format_scalar(coefficient)}*{name}"
            if parts:
                text = f"- {text[1:]}" if text.startswith("-") else f"+ {text}"
            parts.append(text)
        return " ".join(parts)


@dataclass(frozen=True)
class LinearMap:
    """An endomorphism of a BasedSpace; column j of ``rows`` is the image of basis vector j."""

    space: BasedSpace
    rows: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        n = self.space.dim
        rows = tuple(_coerce(row) for row in self.rows)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise InputError(f"A linear map on a {n}-dimensional space needs a {n}x{n} matrix")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def zero(cls, space: BasedSpace) -> "LinearMap":
        return cls(space, ((QQ.zero,) * space.dim,) * space.dim)

    @classmethod
    def identity(cls, space: BasedSpace) -> "LinearMap":
        return cls.from_matrix(space, DomainMatrix.eye(space.dim, QQ))

    @classmethod
    def from_images(cls, space: BasedSpace, images: Mapping[str, Vector | Mapping[str, Any]]) -> "LinearMap":
        """Build a map from ``{source name: image}``; unnamed basis vectors go to zero."""
        columns = [[QQ.zero] * space.dim for _ in range(space.dim)]
        for source, image in images.items():
            if not isinstance(image, Vector):
                image = space.vector(image)
            elif image.space != space:
                raise InputError(f"Image of {source!r} lives in another space")
            columns[space.index(source)] = list(image.coords)
        rows = tuple(tuple(columns[j][i] for j in range(space.dim)) for i in range(space.dim))
        return cls(space, rows)

    @classmethod
    def from_matrix(cls, space: BasedSpace, matrix: DomainMatrix) -> "LinearMap":
        return cls(space, tuple(tuple(row) for row in matrix.to_list()))

    @classmethod
    def from_flat(cls, space: BasedSpace, coords: Sequence[Any]) -> "LinearMap":
        n = space.dim
        if len(coords) != n * n:
            raise InputError(f"Expected {n * n} flattened coordinates, got {len(coords)}")
        return cls(space, tuple(tuple(coords[i * n:(i + 1) * n]) for i in range(n)))

    @cached_property
    def matrix(self) -> DomainMatrix:
        n = self.space.dim
        return DomainMatrix([list(row) for row in self.rows], (n, n), QQ)

    def flatten(self) -> tuple[Scalar, ...]:
        """Row-major coordinates, the representation used for spans of maps."""
        return tuple(c for row in self.rows for c in row)

    def image(self, name: str) -> Vector:
        j = self.space.index(name)
        return Vector(self.space, tuple(row[j] for row in self.rows))

    def apply(self, vector: Vector) -> Vector:
        if vector.space != self.space:
            raise InputError("Vector and map live in different spaces")
        return Vector(
            self.space,
            tuple(sum((a * b for a, b in zip(row, vector.coords)), QQ.zero) for row in self.rows),
        )

    def _check(self, other: "LinearMap") -> None:
        if other.space != self.space:
            raise InputError("Linear maps act on different spaces")

    def __add__(self, other: "LinearMap") -> "LinearMap":
        self._check(other)
        return LinearMap.from_matrix(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        self._check(other)
        return LinearMap.from_matrix(self.space, self.matrix - other.matrix)

    def __neg__(self) -> "LinearMap":
        return LinearMap(self.space, tuple(tuple(-c for c in row) for row in self.rows))

    def scale(self, factor: Any) -> "LinearMap":
        factor = QQ.convert(factor)
        return LinearMap(self.space, tuple(tuple(factor * c for c in row) for row in self.rows))

    def is_zero(self) -> bool:
        return not any(self.flatten())


@dataclass(frozen=True)
class Subspace:
    """A subspace of QQ^n held as its reduced row-echelon basis."""

    ambient_dim: int
    basis: tuple[tuple[Scalar, ...], ...]
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def vectors(self, space: BasedSpace) -> list[Vector]:
        return [Vector(space, row) for row in self.basis]

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, (), ())

    @classmethod
    def whole(cls, ambient_dim: int) -> "Subspace":
        return rref(DomainMatrix.eye(ambient_dim, QQ).to_list(), ambient_dim)


def _as_coords(v: Vector | LinearMap | Sequence[Any]) -> tuple[Scalar, ...]:
    if isinstance(v, Vector):
        return v.coords
    if isinstance(v, LinearMap):
        return v.flatten()
    return _coerce(v)


def rref(rows: Iterable[Vector | LinearMap | Sequence[Any]], ambient_dim: Optional[int] = None) -> Subspace:
    """Reduced row-echelon basis of the span of ``rows``.

    ``ambient_dim`` is required when ``rows`` may be empty.
    """
    rows = [_as_coords(row) for row in rows]
    widths = {len(row) for row in rows}
    if ambient_dim is not None:
        widths.add(ambient_dim)
    if len(widths) > 1:
        raise InputError(f"Rows of different lengths: {sorted(widths)}")
    if not widths:
        raise InputError("Cannot infer the ambient dimension of an empty row list")
    width = widths.pop()
    if not rows or width == 0:
        return Subspace.zero(width)

    reduced, pivots = DomainMatrix([list(row) for row in rows], (len(rows), width), QQ).rref()
    echelon = reduced.to_list()[:len(pivots)]
    return Subspace(width, tuple(tuple(row) for row in echelon), tuple(pivots))


def contains(subspace: Subspace, v: Vector | LinearMap | Sequence[Any]) -> bool:
    """True iff ``v`` lies in ``subspace``.

    In reduced echelon form the only candidate combination is
    sum(v[p] * row_p) over the pivots, so membership is an equality test.
    """
    coords = _as_coords(v)
    if len(coords) != subspace.ambient_dim:
        raise InputError(
            f"Vector of length {len(coords)} tested against a subspace of QQ^{subspace.ambient_dim}"
        )
    combination = [QQ.zero] * subspace.ambient_dim
    for row, pivot in zip(subspace.basis, subspace.pivots):
        weight = coords[pivot]
        if weight:
            for i, entry in enumerate(row):
                if entry:
                    combination[i] += weight * entry
    return tuple(combination) == coords


def is_subspace(inner: Subspace, outer: Subspace) -> bool:
    return all(contains(outer, row) for row in inner.basis)


def span_sum(parts: Sequence[Subspace], ambient_dim: Optional[int] = None) -> Subspace:
    if ambient_dim is None and parts:
        ambient_dim = parts[0].ambient_dim
    return rref([row for part in parts for row in part.basis], ambient_dim)


def direct_sum_check(parts: Sequence[Subspace], whole: Subspace) -> bool:
    """True iff the parts are independent and together span exactly ``whole``."""
    for part in parts:
        if part.ambient_dim != whole.ambient_dim:
            raise InputError("Subspaces of different ambient spaces in a direct sum")
    if sum(part.dim for part in parts) != whole.dim:
        return False
    return span_sum(parts, whole.ambient_dim) == whole


def express(basis: Sequence[Sequence[Any]], v: Sequence[Any]) -> Optional[tuple[Scalar, ...]]:
    """Coordinates of ``v`` in an independent (not necessarily echelon) basis.

    Returns None when ``v`` is outside the span.
    """
    k = len(basis)
    coords = _coerce(v)
    n = len(coords)
    if any(len(b) != n for b in basis):
        raise InputError("Basis vectors and target have different lengths")
    if k == 0:
        return () if not any(coords) else None
    augmented = [[QQ.convert(basis[j][i]) for j in range(k)] + [coords[i]] for i in range(n)]
    reduced, pivots = DomainMatrix(augmented, (n, k + 1), QQ).rref()
    if k in pivots:
        return None
    if len(pivots) != k:
        raise InputError("Basis vectors are linearly dependent")
    table = reduced.to_list()
    solution = [QQ.zero] * k
    for row_index, pivot in enumerate(pivots):
        solution[pivot] = table[row_index][k]
    return tuple(solution)
