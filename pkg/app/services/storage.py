"""File storage: JSON input files in, objects out, and reports back to disk."""
from collections import defaultdict
from pathlib import Path
from typing import Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from app.api.schemas import AlgebraFile, GradingFile, RelationsFile
from app.exceptions import InputError
from app.services import lie, operators
from app.services.grading import Grading, RelationSet, fine_grading_from_basis
from app.services.linalg import BasedSpace, LinearMap, Vector, format_scalar, parse_scalar
from app.utils.logger import get_logger

logger = get_logger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)
PathLike = Union[str, Path]


class StorageService:
    """Reads and writes the algebra, grading and relations file formats."""

    def read_model(self, path: PathLike, model: Type[ModelT]) -> ModelT:
        """Parse and validate one JSON file; every failure becomes an InputError naming the file."""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"Cannot read {path}: {e.strerror or e}") from e
        try:
            return model.model_validate_json(text)
        except ValidationError as e:
            problems = "; ".join(
                f"{'.'.join(str(part) for part in error['loc']) or '<root>'}: {error['msg']}"
                for error in e.errors()
            )
            raise InputError(f"{path.name} is not a valid {model.__name__}: {problems}") from e

    # -- algebras -----------------------------------------------------------

    def load_algebra(self, path: PathLike) -> lie.LieAlgebra:
        data = self.read_model(path, AlgebraFile)
        if data.is_operator_form:
            gens = self._operators_of(data)
            g = lie.from_operators(operators.lie_closure(gens))
            if data.construction == "lie-closure":
                return g
            return lie.semidirect_sum(g, gens.space)
        return self._structure_of(data)

    def load_operators(self, path: PathLike) -> operators.OperatorSet:
        data = self.read_model(path, AlgebraFile)
        if not data.is_operator_form:
            raise InputError(f"{Path(path).name} gives structure constants, not operators")
        return self._operators_of(data)

    def _structure_of(self, data: AlgebraFile) -> lie.LieAlgebra:
        space = BasedSpace(tuple(data.basis))
        table: dict[tuple[int, int], Vector] = {}
        for key, terms in (data.brackets or {}).items():
            try:
                i, j = (int(part) for part in key.split(","))
            except ValueError:
                raise InputError(f"Bracket key {key!r} is not of the form 'i,j'") from None
            coefficients: dict[str, object] = defaultdict(int)
            for name, value in terms:
                coefficients[name] += parse_scalar(value)
            table[(i, j)] = space.vector(coefficients)
        algebra = lie.LieAlgebra(space, tuple(table.items()))
        axioms = lie.check_axioms(algebra)
        if not axioms.passed:
            raise InputError(f"Structure constants do not define a Lie algebra: {axioms.first_violation}")
        return algebra

    def _operators_of(self, data: AlgebraFile) -> operators.OperatorSet:
        space = BasedSpace(tuple(data.space_basis))
        maps = {}
        for name, entries in data.operators.items():
            images: dict[str, dict[str, object]] = defaultdict(lambda: defaultdict(int))
            for source, target, value in entries:
                space.index(source)
                images[source][target] += parse_scalar(value)
            maps[name] = LinearMap.from_images(space, images)
        return operators.OperatorSet(space, maps)

    # -- gradings and relations ---------------------------------------------

    def load_grading(self, algebra: lie.LieAlgebra, path: PathLike) -> Grading:
        data = self.read_model(path, GradingFile)
        if data.fine:
            return fine_grading_from_basis(algebra)
        components = {}
        for label, rows in data.labels.items():
            vectors = []
            for row in rows:
                if len(row) != algebra.dim:
                    raise InputError(
                        f"Component {label!r} has a vector of length {len(row)}; the algebra has dimension {algebra.dim}"
                    )
                vectors.append(Vector(algebra.space, tuple(parse_scalar(value) for value in row)))
            components[label] = vectors
        return Grading.from_vectors(algebra, components)

    def load_relations(self, path: PathLike) -> RelationSet:
        data = self.read_model(path, RelationsFile)
        return RelationSet(tuple(data.labels), tuple(tuple(triple) for triple in data.triples))

    # -- serialization --------------------------------------------------------

    def algebra_to_file(self, algebra: lie.LieAlgebra) -> AlgebraFile:
        return AlgebraFile(
            basis=list(algebra.basis_names),
            brackets={
                f"{i},{j}": [(name, format_scalar(c)) for name, c in value.support()]
                for (i, j), value in algebra.brackets
            },
        )

    def grading_to_file(self, grading: Grading) -> GradingFile:
        return GradingFile(labels={
            label: [[format_scalar(c) for c in row] for row in grading.components[label].basis]
            for label in grading.labels
        })

    def relations_to_file(self, relations: RelationSet) -> RelationsFile:
        return RelationsFile(labels=list(relations.labels), triples=[tuple(t) for t in relations])

    def save_report(self, content: str, path: PathLike) -> str:
        """Write a report, creating parent directories; returns the path written."""
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(content if content.endswith("\n") else content + "\n", encoding="utf-8")
        except OSError as e:
            raise InputError(f"Cannot write {path}: {e.strerror or e}") from e
        logger.info(f"Report written to {path}")
        return str(path)


# Global storage service instance
storage_service = StorageService()
