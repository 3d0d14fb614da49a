import pytest
from sympy import QQ

from app.api.schemas import AlgebraFile, RelationsFile
from app.exceptions import InputError
from app.services import lie
from app.services.grading import verify_grading
from app.services.storage import StorageService


@pytest.fixture
def storage():
    return StorageService()


class TestLoad:
    def test_paper_operators_build_L(self, storage, data_dir):
        algebra = storage.load_algebra(data_dir / "paper_operators.json")
        assert algebra.dim == 16
        assert algebra.bracket_names("y", "c1") == algebra.basis_vector("d1")

    def test_lie_closure_only(self, storage, data_dir):
        algebra = storage.load_algebra(data_dir / "single_operator.json")
        assert algebra.basis_names == ("n",)

    def test_structure_constants(self, storage, data_dir):
        algebra = storage.load_algebra(data_dir / "heisenberg.json")
        assert algebra.bracket_names("x", "y") == algebra.basis_vector("z")
        assert lie.check_axioms(algebra).passed

    def test_gradings(self, storage, data_dir):
        heisenberg = storage.load_algebra(data_dir / "heisenberg.json")
        assert verify_grading(storage.load_grading(heisenberg, data_dir / "fine.json")).valid
        bad = storage.load_grading(heisenberg, data_dir / "heisenberg_bad_grading.json")
        assert bad.labels == ("g1", "g2")
        assert not verify_grading(bad).valid

    def test_relations(self, storage, data_dir):
        relations = storage.load_relations(data_dir / "sl2_relations.json")
        assert relations.labels == ("e", "f", "h")
        assert len(relations) == 3
        assert len(storage.load_relations(data_dir / "empty_relations.json")) == 0

    def test_operators(self, storage, data_dir):
        gens = storage.load_operators(data_dir / "paper_operators.json")
        assert gens.names == ["x", "y", "z"]
        with pytest.raises(InputError, match="structure constants"):
            storage.load_operators(data_dir / "heisenberg.json")


class TestRejects:
    def test_missing_file(self, storage, tmp_path):
        with pytest.raises(InputError, match="Cannot read"):
            storage.load_relations(tmp_path / "absent.json")

    def test_invalid_json(self, storage, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(InputError, match="not a valid RelationsFile"):
            storage.load_relations(path)

    def test_both_algebra_forms(self, storage, tmp_path):
        path = tmp_path / "both.json"
        path.write_text('{"basis": ["x"], "space_basis": ["a"], "operators": {}}')
        with pytest.raises(InputError):
            storage.load_algebra(path)

    def test_unknown_field(self, storage, tmp_path):
        path = tmp_path / "extra.json"
        path.write_text('{"labels": ["a"], "triples": [], "colour": "red"}')
        with pytest.raises(InputError):
            storage.load_relations(path)

    def test_vector_of_wrong_length(self, storage, data_dir, tmp_path):
        heisenberg = storage.load_algebra(data_dir / "heisenberg.json")
        path = tmp_path / "short.json"
        path.write_text('{"labels": {"g": [["1", "0"]]}}')
        with pytest.raises(InputError, match="length 2"):
            storage.load_grading(heisenberg, path)

    def test_bad_bracket_key(self, storage, tmp_path):
        path = tmp_path / "key.json"
        path.write_text('{"basis": ["x", "y"], "brackets": {"0-1": [["x", "1"]]}}')
        with pytest.raises(InputError, match="'i,j'"):
            storage.load_algebra(path)

    def test_jacobi_failure(self, storage, tmp_path):
        path = tmp_path / "not_lie.json"
        path.write_text('{"basis": ["x", "y", "z"], "brackets": {"0,1": [["y", "1"]], "1,2": [["x", "1"]]}}')
        with pytest.raises(InputError, match=r"Jacobi fails on \(x, y, z\)"):
            storage.load_algebra(path)

    def test_rational_entries(self, storage, tmp_path):
        path = tmp_path / "half.json"
        path.write_text('{"basis": ["x", "y"], "brackets": {"0,1": [["y", "1/2"]]}}')
        algebra = storage.load_algebra(path)
        assert algebra.bracket_names("x", "y") == algebra.basis_vector("y").scale(QQ(1, 2))


class TestWrite:
    def test_algebra_file_reloads(self, storage, data_dir, tmp_path):
        algebra = storage.load_algebra(data_dir / "paper_operators.json")
        path = tmp_path / "L.json"
        path.write_text(storage.algebra_to_file(algebra).model_dump_json())
        reloaded = storage.load_algebra(path)
        assert reloaded.basis_names == algebra.basis_names
        assert reloaded.brackets == algebra.brackets
        assert reloaded.bracket_names("[x,z]", "a") == -reloaded.basis_vector("c1")

    def test_grading_file_reloads(self, storage, paper_L, tmp_path):
        algebra, grading = paper_L
        path = tmp_path / "grading.json"
        path.write_text(storage.grading_to_file(grading).model_dump_json())
        reloaded = storage.load_grading(algebra, path)
        assert reloaded.labels == grading.labels
        assert reloaded.components == grading.components

    def test_relations_file(self, storage, paper_relations):
        model = storage.relations_to_file(paper_relations)
        assert RelationsFile.model_validate_json(model.model_dump_json()) == model
        assert ("y", "c1", "d1") in model.triples

    def test_save_report_creates_directories(self, storage, tmp_path):
        written = storage.save_report("{}", tmp_path / "out" / "report.json")
        assert (tmp_path / "out" / "report.json").read_text() == "{}\n"
        assert written.endswith("report.json")

    def test_algebra_file_schema(self):
        assert AlgebraFile(basis=["x"]).is_operator_form is False

    def test_json_is_byte_stable(self, storage, data_dir, tmp_path):
        first = storage.algebra_to_file(storage.load_algebra(data_dir / "paper_operators.json")).model_dump_json()
        second = storage.algebra_to_file(storage.load_algebra(data_dir / "paper_operators.json")).model_dump_json()
        assert first == second
        path = tmp_path / "L.json"
        path.write_text(first)
        assert storage.algebra_to_file(storage.load_algebra(path)).model_dump_json() == first
