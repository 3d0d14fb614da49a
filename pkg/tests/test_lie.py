import pytest

from app.exceptions import ClosureError, InputError
from app.services import lie, operators
from app.services.linalg import BasedSpace, LinearMap


@pytest.fixture
def heisenberg():
    return lie.LieAlgebra.from_structure_constants(("x", "y", "z"), {("x", "y"): {"z": 1}})


@pytest.fixture
def sl2():
    return lie.LieAlgebra.from_structure_constants(
        ("e", "f", "h"),
        {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}},
    )


class TestBrackets:
    def test_antisymmetry_from_table(self, heisenberg):
        z = heisenberg.basis_vector("z")
        assert heisenberg.bracket_names("x", "y") == z
        assert heisenberg.bracket_names("y", "x") == -z
        assert heisenberg.bracket_names("x", "x").is_zero()

    def test_reversed_orientation_is_negated(self, sl2):
        assert sl2.bracket_names("e", "h") == sl2.basis_vector("e").scale(-2)

    def test_duplicate_bracket_rejected(self):
        with pytest.raises(InputError, match="given twice"):
            lie.LieAlgebra.from_structure_constants(("x", "y"), {("x", "y"): {"x": 1}, ("y", "x"): {"x": 1}})

    def test_self_bracket_rejected(self):
        with pytest.raises(InputError):
            lie.LieAlgebra.from_structure_constants(("x",), {("x", "x"): {"x": 1}})

    def test_bad_key_rejected(self):
        space = BasedSpace(("x", "y"))
        with pytest.raises(InputError):
            lie.LieAlgebra(space, (((1, 0), space.basis_vector("x")),))


class TestAxioms:
    def test_valid_algebras(self, heisenberg, sl2):
        assert lie.check_axioms(heisenberg).passed
        report = lie.check_axioms(sl2)
        assert report.passed
        assert report.triples_checked == 27

    def test_jacobi_failure_is_located(self):
        # [x,y]=y, [y,z]=x, [x,z]=0 is not a Lie algebra
        broken = lie.LieAlgebra.from_structure_constants(
            ("x", "y", "z"), {("x", "y"): {"y": 1}, ("y", "z"): {"x": 1}},
        )
        report = lie.check_axioms(broken)
        assert not report.passed
        assert "Jacobi" in report.first_violation
        assert len(report.violation_triple) == 3


class TestSeries:
    def test_heisenberg_is_nilpotent_of_class_two(self, heisenberg):
        series = lie.lower_central_series(heisenberg)
        assert series.nilpotent
        assert series.dimensions == [3, 1, 0]
        assert series.nilpotency_class == 2

    def test_sl2_is_perfect(self, sl2):
        series = lie.lower_central_series(sl2)
        assert not series.nilpotent
        assert series.dimensions == [3]
        assert not lie.derived_series(sl2).nilpotent

    def test_heisenberg_is_solvable(self, heisenberg):
        assert lie.derived_series(heisenberg).dimensions == [3, 1, 0]


class TestOperatorAlgebras:
    def test_from_operators_words(self, paper_operators):
        g = lie.from_operators(operators.lie_closure(paper_operators))
        assert g.basis_names == ("x", "y", "z", "[x,y]", "[x,z]", "[y,z]", "[[y,z],x]")
        assert g.bracket_names("[y,z]", "x") == g.basis_vector("[[y,z],x]")
        assert g.bracket_names("[x,y]", "z").is_zero()
        assert lie.check_axioms(g).passed
        assert lie.lower_central_series(g).nilpotent

    def test_span_not_closed(self):
        space = BasedSpace(("p", "q"))
        e = LinearMap.from_images(space, {"q": {"p": 1}})
        f = LinearMap.from_images(space, {"p": {"q": 1}})
        span = operators.AlgebraSpan(space, "lie", ("e", "f"), (e, f), None)
        with pytest.raises(ClosureError, match="leaves the span"):
            lie.from_operators(span)

    def test_semidirect_sum(self, paper_L):
        algebra, _ = paper_L
        assert algebra.dim == 16
        assert algebra.basis_names[:7] == ("x", "y", "z", "[x,y]", "[x,z]", "[y,z]", "[[y,z],x]")
        assert algebra.bracket_names("x", "a") == algebra.basis_vector("b1")
        assert algebra.bracket_names("[x,z]", "a") == -algebra.basis_vector("c1")
        assert algebra.bracket_names("a", "b1").is_zero()
        assert lie.check_axioms(algebra).passed
        assert lie.lower_central_series(algebra).nilpotent

    def test_semidirect_sum_needs_realization(self, heisenberg):
        with pytest.raises(InputError, match="realization"):
            lie.semidirect_sum(heisenberg, BasedSpace(("v",)))


class TestEvaluation:
    @pytest.mark.parametrize("expression, target", [("[y,[z,[x,a]]]", "d1"), ("[x,[y,[z,a]]]", "d2")])
    def test_nested_brackets_land_on_d(self, paper_L, expression, target):
        algebra, _ = paper_L
        assert lie.evaluate(algebra, expression) == algebra.basis_vector(target)

    def test_nested_bracket_helper(self, paper_L):
        algebra, _ = paper_L
        assert lie.nested_bracket(algebra, ["y", "z", "x", "a"]) == algebra.basis_vector("d1")
        assert lie.nested_bracket(algebra, ["x", "y", "z", "a"]) == algebra.basis_vector("d2")
        with pytest.raises(InputError):
            lie.nested_bracket(algebra, [])


class TestPaperLieAlgebra:
    @pytest.fixture
    def g(self, paper_operators):
        return lie.from_operators(operators.lie_closure(paper_operators))

    def test_g_has_nilpotency_class_three(self, g):
        series = lie.lower_central_series(g)
        assert series.dimensions == [7, 4, 1, 0]
        assert series.nilpotency_class == 3

    def test_semidirect_sum_restricts_to_g(self, g, paper_L):
        algebra, _ = paper_L
        for left in g.basis_names:
            for right in g.basis_names:
                value = algebra.bracket_names(left, right)
                assert value.coords[:g.dim] == g.bracket_names(left, right).coords
                assert not any(value.coords[g.dim:])
