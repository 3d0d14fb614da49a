import pytest

from app.exceptions import CertificateError, ResourceLimitError
from app.services.certificate import (
    CertificateStep,
    CollisionCertificate,
    certificate_to_model,
    peak_chain,
    render_certificate,
    replay,
    shortest_chain,
)
from app.services.exponents import ExponentVector, relations_of
from app.services.grading import RelationSet
from app.services.semigroup import decide

PAPER_TEXT = "d1 = y+c1 = y+z+b1 = y+z+x+a = x+y+z+a = x+y+b3 = x+c3 = d2"
PAPER_BRACKET = "[y,[z,[x,a]]] = d1, while [x,[y,[z,a]]] = d2"


@pytest.fixture(scope="module")
def paper_certificate(paper_relations):
    return decide(paper_relations).certificate


@pytest.fixture
def small_certificate(chain_collision_relations):
    return decide(chain_collision_relations).certificate


class TestPaperCertificate:
    def test_text(self, paper_certificate):
        assert render_certificate(paper_certificate) == PAPER_TEXT

    def test_bracket(self, paper_certificate):
        assert render_certificate(paper_certificate, "bracket") == PAPER_BRACKET

    def test_steps(self, paper_certificate):
        cited = [(tuple(step.relation.provenance), step.direction) for step in paper_certificate.steps]
        assert cited == [
            (("y", "c1", "d1"), "backward"),
            (("z", "b1", "c1"), "backward"),
            (("x", "a", "b1"), "backward"),
            (("z", "a", "b3"), "forward"),
            (("y", "b3", "c3"), "forward"),
            (("x", "c3", "d2"), "forward"),
        ]
        assert paper_certificate.max_degree == 4

    def test_model(self, paper_certificate):
        model = certificate_to_model(paper_certificate)
        assert model.labels == ("d1", "d2")
        assert model.chain[3] == "x+y+z+a"
        assert len(model.steps) == 6


class TestSmallCertificate:
    def test_text(self, small_certificate):
        assert render_certificate(small_certificate) == "d = b+b = a+a+b = a+c = e"

    def test_bracket(self, small_certificate):
        assert render_certificate(small_certificate, "bracket") == "[[a,a],b] = d, while [a,[a,b]] = e"

    def test_unknown_style(self, small_certificate):
        with pytest.raises(CertificateError, match="Unknown certificate style"):
            render_certificate(small_certificate, "latex")


def _valley():
    """e = c+d = a+b+d = a+f = f+g+g = b+g = d: climbs, descends, climbs again."""
    labels = ("a", "b", "c", "d", "e", "f", "g")
    r = relations_of(RelationSet(labels, (
        ("a", "b", "c"), ("c", "d", "e"), ("b", "d", "f"), ("g", "g", "a"), ("f", "g", "b"), ("b", "g", "d"),
    )))
    chain = tuple(ExponentVector.of(labels, names) for names in (
        "e", "cd", "abd", "af", "fgg", "bg", "d",
    ))
    steps = (
        CertificateStep(r[1], False),
        CertificateStep(r[0], False),
        CertificateStep(r[2], True),
        CertificateStep(r[3], False),
        CertificateStep(r[4], True),
        CertificateStep(r[5], True),
    )
    return CollisionCertificate("e", "d", labels, chain, steps), r


class TestRendering:
    def test_text_falls_back_to_plain_chain(self):
        certificate, _ = _valley()
        assert render_certificate(certificate) == "e = c+d = a+b+d = a+f = f+g+g = b+g = d"

    def test_bracket_needs_single_peak(self):
        certificate, _ = _valley()
        with pytest.raises(CertificateError, match="climbs"):
            render_certificate(certificate, "bracket")


class TestReplay:
    def test_valid_chain(self):
        certificate, relations = _valley()
        replay(certificate, relations)

    def test_broken_link(self):
        certificate, _ = _valley()
        chain = list(certificate.chain)
        chain[3] = ExponentVector.of(certificate.labels, "ag")
        broken = CollisionCertificate("e", "d", certificate.labels, tuple(chain), certificate.steps)
        with pytest.raises(CertificateError, match="Step 3"):
            replay(broken)

    def test_wrong_endpoint(self):
        certificate, _ = _valley()
        moved = CollisionCertificate("e", "f", certificate.labels, certificate.chain, certificate.steps)
        with pytest.raises(CertificateError, match="does not end"):
            replay(moved)

    def test_same_label(self):
        certificate, _ = _valley()
        same = CollisionCertificate("e", "e", certificate.labels, certificate.chain, certificate.steps)
        with pytest.raises(CertificateError, match="distinct"):
            replay(same)

    def test_foreign_relation(self):
        certificate, relations = _valley()
        with pytest.raises(CertificateError, match="not an input relation"):
            replay(certificate, relations[:5])

    def test_length_mismatch(self):
        certificate, _ = _valley()
        with pytest.raises(CertificateError):
            CollisionCertificate("e", "d", certificate.labels, certificate.chain, certificate.steps[:-1])


class TestShortestChain:
    def test_finds_short_route(self, chain_collision_relations):
        labels = chain_collision_relations.labels
        relations = relations_of(chain_collision_relations)
        vectors, steps = shortest_chain(
            ExponentVector.unit(labels, "d"), ExponentVector.unit(labels, "e"), relations, 3, 1000,
        )
        assert [str(v) for v in vectors] == ["d", "b+b", "a+a+b", "a+c", "e"]
        assert len(steps) == 4

    def test_degree_bound_disconnects(self, chain_collision_relations):
        labels = chain_collision_relations.labels
        relations = relations_of(chain_collision_relations)
        found = shortest_chain(
            ExponentVector.unit(labels, "d"), ExponentVector.unit(labels, "e"), relations, 2, 1000,
        )
        assert found is None


class TestPeakChain:
    def test_paper_peak_is_x_y_z_a(self, paper_relations):
        labels = paper_relations.labels
        vectors, steps = peak_chain(
            ExponentVector.unit(labels, "d1"), ExponentVector.unit(labels, "d2"),
            relations_of(paper_relations), 6, 10_000,
        )
        assert [str(v) for v in vectors] == ["d1", "y+c1", "y+z+b1", "x+y+z+a", "x+y+b3", "x+c3", "d2"]
        assert [step.forward for step in steps] == [False, False, False, True, True, True]

    def test_no_peak_below_degree_four(self, paper_relations):
        labels = paper_relations.labels
        found = peak_chain(
            ExponentVector.unit(labels, "d1"), ExponentVector.unit(labels, "d2"),
            relations_of(paper_relations), 3, 10_000,
        )
        assert found is None

    def test_small_case_peak(self, chain_collision_relations):
        labels = chain_collision_relations.labels
        vectors, _ = peak_chain(
            ExponentVector.unit(labels, "d"), ExponentVector.unit(labels, "e"),
            relations_of(chain_collision_relations), 6, 1000,
        )
        assert [str(v) for v in vectors] == ["d", "b+b", "a+a+b", "a+c", "e"]

    def test_low_certificate_degree_falls_back(self, paper_relations):
        certificate = decide(paper_relations, certificate_degree=3).certificate
        replay(certificate, relations_of(paper_relations))
        assert certificate.max_degree == 3
        peak = ExponentVector.of(paper_relations.labels, ("x", "y", "z", "a"))
        assert not certificate.passes_through(peak)
        with pytest.raises(CertificateError, match="climbs"):
            render_certificate(certificate, "bracket")

    def test_vector_cap(self, paper_relations):
        labels = paper_relations.labels
        with pytest.raises(ResourceLimitError):
            peak_chain(
                ExponentVector.unit(labels, "d1"), ExponentVector.unit(labels, "d2"),
                relations_of(paper_relations), 6, 5,
            )
