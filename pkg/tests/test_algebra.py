import json

import pytest

from gentlecones.algebra import (AlgebraError, EndpointMismatch, FanOutExceeded, GentlenessViolation,
                                 InfiniteDimensional, NonComposableRelation, UnknownVertex,
                                 algebra_from_dict, load_algebra, validate_gentle)


def test_kronecker_paths(kron):
    a, c = kron.path("a"), kron.path("c")
    assert kron.compose(a, c) is None  # ac = 0
    ad = kron.compose(a, kron.path("d"))
    assert ad is not None and str(ad) == "a*d"
    assert ad.start == "3" and ad.end == "2"
    assert kron.is_zero(kron.path("b*d"))
    assert not kron.is_zero(kron.path("b*c"))


def test_compose_endpoint_check(kron):
    with pytest.raises(EndpointMismatch):
        kron.compose(kron.path("c"), kron.path("a"))
    assert kron.mul(kron.path("c"), kron.path("a")) is None


def test_hom_basis_counts(kron):
    # Hom(P_2, P_3) is spanned by paths 3 -> 2 that are nonzero: a*d, b*c
    assert sorted(map(str, kron.hom_basis("2", "3"))) == ["a*d", "b*c"]
    assert len(kron.projective_basis("3")) == 5  # e3, c, d, a*d, b*c
    with pytest.raises(UnknownVertex):
        kron.projective_basis("9")


def test_five_vertex_relations(five):
    assert five.compose(five.path("d"), five.path("a")) is None
    assert str(five.compose(five.path("d"), five.path("b"))) == "d*b"
    assert len(five.vertices) == 4


@pytest.mark.parametrize("arrows,relations,err", [
    ([("a", "1", "2"), ("b", "2", "3"), ("c", "2", "3")], [], GentlenessViolation),
    ([("a", "1", "2"), ("b", "2", "1")], [], InfiniteDimensional),
    ([("a", "1", "2"), ("b", "3", "4")], [("b", "a")], NonComposableRelation),
    ([("a", "1", "9")], [], UnknownVertex),
])
def test_rejects_bad_presentations(arrows, relations, err):
    vertices = ["1", "2", "3", "4"]
    with pytest.raises(err) as info:
        validate_gentle(vertices, arrows, relations)
    assert isinstance(info.value, AlgebraError)
    assert info.value.violations


def test_fan_out():
    arrows = [("a", "1", "2"), ("b", "1", "3"), ("c", "1", "4")]
    with pytest.raises((FanOutExceeded, GentlenessViolation)):
        validate_gentle(["1", "2", "3", "4"], arrows)


def test_cycle_with_relation_is_fine():
    A = validate_gentle(["1", "2"], [("a", "1", "2"), ("b", "2", "1")], [("a", "b"), ("b", "a")])
    assert len(A.all_paths) == 4


def test_json_round_trip(tmp_path, kron):
    p = tmp_path / "k.json"
    p.write_text(json.dumps(kron.to_dict()))
    assert load_algebra(p) == kron
    assert algebra_from_dict(kron.to_dict()).relations == kron.relations
