import random
from fractions import Fraction

import pytest

from artifact.arrangement import (Arrangement, ArrangementError, collinear, derived_arrangements,
                                  double_dual_contains, dual_arrangement, dual_cones, enumerate_faces,
                                  incidence_sign, intersection_poset, is_polarization, make_flat,
                                  monotone_cones_check, named_arrangement, relative_sign)
from corpus import NAMES, five_planes
from oracles import brute_faces, segment_meets

PROFILES = {"A1": [1, 2], "A2": [1, 4, 4], "A3": [1, 6, 6], "Braid3": [0, 1, 6, 6]}


@pytest.mark.parametrize("name,count", [("A1", 3), ("A2", 9), ("A3", 13), ("Braid3", 13)])
def test_face_counts_and_profiles(name, count):
    poset = enumerate_faces(named_arrangement(name))
    assert len(poset) == count
    profile = [0] * (poset.arrangement.dim + 1)
    for f in poset.faces:
        profile[f.dim] += 1
    assert profile == PROFILES[name]


@pytest.mark.parametrize("arr", [named_arrangement(n) for n in NAMES] + [five_planes()])
def test_euler_relation_and_diamonds(arr):
    poset = enumerate_faces(arr)
    assert poset.euler_sum() == (-1) ** arr.dim
    ok, bad = poset.diamond_check()
    assert ok, bad


def random_arrangements(count, seed=5):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        dim = rng.randint(1, 3)
        rows = [[rng.randint(-2, 2) for _ in range(dim)] for _ in range(rng.randint(1, 5))]
        try:
            out.append(Arrangement.from_rows(dim, rows))
        except ArrangementError:
            continue
    return out


@pytest.mark.parametrize("arr", [named_arrangement(n) for n in NAMES] + random_arrangements(12))
def test_faces_match_brute_force_oracle(arr):
    poset = enumerate_faces(arr)
    got = {f.signs: f.dim for f in poset.faces}
    assert got == brute_faces(arr.dim, [list(h) for h in arr.hyperplanes])


def test_interior_points_realize_signs():
    poset = enumerate_faces(five_planes())
    for f in poset.faces:
        assert poset.arrangement.signs_of(f.interior_point) == f.signs


def test_rejects_bad_arrangements():
    with pytest.raises(ArrangementError):
        Arrangement.from_rows(2, [[0, 0]])
    with pytest.raises(ArrangementError):
        Arrangement.from_rows(2, [[1, 1], [2, 2]])
    with pytest.raises(ArrangementError):
        Arrangement.from_rows(2, [[1, 1, 1]])


def test_incidence_sign_requires_cover():
    poset = enumerate_faces(named_arrangement("A2"))
    with pytest.raises(ArrangementError):
        incidence_sign(poset, poset.face_id("00"), poset.face_id("++"))
    s1 = incidence_sign(poset, poset.face_id("0"*2), poset.face_id("+0"))
    assert s1 in (1, -1)


@pytest.mark.parametrize("name,count", [("A1", 2), ("A2", 4), ("A3", 5), ("Braid3", 5)])
def test_flat_counts(name, count):
    assert len(intersection_poset(named_arrangement(name))) == count


def test_duals_and_reflexivity():
    assert dual_arrangement(named_arrangement("A1")).size == 1
    assert dual_arrangement(named_arrangement("A2")).size == 2
    a3 = named_arrangement("A3")
    assert dual_arrangement(a3).size == 3
    assert dual_arrangement(dual_arrangement(a3)).size == 3
    for n in ["A1", "A2", "A3", "Generic4"]:
        assert double_dual_contains(named_arrangement(n))


def test_dual_cones_examples():
    a1 = named_arrangement("A1")
    p1, d1 = enumerate_faces(a1), enumerate_faces(dual_arrangement(a1))
    u, v = dual_cones(p1, d1, d1.face_id("+"))
    assert u.face_ids == v.face_ids == {p1.face_id("0"), p1.face_id("+")}
    u, v = dual_cones(p1, d1, d1.minimal)
    assert v.face_ids == {p1.minimal}
    a2 = named_arrangement("A2")
    p2, d2 = enumerate_faces(a2), enumerate_faces(dual_arrangement(a2))
    # dual hyperplanes are listed as (y, x); f = x is the dual face "0+"
    xray = d2.face_id("0+")
    assert d2.faces[xray].interior_point[0] > 0
    u, v = dual_cones(p2, d2, xray)
    # closed half-plane x >= 0: origin, both y-rays, positive x-ray, two quadrants
    assert {p2.faces[i].label for i in u.face_ids} == {"00", "0-", "0+", "+0", "+-", "++"}
    assert {p2.faces[i].label for i in v.face_ids} == {"00", "+0"}


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "Generic4"])
def test_monotone_cones(name):
    arr = named_arrangement(name)
    assert monotone_cones_check(enumerate_faces(arr), enumerate_faces(dual_arrangement(arr)))


def test_polarization_examples():
    a1, a2 = named_arrangement("A1"), named_arrangement("A2")
    assert is_polarization(a1, make_flat(a1, [0]), [1])
    origin = make_flat(a2, [0, 1])
    assert not is_polarization(a2, origin, [1, 0])
    assert is_polarization(a2, origin, [1, 1])
    with pytest.raises(ArrangementError):
        is_polarization(a2, make_flat(a2, [1]), [1, 0])


def test_specialization_of_a3_along_x_axis():
    arr = named_arrangement("A3")
    spec = derived_arrangements(arr, make_flat(arr, [1]))
    p, pp = spec.poset, spec.product_poset
    assert len(pp) == 9
    assert pp.faces[spec.face_map[p.face_id("++-")]].label == "0+"
    assert pp.faces[spec.face_map[p.face_id("+++")]].label == "++"
    assert sorted(set(spec.face_map)) == list(range(len(pp)))
    for a, b in p.covers:
        assert pp.leq(spec.face_map[a], spec.face_map[b])


@pytest.mark.parametrize("hyps", [[], [0, 1]])
def test_trivial_specializations_are_identity(hyps):
    arr = named_arrangement("A2")
    spec = derived_arrangements(arr, make_flat(arr, hyps))
    labels = [spec.product_poset.faces[spec.face_map[a]].label for a in range(len(spec.poset))]
    assert labels == spec.poset.labels()


def test_relative_sign_on_bijective_face_map():
    arr = named_arrangement("A2")
    spec = derived_arrangements(arr, make_flat(arr, [1]))
    for a, a2 in spec.poset.covers:
        assert relative_sign(spec, a, a2) in (1, -1)


@pytest.mark.parametrize("arr", [named_arrangement("A3"), named_arrangement("Generic4"),
                                 named_arrangement("Braid3")])
def test_collinearity_matches_endpoint_oracle(arr):
    poset = enumerate_faces(arr)
    rng = random.Random(2)
    nf = len(poset)
    hyps = [list(h) for h in arr.hyperplanes]
    triples = [(rng.randrange(nf), rng.randrange(nf), rng.randrange(nf)) for _ in range(400)]
    for a, b, c in triples:
        sa, sb, sc = (poset.faces[i].signs for i in (a, b, c))
        assert collinear(poset, a, b, c) == segment_meets(arr.dim, hyps, sa, sb, sc)


def test_json_roundtrip_and_digest():
    arr = named_arrangement("Generic4")
    again = Arrangement.from_json(arr.to_json())
    assert again == arr and again.digest() == arr.digest()
    assert Arrangement.from_rows(1, [[Fraction(1, 2)]]).hyperplanes == ((Fraction(1, 2),),)
