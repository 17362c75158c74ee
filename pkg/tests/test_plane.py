import random
from fractions import Fraction

import pytest

from topoconn.parser import parse
from topoconn.plane import (
    ArrangementMismatchError,
    PlaneScene,
    Polygon,
    Rcc8Relation,
    Ring,
    SceneError,
    UnboundRegionError,
    build_arrangement,
    component_graph,
    fs_complement,
    fs_components,
    fs_connected,
    fs_contact,
    fs_interior_connected,
    fs_product,
    fs_sum,
    induced_quasisaw,
    is_tree,
    plane_check,
    plane_eval,
    rcc8,
    rect,
    scene_from_json,
    scene_to_json,
)
from topoconn.quasisaw import check as qs_check
from topoconn.render import to_svg
from topoconn.syntax import to_source

from conftest import onion_partition, random_rect_scene


EQ1 = parse(
    "ci(r1)&r1!=0&ci(r2)&r2!=0&ci(r3)&r3!=0&"
    "ci(r1+r2)&r1.r2=0&ci(r1+r3)&r1.r3=0&ci(r2+r3)&r2.r3=0"
)


@pytest.fixture
def three_squares():
    return PlaneScene.make(
        {
            "r1": [rect(0, 0, 1, 1)],
            "r2": [rect(1, 0, 2, 1)],
            "r3": [rect(0, 1, 2, 2)],
        }
    )


def test_edge_sharing_squares_counts():
    scene = PlaneScene.make({"r1": [rect(0, 0, 1, 1)], "r2": [rect(1, 0, 2, 1)]})
    arr = build_arrangement(scene)
    assert sum(1 for f in arr.faces if f.bounded) == 2
    assert sum(1 for f in arr.faces if not f.bounded) == 1
    assert len(arr.edges) == 7


def test_single_square():
    arr = build_arrangement(PlaneScene.make({"r": [rect(0, 0, 1, 1)]}))
    assert sum(1 for f in arr.faces if f.bounded) == 1


def test_overlapping_squares():
    scene = PlaneScene.make({"r1": [rect(0, 0, 2, 2)], "r2": [rect(1, 1, 3, 3)]})
    arr = build_arrangement(scene)
    assert sum(1 for f in arr.faces if f.bounded) == 3
    prod = fs_product(arr.region_sets["r1"], arr.region_sets["r2"])
    assert len(prod.faces) == 1
    rep = arr.faces[next(iter(prod.faces))].rep
    assert 1 < rep[0] < 2 and 1 < rep[1] < 2


def test_degenerate_rings_rejected():
    with pytest.raises(SceneError):
        build_arrangement(
            PlaneScene.make({"r": [Polygon(Ring(((0, 0), (1, 0), (2, 0))))]})
        )
    bow = Ring(((0, 0), (2, 2), (2, 0), (0, 2)))
    with pytest.raises(SceneError):
        build_arrangement(PlaneScene.make({"r": [Polygon(bow)]}))


def test_boolean_examples():
    scene = PlaneScene.make({"r1": [rect(0, 0, 1, 1)], "r2": [rect(1, 0, 2, 1)]})
    arr = build_arrangement(scene)
    a, b = arr.region_sets["r1"], arr.region_sets["r2"]
    assert not fs_product(a, b).faces  # the shared edge regularizes away
    assert fs_sum(a, fs_complement(a)).faces == arr.all_faces()
    assert fs_complement(fs_complement(a)) == a
    other = build_arrangement(scene)
    with pytest.raises(ArrangementMismatchError):
        fs_sum(a, other.region_sets["r1"])


def test_connectivity_examples(three_squares):
    corner = PlaneScene.make({"r1": [rect(0, 0, 1, 1)], "r2": [rect(1, 1, 2, 2)]})
    arr = build_arrangement(corner)
    u = fs_sum(arr.region_sets["r1"], arr.region_sets["r2"])
    assert fs_connected(u)
    assert not fs_interior_connected(u)
    assert fs_contact(arr.region_sets["r1"], arr.region_sets["r2"])
    arr3 = build_arrangement(three_squares)
    for one, two in (("r1", "r2"), ("r1", "r3"), ("r2", "r3")):
        s = fs_sum(arr3.region_sets[one], arr3.region_sets[two])
        assert fs_interior_connected(s)
    assert plane_eval(arr3, EQ1)
    assert fs_connected(build_arrangement(corner).empty_set())


def test_contact_examples():
    apart = PlaneScene.make({"a": [rect(0, 0, 1, 1)], "b": [rect(2, 0, 3, 1)]})
    arr = build_arrangement(apart)
    assert not fs_contact(arr.region_sets["a"], arr.region_sets["b"])
    ec = PlaneScene.make({"a": [rect(0, 0, 1, 1)], "b": [rect(1, 0, 2, 1)]})
    arr2 = build_arrangement(ec)
    assert fs_contact(arr2.region_sets["a"], arr2.region_sets["b"])
    assert not fs_product(arr2.region_sets["a"], arr2.region_sets["b"]).faces


def test_plane_check_examples(three_squares):
    assert plane_check(three_squares, EQ1)
    assert plane_check(three_squares, parse("1 = r1 + -r1"))
    with pytest.raises(UnboundRegionError):
        plane_check(three_squares, parse("missing = 0"))
    row = PlaneScene.make(
        {f"r{i}": [rect(2 * i, 0, 2 * i + 1, 1)] for i in range(1, 6)}
    )
    eq2 = parse(
        "&".join(
            [f"ci(r{i}) & r{i} != 0" for i in range(1, 6)]
            + [
                f"ci(r{i}+r{j}) & r{i}.r{j} = 0"
                for i in range(1, 6)
                for j in range(i + 1, 6)
            ]
        )
    )
    assert not plane_check(row, eq2)


def test_rcc8_six_configurations():
    cases = [
        ({"a": [rect(0, 0, 1, 1)], "b": [rect(2, 0, 3, 1)]}, Rcc8Relation.DC),
        ({"a": [rect(0, 0, 1, 1)], "b": [rect(1, 0, 2, 1)]}, Rcc8Relation.EC),
        ({"a": [rect(0, 0, 2, 2)], "b": [rect(1, 1, 3, 3)]}, Rcc8Relation.PO),
        ({"a": [rect(0, 0, 1, 1)], "b": [rect(0, 0, 1, 1)]}, Rcc8Relation.EQ),
        ({"a": [rect(0, 0, 1, 1)], "b": [rect(0, 0, 2, 2)]}, Rcc8Relation.TPP),
        ({"a": [rect(1, 1, 2, 2)], "b": [rect(0, 0, 4, 4)]}, Rcc8Relation.NTPP),
    ]
    for regions, expected in cases:
        assert rcc8(PlaneScene.make(regions), "a", "b") == expected
    assert rcc8(PlaneScene.make(cases[4][0]), "b", "a") == Rcc8Relation.TPPi
    assert rcc8(PlaneScene.make(cases[5][0]), "b", "a") == Rcc8Relation.NTPPi
    with pytest.raises(ValueError):
        rcc8(PlaneScene.make({"a": [rect(0, 0, 1, 1)], "b": []}), "a", "b")


_INVERSE = {
    Rcc8Relation.DC: Rcc8Relation.DC,
    Rcc8Relation.EC: Rcc8Relation.EC,
    Rcc8Relation.PO: Rcc8Relation.PO,
    Rcc8Relation.EQ: Rcc8Relation.EQ,
    Rcc8Relation.TPP: Rcc8Relation.TPPi,
    Rcc8Relation.TPPi: Rcc8Relation.TPP,
    Rcc8Relation.NTPP: Rcc8Relation.NTPPi,
    Rcc8Relation.NTPPi: Rcc8Relation.NTPP,
}


def test_rcc8_inverse_consistency():
    rng = random.Random(77)
    for _ in range(120):
        scene = random_rect_scene(rng, ("a", "b"), span=6, max_rects=2)
        assert rcc8(scene, "a", "b") == _INVERSE[rcc8(scene, "b", "a")]


def test_component_graph_examples(three_squares):
    # a valid partition that is NOT sub-cyclic: every member touches
    # every other, so the component graph is complete, not a tree
    g = component_graph(three_squares, ["r1", "r2", "r3", "-(r1 + r2 + r3)"])
    assert len(g.labels) == 4 and len(g.edges) == 6 and not is_tree(g)
    one = PlaneScene.make({"r": [rect(0, 0, 1, 1)]})
    g1 = component_graph(one, ["r", "-r"])
    assert len(g1.labels) == 2 and is_tree(g1)
    with pytest.raises(ValueError):
        component_graph(one, ["r"])  # not a partition


def test_component_graph_onions():
    rng = random.Random(5150)
    scene, members = onion_partition(rng, colours=4, layers=7)
    g = component_graph(scene, members)
    assert is_tree(g)
    assert len(g.labels) == 8  # 7 layers + the unbounded complement


def test_induced_quasisaw_agreement(three_squares):
    arr = build_arrangement(three_squares)
    model = induced_quasisaw(arr)
    assert qs_check(model, EQ1)
    atoms = [
        "c(r1)", "ci(r1)", "C(r1,r2)", "r1 = r2", "ci(r1+r2)",
        "c(-(r1+r2+r3))", "C(r1+r2, -r3)", "r1 <= r1+r2",
    ]
    for src in atoms:
        f = parse(src)
        assert plane_eval(arr, f) == qs_check(model, f), src


def test_induced_quasisaw_star_shape():
    arr = build_arrangement(PlaneScene.make({"r": [rect(0, 0, 1, 1)]}))
    model = induced_quasisaw(arr)
    # 2 faces; every depth-1 point sees both
    assert len(model.frame.w0) == 2
    assert all(len(succ) == 2 for _, succ in model.frame.w1)


def test_scene_json_roundtrip(three_squares):
    data = scene_to_json(three_squares)
    again = scene_from_json(data)
    assert again == three_squares
    half = scene_from_json(
        {"regions": {"r": [{"outer": [["0", "0"], ["1/2", "0"], ["1/2", "1/2"], ["0", "1/2"]]}]}}
    )
    assert half.polygons("r")[0].outer.vertices[1] == (Fraction(1, 2), Fraction(0))
    with pytest.raises(SceneError):
        scene_from_json({"regions": {"r": [{"outer": [[0.25, 0], [1, 0], [1, 1]]}]}})


def test_svg_output(three_squares):
    svg = to_svg(three_squares)
    assert svg.startswith("<?xml")
    assert svg.count("<path") == 3
    assert to_svg(three_squares) == svg  # deterministic
    empty = to_svg(PlaneScene.make({}))
    assert "<svg" in empty and "</svg>" in empty


def test_boolean_algebra_laws_on_facesets():
    rng = random.Random(42)
    for _ in range(40):
        scene = random_rect_scene(rng, ("p", "q", "w"), span=8)
        arr = build_arrangement(scene)
        one = arr.full_set()
        zero = arr.empty_set()
        for _ in range(6):
            sets = list(arr.region_sets.values()) + [one, zero]
            a, b, c = (rng.choice(sets) for _ in range(3))
            assert fs_sum(a, b) == fs_sum(b, a)
            assert fs_product(a, b) == fs_product(b, a)
            assert fs_sum(fs_sum(a, b), c) == fs_sum(a, fs_sum(b, c))
            assert fs_product(fs_product(a, b), c) == fs_product(a, fs_product(b, c))
            assert fs_sum(a, fs_product(a, b)) == a
            assert fs_product(a, fs_sum(a, b)) == a
            assert fs_product(a, fs_sum(b, c)) == fs_sum(fs_product(a, b), fs_product(a, c))
            assert fs_sum(a, fs_product(b, c)) == fs_product(fs_sum(a, b), fs_sum(a, c))
            assert fs_sum(a, fs_complement(a)) == one
            assert fs_product(a, fs_complement(a)) == zero


def test_interior_connected_implies_connected_on_scenes():
    rng = random.Random(43)
    for _ in range(60):
        scene = random_rect_scene(rng, ("p", "q"), span=6)
        arr = build_arrangement(scene)
        for fs in arr.region_sets.values():
            if fs_interior_connected(fs):
                assert fs_connected(fs)
        u = fs_sum(*arr.region_sets.values())
        if fs_interior_connected(u):
            assert fs_connected(u)


def test_components_partition_facesets():
    rng = random.Random(44)
    for _ in range(40):
        scene = random_rect_scene(rng, ("p", "q"), span=6)
        arr = build_arrangement(scene)
        u = fs_sum(*arr.region_sets.values())
        comps = fs_components(u)
        assert frozenset().union(*(c.faces for c in comps)) == u.faces if comps else not u.faces
        for c in comps:
            assert fs_connected(c)
