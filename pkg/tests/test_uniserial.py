import pytest

from lenrep.homology import hom_dim
from lenrep.krullschmidt import end_algebra, radical
from lenrep.quiveralg import Quiver, build_algebra
from lenrep.repcat import cycle_uniserial, simple
from lenrep.uniserial import (
    ExtQuiver,
    classify_components,
    ext_quiver,
    finite_height_report,
    gabriel_uniserial_check,
    heights_uniserial_check,
    height_growth,
    serre_duality_check,
)

from conftest import alphabeta, fixture, knitted, zn


def test_ext_quiver_cycle():
    q = ext_quiver(zn(3, 4))
    assert q.arrows == {("1", "2"): 1, ("2", "3"): 1, ("3", "1"): 1}
    assert gabriel_uniserial_check(q) == (True, [])
    assert classify_components(q) == [{"vertices": ["1", "2", "3"], "type": "cycle", "size": 3, "label": "Ã_2"}]


def test_ext_quiver_alphabeta():
    q = ext_quiver(alphabeta())
    assert q.arrows == {("1", "1"): 1, ("2", "1"): 1}
    ok, wit = gabriel_uniserial_check(q)
    assert not ok
    assert wit == [{"simple": "1", "side": "in", "degree": 2, "labels": [1, 1]}]


def test_ext_quiver_needs_level_two():
    with pytest.raises(ValueError):
        ext_quiver(zn(2, 1))


def test_empty_ext_quiver():
    q = ext_quiver(fixture("semisimple"))
    assert not q.arrows
    assert gabriel_uniserial_check(q)[0]
    assert [c["type"] for c in classify_components(q)] == ["linear"] * 3


def test_component_shapes():
    assert classify_components(ext_quiver(zn(1, 3)))[0]["label"] == "Ã_0"
    A3 = Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])
    comps = classify_components(ext_quiver(build_algebra(A3, [], 3, 2)))
    assert comps == [{"vertices": ["1", "2", "3"], "type": "linear", "size": 3, "label": "A_3"}]
    assert classify_components(ext_quiver(fixture("square")))[0]["type"] == "other"


def test_heights_check():
    assert heights_uniserial_check(knitted(zn(3, 4)).reps) == (True, None)
    ok, wit = heights_uniserial_check(knitted(alphabeta()).reps)
    assert not ok and wit["height"] < wit["length"]
    a = zn(3, 4)
    assert heights_uniserial_check([simple(a, v) for v in "123"])[0]


@pytest.mark.parametrize("name", ["z1", "z2", "z3", "alphabeta", "square", "semisimple", "nilloop"])
def test_two_uniseriality_tests_agree(name):
    a = fixture(name)
    g = gabriel_uniserial_check(ext_quiver(a))[0]
    h = heights_uniserial_check(knitted(a).reps)[0]
    assert g == h


def test_serre_duality_examples():
    a = zn(3, 10)
    r = serre_duality_check(a, 3)
    assert len(r["pairs"]) == 81 and r["all_pass"]
    table = {(tuple(p["X"]), tuple(p["Y"])): (p["ext1"], p["hom_Y_tauX"]) for p in r["pairs"]}
    assert table[(("1", 1), ("1", 1))] == (0, 0)
    assert table[(("1", 1), ("2", 1))] == (1, 1)
    assert all(d["agrees"] for d in r["dtr_agreement"])


def test_serre_guards():
    with pytest.raises(ValueError):
        serre_duality_check(alphabeta(), 1)
    with pytest.raises(ValueError):
        serre_duality_check(zn(3, 5), 3)


def test_hom_bounded_by_lengths():
    a = zn(3, 8)
    objs = [cycle_uniserial(a, v, l) for v in "123" for l in (1, 2, 3, 4)]
    for x in objs:
        for y in objs:
            assert hom_dim(x, y) <= min(x.total_dim, y.total_dim)


def test_hom_end_length_bound():
    # Hom(X, Y) as a right End(X)-module has length at most l(X); with End(X)
    # local and split, the length is the dimension
    a = zn(2, 8)
    objs = [cycle_uniserial(a, v, l) for v in "12" for l in (1, 2, 3)]
    for x in objs:
        E = end_algebra(x)
        assert E.dim - radical(E).shape[1] == 1
        for y in objs:
            assert hom_dim(x, y) <= x.total_dim


def test_finite_height_reports():
    a = zn(3, 4)
    r = finite_height_report(a, knitted(a).reps)
    assert r["simples"] == 3 and r["max_height"] == 4 and r["height_capped_by_level"]
    assert height_growth(a, [4, 5])["grows"]
    ss = fixture("semisimple")
    g = height_growth(ss, [2, 3])
    assert [row["max_height"] for row in g["levels"]] == [1, 1] and not g["grows"]
    nl = fixture("nilloop")
    g = height_growth(nl, [2, 3, 4])
    assert [row["max_height"] for row in g["levels"]] == [2, 2, 2]
