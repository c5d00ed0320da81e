import random

import numpy as np
import pytest

from lenrep.quiveralg import build_algebra, cyclic_quiver
from lenrep.repcat import (
    Rep,
    RepError,
    check_rep,
    composition_vector,
    composition_vector_top_down,
    conjugate,
    cycle_uniserial,
    direct_sum,
    dual,
    height_and_length,
    identity_morphism,
    injective,
    projective,
    random_conjugate,
    random_invertible,
    simple,
    socle_series,
    sub_quotient,
    undual,
)

from conftest import alphabeta, fixture, zn


def test_uniserial_invariants(z3_4):
    m = cycle_uniserial(z3_4, "1", 4)
    assert check_rep(m).valid
    assert m.dim_vector == (2, 1, 1)
    assert height_and_length(m) == (4, 4)
    assert composition_vector(m) == composition_vector_top_down(m) == (2, 1, 1)


def test_projectives_and_injectives_valid():
    for name in ["z3", "alphabeta", "square", "nilloop"]:
        a = fixture(name)
        total = 0
        for v in a.quiver.vertices:
            P, I = projective(a, v), injective(a, v)
            assert check_rep(P).valid and check_rep(I).valid
            total += P.total_dim
        assert total == a.dim


def test_relation_violation_reported():
    a = alphabeta()
    m = Rep(a, {"1": 1, "2": 1}, {"alpha": [[1]], "beta": [[1]]})
    rep = check_rep(m)
    assert not rep.valid
    assert rep.relation_violations[0]["relation"] == 0


def test_nilpotency_violation_reported():
    a = zn(1, 2)
    m = Rep(a, {"1": 1}, {"a1": [[1]]})
    assert check_rep(m).nilpotency_violations


def test_shape_errors():
    a = zn(2, 3)
    with pytest.raises(RepError):
        Rep(a, {"1": 1, "2": 2}, {"a1": [[1]]})
    with pytest.raises(RepError):
        Rep(a, {"9": 1})
    with pytest.raises(RepError):
        Rep(a, {"1": 1}, {"zz": [[1]]})


def test_dual_round_trip():
    a = alphabeta()
    for v in a.quiver.vertices:
        P = projective(a, v)
        D = dual(P)
        assert check_rep(D).valid
        assert undual(D, a) == P


def test_conjugation_preserves_validity():
    rng = random.Random(3)
    a = fixture("square")
    m = injective(a, "4")
    m2, iso = random_conjugate(m, rng)
    assert check_rep(m2).valid
    assert iso.is_iso() and iso.is_intertwining()


def test_random_invertible():
    rng = random.Random(0)
    from lenrep.exactla import rank_mod

    for n in range(1, 5):
        assert rank_mod(random_invertible(n, 5, rng), 5) == n


def test_sub_quotient_and_series(z3_4):
    m = direct_sum([cycle_uniserial(z3_4, "1", 3), simple(z3_4, "2")]).rep
    ser = socle_series(m)
    total = tuple(sum(layer[i] for layer in ser.layers) for i in range(3))
    assert total == m.dim_vector
    bad = {"1": np.array([[1], [0]]), "2": np.zeros((2, 0), dtype=np.int64), "3": np.zeros((1, 0), dtype=np.int64)}
    # the top of M(1,3) alone is not a submodule
    mm = cycle_uniserial(z3_4, "1", 4)
    with pytest.raises(RepError):
        sub_quotient(mm, bad)


def test_direct_sum_maps(z3_4):
    xs = [simple(z3_4, "1"), cycle_uniserial(z3_4, "2", 2)]
    ds = direct_sum(xs)
    for inc, pr, x in zip(ds.injections, ds.projections, xs):
        assert (pr @ inc).is_iso()
        assert inc.is_mono() and pr.is_epi()
    assert identity_morphism(ds.rep).is_iso()
