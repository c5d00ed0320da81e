import pytest

from lenrep.artheory import (
    ar_sequence_ending_at,
    ar_sequence_starting_at,
    functor_support,
    knit_ar_quiver,
    verify_almost_split,
)
from lenrep.homology import ProjectiveError, ShortExactSeq, ext1_basis
from lenrep.krullschmidt import decompose, is_isomorphic
from lenrep.repcat import cycle_uniserial, direct_sum, injective, projective, simple

from conftest import alphabeta, fixture, knitted, zn


def test_mesh_ending_at_length_two_uniserial():
    a = zn(3, 4)
    s = ar_sequence_ending_at(cycle_uniserial(a, "1", 2))
    assert is_isomorphic(s.left, cycle_uniserial(a, "2", 2))
    mids = sorted(x.dim_vector for x, _ in decompose(s.middle).pieces)
    assert mids == sorted([cycle_uniserial(a, "1", 3).dim_vector, simple(a, "2").dim_vector])
    assert verify_almost_split(s, knitted(a).reps).passed
    assert s.flags["almost_split"]


def test_simple_mesh_level_two():
    a = zn(3, 2)
    s = ar_sequence_ending_at(simple(a, "1"))
    assert is_isomorphic(s.left, simple(a, "2"))
    assert is_isomorphic(s.middle, projective(a, "1"))


def test_no_sequence_at_projective_or_injective():
    a = alphabeta()
    with pytest.raises(ProjectiveError):
        ar_sequence_ending_at(projective(a, "1"))
    with pytest.raises(ProjectiveError):
        ar_sequence_starting_at(injective(a, "1"))


def test_sequence_starting_at():
    a = zn(3, 4)
    x = cycle_uniserial(a, "2", 2)
    s = ar_sequence_starting_at(x)
    assert is_isomorphic(s.left, x)
    assert is_isomorphic(s.right, cycle_uniserial(a, "1", 2))


def test_split_sequence_fails_verification():
    a = zn(3, 2)
    e = ext1_basis(simple(a, "1"), simple(a, "2"))
    s = e.realize([0])
    rep = verify_almost_split(s, knitted(a).reps)
    assert rep.split and not rep.passed
    assert not s.flags.get("almost_split")


def test_functor_support_alphabeta():
    a = alphabeta()
    Q = knitted(a)
    for z, s in Q.sequences.items():
        assert verify_almost_split(s, Q.reps).passed
        supp = [(k, d) for k, d in functor_support(s, Q.reps) if d]
        assert supp == [(Q.tau[z], 1)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cycle_census(n):
    for level in (2, 3, 4):
        Q = knit_ar_quiver(zn(n, level))
        assert Q.complete and len(Q.vertices) == n * level
        assert Q.stable_tau_periods() == [n]
        assert Q.mesh_consistent()


def test_knit_non_cycle_fixtures():
    ab = knitted(alphabeta())
    assert ab.complete and len(ab.vertices) == 7 and ab.mesh_consistent()
    sq = knitted(fixture("square"))
    assert sq.complete and len(sq.vertices) == 11 and sq.mesh_consistent()
    ss = knitted(fixture("semisimple"))
    assert len(ss.vertices) == 3 and not ss.meshes


def test_knit_reports_frontier():
    Q = knit_ar_quiver(fixture("twoloop"), max_length=6)
    assert not Q.complete
    assert Q.frontier
    assert all(v.length <= 6 for v in Q.vertices)


def test_knit_budget():
    Q = knit_ar_quiver(zn(3, 4), budget=5)
    assert Q.budget_exceeded and not Q.complete
    assert len(Q.vertices) == 5
