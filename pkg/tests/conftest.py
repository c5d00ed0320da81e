from functools import lru_cache

import pytest

from lenrep import fixture_path
from lenrep.artheory import knit_ar_quiver
from lenrep.formats import load_algebra
from lenrep.quiveralg import Quiver, Relation, build_algebra, cyclic_quiver

FIXTURES = ["z1", "z2", "z3", "z5", "alphabeta", "semisimple", "twoloop", "square", "nilloop"]


@lru_cache(maxsize=None)
def fixture(name, level=None):
    return load_algebra(fixture_path(name), level)


@lru_cache(maxsize=None)
def zn(n, level, p=2):
    return build_algebra(cyclic_quiver(n), [], level, p)


@lru_cache(maxsize=None)
def alphabeta(level=3, p=3):
    q = Quiver(["1", "2"], [("alpha", "1", "1"), ("beta", "2", "1")])
    return build_algebra(q, [Relation.of((1, ["beta", "alpha"]))], level, p)


@lru_cache(maxsize=None)
def knitted(a, max_length=None):
    return knit_ar_quiver(a, max_length=max_length)


@pytest.fixture
def z3_4():
    return zn(3, 4)


def random_indecomposables(a, max_length, rng, tries):
    """Indecomposable summands of random nilpotent representations, one per iso-class.

    Basis vectors get random vertex labels and arrows only map a vector to
    later ones, so every path of length >= the total dimension acts as zero.
    """
    import numpy as np

    from lenrep.krullschmidt import _indec_iso, decompose
    from lenrep.repcat import Rep

    verts = a.quiver.vertices
    found = []
    for _ in range(tries):
        n = rng.randint(1, max_length)
        lab = [rng.choice(verts) for _ in range(n)]
        pos = {v: [k for k in range(n) if lab[k] == v] for v in verts}
        maps = {}
        for arr in a.quiver.arrows:
            m = np.zeros((len(pos[arr.target]), len(pos[arr.source])), dtype=np.int64)
            for ci, k in enumerate(pos[arr.source]):
                for ri, j in enumerate(pos[arr.target]):
                    if j > k:
                        m[ri, ci] = rng.randrange(a.p)
            maps[arr.name] = m
        r = Rep(a, {v: len(pos[v]) for v in verts}, maps)
        for x, _ in decompose(r).pieces:
            if not any(x.dim_vector == y.dim_vector and _indec_iso(x, y) is not None for y in found):
                found.append(x)
    return found


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
