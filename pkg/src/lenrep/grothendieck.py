"""Split and exact Grothendieck groups, the map between them, and AR relations."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .exactla import IntMatrix, integer_kernel, lattice_equal, smith_normal_form, solve_integer
from .homology import ShortExactSeq
from .krullschmidt import _indec_iso, decompose
from .repcat import Rep, composition_vector


class K0Error(ValueError):
    pass


@dataclass
class RelationLattice:
    """Coordinates on K0(C, 0) indexed by ``indec_index`` and the map pi to K0(C).

    ``pi`` has one row per simple and one column per indecomposable.
    """

    indec_index: List[Rep]
    pi: IntMatrix
    kernel_basis: List[List[int]]
    ar_relations: List[List[int]] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.indec_index)

    @property
    def kernel_rank(self) -> int:
        return len(self.kernel_basis)

    def apply_pi(self, v: Sequence[int]) -> List[int]:
        return [sum(r[k] * v[k] for k in range(len(v))) for r in self.pi]

    def index_of(self, x: Rep) -> Optional[int]:
        for k, y in enumerate(self.indec_index):
            if x.dim_vector == y.dim_vector and _indec_iso(x, y) is not None:
                return k
        return None


def build_k0(indecs: Sequence[Rep], check_duplicates: bool = True) -> RelationLattice:
    indecs = list(indecs)
    if check_duplicates:
        for i in range(len(indecs)):
            for j in range(i):
                if indecs[i].dim_vector == indecs[j].dim_vector and _indec_iso(indecs[i], indecs[j]) is not None:
                    raise K0Error(f"indecomposables {j} and {i} are isomorphic")
    nsimp = len(indecs[0].quiver.vertices) if indecs else 0
    cols = [composition_vector(x) for x in indecs]
    pi = [[c[s] for c in cols] for s in range(nsimp)]
    ker = integer_kernel(pi, len(indecs))
    return RelationLattice(indecs, pi, ker)


def ar_relation_vector(s: ShortExactSeq, lattice: RelationLattice) -> List[int]:
    """[X] - [Y] + [Z] in the coordinates of ``lattice`` for 0 -> X -> Y -> Z -> 0."""
    if not s.flags.get("almost_split"):
        raise K0Error("sequence has not been verified almost split")
    v = [0] * lattice.rank
    for term, sign in ((s.left, 1), (s.right, 1)):
        k = lattice.index_of(term)
        if k is None:
            raise K0Error(f"end term {term.dim_vector} is not indexed")
        v[k] += sign
    for x, c in decompose(s.middle).pieces:
        k = lattice.index_of(x)
        if k is None:
            raise K0Error(f"middle summand {x.dim_vector} is not indexed")
        v[k] -= c
    return v


@dataclass
class GenerationCertificate:
    kernel_rank: int
    relation_rank: int
    snf_diagonal: List[int]
    relations_in_kernel: bool
    combinations: List[Optional[List[int]]]

    def to_dict(self) -> dict:
        return {
            "kernel_rank": self.kernel_rank,
            "relation_rank": self.relation_rank,
            "snf_diagonal": self.snf_diagonal,
            "relations_in_kernel": self.relations_in_kernel,
            "combinations": self.combinations,
        }


def check_generation(lattice: RelationLattice) -> Tuple[bool, GenerationCertificate]:
    """Does the lattice of AR relations equal ker(pi)?

    The certificate records the Smith diagonal of the stacked relation
    matrix and, for each kernel basis vector, integer coefficients
    expressing it in the relations (None where impossible).
    """
    rels = lattice.ar_relations
    n = lattice.rank
    in_ker = all(not any(lattice.apply_pi(v)) for v in rels)
    snf = smith_normal_form(rels, n)
    diag = [d for d in snf.diagonal if d]
    combos = [solve_integer(rels, k) for k in lattice.kernel_basis]
    verdict = in_ker and lattice_equal(rels, lattice.kernel_basis, n)
    cert = GenerationCertificate(lattice.kernel_rank, snf.rank, diag, in_ker, combos)
    return verdict, cert


def replay_certificate(lattice: RelationLattice, cert: GenerationCertificate) -> bool:
    """Recombine the relations with the recorded coefficients and compare."""
    rels = lattice.ar_relations
    for target, c in zip(lattice.kernel_basis, cert.combinations):
        if c is None:
            return False
        got = [sum(c[k] * rels[k][i] for k in range(len(rels))) for i in range(lattice.rank)]
        if got != list(target):
            return False
    return True


def lattice_from_ar_quiver(quiver) -> RelationLattice:
    """K0 lattice over the knitted indecomposables with one relation per mesh."""
    from .artheory import verify_almost_split

    lat = build_k0(quiver.reps, check_duplicates=False)
    for z in sorted(quiver.sequences):
        s = quiver.sequences[z]
        if not s.flags.get("almost_split"):
            verify_almost_split(s, quiver.reps)
        lat.ar_relations.append(ar_relation_vector(s, lat))
    return lat
