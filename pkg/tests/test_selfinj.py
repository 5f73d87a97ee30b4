import pytest

from qpmut.fields import QQ, PrimeField
from qpmut.jacobian import fd_algebra
from qpmut.pathalg import Potential, Quiver
from qpmut.qpcore import QP, mutate
from qpmut.selfinj import (
    NotSelfinjective,
    injective_dual,
    is_selfinjective,
    module_isomorphic,
    nakayama_permutation,
    projective,
    sigma_orbits,
)
from qpmut.fixtures import grid3_qp, hex_qp, tub_qp


def a2_algebra():
    Q = Quiver([1, 2], [("a", 1, 2)])
    return fd_algebra(QP(Q, Potential.zero(Q, QQ), QQ))


# ---------------------------------------------------------------------------
# projectives and duals


def test_hex_projective_weights(hex_alg):
    # P_1 is spanned by the paths ending at 1: weights at 1, 3, 4, 5, 6
    P1 = projective(hex_alg, 1)
    assert P1.dim == 5
    assert P1.vertex_weights() == (1, 0, 1, 1, 1, 1)
    P1.check_representation()


def test_hex_dual_weights(hex_alg):
    D1 = injective_dual(hex_alg, 1)
    assert D1.dim == 5
    # weight of D(e_1 A) at j equals the number of paths 1 -> j
    assert D1.vertex_weights() == (1, 1, 1, 1, 1, 0)
    D1.check_representation()


def test_weight_duality(hex_alg, tub2_alg):
    # dim e_j D(e_k A) = dim e_k A e_j
    for A in (hex_alg, tub2_alg):
        for k in A.vertices:
            D = injective_dual(A, k)
            w = D.vertex_weights()
            for pos, j in enumerate(A.vertices):
                assert w[pos] == len([
                    b for b in A.basis if b.source == k and b.target == j
                ])


def test_a2_projective_and_dual_dims():
    A = a2_algebra()
    # with paths ending at the vertex: P_1 = span{e_1}, D(e_1 A) dual of {e_1, a}
    assert projective(A, 1).dim == 1
    assert injective_dual(A, 1).dim == 2
    assert projective(A, 2).dim == 2
    assert injective_dual(A, 2).dim == 1


# ---------------------------------------------------------------------------
# isomorphism testing


def test_hex_iso_witness(hex_alg):
    res = module_isomorphic(projective(hex_alg, 5), injective_dual(hex_alg, 1))
    assert res
    assert res.witness.is_invertible()


def test_a2_not_isomorphic_by_dimension():
    A = a2_algebra()
    res = module_isomorphic(projective(A, 1), injective_dual(A, 1))
    assert not res
    assert "dimension" in res.note


def test_self_isomorphism_identity(hex_alg):
    for k in hex_alg.vertices:
        P = projective(hex_alg, k)
        assert module_isomorphic(P, P)


def test_semisimple_projective_matches_dual():
    from qpmut.fdalg import BasisElem, FDAlgebra
    basis = [BasisElem(0, 1, 1, "e1"), BasisElem(1, 2, 2, "e2")]
    mult = {(0, 0): {0: QQ.one}, (1, 1): {1: QQ.one}}
    A = FDAlgebra(QQ, (1, 2), basis, {1: 0, 2: 1}, mult)
    for k in (1, 2):
        assert module_isomorphic(projective(A, k), injective_dual(A, k))
    sigma = nakayama_permutation(A)
    assert sigma.mapping == {1: 1, 2: 2}


# ---------------------------------------------------------------------------
# Nakayama permutations


def test_hex_nakayama(hex_alg):
    sigma = nakayama_permutation(hex_alg)
    assert sigma.mapping == {1: 5, 5: 3, 3: 1, 2: 6, 6: 4, 4: 2}
    assert sigma.cycle_notation([1, 2, 3, 4, 5, 6]) == "(1 5 3)(2 6 4)"


def test_grid3_nakayama(grid3_alg):
    sigma = nakayama_permutation(grid3_alg)
    assert sigma.mapping == {1: 9, 9: 1, 2: 8, 8: 2, 3: 7, 7: 3, 4: 6, 6: 4, 5: 5}
    assert sigma.cycle_notation(list(range(1, 10))) == "(1 9)(2 8)(3 7)(4 6)(5)"


def test_tub_nakayama_identity(tub2_alg):
    sigma = nakayama_permutation(tub2_alg)
    assert sigma.mapping == {v: v for v in tub2_alg.vertices}


def test_sigma_orbits_hex(hex_alg):
    assert sigma_orbits(hex_alg) == [(1, 3, 5), (2, 4, 6)]


# ---------------------------------------------------------------------------
# selfinjectivity verdicts


def test_hex_selfinjective(hexqp):
    v = is_selfinjective(hexqp)
    assert v
    assert v.dim == 30


def test_mu1_hex_not_selfinjective(hexqp):
    v = is_selfinjective(mutate(hexqp, [1]))
    assert not v
    assert v.dim == 24


def test_orbit_mutation_same_permutation(hexqp):
    mu = mutate(hexqp, [1, 3, 5])
    v = is_selfinjective(mu)
    assert v
    assert v.nakayama.mapping == {1: 5, 5: 3, 3: 1, 2: 6, 6: 4, 4: 2}


def test_sigma_stable_sets(hex_alg):
    sigma = nakayama_permutation(hex_alg)
    assert {sigma.mapping[v] for v in {1, 3, 5}} == {1, 3, 5}
    assert {sigma.mapping[v] for v in {1}} != {1}


def test_nakayama_over_gf5():
    qp = hex_qp(field=PrimeField(5))
    A = fd_algebra(qp)
    sigma = nakayama_permutation(A)
    assert sigma.mapping == {1: 5, 5: 3, 3: 1, 2: 6, 6: 4, 4: 2}
