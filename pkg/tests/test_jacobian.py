import random
from fractions import Fraction

import pytest

from qpmut.fdalg import AlgebraError, BasisElem, FDAlgebra
from qpmut.fields import QQ, PrimeField
from qpmut.jacobian import (
    UnboundedAtD,
    complete_rewrite,
    fd_algebra,
    jacobian_relations,
)
from qpmut.pathalg import Element, Potential, Quiver
from qpmut.qpcore import QP, mutate
from qpmut.fixtures import hex_qp, tub_qp


# ---------------------------------------------------------------------------
# relations


def test_jacobian_relations_hex(hexqp):
    rels = jacobian_relations(hexqp)
    assert len(rels) == 6
    for r in rels:
        assert len(r.terms) == 1
        (p, c), = r.terms.items()
        assert p.length == 5 and c == 1


def test_jacobian_relations_tub(tub2):
    Q = tub2.quiver
    rels = {tuple(sorted(map(repr, r.terms))): r for r in jacobian_relations(tub2)}
    # d/de W = aa' + bb' + cc'
    target = Element(Q, QQ, {
        Q.path(["a", "a'"]): 1, Q.path(["b", "b'"]): 1, Q.path(["c", "c'"]): 1,
    })
    assert any(r == target for r in rels.values())


def test_jacobian_relations_zero_potential():
    Q = Quiver([1, 2], [("a", 1, 2), ("b", 1, 2)])
    qp = QP(Q, Potential.zero(Q, QQ), QQ)
    assert jacobian_relations(qp) == []


# ---------------------------------------------------------------------------
# completion


def reduce_with_strategy(rs, path, rng):
    """Reduce one monomial with randomised rule/position choices."""
    f = rs.field
    Q = rs.quiver
    work = {path: f.one}
    out = {}
    while work:
        p = rng.choice(sorted(work, key=Q.order_key))
        c = work.pop(p)
        hits = []
        for pos in range(len(p.arrows)):
            for rule in rs.rules:
                h = rule.head.arrows
                if p.arrows[pos:pos + len(h)] == h:
                    hits.append((rule, pos))
        if not hits:
            out[p] = f.add(out.get(p, f.zero), c)
            if f.is_zero(out[p]):
                del out[p]
            continue
        rule, pos = rng.choice(hits)
        pre = p.arrows[:pos]
        post = p.arrows[pos + len(rule.head.arrows):]
        for t, tc in rule.tail:
            mid = Q.compose(Q.path(pre, source=p.source), t)
            q = Q.compose(mid, Q.path(post, source=t.target))
            v = f.add(work.get(q, f.zero), f.mul(c, tc))
            if f.is_zero(v):
                work.pop(q, None)
            else:
                work[q] = v
    return out


def all_paths_up_to(Q, bound):
    layer = [Q.trivial(v) for v in Q.vertices]
    out = list(layer)
    for _ in range(bound):
        nxt = []
        for p in layer:
            for a in Q.arrows_from(p.target):
                nxt.append(Q.compose(p, Q.path([a.name])))
        out.extend(nxt)
        layer = nxt
    return out


def test_complete_rewrite_hex_heads(hexqp):
    rs = fd_algebra(hexqp).rewrite_system
    heads = {r.head.arrows for r in rs.rules}
    assert all(len(h) == 5 for h in heads)
    assert len(heads) == 6


def test_confluence_random_strategies(hexqp):
    # every path of bounded length reduces to the same normal form under
    # arbitrary rule/position choices
    rs = fd_algebra(hexqp).rewrite_system
    rng = random.Random(7)
    for p in all_paths_up_to(hexqp.quiver, 8):
        ref = rs.normal_form_terms({p: QQ.one})
        for _ in range(3):
            assert reduce_with_strategy(rs, p, rng) == ref


def test_complete_rewrite_zero_relation():
    Q = Quiver([1, 2], [("a", 1, 2)])
    x = Element(Q, QQ, {Q.path(["a"]): 1})
    rs = complete_rewrite([x.sub(x)], 16, quiver=Q, field=QQ)
    assert rs.rules == ()


def test_complete_rewrite_monomial_two_cycle():
    Q = Quiver([1, 2], [("a", 1, 2), ("b", 2, 1)])
    rels = [
        Element(Q, QQ, {Q.path(["a", "b"]): 1}),
        Element(Q, QQ, {Q.path(["b", "a"]): 1}),
    ]
    rs = complete_rewrite(rels, 16)
    assert sorted(r.head.arrows for r in rs.rules) == [("a", "b"), ("b", "a")]
    assert all(not r.tail for r in rs.rules)


def test_normal_form_kills_relations(hexqp, tub2):
    for qp in (hexqp, tub2):
        A = fd_algebra(qp)
        rs = A.rewrite_system
        for r in jacobian_relations(qp):
            assert rs.normal_form_terms(dict(r.terms)) == {}


# ---------------------------------------------------------------------------
# fd_algebra


def path_enumeration_oracle_hex(qp):
    """dim of the hexagon algebra: all paths, with every length-5 path zero."""
    return sum(1 for p in all_paths_up_to(qp.quiver, 4))


def test_hex_dimension_against_oracle(hexqp, hex_alg):
    assert hex_alg.dim == path_enumeration_oracle_hex(hexqp) == 30


def test_tub_dimension_regression(tub2_alg):
    assert tub2_alg.dim == 32
    # ten hand-derived normal forms, pinned against the input arrow order
    rs = tub2_alg.rewrite_system
    Q = tub2_alg.quiver
    one = Fraction(1)
    half = Fraction(1, 2)

    def nf(*names):
        return rs.normal_form_terms({Q.path(list(names)): one})

    assert nf("a", "a'") == {Q.path(["a", "a'"]): one}                      # irreducible
    assert nf("c", "c'") == {Q.path(["a", "a'"]): -one, Q.path(["b", "b'"]): -one}
    assert nf("d", "d'") == {Q.path(["a", "a'"]): -one, Q.path(["b", "b'"]): -2 * one}
    assert nf("a'", "f") == {Q.path(["a'", "e"]): -one}
    assert nf("f", "a") == {Q.path(["e", "a"]): -one}
    assert nf("b'", "f") == {Q.path(["b'", "e"]): -half}
    assert nf("f", "b") == {Q.path(["e", "b"]): -half}
    assert nf("e", "c") == {}
    assert nf("d'", "f") == {}
    assert nf("e", "a") == {Q.path(["e", "a"]): one}                        # irreducible


def test_hereditary_a2_dimension():
    Q = Quiver([1, 2], [("a", 1, 2)])
    qp = QP(Q, Potential.zero(Q, QQ), QQ)
    A = fd_algebra(qp)
    assert A.dim == 3
    assert A.cartan_matrix() == [[1, 0], [1, 1]]


def test_unbounded_detection():
    # a 2-cycle with zero potential has an infinite-dimensional algebra
    Q = Quiver([1, 2], [("a", 1, 2), ("b", 2, 1)])
    qp = QP(Q, Potential.zero(Q, QQ), QQ)
    res = fd_algebra(qp, bound=8)
    assert isinstance(res, UnboundedAtD)
    assert res.bound == 8


# ---------------------------------------------------------------------------
# structure constants and invariants


def test_hex_associativity_exhaustive(hex_alg):
    hex_alg.check_associativity()
    hex_alg.check_idempotents()


def test_grid3_associativity_sampled(grid3_alg):
    grid3_alg.check_associativity()
    grid3_alg.check_idempotents()


def test_hex_cartan(hex_alg, hexqp):
    C = hex_alg.cartan_matrix()
    assert all(sum(row) == 5 for row in C)
    # entry (i, j) = 1 iff j reaches i in at most 4 steps around the cycle
    n = 6
    for i in range(n):
        for j in range(n):
            expected = 1 if ((i - j) % 6) <= 4 else 0
            assert C[i][j] == expected
    assert hex_alg.dim == sum(map(sum, C))


def semisimple_two_points():
    basis = [BasisElem(0, 1, 1, "e1"), BasisElem(1, 2, 2, "e2")]
    mult = {(0, 0): {0: QQ.one}, (1, 1): {1: QQ.one}}
    return FDAlgebra(QQ, (1, 2), basis, {1: 0, 2: 1}, mult, provenance="KxK")


def test_semisimple_cartan_and_radical():
    A = semisimple_two_points()
    assert A.cartan_matrix() == [[1, 0], [0, 1]]
    assert A.radical_layers() == [2]
    assert A.loewy_length() == 1
    assert A.gabriel_quiver().arrows == ()


def test_hex_radical_layers_and_loewy(hex_alg):
    assert hex_alg.radical_layers() == [6, 6, 6, 6, 6]
    assert hex_alg.loewy_length() == 5


def test_gabriel_fixed_point(hexqp, grid3, tub2, hex_alg, grid3_alg, tub2_alg):
    for qp, A in [(hexqp, hex_alg), (grid3, grid3_alg), (tub2, tub2_alg)]:
        assert A.gabriel_quiver().arrow_matrix() == qp.quiver.arrow_matrix()


def test_gabriel_fixed_point_mutated(hexqp):
    mu = mutate(hexqp, [1, 3, 5])
    A = fd_algebra(mu)
    assert A.gabriel_quiver().arrow_matrix() == mu.quiver.arrow_matrix()


def test_loewy_bounded_by_certificate(hex_alg, tub2_alg):
    for A in (hex_alg, tub2_alg):
        assert A.loewy_length() <= 16


# ---------------------------------------------------------------------------
# prime fields


def test_hex_over_gf7():
    qp = hex_qp(field=PrimeField(7))
    A = fd_algebra(qp)
    assert A.dim == 30
    assert A.radical_layers() == [6, 6, 6, 6, 6]


def test_corner_radical_gf2_small_field():
    # char 2 exercises the minimal-polynomial route in the corner scalar
    qp = hex_qp(field=PrimeField(2))
    A = fd_algebra(qp)
    assert A.dim == 30
    assert A.loewy_length() == 5
