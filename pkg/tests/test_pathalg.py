from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qpmut.fields import QQ
from qpmut.pathalg import (
    Element,
    PathAlgebraError,
    Potential,
    Quiver,
    compose_paths,
    cyclic_derivative,
    pair_derivative,
    right_derivative,
    substitute,
)
from qpmut.fixtures import hex_qp


def two_cycle_quiver():
    return Quiver([1, 2], [("a", 1, 2), ("b", 2, 1)])


# ---------------------------------------------------------------------------
# independent oracles


def cyclic_derivative_oracle(W, arrow):
    """Enumerate every rotation of every cycle; keep those starting with the
    arrow and record the remainder."""
    Q = W.quiver
    f = W.field
    acc = {}
    for cyc, c in W.terms.items():
        w = cyc.arrows
        for k in range(len(w)):
            rot = w[k:] + w[:k]
            if rot[0] != arrow:
                continue
            tgt = Q.arrow(arrow).target
            p = Q.path(rot[1:], source=tgt) if rot[1:] else Q.trivial(tgt)
            acc[p] = f.add(acc.get(p, f.zero), c)
    return Element(Q, f, acc)


def pair_derivative_oracle(W, a, b):
    Q = W.quiver
    f = W.field
    acc = {}
    for cyc, c in W.terms.items():
        w = cyc.arrows
        d = len(w)
        for k in range(d):
            rot = w[k:] + w[:k]
            if rot[0] == a and rot[1 % d] == b:
                src = Q.arrow(b).target
                rest = rot[2:]
                p = Q.path(rest, source=src) if rest else Q.trivial(src)
                acc[p] = f.add(acc.get(p, f.zero), c)
    return Element(Q, f, acc)


def right_derivative_oracle(x, arrow):
    Q, f = x.quiver, x.field
    acc = {}
    for p, c in x.terms.items():
        if p.arrows and p.arrows[-1] == arrow:
            rest = p.arrows[:-1]
            q = Q.path(rest, source=p.source) if rest else Q.trivial(p.source)
            acc[q] = f.add(acc.get(q, f.zero), c)
    return Element(Q, f, acc)


# ---------------------------------------------------------------------------
# compose_paths


def test_compose_hex_examples(hexqp):
    Q = hexqp.quiver
    a1, a2, a3 = Q.path(["a1"]), Q.path(["a2"]), Q.path(["a3"])
    assert compose_paths(Q, a1, a2) == Q.path(["a1", "a2"])
    assert compose_paths(Q, a1, a3) is None
    assert compose_paths(Q, Q.trivial(1), a1) == a1


def test_quiver_validation():
    with pytest.raises(PathAlgebraError):
        Quiver([1], [("l", 1, 1)])        # loop
    with pytest.raises(PathAlgebraError):
        Quiver([1, 2], [("a", 1, 2), ("a", 2, 1)])   # duplicate id
    with pytest.raises(PathAlgebraError):
        Quiver([1, 1], [])                 # duplicate vertex


# ---------------------------------------------------------------------------
# cyclic derivative


def test_cyclic_derivative_hex(hexqp):
    d = cyclic_derivative("a1", hexqp.potential)
    Q = hexqp.quiver
    assert d.terms == {Q.path(["a2", "a3", "a4", "a5", "a6"]): Fraction(1)}


def test_cyclic_derivative_two_cycle():
    Q = two_cycle_quiver()
    W = Potential.from_cycles(Q, QQ, [(["a", "b"], 1)])
    assert cyclic_derivative("a", W).terms == {Q.path(["b"]): Fraction(1)}


def test_cyclic_derivative_abab_oracle():
    Q = two_cycle_quiver()
    W = Potential.from_cycles(Q, QQ, [(["a", "b", "a", "b"], 1)])
    got = cyclic_derivative("a", W)
    assert got == cyclic_derivative_oracle(W, "a")
    assert got.terms == {Q.path(["b", "a", "b"]): Fraction(2)}


def test_cyclic_derivative_unknown_arrow(hexqp):
    with pytest.raises(PathAlgebraError):
        cyclic_derivative("zz", hexqp.potential)


# ---------------------------------------------------------------------------
# pair derivative


def test_pair_derivative_hex(hexqp):
    Q = hexqp.quiver
    W = hexqp.potential
    assert pair_derivative("a1", "a2", W).terms == {
        Q.path(["a3", "a4", "a5", "a6"]): Fraction(1)
    }
    assert pair_derivative("a1", "a3", W).is_zero()
    wrap = pair_derivative("a6", "a1", W)
    assert wrap == pair_derivative_oracle(W, "a6", "a1")
    assert wrap.terms == {Q.path(["a2", "a3", "a4", "a5"]): Fraction(1)}


def test_pair_derivative_two_cycle_trivial_remainder():
    Q = two_cycle_quiver()
    W = Potential.from_cycles(Q, QQ, [(["a", "b"], 1)])
    d = pair_derivative("a", "b", W)
    assert d.terms == {Q.trivial(1): Fraction(1)}


# ---------------------------------------------------------------------------
# right derivative


def scratch_quiver():
    # four parallel-ish arrows for the term-by-term example
    return Quiver([1, 2, 3], [("a", 1, 2), ("c", 1, 2), ("b", 2, 3), ("d", 2, 3)])


def test_right_derivative_hex(hexqp):
    Q = hexqp.quiver
    x = Element(Q, QQ, {Q.path(["a2", "a3", "a4", "a5", "a6"]): 1})
    d = right_derivative("a6", x)
    assert d.terms == {Q.path(["a2", "a3", "a4", "a5"]): Fraction(1)}
    assert right_derivative("a1", x).is_zero()


def test_right_derivative_linear_combination():
    Q = scratch_quiver()
    x = Element(Q, QQ, {
        Q.path(["a", "b"]): 3,
        Q.path(["c", "b"]): 2,
        Q.path(["a", "d"]): -1,
    })
    d = right_derivative("b", x)
    assert d == right_derivative_oracle(x, "b")
    assert d.terms == {Q.path(["a"]): Fraction(3), Q.path(["c"]): Fraction(2)}


def test_right_derivative_rejects_trivial_terms():
    Q = scratch_quiver()
    x = Element(Q, QQ, {Q.trivial(1): 1})
    with pytest.raises(PathAlgebraError):
        right_derivative("b", x)


# ---------------------------------------------------------------------------
# substitution


def test_substitute_identity(hexqp):
    W = hexqp.potential
    assert substitute(W, {}, 16) == W


def test_substitute_annihilates():
    Q = two_cycle_quiver()
    W = Potential.from_cycles(Q, QQ, [(["a", "b"], 1)])
    z = Element.zero(Q, QQ)
    assert substitute(W, {"b": z}, 16).is_zero()


def test_substitute_degree4_cancellation():
    Q = two_cycle_quiver()
    W = Potential.from_cycles(Q, QQ, [(["a", "b"], 1), (["a", "b", "a", "b"], 1)])
    s = {"b": Element(Q, QQ, {Q.path(["b"]): 1, Q.path(["b", "a", "b"]): -1})}
    out = substitute(W, s, 6)
    # degree-4 terms cancel; the leftovers live in degree >= 6
    assert out.coeff(Q.path(["a", "b"])) == Fraction(1)
    assert out.coeff(Q.path(["a", "b", "a", "b"])) == Fraction(0)
    assert all(p.length == 2 or p.length >= 6 for p in out.terms)


def test_substitute_endpoint_mismatch(hexqp):
    Q = hexqp.quiver
    bad = Element(Q, QQ, {Q.path(["a2"]): 1})
    with pytest.raises(PathAlgebraError):
        substitute(hexqp.potential, {"a1": bad}, 16)


def test_substitute_truncation_flag():
    Q = two_cycle_quiver()
    W = Potential.from_cycles(Q, QQ, [(["a", "b"], 1)])
    s = {"b": Element(Q, QQ, {Q.path(["b"]): 1, Q.path(["b", "a", "b"]): 1})}
    out = substitute(W, s, 3)
    assert out.truncated


# ---------------------------------------------------------------------------
# invariants (property style)


def small_cycles(Q):
    # cycles of length 2 and 4 on the 2-cycle quiver
    return [["a", "b"], ["a", "b", "a", "b"]]


@given(coeffs=st.lists(st.integers(-3, 3), min_size=2, max_size=2),
       alpha=st.integers(-3, 3), beta=st.integers(-3, 3))
@settings(max_examples=40, deadline=None)
def test_derivative_linearity(coeffs, alpha, beta):
    Q = two_cycle_quiver()
    cycles = small_cycles(Q)
    w1 = Potential.from_cycles(Q, QQ, [(cycles[0], coeffs[0])])
    w2 = Potential.from_cycles(Q, QQ, [(cycles[1], coeffs[1])])
    lhs = cyclic_derivative("a", w1.scale(alpha).add(w2.scale(beta)))
    rhs = cyclic_derivative("a", w1).scale(alpha).add(
        cyclic_derivative("a", w2).scale(beta))
    assert lhs == rhs


@given(rot=st.integers(0, 5))
@settings(max_examples=12, deadline=None)
def test_canonicalization_rotation_invariance(rot):
    Q = hex_qp().quiver
    names = [f"a{i}" for i in range(1, 7)]
    rotated = names[rot:] + names[:rot]
    W1 = Potential.from_cycles(Q, QQ, [(names, 1)])
    W2 = Potential.from_cycles(Q, QQ, [(rotated, 1)])
    assert W1 == W2
    assert cyclic_derivative("a3", W1) == cyclic_derivative("a3", W2)


def test_canonicalization_idempotent(hexqp):
    W = hexqp.potential
    again = Potential(W.quiver, W.field, dict(W.terms))
    assert again == W


def test_single_occurrence_derivative_length(hexqp):
    # cycle of length 6 containing each arrow once: derivative is one path
    for i in range(1, 7):
        d = cyclic_derivative(f"a{i}", hexqp.potential)
        assert len(d.terms) == 1
        (p, c), = d.terms.items()
        assert p.length == 5 and c == 1


@given(exps=st.lists(st.integers(-2, 2), min_size=2, max_size=2))
@settings(max_examples=30, deadline=None)
def test_truncation_monotonicity(exps):
    Q = two_cycle_quiver()
    x = Element(Q, QQ, {Q.path(["a", "b"]): exps[0], Q.path(["a", "b", "a", "b"]): exps[1]},
                bound=8)
    y = Element(Q, QQ, {Q.path(["b", "a"]): 1}, bound=8)
    at8 = x.mul(y).truncate(4)
    x4 = Element(Q, QQ, dict(x.terms), bound=4)
    y4 = Element(Q, QQ, dict(y.terms), bound=4)
    assert at8.terms == x4.mul(y4).terms


def test_element_no_stored_zeros():
    Q = two_cycle_quiver()
    x = Element(Q, QQ, {Q.path(["a"]): 1})
    y = Element(Q, QQ, {Q.path(["a"]): -1})
    assert x.add(y).terms == {}
