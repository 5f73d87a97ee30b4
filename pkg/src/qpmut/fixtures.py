"""Built-in QP fixtures: the oriented hexagon, the 3x3 grid, and the
tubular-type star with a scalar parameter."""

from __future__ import annotations

from fractions import Fraction

from .fields import QQ
from .pathalg import Potential, Quiver
from .qpcore import QP


def hex_qp(field=QQ) -> QP:
    """Oriented 6-cycle with the full cycle as potential."""
    vertices = [1, 2, 3, 4, 5, 6]
    arrows = [(f"a{i}", i, i % 6 + 1) for i in range(1, 7)]
    Q = Quiver(vertices, arrows)
    W = Potential.from_cycles(Q, field, [((f"a{i}" for i in range(1, 7)), 1)])
    return QP(Q, W, field)


def grid3_qp(field=QQ) -> QP:
    """3x3 grid with alternating square orientations; potential is the sum
    of the four unit squares with coefficient one."""
    vertices = list(range(1, 10))
    edges = [
        (1, 2), (4, 1), (3, 2), (2, 5), (6, 3), (5, 4),
        (4, 7), (5, 6), (8, 5), (6, 9), (7, 8), (9, 8),
    ]
    arrows = [(f"a{u}{v}", u, v) for u, v in edges]
    Q = Quiver(vertices, arrows)
    squares = [
        ["a12", "a25", "a54", "a41"],
        ["a32", "a25", "a56", "a63"],
        ["a47", "a78", "a85", "a54"],
        ["a56", "a69", "a98", "a85"],
    ]
    W = Potential.from_cycles(Q, field, [(s, 1) for s in squares])
    return QP(Q, W, field)


def tub_qp(lam, field=QQ) -> QP:
    """Star quiver of tubular type (2,2,2,2) with parameter lam != 0, 1."""
    lam = field.coerce(lam)
    if field.is_zero(lam) or field.is_zero(field.sub(lam, field.one)):
        raise ValueError("tubular parameter must avoid 0 and 1")
    vertices = [1, 2, 3, 4, 5, 6]
    arrows = [
        ("a", 1, 2), ("b", 1, 3), ("c", 1, 4), ("d", 1, 5),
        ("a'", 2, 6), ("b'", 3, 6), ("c'", 4, 6), ("d'", 5, 6),
        ("e", 6, 1), ("f", 6, 1),
    ]
    Q = Quiver(vertices, arrows)
    W = Potential.from_cycles(Q, field, [
        (["a", "a'", "e"], 1),
        (["b", "b'", "e"], 1),
        (["c", "c'", "e"], 1),
        (["a", "a'", "f"], 1),
        (["b", "b'", "f"], lam),
        (["d", "d'", "f"], 1),
    ])
    return QP(Q, W, field)


def fixture(name: str) -> QP:
    key = name.strip().lower()
    if key == "hex":
        return hex_qp()
    if key == "grid3":
        return grid3_qp()
    if key.startswith("tub(") and key.endswith(")"):
        return tub_qp(Fraction(key[4:-1]))
    if key in ("tub2", "tub3"):
        return tub_qp(int(key[3:]))
    raise KeyError(f"unknown fixture {name!r}")


FIXTURE_NAMES = ["HEX", "GRID3", "TUB(2)", "TUB(3)"]
