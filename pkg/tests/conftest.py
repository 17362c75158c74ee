"""Shared randomized generators for the test suite.

Everything is driven by seeded ``random.Random`` instances so failures
reproduce exactly.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from topoconn.plane import PlaneScene, Polygon, Ring, rect
from topoconn.quasisaw import QsModel, QuasiSaw, make_frame
from topoconn.syntax import (
    And,
    AtomF,
    Complement,
    Conn,
    Contact,
    Eq,
    Formula,
    IntConn,
    Not,
    ONE,
    Or,
    Product,
    Sum,
    Term,
    Variable,
    ZERO,
)


def random_frame(
    rng: random.Random, max_w0: int = 5, max_w1: int = 5, min_w0: int = 1
) -> QuasiSaw:
    n0 = rng.randint(min_w0, max_w0)
    n1 = rng.randint(0, max_w1)
    w0 = [f"x{i}" for i in range(n0)]
    w1 = []
    for j in range(n1):
        size = rng.randint(1, n0)
        w1.append((f"z{j}", rng.sample(w0, size)))
    return make_frame(w0, w1)


def random_model(
    rng: random.Random, frame: QuasiSaw, names: tuple[str, ...]
) -> QsModel:
    return QsModel.make(
        frame,
        {
            name: {x for x in frame.w0 if rng.random() < 0.5}
            for name in names
        },
    )


def random_term(rng: random.Random, names: tuple[str, ...], depth: int) -> Term:
    choice = rng.random()
    if depth <= 0 or choice < 0.45:
        r = rng.random()
        if r < 0.75:
            return Variable(rng.choice(names))
        return ZERO if r < 0.875 else ONE
    if choice < 0.65:
        return Sum(random_term(rng, names, depth - 1), random_term(rng, names, depth - 1))
    if choice < 0.85:
        return Product(
            random_term(rng, names, depth - 1), random_term(rng, names, depth - 1)
        )
    return Complement(random_term(rng, names, depth - 1))


def random_atom(rng: random.Random, names: tuple[str, ...], term_depth: int = 2):
    r = rng.random()
    if r < 0.3:
        return Eq(random_term(rng, names, term_depth), random_term(rng, names, term_depth))
    if r < 0.55:
        return Contact(
            random_term(rng, names, term_depth), random_term(rng, names, term_depth)
        )
    if r < 0.8:
        return Conn(random_term(rng, names, term_depth))
    return IntConn(random_term(rng, names, term_depth))


def random_formula(
    rng: random.Random, names: tuple[str, ...], depth: int
) -> Formula:
    choice = rng.random()
    if depth <= 0 or choice < 0.4:
        return AtomF(random_atom(rng, names))
    if depth and choice < 0.6:
        return And(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))
    if choice < 0.8:
        return Or(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))
    return Not(random_formula(rng, names, depth - 1))


def random_rect_region(
    rng: random.Random, span: int = 10, max_rects: int = 2
) -> list[Polygon]:
    polys = []
    for _ in range(rng.randint(1, max_rects)):
        x0 = rng.randint(0, span - 1)
        y0 = rng.randint(0, span - 1)
        polys.append(
            rect(x0, y0, x0 + rng.randint(1, span - x0), y0 + rng.randint(1, span - y0))
        )
    return polys


def random_rect_scene(
    rng: random.Random, names: tuple[str, ...], span: int = 10, max_rects: int = 2
) -> PlaneScene:
    return PlaneScene.make(
        {name: random_rect_region(rng, span, max_rects) for name in names}
    )


def nested_rings(
    rng: random.Random, layers: int, strip: bool = False
) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
    """Strictly nested rectangles, outermost first; ``strip`` flattens
    them into wide bands."""
    boxes = []
    x0, y0 = Fraction(0), Fraction(0)
    x1 = Fraction(40 + rng.randint(0, 20))
    y1 = Fraction(6 + rng.randint(0, 4)) if strip else Fraction(40 + rng.randint(0, 20))
    for _ in range(layers):
        boxes.append((x0, y0, x1, y1))
        dx = Fraction(1, rng.randint(1, 3))
        dy = Fraction(1, rng.randint(1, 3))
        x0, y0, x1, y1 = x0 + dx, y0 + dy, x1 - dx, y1 - dy
        if x1 - x0 <= 1 or y1 - y0 <= 1:
            break
    return boxes


def onion_partition(
    rng: random.Random, colours: int, layers: int, strip: bool = False
) -> tuple[PlaneScene, list[str]]:
    """A scene of nested rectangular layers plus the member terms of a
    sub-cyclic partition of the whole plane: the unbounded complement
    takes colour 0 and layer j takes colour (j + 1) mod colours."""
    boxes = nested_rings(rng, layers, strip)
    layers = len(boxes)

    def box_ring(b) -> Ring:
        x0, y0, x1, y1 = b
        return Ring(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))

    regions = {}
    for j in range(layers):
        outer = box_ring(boxes[j])
        holes = (box_ring(boxes[j + 1]),) if j + 1 < layers else ()
        regions[f"l{j}"] = [Polygon(outer, holes)]
    scene = PlaneScene.make(regions)
    all_vars = " + ".join(f"l{j}" for j in range(layers))
    member_terms: dict[int, list[str]] = {c: [] for c in range(colours)}
    member_terms[0].append(f"-({all_vars})")
    for j in range(layers):
        member_terms[(j + 1) % colours].append(f"l{j}")
    members = [
        " + ".join(member_terms[c]) for c in range(colours) if member_terms[c]
    ]
    return scene, members


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
