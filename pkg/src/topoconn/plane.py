"""Exact planar semantics over rational-coordinate polygon scenes.

A scene assigns each region variable a finite union of simple polygons
(outer ring plus hole rings, even-odd fill).  All scene segments are
overlaid exactly into a planar arrangement; the open 2-cells of that
subdivision, plus the unbounded cell, are the atoms of a finite Boolean
algebra of regular closed sets: a face set denotes the closure of the
union of its faces.

The predicates reduce to face bookkeeping:

* two faces touch iff their closures share a vertex (sharing an edge
  implies sharing its endpoints), so connectedness of a face set is
  connectivity of its touch graph;
* an arrangement edge lies in the interior of a face set iff both its
  sides do, and a vertex iff every face around it does, which yields
  interior-connectedness;
* contact of two face sets is a shared face or a shared boundary vertex.

All arithmetic is over ``fractions.Fraction``; nothing is ever rounded,
so coincident geometry is detected exactly and regularization (dropping
lower-dimensional intersections) is implicit in the face representation.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import gcd
from typing import Iterable, Mapping, Optional, Sequence, Union

from .quasisaw import QsModel, make_frame
from .syntax import (
    And,
    AtomF,
    Complement,
    Conn,
    Contact,
    Eq,
    Formula,
    IDENT_RE,
    IntConn,
    Not,
    One,
    Or,
    Product,
    Sum,
    Term,
    Variable,
    Zero,
    ZERO,
    ONE,
)

Point = tuple[Fraction, Fraction]


class SceneError(ValueError):
    pass


class ArrangementMismatchError(ValueError):
    pass


class UnboundRegionError(KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound region variable: {name}")


# ---------------------------------------------------------------------------
# Scene data model


def _as_point(xy: Sequence) -> Point:
    if len(xy) != 2:
        raise SceneError(f"coordinate pair expected, got {xy!r}")
    return (_as_fraction(xy[0]), _as_fraction(xy[1]))


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise SceneError(f"bad rational literal {v!r}") from exc
    raise SceneError(
        f"coordinates must be integers or 'p/q' strings, got {v!r}"
    )


@dataclass(frozen=True)
class Ring:
    vertices: tuple[Point, ...]

    def edges(self) -> list[tuple[Point, Point]]:
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def signed_area2(self) -> Fraction:
        acc = Fraction(0)
        n = len(self.vertices)
        for i in range(n):
            ax, ay = self.vertices[i]
            bx, by = self.vertices[(i + 1) % n]
            acc += ax * by - bx * ay
        return acc


@dataclass(frozen=True)
class Polygon:
    outer: Ring
    holes: tuple[Ring, ...] = ()

    def rings(self) -> tuple[Ring, ...]:
        return (self.outer,) + self.holes


@dataclass(frozen=True)
class PlaneScene:
    regions: tuple[tuple[str, tuple[Polygon, ...]], ...]

    @staticmethod
    def make(regions: Mapping[str, Iterable[Polygon]]) -> "PlaneScene":
        items = []
        for name in sorted(regions):
            if not IDENT_RE.match(name):
                raise SceneError(f"bad region name: {name!r}")
            items.append((name, tuple(regions[name])))
        return PlaneScene(tuple(items))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.regions)

    def polygons(self, name: str) -> tuple[Polygon, ...]:
        for n, polys in self.regions:
            if n == name:
                return polys
        raise UnboundRegionError(name)

    def with_regions(self, extra: Mapping[str, Iterable[Polygon]]) -> "PlaneScene":
        merged = {name: polys for name, polys in self.regions}
        for name, polys in extra.items():
            if name in merged:
                raise SceneError(f"region {name!r} already present in scene")
            merged[name] = tuple(polys)
        return PlaneScene.make(merged)


def rect(x0, y0, x1, y1) -> Polygon:
    """Axis-aligned rectangle polygon (a frequent building block)."""
    x0, y0, x1, y1 = map(_as_fraction, (x0, y0, x1, y1))
    if x0 >= x1 or y0 >= y1:
        raise SceneError("rectangle needs x0 < x1 and y0 < y1")
    return Polygon(Ring(((x0, y0), (x1, y0), (x1, y1), (x0, y1))))


def ring_from(coords: Iterable[Sequence]) -> Ring:
    return Ring(tuple(_as_point(c) for c in coords))


# ---------------------------------------------------------------------------
# Exact predicates


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    """p lies on the closed segment [a, b]."""
    if _cross(a, b, p) != 0:
        return False
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def _segments_share_point(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    d1 = _cross(q1, q2, p1)
    d2 = _cross(q1, q2, p2)
    d3 = _cross(p1, p2, q1)
    d4 = _cross(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    return (
        (d1 == 0 and _on_segment(p1, q1, q2))
        or (d2 == 0 and _on_segment(p2, q1, q2))
        or (d3 == 0 and _on_segment(q1, p1, p2))
        or (d4 == 0 and _on_segment(q2, p1, p2))
    )


def _point_in_ring(p: Point, vertices: Sequence[Point]) -> bool:
    """Strict even-odd membership; p must not lie on the ring itself.
    Division-free: the crossing comparison is done by sign."""
    inside = False
    px, py = p
    ax, ay = vertices[-1]
    for bx, by in vertices:
        if (ay <= py) != (by <= py):
            # the edge crosses the horizontal through p; it does so right
            # of p iff num/dy > 0 where num = dy * (crossing_x - px)
            num = (py - ay) * (bx - ax) - (px - ax) * (by - ay)
            if num != 0 and (num > 0) == (by > ay):
                inside = not inside
        ax, ay = bx, by
    return inside


def point_in_polygon(p: Point, poly: Polygon) -> bool:
    parity = _point_in_ring(p, poly.outer.vertices)
    for hole in poly.holes:
        parity ^= _point_in_ring(p, hole.vertices)
    return parity


def point_in_region(p: Point, polys: Sequence[Polygon]) -> bool:
    return any(point_in_polygon(p, poly) for poly in polys)


# ---------------------------------------------------------------------------
# Scene validation


def _validate_ring(ring: Ring, where: str) -> None:
    pts = ring.vertices
    if len(pts) < 3:
        raise SceneError(f"{where}: ring needs at least 3 vertices")
    if len(set(pts)) != len(pts):
        raise SceneError(f"{where}: ring repeats a vertex")
    if ring.signed_area2() == 0:
        raise SceneError(f"{where}: ring has zero area")
    n = len(pts)
    edges = ring.edges()
    for i in range(n):
        a, b = edges[i]
        # adjacent edges may only share their common endpoint
        nxt = edges[(i + 1) % n][1]
        if _cross(b, a, nxt) == 0 and (nxt[0] - b[0]) * (a[0] - b[0]) + (
            nxt[1] - b[1]
        ) * (a[1] - b[1]) > 0:
            raise SceneError(f"{where}: ring folds back on itself at vertex {i + 1}")
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue  # adjacent around the wrap
            c, d = edges[j]
            if _segments_share_point(a, b, c, d):
                raise SceneError(
                    f"{where}: ring self-intersects (edges {i} and {j})"
                )


def validate_scene(scene: PlaneScene) -> None:
    for name, polys in scene.regions:
        for pi, poly in enumerate(polys):
            for ri, ring in enumerate(poly.rings()):
                kind = "outer ring" if ri == 0 else f"hole ring {ri - 1}"
                _validate_ring(ring, f"region {name}, polygon {pi}, {kind}")


# ---------------------------------------------------------------------------
# Arrangement construction

Segment = tuple[Point, Point]


def _norm_segment(a: Point, b: Point) -> Segment:
    return (a, b) if a <= b else (b, a)


def _coord(num, den):
    """Exact num/den, normalized to a plain int when integral."""
    if den == 1:
        return num
    f = Fraction(num, den)
    return f.numerator if f.denominator == 1 else f


def _unscale(v, scale: int):
    f = Fraction(v, scale) if isinstance(v, int) else v / scale
    return f.numerator if f.denominator == 1 else f


def _overlay_segments(segments: list[Segment]) -> list[Segment]:
    """Split segments at every mutual intersection so that the result
    is a set of interiorwise-disjoint edges meeting only at endpoints.

    Expects integer endpoints (the caller scales the scene); divisions
    happen only when an actual crossing point must be produced."""
    n = len(segments)
    events: list[set[Point]] = [set(s) for s in segments]
    boxes = [
        (min(a[0], b[0]), min(a[1], b[1]), max(a[0], b[0]), max(a[1], b[1]))
        for a, b in segments
    ]
    for i in range(n):
        p1, p2 = segments[i]
        bi = boxes[i]
        rx, ry = p2[0] - p1[0], p2[1] - p1[1]
        for j in range(i + 1, n):
            bj = boxes[j]
            if bj[0] > bi[2] or bj[2] < bi[0] or bj[1] > bi[3] or bj[3] < bi[1]:
                continue
            q1, q2 = segments[j]
            sx, sy = q2[0] - q1[0], q2[1] - q1[1]
            d1 = sx * (p1[1] - q1[1]) - sy * (p1[0] - q1[0])
            d2 = sx * (p2[1] - q1[1]) - sy * (p2[0] - q1[0])
            if d1 == 0 and d2 == 0:
                # collinear overlap: endpoints inside the other's box split it
                for p in (q1, q2):
                    if bi[0] <= p[0] <= bi[2] and bi[1] <= p[1] <= bi[3]:
                        events[i].add(p)
                for p in (p1, p2):
                    if bj[0] <= p[0] <= bj[2] and bj[1] <= p[1] <= bj[3]:
                        events[j].add(p)
                continue
            if not (d1 <= 0 <= d2 or d2 <= 0 <= d1):
                continue
            d3 = rx * (q1[1] - p1[1]) - ry * (q1[0] - p1[0])
            d4 = rx * (q2[1] - p1[1]) - ry * (q2[0] - p1[0])
            if not (d3 <= 0 <= d4 or d4 <= 0 <= d3):
                continue
            denom = rx * sy - ry * sx
            # parallel lines cannot pass the straddle tests unless collinear
            tn = (q1[0] - p1[0]) * sy - (q1[1] - p1[1]) * sx
            if denom < 0:
                tn, denom = -tn, -denom
            point = (
                _coord(p1[0] * denom + tn * rx, denom),
                _coord(p1[1] * denom + tn * ry, denom),
            )
            events[i].add(point)
            events[j].add(point)
    pieces: set[Segment] = set()
    for i, (p1, p2) in enumerate(segments):
        rx, ry = p2[0] - p1[0], p2[1] - p1[1]
        pts = sorted(events[i], key=lambda p: (p[0] - p1[0]) * rx + (p[1] - p1[1]) * ry)
        for a, b in zip(pts, pts[1:]):
            if a != b:
                pieces.add(_norm_segment(a, b))
    return sorted(pieces)


def _angle_cmp(d1: tuple[Fraction, Fraction], d2: tuple[Fraction, Fraction]) -> int:
    """Exact counterclockwise comparison of directions, starting at +x."""

    def half(d) -> int:
        return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1

    h1, h2 = half(d1), half(d2)
    if h1 != h2:
        return -1 if h1 < h2 else 1
    cr = d1[0] * d2[1] - d1[1] * d2[0]
    if cr > 0:
        return -1
    if cr < 0:
        return 1
    return 0


@dataclass
class Face:
    index: int
    bounded: bool
    rep: Optional[Point]  # a point strictly inside; None for the unbounded face


@dataclass
class Arrangement:
    """Exact planar subdivision induced by a scene, with incidences and
    the face set of every named region."""

    scene: PlaneScene
    vertices: list[Point]
    edges: list[tuple[int, int]]
    faces: list[Face]
    edge_faces: list[frozenset[int]]
    vertex_faces: list[frozenset[int]]
    region_sets: dict[str, "FaceSet"] = field(default_factory=dict)
    _contact_adj: list[int] = field(default_factory=list)
    _vertex_face_masks: list[int] = field(default_factory=list)
    _edge_face_pairs: list[tuple[int, int]] = field(default_factory=list)

    @property
    def unbounded_face(self) -> int:
        return len(self.faces) - 1

    def all_faces(self) -> frozenset[int]:
        return frozenset(range(len(self.faces)))

    def face_set(self, faces: Iterable[int]) -> "FaceSet":
        return FaceSet(self, frozenset(faces))

    def empty_set(self) -> "FaceSet":
        return FaceSet(self, frozenset())

    def full_set(self) -> "FaceSet":
        return FaceSet(self, self.all_faces())


@dataclass(frozen=True)
class FaceSet:
    arr: Arrangement
    faces: frozenset[int]

    def mask(self) -> int:
        m = 0
        for f in self.faces:
            m |= 1 << f
        return m


def _require_same_arrangement(a: FaceSet, b: FaceSet) -> None:
    if a.arr is not b.arr:
        raise ArrangementMismatchError("face sets from different arrangements")


def fs_sum(a: FaceSet, b: FaceSet) -> FaceSet:
    _require_same_arrangement(a, b)
    return FaceSet(a.arr, a.faces | b.faces)


def fs_product(a: FaceSet, b: FaceSet) -> FaceSet:
    _require_same_arrangement(a, b)
    return FaceSet(a.arr, a.faces & b.faces)


def fs_complement(a: FaceSet) -> FaceSet:
    return FaceSet(a.arr, a.arr.all_faces() - a.faces)


def build_arrangement(scene: PlaneScene) -> Arrangement:
    validate_scene(scene)

    # scale every coordinate to an integer once; the kernel then runs on
    # machine integers and only produces fractions at crossing points
    denominators = {
        c.denominator
        for _, polys in scene.regions
        for poly in polys
        for ring in poly.rings()
        for v in ring.vertices
        for c in v
    }
    scale = 1
    for d in denominators:
        scale = scale * d // gcd(scale, d)

    def scaled(v: Point) -> tuple[int, int]:
        return (
            v[0].numerator * (scale // v[0].denominator),
            v[1].numerator * (scale // v[1].denominator),
        )

    scaled_rings: dict[str, list[list[tuple[tuple[int, int], ...]]]] = {}
    raw: list[Segment] = []
    seen: set[Segment] = set()
    for name, polys in scene.regions:
        scaled_rings[name] = []
        for poly in polys:
            rings = [tuple(scaled(v) for v in ring.vertices) for ring in poly.rings()]
            scaled_rings[name].append(rings)
            for ring in rings:
                for k in range(len(ring)):
                    seg = _norm_segment(ring[k], ring[(k + 1) % len(ring)])
                    if seg not in seen:
                        seen.add(seg)
                        raw.append(seg)

    pieces = _overlay_segments(raw)

    vertices = sorted({p for seg in pieces for p in seg})
    vindex = {p: i for i, p in enumerate(vertices)}
    edges = sorted({(vindex[a], vindex[b]) for a, b in pieces})

    if not edges:
        # a scene with no geometry has a single unbounded face
        arr = Arrangement(scene, vertices, [], [Face(0, False, None)], [], [])
        arr._contact_adj = [0]
        arr._vertex_face_masks = []
        arr._edge_face_pairs = []
        for name, _ in scene.regions:
            arr.region_sets[name] = arr.empty_set()
        return arr

    # half-edge structure: outgoing edges per vertex, sorted CCW
    outgoing: dict[int, list[int]] = {}
    for u, v in edges:
        outgoing.setdefault(u, []).append(v)
        outgoing.setdefault(v, []).append(u)
    for u in outgoing:
        pu = vertices[u]

        def by_dir(v1: int, v2: int) -> int:
            d1 = (vertices[v1][0] - pu[0], vertices[v1][1] - pu[1])
            d2 = (vertices[v2][0] - pu[0], vertices[v2][1] - pu[1])
            return _angle_cmp(d1, d2)

        outgoing[u].sort(key=cmp_to_key(by_dir))

    out_index = {
        (u, v): i for u, targets in outgoing.items() for i, v in enumerate(targets)
    }

    def next_halfedge(h: tuple[int, int]) -> tuple[int, int]:
        u, v = h
        targets = outgoing[v]
        i = out_index[(v, u)]
        return (v, targets[(i - 1) % len(targets)])

    # extract directed cycles (each bounds the face on its left)
    cycle_of: dict[tuple[int, int], int] = {}
    cycles: list[list[tuple[int, int]]] = []
    for u in sorted(outgoing):
        for v in outgoing[u]:
            h = (u, v)
            if h in cycle_of:
                continue
            cyc: list[tuple[int, int]] = []
            cur = h
            while cur not in cycle_of:
                cycle_of[cur] = len(cycles)
                cyc.append(cur)
                cur = next_halfedge(cur)
            cycles.append(cyc)

    def cycle_area2(cyc: list[tuple[int, int]]) -> int:
        acc = 0
        for u, v in cyc:
            a, b = vertices[u], vertices[v]
            acc += a[0] * b[1] - b[0] * a[1]
        return acc

    def cycle_rep(cyc: list[tuple[int, int]]) -> Point:
        # probe leftward from the midpoint of the first half-edge; the
        # nearest obstruction bounds the face, so half that distance is
        # strictly interior.  Doubled coordinates keep everything integer
        # and the minimum is tracked as a fraction pair.
        u, v = cyc[0]
        a, b = vertices[u], vertices[v]
        mx2, my2 = a[0] + b[0], a[1] + b[1]
        nx, ny = a[1] - b[1], b[0] - a[0]  # left normal of a->b
        best_n, best_d = 1, 1  # no obstruction: stop the probe at t = 1
        found = False
        for p_idx, q_idx in edges:
            p, q = vertices[p_idx], vertices[q_idx]
            sx, sy = q[0] - p[0], q[1] - p[1]
            denom2 = 2 * (nx * sy - ny * sx)
            dpx, dpy = 2 * p[0] - mx2, 2 * p[1] - my2
            if denom2 != 0:
                tn = dpx * sy - dpy * sx
                wn = dpx * ny - dpy * nx
                td = denom2
                if td < 0:
                    tn, wn, td = -tn, -wn, -td
                if tn <= 0 or not 0 <= wn <= td:
                    continue
                if not found or tn * best_d < best_n * td:
                    best_n, best_d, found = tn, td, True
            elif dpx * ny - dpy * nx == 0:
                # edge collinear with the probe line: endpoints are hits
                axis_n = nx if nx else ny
                for c in (p, q):
                    tn = (2 * c[0] - mx2) if nx else (2 * c[1] - my2)
                    td = 2 * axis_n
                    if td < 0:
                        tn, td = -tn, -td
                    if tn > 0 and (not found or tn * best_d < best_n * td):
                        best_n, best_d, found = tn, td, True
        # rep = m + (best/2) * n with m = (mx2/2, my2/2)
        den = 2 * best_d
        return (
            _coord(mx2 * best_d + best_n * nx, den),
            _coord(my2 * best_d + best_n * ny, den),
        )

    areas = [cycle_area2(c) for c in cycles]
    reps = [cycle_rep(c) for c in cycles]

    positive = [i for i, a2 in enumerate(areas) if a2 > 0]
    # bounded faces in cycle discovery order
    face_of_cycle: dict[int, int] = {}
    faces: list[Face] = []
    for fi, ci in enumerate(positive):
        face_of_cycle[ci] = fi
        faces.append(Face(fi, True, reps[ci]))
    unbounded = len(faces)

    pos_polys = [
        ([vertices[u] for u, _ in cycles[ci]], abs(areas[ci]), ci) for ci in positive
    ]
    for ci, a2 in enumerate(areas):
        if a2 > 0:
            continue
        rep = reps[ci]
        owner: Optional[int] = None
        owner_area: Optional[Fraction] = None
        for poly, area_abs, pci in pos_polys:
            if _point_in_ring(rep, poly):
                if owner_area is None or area_abs < owner_area:
                    owner, owner_area = pci, area_abs
        face_of_cycle[ci] = face_of_cycle[owner] if owner is not None else unbounded
    faces.append(Face(unbounded, False, None))

    face_of_halfedge = {h: face_of_cycle[cycle_of[h]] for h in cycle_of}

    edge_faces = [
        frozenset({face_of_halfedge[(u, v)], face_of_halfedge[(v, u)]})
        for u, v in edges
    ]
    vertex_faces = [
        frozenset(face_of_halfedge[(u, v)] for v in outgoing.get(u, []))
        for u in range(len(vertices))
    ]

    arr = Arrangement(scene, vertices, list(edges), faces, edge_faces, vertex_faces)

    nfaces = len(faces)
    contact_adj = [0] * nfaces
    vertex_face_masks = []
    for vf in vertex_faces:
        m = 0
        for f in vf:
            m |= 1 << f
        vertex_face_masks.append(m)
        for f in vf:
            contact_adj[f] |= m
    arr._contact_adj = contact_adj
    arr._vertex_face_masks = vertex_face_masks
    arr._edge_face_pairs = [
        tuple(sorted(ef)) for ef in edge_faces if len(ef) == 2
    ]

    # region membership tested in the scaled space, with a bounding-box
    # prefilter per polygon
    boxed = {
        name: [
            (
                (
                    min(v[0] for v in rings[0]),
                    min(v[1] for v in rings[0]),
                    max(v[0] for v in rings[0]),
                    max(v[1] for v in rings[0]),
                ),
                rings,
            )
            for rings in poly_list
        ]
        for name, poly_list in scaled_rings.items()
    }

    def in_region(rep: Point, name: str) -> bool:
        for (x0, y0, x1, y1), rings in boxed[name]:
            if not (x0 < rep[0] < x1 and y0 < rep[1] < y1):
                continue
            parity = _point_in_ring(rep, rings[0])
            for hole in rings[1:]:
                parity ^= _point_in_ring(rep, hole)
            if parity:
                return True
        return False

    for name, _ in scene.regions:
        members = {
            f.index for f in faces if f.bounded and in_region(f.rep, name)
        }
        arr.region_sets[name] = arr.face_set(members)

    if scale != 1:
        arr.vertices = [
            (_unscale(x, scale), _unscale(y, scale)) for x, y in arr.vertices
        ]
        for f in faces:
            if f.rep is not None:
                f.rep = (_unscale(f.rep[0], scale), _unscale(f.rep[1], scale))
    return arr


# ---------------------------------------------------------------------------
# Predicates on face sets


def fs_connected(a: FaceSet) -> bool:
    faces = a.faces
    if not faces:
        return True
    mask = a.mask()
    adj = a.arr._contact_adj
    start = min(faces)
    seen = 1 << start
    stack = [start]
    while stack:
        f = stack.pop()
        nbrs = adj[f] & mask & ~seen
        while nbrs:
            low = nbrs & -nbrs
            g = low.bit_length() - 1
            seen |= low
            stack.append(g)
            nbrs &= ~low
    return seen.bit_count() == len(faces)


def fs_interior_connected(a: FaceSet) -> bool:
    faces = a.faces
    if not faces:
        return True
    mask = a.mask()
    links: dict[int, set[int]] = {f: set() for f in faces}
    for f1, f2 in a.arr._edge_face_pairs:
        if mask >> f1 & 1 and mask >> f2 & 1:
            links[f1].add(f2)
            links[f2].add(f1)
    for vm in a.arr._vertex_face_masks:
        if vm & ~mask:
            continue
        group = [f for f in faces if vm >> f & 1]
        for f in group[1:]:
            links[group[0]].add(f)
            links[f].add(group[0])
    start = min(faces)
    seen = {start}
    stack = [start]
    while stack:
        for g in links[stack.pop()]:
            if g not in seen:
                seen.add(g)
                stack.append(g)
    return len(seen) == len(faces)


def fs_contact(a: FaceSet, b: FaceSet) -> bool:
    _require_same_arrangement(a, b)
    if a.faces & b.faces:
        return True
    am, bm = a.mask(), b.mask()
    return any(vm & am and vm & bm for vm in a.arr._vertex_face_masks)


def fs_components(a: FaceSet) -> list[FaceSet]:
    remaining = set(a.faces)
    mask = a.mask()
    adj = a.arr._contact_adj
    out = []
    while remaining:
        start = min(remaining)
        comp = {start}
        stack = [start]
        while stack:
            f = stack.pop()
            nbrs = adj[f] & mask
            while nbrs:
                low = nbrs & -nbrs
                g = low.bit_length() - 1
                nbrs &= ~low
                if g in comp or g not in remaining:
                    continue
                comp.add(g)
                stack.append(g)
        out.append(FaceSet(a.arr, frozenset(comp)))
        remaining -= comp
    out.sort(key=lambda fs: min(fs.faces))
    return out


# ---------------------------------------------------------------------------
# Formula evaluation over a scene


def faceset_of_term(arr: Arrangement, t: Term) -> FaceSet:
    if isinstance(t, Variable):
        try:
            return arr.region_sets[t.name]
        except KeyError:
            raise UnboundRegionError(t.name) from None
    if isinstance(t, Zero):
        return arr.empty_set()
    if isinstance(t, One):
        return arr.full_set()
    if isinstance(t, Sum):
        return fs_sum(faceset_of_term(arr, t.left), faceset_of_term(arr, t.right))
    if isinstance(t, Product):
        return fs_product(faceset_of_term(arr, t.left), faceset_of_term(arr, t.right))
    if isinstance(t, Complement):
        return fs_complement(faceset_of_term(arr, t.arg))
    raise TypeError(f"not a term: {t!r}")


def plane_eval(arr: Arrangement, f: Formula) -> bool:
    if isinstance(f, AtomF):
        a = f.atom
        if isinstance(a, Eq):
            return faceset_of_term(arr, a.left).faces == faceset_of_term(arr, a.right).faces
        if isinstance(a, Contact):
            return fs_contact(faceset_of_term(arr, a.left), faceset_of_term(arr, a.right))
        if isinstance(a, Conn):
            return fs_connected(faceset_of_term(arr, a.arg))
        if isinstance(a, IntConn):
            return fs_interior_connected(faceset_of_term(arr, a.arg))
        raise TypeError(f"not an atom: {a!r}")
    if isinstance(f, And):
        return plane_eval(arr, f.left) and plane_eval(arr, f.right)
    if isinstance(f, Or):
        return plane_eval(arr, f.left) or plane_eval(arr, f.right)
    if isinstance(f, Not):
        return not plane_eval(arr, f.arg)
    raise TypeError(f"not a formula: {f!r}")


def plane_check(scene: PlaneScene, f: Formula) -> bool:
    """Evaluate ``f`` against a scene (builds the arrangement afresh;
    reuse :func:`build_arrangement` plus :func:`plane_eval` for repeated
    queries on one scene)."""
    return plane_eval(build_arrangement(scene), f)


# ---------------------------------------------------------------------------
# RCC8


class Rcc8Relation(enum.Enum):
    DC = "DC"
    EC = "EC"
    PO = "PO"
    EQ = "EQ"
    TPP = "TPP"
    NTPP = "NTPP"
    TPPi = "TPPi"
    NTPPi = "NTPPi"


def _rcc8_flags(a: FaceSet, b: FaceSet) -> dict[Rcc8Relation, bool]:
    c_ab = fs_contact(a, b)
    prod_empty = not (a.faces & b.faces)
    part_ab = not (a.faces - b.faces)  # a . -b = 0
    part_ba = not (b.faces - a.faces)
    c_a_nb = fs_contact(a, fs_complement(b))
    c_b_na = fs_contact(b, fs_complement(a))
    return {
        Rcc8Relation.DC: not c_ab,
        Rcc8Relation.EC: c_ab and prod_empty,
        Rcc8Relation.EQ: part_ab and part_ba,
        Rcc8Relation.PO: not prod_empty and not part_ab and not part_ba,
        Rcc8Relation.TPP: part_ab and not part_ba and c_a_nb,
        Rcc8Relation.NTPP: part_ab and not part_ba and not c_a_nb,
        Rcc8Relation.TPPi: part_ba and not part_ab and c_b_na,
        Rcc8Relation.NTPPi: part_ba and not part_ab and not c_b_na,
    }


def rcc8_of_sets(a: FaceSet, b: FaceSet) -> Rcc8Relation:
    if not a.faces or not b.faces:
        raise ValueError("RCC8 relations are defined for nonempty regions only")
    flags = _rcc8_flags(a, b)
    holding = [r for r, v in flags.items() if v]
    if len(holding) != 1:
        raise AssertionError(f"RCC8 relations not JEPD here: {holding}")
    return holding[0]


def rcc8(scene: PlaneScene, name1: str, name2: str) -> Rcc8Relation:
    arr = build_arrangement(scene)
    for name in (name1, name2):
        if name not in arr.region_sets:
            raise UnboundRegionError(name)
    return rcc8_of_sets(arr.region_sets[name1], arr.region_sets[name2])


# ---------------------------------------------------------------------------
# Component graphs


@dataclass(frozen=True)
class ComponentGraph:
    labels: tuple[str, ...]
    node_sets: tuple[FaceSet, ...]
    edges: frozenset[tuple[int, int]]


def is_tree(g: ComponentGraph) -> bool:
    n = len(g.labels)
    if n == 0:
        return True
    if len(g.edges) != n - 1:
        return False
    adj: dict[int, set[int]] = {i: set() for i in range(n)}
    for i, j in g.edges:
        adj[i].add(j)
        adj[j].add(i)
    seen = {0}
    stack = [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


def _partition_formula(terms: list[Term]) -> Formula:
    total: Term = terms[0]
    for t in terms[1:]:
        total = Sum(total, t)
    parts: list[Formula] = [AtomF(Eq(total, ONE))]
    for i in range(len(terms)):
        for j in range(i + 1, len(terms)):
            parts.append(AtomF(Eq(Product(terms[i], terms[j]), ZERO)))
    f = parts[0]
    for p in parts[1:]:
        f = And(f, p)
    return f


def component_graph(
    scene: PlaneScene, members: Sequence[Union[str, Term]]
) -> ComponentGraph:
    """Graph on the connected components of the listed regions (variable
    names or term source text; a term slot lets a partition include the
    unbounded complement region).  The members must form a partition of
    the plane."""
    from .parser import parse_term
    from .syntax import term_to_source

    terms: list[Term] = []
    labels: list[str] = []
    for m in members:
        terms.append(m if isinstance(m, Term) else parse_term(m))
        labels.append(term_to_source(terms[-1]))
    if not terms:
        raise ValueError("component_graph needs at least one member")
    arr = build_arrangement(scene)
    if not plane_eval(arr, _partition_formula(terms)):
        raise ValueError("the listed members do not form a partition")
    nodes: list[FaceSet] = []
    node_labels: list[str] = []
    for label, t in zip(labels, terms):
        fset = faceset_of_term(arr, t)
        for k, comp in enumerate(fs_components(fset)):
            nodes.append(comp)
            node_labels.append(f"{label}#{k}")
    edges = set()
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if nodes[i].faces == nodes[j].faces:
                continue
            if fs_contact(nodes[i], nodes[j]):
                edges.add((i, j))
    return ComponentGraph(tuple(node_labels), tuple(nodes), frozenset(edges))


# ---------------------------------------------------------------------------
# Induced quasi-saw model


def induced_quasisaw(arr: Arrangement) -> QsModel:
    """Two-depth Aleksandrov model matching the plane semantics: faces
    become depth-0 points; every edge with two distinct sides and every
    vertex becomes a depth-1 point below its incident faces."""
    w0 = tuple(f"f{f.index}" for f in arr.faces)
    w1: list[tuple[str, frozenset[str]]] = []
    for i, ef in enumerate(arr.edge_faces):
        if len(ef) == 2:
            w1.append((f"e{i}", frozenset(f"f{f}" for f in ef)))
    for i, vf in enumerate(arr.vertex_faces):
        w1.append((f"v{i}", frozenset(f"f{f}" for f in vf)))
    frame = make_frame(w0, tuple(w1))
    valuation = {
        name: {f"f{f}" for f in fset.faces}
        for name, fset in arr.region_sets.items()
    }
    return QsModel.make(frame, valuation)


# ---------------------------------------------------------------------------
# Scene file format


def scene_to_json(scene: PlaneScene) -> dict:
    def coord(x: Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def ring_json(r: Ring):
        return [[coord(x), coord(y)] for x, y in r.vertices]

    return {
        "regions": {
            name: [
                {"outer": ring_json(p.outer), "holes": [ring_json(h) for h in p.holes]}
                for p in polys
            ]
            for name, polys in scene.regions
        }
    }


def scene_from_json(data: dict) -> PlaneScene:
    if not isinstance(data, dict) or "regions" not in data:
        raise SceneError("scene file must be a JSON object with a 'regions' key")
    regions: dict[str, list[Polygon]] = {}
    for name, polys in data["regions"].items():
        out = []
        for p in polys:
            if "outer" not in p:
                raise SceneError(f"region {name}: polygon without 'outer' ring")
            outer = ring_from(p["outer"])
            holes = tuple(ring_from(h) for h in p.get("holes", []))
            out.append(Polygon(outer, holes))
        regions[name] = out
    return PlaneScene.make(regions)


def load_scene(path: str) -> PlaneScene:
    with open(path, "r", encoding="utf-8") as fh:
        return scene_from_json(json.load(fh))
