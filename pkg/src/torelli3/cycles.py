"""Cells of the cycle complex and the bounding-pair ladder.

A labeled multicurve supporting a class x determines a compact polytope:
nonnegative real weights on the curves whose weighted class sum is x.
Its vertices are the basic cycles (positive integer weights on an
independent subset of curves).  This module enumerates those vertices,
computes cell dimensions and weight sums, produces oriented boundary
faces, assembles the two-dimensional "ladder" subcomplex attached to a
bounding pair class, and builds the disjointness predicate used when a
fixed curve is removed from the picture.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd

from .lattice import (
    A1,
    A2,
    HVector,
    intersection,
    matrix_rank,
    solve_rational,
)
from .surface import (
    DecompGraph,
    LabeledMulticurve,
    _no_positive_relation,
)


class DegenerateInputError(ValueError):
    """A requested target class makes the construction collapse."""


class MalformedCellError(ValueError):
    """A cell instance violates the vertex or coverage requirements."""


class InternalInconsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


class PreconditionError(ValueError):
    """An argument combination outside the stated contract."""


class BasicCycle:
    """A vertex of a cell: positive integer weights on an independent
    subset of curves whose weighted classes sum to the target."""

    __slots__ = ("multicurve", "coefficients", "target")

    def __init__(self, multicurve, coefficients, target):
        coefficients = dict(coefficients)
        if not coefficients:
            raise MalformedCellError("a basic cycle needs a nonempty support")
        edge_ids = set(multicurve.edge_ids())
        for e, k in coefficients.items():
            if e not in edge_ids:
                raise MalformedCellError(f"unknown curve {e!r} in support")
            if not isinstance(k, int) or k < 1:
                raise MalformedCellError(f"weight of {e!r} must be a positive integer")
        rows = [list(multicurve.class_of(e).coords) for e in coefficients]
        if matrix_rank(rows) != len(coefficients):
            raise MalformedCellError("support classes are dependent")
        total = HVector([0] * 6)
        for e, k in coefficients.items():
            total = total + k * multicurve.class_of(e)
        if total != target:
            raise MalformedCellError("weighted class sum misses the target")
        self.multicurve = multicurve
        self.coefficients = coefficients
        self.target = target

    @property
    def support(self):
        return frozenset(self.coefficients)

    def vector(self, edge_order=None):
        """Weight vector in the given (default: the multicurve's) edge order."""
        if edge_order is None:
            edge_order = self.multicurve.edge_ids()
        return tuple(self.coefficients.get(e, 0) for e in edge_order)

    def key(self):
        return tuple(sorted(((str(e), k) for e, k in self.coefficients.items())))

    def __eq__(self, other):
        if not isinstance(other, BasicCycle):
            return NotImplemented
        return self.coefficients == other.coefficients and self.target == other.target

    def __hash__(self):
        return hash((self.key(), self.target))

    def __repr__(self):
        inner = ", ".join(f"{e!r}: {k}" for e, k in sorted(
            self.coefficients.items(), key=lambda kv: str(kv[0])))
        return "BasicCycle({%s})" % inner


def enumerate_basic_cycles(m, x):
    """All basic cycles of the multicurve ``m`` with target class ``x``.

    Scans independent curve subsets, solves the class equation exactly
    over the rationals, and keeps the solutions that are positive
    integers throughout.  The result is deterministic: sorted by weight
    vector in the multicurve's edge order.
    """
    if x.is_zero():
        raise DegenerateInputError("the zero class supports no basic cycle")
    edge_order = m.edge_ids()
    found = []
    for size in range(1, len(edge_order) + 1):
        if size > 6:
            break
        for subset in combinations(edge_order, size):
            cols = [m.class_of(e).coords for e in subset]
            if matrix_rank([list(c) for c in cols]) != size:
                continue
            matrix = [[cols[j][i] for j in range(size)] for i in range(6)]
            sol = solve_rational(matrix, list(x.coords))
            if sol is None:
                continue
            if any(v.denominator != 1 or v < 1 for v in sol):
                continue
            coeffs = {e: int(v) for e, v in zip(subset, sol)}
            found.append(BasicCycle(m, coeffs, x))
    found.sort(key=lambda v: v.vector(edge_order))
    return found


def psi(v):
    """Total weight of a basic cycle."""
    return sum(v.coefficients.values())


class CellInstance:
    """A multicurve together with the full vertex set of its polytope.

    ``verts`` lists every basic cycle for the multicurve's own target
    class; ``dim`` is the count of curves minus the rank of their span,
    which the multicurve contract makes equal to one less than the
    number of pieces.
    """

    __slots__ = ("multicurve", "verts", "dim")

    def __init__(self, multicurve):
        verts = enumerate_basic_cycles(multicurve, multicurve.x)
        if not verts:
            raise MalformedCellError("no basic cycle carries the target class")
        covered = set()
        for v in verts:
            covered |= v.support
        missing = set(multicurve.edge_ids()) - covered
        if missing:
            raise MalformedCellError(
                "curves outside every basic cycle: %s"
                % sorted(str(e) for e in missing)
            )
        rows = {e: tuple(multicurve.class_of(e).coords) for e in multicurve.edge_ids()}
        if not _no_positive_relation(rows, multicurve.edge_ids()):
            raise MalformedCellError("the weight polytope is unbounded")
        self.multicurve = multicurve
        self.verts = verts
        self.dim = len(multicurve.graph.vertices) - 1

    def vectors(self):
        order = self.multicurve.edge_ids()
        return [v.vector(order) for v in self.verts]

    def support_key(self):
        return tuple(sorted(str(e) for e in self.multicurve.edge_ids()))

    def to_dict(self):
        g = self.multicurve.graph
        return {
            "x": list(self.multicurve.x.coords),
            "edges": [
                {
                    "id": str(e),
                    "tail": str(t),
                    "head": str(h),
                    "class": list(self.multicurve.class_of(e).coords),
                }
                for e, t, h in g.edges
            ],
            "verts": [
                {str(e): k for e, k in v.coefficients.items()} for v in self.verts
            ],
            "dim": self.dim,
        }

    def __eq__(self, other):
        if not isinstance(other, CellInstance):
            return NotImplemented
        return self.multicurve == other.multicurve

    def __hash__(self):
        return hash(self.multicurve)

    def __repr__(self):
        return f"CellInstance(dim={self.dim}, verts={len(self.verts)})"


def cell_dim(c):
    """Dimension of the cell, cross-checked three ways.

    Curve count minus class rank, piece count minus one, and the affine
    rank of the vertex weight vectors must agree; a mismatch means the
    cell was assembled inconsistently and is reported as such.
    """
    m = c.multicurve
    by_rank = len(m.edge_ids()) - matrix_rank(m.class_rows())
    by_graph = len(m.graph.vertices) - 1
    vectors = c.vectors()
    diffs = [
        [a - b for a, b in zip(vec, vectors[0])] for vec in vectors[1:]
    ]
    by_verts = matrix_rank(diffs) if diffs else 0
    if not (by_rank == by_graph == by_verts):
        raise InternalInconsistencyError(
            f"dimension mismatch: rank {by_rank}, graph {by_graph}, verts {by_verts}"
        )
    return by_rank


def psi_max(c):
    """Largest total weight over the cell's basic cycles."""
    if not isinstance(c, CellInstance) or not c.verts:
        raise MalformedCellError("cell carries no basic cycles")
    return max(psi(v) for v in c.verts)


def remove_edges(m, drop, x=None):
    """Sub-multicurve after deleting the given curves.

    Pieces joined by a deleted curve merge; a deleted curve inside one
    piece (including any loop) raises that piece's genus by one.  The
    merged piece keeps the smallest of the original ids so that deleting
    in two steps or in one gives identical results.
    """
    drop = set(drop)
    unknown = drop - set(m.edge_ids())
    if unknown:
        raise MalformedCellError(f"cannot drop unknown curves {sorted(map(str, unknown))}")
    parent = {v: v for v in m.graph.vertex_ids}
    genus = {v: m.graph.genus(v) for v in m.graph.vertex_ids}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e, t, h in m.graph.edges:
        if e not in drop:
            continue
        rt, rh = find(t), find(h)
        if rt == rh:
            genus[rt] += 1
        else:
            keep, gone = sorted((rt, rh), key=str)
            parent[gone] = keep
            genus[keep] += genus[gone]
    rep = {v: find(v) for v in m.graph.vertex_ids}
    vertices = sorted(
        ((r, genus[r]) for r in set(rep.values())), key=lambda p: str(p[0])
    )
    edges = [(e, rep[t], rep[h]) for e, t, h in m.graph.edges if e not in drop]
    classes = {e: m.class_of(e) for e, _, _ in edges}
    return LabeledMulticurve(DecompGraph(vertices, edges), classes, m.x if x is None else x)


def _affine_frame(vectors):
    """Greedy affine basis of lexicographically sorted weight vectors.

    Returns (origin, frame) where frame rows are differences spanning the
    affine hull.  Sorting first makes the choice canonical, and padding a
    vector list with constant zero columns does not change the order.
    """
    ordered = sorted(vectors)
    origin = ordered[0]
    frame = []
    rank = 0
    for vec in ordered[1:]:
        candidate = frame + [[a - b for a, b in zip(vec, origin)]]
        if matrix_rank(candidate) > rank:
            frame = candidate
            rank += 1
    return origin, frame


def _coordinates(frame, vector):
    """Exact coordinates of ``vector`` in the span of the frame rows."""
    if not frame:
        return []
    matrix = [[row[i] for row in frame] for i in range(len(vector))]
    sol = solve_rational(matrix, list(vector))
    if sol is None:
        raise InternalInconsistencyError("vector left the cell's direction space")
    return sol


def _det(rows):
    a = [list(map(Fraction, row)) for row in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def boundary_faces(c):
    """Signed codimension-one faces of a cell.

    Each face arises from the vertices vanishing on some curve; its sign
    orients the face frame against the cell frame, with the outward
    direction taken from face barycenter minus cell barycenter.  Curves
    with a constant positive weight on every vertex never produce faces.
    """
    m = c.multicurve
    order = m.edge_ids()
    vectors = c.vectors()
    dim = c.dim
    if dim == 0:
        return []
    origin, cell_frame = _affine_frame(vectors)
    if len(cell_frame) != dim:
        raise InternalInconsistencyError("vertex span disagrees with the dimension")
    cell_bary = [
        Fraction(sum(col), len(vectors)) for col in zip(*vectors)
    ]
    faces = []
    seen = set()
    for i, e in enumerate(order):
        face_vecs = [vec for vec in vectors if vec[i] == 0]
        if not face_vecs:
            continue
        support = set()
        for vec in face_vecs:
            support |= {order[j] for j, k in enumerate(vec) if k}
        key = frozenset(support)
        if key in seen:
            continue
        _, face_frame = _affine_frame(face_vecs)
        if len(face_frame) != dim - 1:
            continue
        seen.add(key)
        face_bary = [Fraction(sum(col), len(face_vecs)) for col in zip(*face_vecs)]
        normal = [a - b for a, b in zip(face_bary, cell_bary)]
        columns = [_coordinates(cell_frame, normal)] + [
            _coordinates(cell_frame, row) for row in face_frame
        ]
        det = _det([[columns[j][i] for j in range(dim)] for i in range(dim)])
        if det == 0:
            raise InternalInconsistencyError("degenerate face frame")
        sign = 1 if det > 0 else -1
        sub = remove_edges(m, set(order) - support)
        faces.append((sign, CellInstance(sub)))
    faces.sort(key=lambda sf: sf[1].support_key())
    return faces


def _loop_graph(genus, names):
    """Single piece of the given genus carrying one loop per name."""
    return DecompGraph([(0, genus)], [(e, 0, 0) for e in names])


def _point_cell(coeffs, classes, x):
    """Zero-dimensional cell: loops on one piece, one basic cycle."""
    names = list(coeffs)
    genus = 3 - len(names)
    graph = _loop_graph(genus, names)
    m = LabeledMulticurve(graph, {e: classes[e] for e in names}, x)
    cell = CellInstance(m)
    assert cell.dim == 0 and len(cell.verts) == 1
    assert cell.verts[0].coefficients == coeffs
    return cell


def _triple_cell(names, classes, orient, x):
    """One-dimensional cell: three curves bundled between two pieces."""
    edges = [
        (e, 0, 1) if orient[e] else (e, 1, 0) for e in names
    ]
    graph = DecompGraph([(0, 0), (1, 1)], edges)
    m = LabeledMulticurve(graph, {e: classes[e] for e in names}, x)
    cell = CellInstance(m)
    assert cell.dim == 1
    return cell


def _rung_cell(k, classes, x):
    """One-dimensional cell joining the two bounding-pair weightings: the
    sheet curve is a loop on a genus-0 piece, the pair bounds a genus-1
    piece."""
    edges = [(f"u{k}", 0, 0), ("delta1", 0, 1), ("delta2", 1, 0)]
    graph = DecompGraph([(0, 0), (1, 1)], edges)
    names = [e for e, _, _ in edges]
    m = LabeledMulticurve(graph, {e: classes[e] for e in names}, x)
    cell = CellInstance(m)
    assert cell.dim == 1
    return cell


class LadderComplex:
    """Truncated two-dimensional complex attached to a bounding pair.

    For a primitive pair (m, n) the target class is m*alpha + n*y where
    alpha and y are the first two disjoint handle classes.  Sheets are
    indexed by an integer k; the truncation keeps -K <= k.  Rungs d_k
    join the two bounding-pair weightings, horizontal edges c+/c- step
    between neighbouring sheets, vertical edges e+/e- reach the mixed
    weighting, and the two-cells are rectangles, one closing triangle,
    and one vertical triangle per sheet.
    """

    __slots__ = (
        "m",
        "n",
        "K",
        "l",
        "t",
        "vertex_psi",
        "vertex_cells",
        "edge_endpoints",
        "edge_kind",
        "edge_cells",
        "edge_external",
        "cell_boundary",
        "cell_kind",
        "cell_psi",
        "cell_cells",
        "closing",
    )

    def __init__(self, m, n, K, tables):
        self.m = m
        self.n = n
        self.K = K
        self.l = n // m
        self.t = (n - 1) // m
        (
            self.vertex_psi,
            self.vertex_cells,
            self.edge_endpoints,
            self.edge_kind,
            self.edge_cells,
            self.edge_external,
            self.cell_boundary,
            self.cell_kind,
            self.cell_psi,
            self.cell_cells,
            self.closing,
        ) = tables
        self._check_chain_complex()

    def _check_chain_complex(self):
        for tag, boundary in self.cell_boundary.items():
            total = {}
            for edge, sign in boundary.items():
                tail, head = self.edge_endpoints[edge]
                total[head] = total.get(head, 0) + sign
                total[tail] = total.get(tail, 0) - sign
            bad = {v: c for v, c in total.items() if c}
            if bad:
                raise InternalInconsistencyError(
                    f"boundary of {tag} does not close up: {bad}"
                )

    def vertices(self):
        return sorted(self.vertex_psi, key=str)

    def edges(self):
        return sorted(self.edge_endpoints, key=str)

    def two_cells(self):
        return sorted(self.cell_boundary, key=str)

    def cofaces(self, edge):
        return sorted(
            (tag for tag, b in self.cell_boundary.items() if edge in b), key=str
        )

    def glued_vertex(self, v):
        """Image of a vertex after identifying the two rung endpoints."""
        if v[0] == "B":
            return ("A", v[1])
        return v

    def check_pair_endpoints(self):
        """The +/- partner edges coincide after gluing yet stay distinct."""
        for k in self._span():
            for plus, minus in ((("c+", k), ("c-", k)), (("e+", k), ("e-", k))):
                pt = tuple(map(self.glued_vertex, self.edge_endpoints[plus]))
                mt = tuple(map(self.glued_vertex, self.edge_endpoints[minus]))
                if pt != mt:
                    return False
        return True

    def check_rung_cofaces(self):
        """Every rung away from the truncation edge bounds three 2-cells."""
        hi = min(self.t, self.K)
        for k in range(-self.K + 1, hi + 1):
            if len(self.cofaces(("d", k))) != 3:
                return False
        return True

    def check_ladder_property(self):
        """Dropping the vertical cells frees a horizontal edge of every
        horizontal cell, and every vertical cell owns its rung."""
        horizontals = [t for t in self.cell_boundary if self.cell_kind[t] != "vertical"]
        for tag in horizontals:
            free = False
            for edge in self.cell_boundary[tag]:
                if self.edge_kind[edge] == "vertical":
                    continue
                others = [
                    o
                    for o in horizontals
                    if o != tag and edge in self.cell_boundary[o]
                ]
                if not others:
                    free = True
                    break
            if not free:
                return False
        verticals = [t for t in self.cell_boundary if self.cell_kind[t] == "vertical"]
        for tag in verticals:
            rung = ("d", tag[1])
            owners = [o for o in verticals if rung in self.cell_boundary[o]]
            if owners != [tag]:
                return False
        return True

    def check_psi_growth(self):
        """Weight sums grow strictly toward negative sheets and upward."""
        for tag, value in self.cell_psi.items():
            kind, k = tag[0], tag[1]
            if kind == "R":
                left = ("R", k - 1)
                if left in self.cell_psi and not self.cell_psi[left] > value:
                    return False
                vert = ("V", k)
                if vert in self.cell_psi and not self.cell_psi[vert] > value:
                    return False
        return True

    def _span(self):
        return range(-self.K, min(self.t, self.K) + 1)

    def to_json(self):
        def s(tag):
            return "%s[%s]" % (tag[0], tag[1])

        return {
            "m": self.m,
            "n": self.n,
            "K": self.K,
            "l": self.l,
            "t": self.t,
            "vertices": [
                {"tag": s(v), "psi": self.vertex_psi[v]} for v in self.vertices()
            ],
            "edges": [
                {
                    "tag": s(e),
                    "kind": self.edge_kind[e],
                    "tail": s(self.edge_endpoints[e][0]),
                    "head": s(self.edge_endpoints[e][1]),
                    **(
                        {"external": self.edge_external[e]}
                        if e in self.edge_external
                        else {}
                    ),
                }
                for e in self.edges()
            ],
            "cells": [
                {
                    "tag": s(c),
                    "kind": self.cell_kind[c],
                    "psi": self.cell_psi[c],
                    "closes": c == self.closing,
                    "boundary": {s(e): sign for e, sign in self.cell_boundary[c].items()},
                }
                for c in self.two_cells()
            ],
        }

    def __repr__(self):
        return "LadderComplex(m=%d, n=%d, K=%d, cells=%d)" % (
            self.m,
            self.n,
            self.K,
            len(self.cell_boundary),
        )


def _ladder_classes(m, n, lo, hi_plus):
    alpha, y = A1, A2
    classes = {"delta1": y, "delta2": y}
    for k in range(lo, hi_plus + 1):
        classes[f"u{k}"] = alpha + k * y
        classes[f"w{k}"] = y - (alpha + k * y)
    return classes


def build_ladder(m, n, K):
    """Assemble the truncated ladder for the class m*alpha + n*y.

    Requires positive coprime (m, n) and a truncation depth K >= 1.
    Every vertex, edge and two-cell tag is backed by an explicit cell
    instance, and the abstract boundary maps are verified to square to
    zero and to agree with the geometric faces of those cells.
    """
    if not all(isinstance(v, int) for v in (m, n, K)):
        raise ValueError("invalid parameters: m, n, K must be integers")
    if m <= 0 or n <= 0:
        raise ValueError("invalid parameters: need positive m and n")
    if gcd(m, n) != 1:
        raise ValueError("invalid parameters: (m, n) must be coprime")
    if K < 1:
        raise ValueError("invalid parameters: truncation depth must be >= 1")
    l = n // m
    t = (n - 1) // m
    hi = min(t, K)
    right = hi + 1 if hi < t else hi
    x = m * A1 + n * A2
    classes = _ladder_classes(m, n, -K, right + 1)

    def a_map(k):
        return {f"u{k}": m, "delta1": n - m * k}

    def b_map(k):
        return {f"u{k}": m, "delta2": n - m * k}

    def c_map(k):
        return {f"u{k}": n - m * k + m, f"w{k}": n - m * k}

    def t_map():
        if n % m == 0:
            return {f"u{l}": m}
        return {f"u{t}": m * (t + 1) - n, f"u{t + 1}": n - m * t}

    vertex_maps = {}
    for k in range(-K, right + 1):
        vertex_maps[("A", k)] = a_map(k)
        vertex_maps[("B", k)] = b_map(k)
    for k in range(-K, hi + 1):
        vertex_maps[("C", k)] = c_map(k)
    if t <= K:
        vertex_maps[("T", t)] = t_map()

    vertex_psi = {tag: sum(mp.values()) for tag, mp in vertex_maps.items()}
    vertex_cells = {
        tag: _point_cell(mp, classes, x) for tag, mp in vertex_maps.items()
    }

    edge_endpoints = {}
    edge_kind = {}
    edge_cells = {}
    rung_range = list(range(-K, right + 1))
    for k in rung_range:
        edge_endpoints[("d", k)] = (("A", k), ("B", k))
        edge_kind[("d", k)] = "horizontal"
        edge_cells[("d", k)] = _rung_cell(k, classes, x)
    for k in range(-K, hi + 1):
        nxt = ("T", t) if k == t else ("A", k + 1)
        edge_endpoints[("c+", k)] = (("A", k), nxt)
        nxt_b = ("T", t) if k == t else ("B", k + 1)
        edge_endpoints[("c-", k)] = (("B", k), nxt_b)
        edge_endpoints[("e+", k)] = (("A", k), ("C", k))
        edge_endpoints[("e-", k)] = (("B", k), ("C", k))
        edge_kind[("c+", k)] = edge_kind[("c-", k)] = "horizontal"
        edge_kind[("e+", k)] = edge_kind[("e-", k)] = "vertical"
        edge_cells[("c+", k)] = _triple_cell(
            [f"u{k}", f"u{k + 1}", "delta1"],
            classes,
            {f"u{k}": True, "delta1": True, f"u{k + 1}": False},
            x,
        )
        edge_cells[("c-", k)] = _triple_cell(
            [f"u{k}", f"u{k + 1}", "delta2"],
            classes,
            {f"u{k}": True, "delta2": True, f"u{k + 1}": False},
            x,
        )
        edge_cells[("e+", k)] = _triple_cell(
            [f"u{k}", f"w{k}", "delta1"],
            classes,
            {f"u{k}": True, f"w{k}": True, "delta1": False},
            x,
        )
        edge_cells[("e-", k)] = _triple_cell(
            [f"u{k}", f"w{k}", "delta2"],
            classes,
            {f"u{k}": True, f"w{k}": True, "delta2": False},
            x,
        )

    edge_external = {}
    for k in range(-K, hi + 1):
        meta = {
            "horizontal_cofaces": 2,
            "shapes": ["rectangular", "triangular"],
            "psi": m + 2 * (n - m * k),
        }
        edge_external[("e+", k)] = dict(meta)
        edge_external[("e-", k)] = dict(meta)

    cell_boundary = {}
    cell_kind = {}
    cell_psi = {}
    cell_cells = {}
    rect_top = hi if hi < t else hi - 1
    for k in range(-K, rect_top + 1):
        tag = ("R", k)
        cell_boundary[tag] = {
            ("c+", k): 1,
            ("d", k + 1): 1,
            ("c-", k): -1,
            ("d", k): -1,
        }
        cell_kind[tag] = "rectangle"
        cell_psi[tag] = m + n - m * k
        cell_cells[tag] = _rect_cell(k, classes, x)
    closing = None
    if t <= K:
        closing = ("tri", t)
        cell_boundary[closing] = {("c+", t): 1, ("c-", t): -1, ("d", t): -1}
        cell_kind[closing] = "closing-triangle"
        cell_psi[closing] = m + n - m * t
        cell_cells[closing] = _rect_cell(t, classes, x)
    for k in range(-K, hi + 1):
        tag = ("V", k)
        cell_boundary[tag] = {("e+", k): 1, ("e-", k): -1, ("d", k): -1}
        cell_kind[tag] = "vertical"
        cell_psi[tag] = m + 2 * (n - m * k)
        cell_cells[tag] = _vert_cell(k, classes, x)

    ladder = LadderComplex(
        m,
        n,
        K,
        (
            vertex_psi,
            vertex_cells,
            edge_endpoints,
            edge_kind,
            edge_cells,
            edge_external,
            cell_boundary,
            cell_kind,
            cell_psi,
            cell_cells,
            closing,
        ),
    )
    _check_geometry(ladder, vertex_maps)
    _check_external_witnesses(ladder, classes, x)
    return ladder


def _rect_cell(k, classes, x):
    """Two genus-0 pieces joined by the sheet pair, with the bounding
    pair hanging off a genus-1 piece.  Holds the rectangle cells and,
    at the closing sheet, the triangle."""
    edges = [
        (f"u{k}", 0, 1),
        (f"u{k + 1}", 1, 0),
        ("delta1", 0, 2),
        ("delta2", 2, 1),
    ]
    graph = DecompGraph([(0, 0), (1, 0), (2, 1)], edges)
    names = [e for e, _, _ in edges]
    m = LabeledMulticurve(graph, {e: classes[e] for e in names}, x)
    cell = CellInstance(m)
    assert cell.dim == 2
    return cell


def _vert_cell(k, classes, x):
    edges = [
        (f"u{k}", 0, 1),
        (f"w{k}", 0, 1),
        ("delta1", 2, 0),
        ("delta2", 1, 2),
    ]
    graph = DecompGraph([(0, 0), (1, 0), (2, 1)], edges)
    names = [e for e, _, _ in edges]
    m = LabeledMulticurve(graph, {e: classes[e] for e in names}, x)
    cell = CellInstance(m)
    assert cell.dim == 2
    return cell


def _check_geometry(ladder, vertex_maps):
    """Abstract incidence must match the geometric cells edge for edge."""
    for tag, (tail, head) in ladder.edge_endpoints.items():
        cell = ladder.edge_cells[tag]
        got = {frozenset(v.coefficients.items()) for v in cell.verts}
        want = {
            frozenset(vertex_maps[tail].items()),
            frozenset(vertex_maps[head].items()),
        }
        if got != want:
            raise InternalInconsistencyError(f"edge {tag} endpoints drifted")
    for tag, boundary in ladder.cell_boundary.items():
        cell = ladder.cell_cells[tag]
        geometric = {
            frozenset(str(e) for e in face.multicurve.edge_ids())
            for _, face in boundary_faces(cell)
        }
        abstract = {
            frozenset(
                str(e) for e in ladder.edge_cells[edge].multicurve.edge_ids()
            )
            for edge in boundary
        }
        if geometric != abstract:
            raise InternalInconsistencyError(f"cell {tag} faces drifted")


def _check_external_witnesses(ladder, classes, x):
    """The vertical edges really lie on one rectangular and one
    triangular horizontal cell outside the ladder, at the stated weight."""
    k = 0 if -ladder.K <= 0 <= min(ladder.t, ladder.K) else min(ladder.t, ladder.K)
    u, w, y = classes[f"u{k}"], classes[f"w{k}"], classes["delta1"]
    tri_edges = [(f"u{k}", 0, 1), ("delta1", 1, 0), (f"w{k}", 0, 2), ("w'", 2, 1)]
    tri_graph = DecompGraph([(0, 0), (1, 0), (2, 1)], tri_edges)
    tri = CellInstance(
        LabeledMulticurve(
            tri_graph,
            {f"u{k}": u, "delta1": y, f"w{k}": w, "w'": w},
            x,
        )
    )
    rect_edges = [(f"w{k}", 0, 1), ("delta1", 1, 0), (f"u{k}", 0, 2), ("u'", 2, 1)]
    rect_graph = DecompGraph([(0, 0), (1, 0), (2, 1)], rect_edges)
    rect = CellInstance(
        LabeledMulticurve(
            rect_graph,
            {f"w{k}": w, "delta1": y, f"u{k}": u, "u'": u},
            x,
        )
    )
    if not (len(tri.verts) == 3 and len(rect.verts) == 4):
        raise InternalInconsistencyError("external witness shapes drifted")
    expect = ladder.edge_external[("e+", k)]["psi"]
    if psi_max(tri) != expect or psi_max(rect) != expect:
        raise InternalInconsistencyError("external witness weights drifted")
    edge_pair = {
        frozenset(v.coefficients.items())
        for v in ladder.edge_cells[("e+", k)].verts
    }
    for witness in (tri, rect):
        have = {frozenset(v.coefficients.items()) for v in witness.verts}
        if not edge_pair <= have:
            raise InternalInconsistencyError("vertical edge left its witnesses")


def restrict_to_alpha(x, alpha_class, y):
    """Predicate for cells that stay clear of a fixed curve of class x.

    The returned callable accepts a multicurve targeting y exactly when
    the curve system extends by one more curve of class x, placed either
    as a loop on a positive-genus piece or by splitting a piece in two,
    with every piece keeping negative Euler characteristic.
    """
    if alpha_class != x:
        raise PreconditionError("the distinguished curve must carry the class x")
    if y.is_zero():
        raise PreconditionError("the target class must be nonzero")
    if y == x:
        raise PreconditionError("the target class must differ from x")
    if intersection(x, y) != 0:
        raise PreconditionError("x and y must have vanishing pairing")

    def predicate(m):
        if m.x != y:
            raise PreconditionError("cell does not target the restricted class")
        if any(intersection(x, c) != 0 for c in m.classes.values()):
            return False
        return _extends_disjointly(m, x)

    return predicate


def _extends_disjointly(m, x):
    rows = m.class_rows()
    in_span = matrix_rank(rows + [list(x.coords)]) == matrix_rank(rows)
    if not in_span:
        return any(g >= 1 for _, g in m.graph.vertices)
    for v, g in m.graph.vertices:
        half = []
        for e, tail, head in m.graph.edges:
            if tail == v:
                half.append(m.class_of(e))
            if head == v:
                half.append(-1 * m.class_of(e))
        deg = len(half)
        for mask in range(1 << deg):
            total = HVector([0] * 6)
            size = 0
            for i in range(deg):
                if mask >> i & 1:
                    total = total + half[i]
                    size += 1
            if total + x != HVector([0] * 6):
                continue
            need_left = max(0, (2 - size + 1) // 2)
            need_right = max(0, (2 - (deg - size) + 1) // 2)
            if need_left + need_right <= g:
                return True
    return False
