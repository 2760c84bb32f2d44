"""Multicurves on a closed surface, recorded as labeled decomposition graphs.

Cutting the surface along a multicurve leaves a disjoint union of pieces.
We keep one vertex per piece, remembering its genus, and one edge per curve,
joining the pieces on its two sides (a loop when both sides meet the same
piece).  Euler characteristic bookkeeping on this graph drives everything
downstream: the bounding-pair count, the dimension of the associated cell,
the cohomological-dimension bound, and the genus-3 census of combinatorial
types.
"""

from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product

from .lattice import A1, A2, A3, HVector, ZERO, intersection, kernel_basis, matrix_rank

ISOTROPIC_BASIS = (A1, A2, A3)


class MalformedGraphError(ValueError):
    """A decomposition graph or its labeling breaks a structural invariant."""


class DecompGraph:
    """Genus-labeled multigraph describing the complement of a multicurve.

    ``vertices`` is a sequence of ``(id, genus)`` pairs and ``edges`` a
    sequence of ``(id, tail, head)`` triples; the tail/head order is the
    orientation of the curve.  Loops are allowed.  The graph must be
    connected and every vertex must have Euler characteristic at most -1,
    so no piece is a disk or an annulus.
    """

    __slots__ = ("vertices", "edges", "_genus", "_degree")

    def __init__(self, vertices, edges):
        vertices = tuple((v, int(g)) for v, g in vertices)
        edges = tuple((e, t, h) for e, t, h in edges)
        if not vertices:
            raise MalformedGraphError("a decomposition graph needs at least one vertex")
        ids = [v for v, _ in vertices]
        if len(set(ids)) != len(ids):
            raise MalformedGraphError("duplicate vertex ids")
        eids = [e for e, _, _ in edges]
        if len(set(eids)) != len(eids):
            raise MalformedGraphError("duplicate edge ids")
        known = set(ids)
        for e, t, h in edges:
            if t not in known or h not in known:
                raise MalformedGraphError(f"edge {e!r} touches an unknown vertex")
        genus = dict(vertices)
        for v, g in vertices:
            if g < 0:
                raise MalformedGraphError(f"vertex {v!r} has negative genus")
        degree = {v: 0 for v in known}
        for _, t, h in edges:
            degree[t] += 1
            degree[h] += 1
        self.vertices = vertices
        self.edges = edges
        self._genus = genus
        self._degree = degree
        if not self._is_connected():
            raise MalformedGraphError("graph is not connected")
        for v in known:
            if self.euler_char(v) > -1:
                raise MalformedGraphError(
                    f"vertex {v!r} would be a disk or annulus piece"
                )

    def _is_connected(self):
        start = self.vertices[0][0]
        seen = {start}
        frontier = [start]
        neighbors = {v: set() for v, _ in self.vertices}
        for _, t, h in self.edges:
            neighbors[t].add(h)
            neighbors[h].add(t)
        while frontier:
            v = frontier.pop()
            for w in neighbors[v]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return len(seen) == len(self.vertices)

    @property
    def vertex_ids(self):
        return tuple(v for v, _ in self.vertices)

    @property
    def edge_ids(self):
        return tuple(e for e, _, _ in self.edges)

    def genus(self, v):
        return self._genus[v]

    def degree(self, v):
        return self._degree[v]

    def euler_char(self, v):
        return 2 - 2 * self._genus[v] - self._degree[v]

    def endpoints(self, e):
        for eid, t, h in self.edges:
            if eid == e:
                return t, h
        raise KeyError(e)

    def is_loop(self, e):
        t, h = self.endpoints(e)
        return t == h

    def genus_multiset(self):
        return tuple(sorted(g for _, g in self.vertices))

    def multiedge_profile(self):
        """Multiplicities (>= 2) of parallel edge bundles, largest first.

        Bundles are keyed by the unordered endpoint pair, so two loops at
        the same vertex count as a bundle of size 2.
        """
        bundles = {}
        for _, t, h in self.edges:
            key = (t, h) if str(t) <= str(h) else (h, t)
            bundles[key] = bundles.get(key, 0) + 1
        return tuple(sorted((m for m in bundles.values() if m >= 2), reverse=True))

    def reoriented(self, flips):
        """Copy of the graph with the edges in ``flips`` reversed."""
        flips = set(flips)
        edges = [
            (e, h, t) if e in flips else (e, t, h) for e, t, h in self.edges
        ]
        return DecompGraph(self.vertices, edges)

    def without_orientations_key(self):
        """Structure key ignoring edge orientations and all id names."""
        order = {v: i for i, (v, _) in enumerate(self.vertices)}
        genera = tuple(g for _, g in self.vertices)
        pairs = tuple(
            sorted(tuple(sorted((order[t], order[h]))) for _, t, h in self.edges)
        )
        return genera, pairs

    def canonical_key(self):
        """Isomorphism invariant: minimum structure key over relabelings."""
        n = len(self.vertices)
        base_genera = [g for _, g in self.vertices]
        order = {v: i for i, (v, _) in enumerate(self.vertices)}
        base_pairs = [tuple(sorted((order[t], order[h]))) for _, t, h in self.edges]
        best = None
        for perm in permutations(range(n)):
            genera = tuple(base_genera[perm.index(i)] for i in range(n))
            pairs = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in base_pairs))
            key = (genera, pairs)
            if best is None or key < best:
                best = key
        return best

    def __eq__(self, other):
        if not isinstance(other, DecompGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"DecompGraph(vertices={list(self.vertices)!r}, edges={list(self.edges)!r})"


class LabeledMulticurve:
    """Decomposition graph with an integral homology class on every curve.

    ``classes`` maps edge id to the class of the curve, oriented by the
    edge's tail/head order; ``x`` is the ambient class the multicurve is
    meant to support.  At every vertex the outgoing-minus-incoming sum of
    incident classes must vanish (the boundary of a piece is
    null-homologous), and the classes must span a subgroup of rank
    ``|edges| - (|vertices| - 1)``.
    """

    __slots__ = ("graph", "classes", "x")

    def __init__(self, graph, classes, x):
        classes = dict(classes)
        if set(classes) != set(graph.edge_ids):
            raise MalformedGraphError("labeling does not match the edge set")
        for v in graph.vertex_ids:
            total = ZERO
            for e, t, h in graph.edges:
                if t == v:
                    total = total + classes[e]
                if h == v:
                    total = total - classes[e]
            if not total.is_zero():
                raise MalformedGraphError(
                    f"boundary of vertex {v!r} is not null-homologous"
                )
        want = len(graph.edges) - (len(graph.vertices) - 1)
        rows = [list(c.coords) for c in classes.values()]
        if matrix_rank(rows) != want:
            raise MalformedGraphError(
                f"classes span rank {matrix_rank(rows)}, expected {want}"
            )
        self.graph = graph
        self.classes = classes
        self.x = x

    def class_of(self, e):
        return self.classes[e]

    def edge_ids(self):
        return self.graph.edge_ids

    def class_rows(self):
        return [list(self.classes[e].coords) for e in self.graph.edge_ids]

    def __eq__(self, other):
        if not isinstance(other, LabeledMulticurve):
            return NotImplemented
        return (
            self.graph == other.graph
            and self.classes == other.classes
            and self.x == other.x
        )

    def __hash__(self):
        return hash((self.graph, tuple(sorted(self.classes.items(), key=lambda kv: str(kv[0]))), self.x))

    def __repr__(self):
        return f"LabeledMulticurve(x={self.x!r}, edges={len(self.classes)})"


def ambient_genus(graph):
    """Genus of the closed surface the graph decomposes.

    >>> ambient_genus(DecompGraph([(0, 3)], []))
    3
    """
    total = sum(graph.euler_char(v) for v in graph.vertex_ids)
    if total % 2 != 0:
        raise MalformedGraphError("total Euler characteristic is odd")
    return (2 - total) // 2


def dimension(graph):
    """Dimension of the cell the multicurve spans: one less than the piece count."""
    return len(graph.vertices) - 1


def bp_count(m):
    """Number of curves minus the number of distinct homology classes."""
    values = {m.classes[e].coords for e in m.graph.edge_ids}
    return len(m.graph.edges) - len(values)


def positive_genus_count(m):
    return sum(1 for _, g in m.graph.vertices if g >= 1)


def cd_upper_bound(m):
    """Upper bound for the cohomological dimension of the stabilizer.

    Only the genus-3 ambient surface is supported; the bound is
    ``6 - P - |M| + BP`` with ``P`` the number of positive-genus pieces.
    """
    if ambient_genus(m.graph) != 3:
        raise ValueError("the bound is pinned to ambient genus 3")
    return 6 - positive_genus_count(m) - len(m.graph.edges) + bp_count(m)


def cd_arithmetic_line(m):
    """The bound spelled out, e.g. '6 − 1 − 3 + 0 = 2'."""
    p = positive_genus_count(m)
    e = len(m.graph.edges)
    bp = bp_count(m)
    return f"6 − {p} − {e} + {bp} = {cd_upper_bound(m)}"


# ---------------------------------------------------------------------------
# realizability


def _has_bridge(graph):
    if len(graph.vertices) == 1:
        return False
    for cut, t, h in graph.edges:
        if t == h:
            continue
        neighbors = {v: set() for v in graph.vertex_ids}
        for e, a, b in graph.edges:
            if e != cut:
                neighbors[a].add(b)
                neighbors[b].add(a)
        seen = {t}
        frontier = [t]
        while frontier:
            v = frontier.pop()
            for w in neighbors[v]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        if h not in seen:
            return True
    return False


def _cycle_rows(graph):
    """Fundamental-cycle coordinates of every edge, entries in {0, +-1}.

    Picks a spanning tree; each non-tree edge spawns one basis cycle.  The
    row of edge e gives the coefficients of e in those cycles, so a
    labeling is conservative exactly when class(e) = sum_i row[i] * h_i for
    free classes h_i attached to the non-tree edges.
    """
    tree = {}
    potential = {graph.vertices[0][0]: {}}
    changed = True
    while changed:
        changed = False
        for e, t, h in graph.edges:
            if t == h or e in tree:
                continue
            if t in potential and h not in potential:
                potential[h] = dict(potential[t])
                potential[h][e] = 1
                tree[e] = True
                changed = True
            elif h in potential and t not in potential:
                potential[t] = dict(potential[h])
                potential[t][e] = -1
                tree[e] = True
                changed = True
    assert len(potential) == len(graph.vertices), "graph must be connected"
    chords = [e for e, _, _ in graph.edges if e not in tree]
    rows = {}
    for e, t, h in graph.edges:
        if e in tree:
            rows[e] = tuple(
                potential[graph.endpoints(c)[0]].get(e, 0)
                - potential[graph.endpoints(c)[1]].get(e, 0)
                for c in chords
            )
        else:
            rows[e] = tuple(1 if c == e else 0 for c in chords)
    return rows, chords


def _no_positive_relation(rows, edge_order):
    """Condition (i): no nontrivial nonnegative combination of classes is 0.

    A violating combination of minimal support lives on a subset whose
    coefficient kernel is one-dimensional and generated by a strictly
    sign-definite vector, so scanning all subsets is exact.
    """
    n = len(edge_order)
    width = len(rows[edge_order[0]]) if n else 0
    for mask in range(1, 1 << n):
        chosen = [edge_order[i] for i in range(n) if mask >> i & 1]
        matrix = [[rows[e][i] for e in chosen] for i in range(width)]
        ker = kernel_basis(matrix, ncols=len(chosen))
        if len(ker) != 1:
            continue
        gen = ker[0]
        if all(k > 0 for k in gen) or all(k < 0 for k in gen):
            return False
    return True


def _common_cycle_class(rows, edge_order, weight_bound=3):
    """Condition (ii) witness: a class carried by a basic cycle through
    every edge, searched over positive integer weights up to the bound."""
    width = len(rows[edge_order[0]])
    hits = {e: set() for e in edge_order}
    n = len(edge_order)
    for mask in range(1, 1 << n):
        chosen = [edge_order[i] for i in range(n) if mask >> i & 1]
        if len(chosen) > width:
            continue
        vecs = [rows[e] for e in chosen]
        if matrix_rank(vecs) != len(chosen):
            continue
        for weights in product(range(1, weight_bound + 1), repeat=len(chosen)):
            total = tuple(
                sum(w * rows[e][i] for w, e in zip(weights, chosen))
                for i in range(width)
            )
            assert any(total), "independent positive combinations cannot vanish"
            for e in chosen:
                hits[e].add(total)
    common = None
    for e in edge_order:
        common = hits[e] if common is None else common & hits[e]
        if not common:
            return None
    return min(common)


def realizability_check(graph):
    """Search for a homology labeling making the graph a genuine multicurve.

    Returns a witness ``LabeledMulticurve`` (classes inside the isotropic
    span of a1, a2, a3 and an ambient class carried by basic cycles through
    every curve), or ``None`` when no labeling exists.  Separating curves
    are impossible in such a labeling, so any bridge is an immediate
    rejection, as is the empty multicurve.
    """
    if not graph.edges:
        return None
    rank = len(graph.edges) - (len(graph.vertices) - 1)
    if rank < 1 or rank > len(ISOTROPIC_BASIS):
        return None
    if _has_bridge(graph):
        return None
    edge_order = list(graph.edge_ids)
    for flips in product((False, True), repeat=len(edge_order)):
        flipped = [e for e, f in zip(edge_order, flips) if f]
        candidate = graph.reoriented(flipped)
        rows, chords = _cycle_rows(candidate)
        assert len(chords) == rank
        if not _no_positive_relation(rows, edge_order):
            continue
        target = _common_cycle_class(rows, edge_order)
        if target is None:
            continue
        basis = ISOTROPIC_BASIS[:rank]
        classes = {}
        for e in edge_order:
            value = ZERO
            for coef, vec in zip(rows[e], basis):
                value = value + coef * vec
            classes[e] = value
        x = ZERO
        for coef, vec in zip(target, basis):
            x = x + coef * vec
        witness = LabeledMulticurve(candidate, classes, x)
        for e in edge_order:
            for f in edge_order:
                assert intersection(classes[e], classes[f]) == 0
        return witness
    return None


# ---------------------------------------------------------------------------
# the census


class CensusEntry:
    """One combinatorial type: a representative graph plus a witness labeling."""

    __slots__ = ("witness",)

    def __init__(self, witness):
        self.witness = witness

    @property
    def graph(self):
        return self.witness.graph

    @property
    def fingerprint(self):
        g = self.graph
        return (
            len(g.vertices),
            len(g.edges),
            g.genus_multiset(),
            g.multiedge_profile(),
        )

    def to_dict(self):
        g = self.graph
        return {
            "vertices": len(g.vertices),
            "edges": len(g.edges),
            "genus_multiset": list(g.genus_multiset()),
            "multiedge_profile": list(g.multiedge_profile()),
            "bp": bp_count(self.witness),
            "p_count": positive_genus_count(self.witness),
            "cd_bound": cd_upper_bound(self.witness),
            "dim": dimension(g),
        }

    def __repr__(self):
        return f"CensusEntry{self.fingerprint!r}"


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _census(p):
    nv = p + 1
    entries = []
    seen = set()
    pairs = [(i, j) for i in range(nv) for j in range(i, nv)]
    for ne in range(max(nv - 1, 0), p + 4):
        total_genus = p + 3 - ne
        for combo in combinations_with_replacement(pairs, ne):
            degree = [0] * nv
            for a, b in combo:
                degree[a] += 1
                degree[b] += 1
            for genera in _compositions(total_genus, nv):
                if any(2 - 2 * g - d > -1 for g, d in zip(genera, degree)):
                    continue
                if not _connected_combo(nv, combo):
                    continue
                key = _canonical_combo(nv, genera, combo)
                if key in seen:
                    continue
                seen.add(key)
                canon_genera, canon_pairs = key
                graph = DecompGraph(
                    [(v, g) for v, g in enumerate(canon_genera)],
                    [(i, a, b) for i, (a, b) in enumerate(canon_pairs)],
                )
                witness = realizability_check(graph)
                if witness is not None:
                    entries.append(CensusEntry(witness))
    entries.sort(key=lambda entry: entry.fingerprint)
    return tuple(entries)


def _connected_combo(nv, combo):
    if nv == 1:
        return True
    neighbors = {v: set() for v in range(nv)}
    for a, b in combo:
        neighbors[a].add(b)
        neighbors[b].add(a)
    seen = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for w in neighbors[v]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return len(seen) == nv


def _canonical_combo(nv, genera, combo):
    best = None
    for perm in permutations(range(nv)):
        pg = tuple(genera[perm.index(i)] for i in range(nv))
        pp = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in combo))
        key = (pg, pp)
        if best is None or key < best:
            best = key
    return best


def classify_types(g, p):
    """Census of combinatorial multicurve types with ``p + 1`` pieces.

    Enumerates connected genus-labeled multigraphs with the right total
    Euler characteristic, dedupes them up to isomorphism, and keeps the
    ones admitting a realizable labeling.  Types beyond the top dimension
    do not exist, so ``p > 3`` yields an empty list.
    """
    if g != 3:
        raise ValueError("only ambient genus 3 is supported")
    if p < 0:
        raise ValueError("dimension must be nonnegative")
    if p > 3:
        return []
    return list(_census(p))


def census_json(g=3):
    """Fingerprint records for every census type, ordered by dimension."""
    out = []
    for p in range(4):
        for entry in classify_types(g, p):
            out.append(entry.to_dict())
    return out
