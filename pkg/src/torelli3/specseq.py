"""Truncated first pages of the cycle-complex spectral sequence.

Stabilizer homology is symbolic: each generator is a cell orbit id plus
a tag naming a twist class or an abelian cycle, following the explicit
bases of the source material.  Differentials become sparse integer
matrices on these labels, and injectivity or kernel questions are
settled exactly by Smith normal form.  Truncations are explicit; an
image that would leave the window raises instead of being clipped.
"""

from .lattice import (
    A3 as _A3_CLASS,
    HVector,
    Splitting,
    SymplecticSubgroup,
    enumerate_symplectic_rank2,
    hermite_row_form,
    intersection,
    kernel_basis,
    matrix_rank,
    splitting_type_wrt_x,
    splitting_type_wrt_y,
)
from .cycles import CellInstance, boundary_faces
from .relcycles import dim_cd_inequality
from .surface import (
    DecompGraph,
    LabeledMulticurve,
    cd_upper_bound,
    classify_types,
)


class TruncationOverflowError(ValueError):
    """An image label falls outside the truncation window."""


class AdmissibilityError(ValueError):
    """A generator does not fit the labeling scheme of its position."""


class GeneratorTag:
    """Symbolic stabilizer-homology generator.

    Kinds: ``bp`` (conjugated bounding-pair twist class, integer index),
    ``sep`` (separating twist, a rank-2 subgroup), ``a2`` (abelian cycle
    of two commuting twists), ``a2pair`` (two orthogonal subgroups,
    stored in canonical order with a sign), ``a3`` (a full splitting).
    """

    __slots__ = ("kind", "data")

    def __init__(self, kind, data):
        self.kind = kind
        self.data = data

    @classmethod
    def bp_twist(cls, k):
        return cls("bp", int(k))

    @classmethod
    def sep_twist(cls, u):
        return cls("sep", u.key())

    @classmethod
    def a2(cls, u):
        return cls("a2", u.key())

    @classmethod
    def a2_pair(cls, u1, u2):
        """Tag for a pair of orthogonal subgroups; swapping flips sign."""
        if u1.key() == u2.key():
            raise AdmissibilityError("pair parts must differ")
        for v in u1.vectors():
            for w in u2.vectors():
                if intersection(v, w) != 0:
                    raise AdmissibilityError("pair parts must be orthogonal")
        a, b = u1.key(), u2.key()
        if a <= b:
            return cls("a2pair", (a, b, 1))
        return cls("a2pair", (b, a, -1))

    @classmethod
    def a3(cls, splitting):
        return cls("a3", splitting.unordered_key())

    @property
    def sign(self):
        return self.data[2] if self.kind == "a2pair" else 1

    def key(self):
        return (self.kind, self.data)

    def __eq__(self, other):
        if not isinstance(other, GeneratorTag):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return str(self.key()) < str(other.key())

    def __repr__(self):
        return f"GeneratorTag({self.kind}, {self.data!r})"


class Truncation:
    """Bag of truncation parameters; unknown names are rejected."""

    _FIELDS = (
        "K",
        "height",
        "orbits",
        "cells",
        "splittings",
        "x",
        "y",
        "ladder",
        "subgroups",
        "sheets",
    )
    __slots__ = _FIELDS

    def __init__(self, **kwargs):
        for name in self._FIELDS:
            object.__setattr__(self, name, kwargs.pop(name, None))
        if kwargs:
            raise ValueError(f"unknown truncation fields: {sorted(kwargs)}")

    def __repr__(self):
        shown = {
            name: getattr(self, name)
            for name in self._FIELDS
            if getattr(self, name) is not None
        }
        return f"Truncation({shown!r})"


class E1Truncation:
    """A labeled basis of one truncated page position."""

    __slots__ = ("position", "basis", "trunc", "splitting_index")

    def __init__(self, position, basis, trunc, splitting_index=None):
        seen = set()
        for orbit, tag in basis:
            label = (orbit, tag.key())
            if label in seen:
                raise ValueError(f"duplicate basis label {label}")
            seen.add(label)
        self.position = position
        self.basis = list(basis)
        self.trunc = trunc
        self.splitting_index = splitting_index or {}

    def labels(self):
        return [(orbit, tag) for orbit, tag in self.basis]

    def __len__(self):
        return len(self.basis)

    def __repr__(self):
        return f"E1Truncation(position={self.position}, size={len(self.basis)})"


class SparseIntMatrix:
    """Integer matrix indexed by hashable labels."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        self.rows = list(rows)
        self.cols = list(cols)
        self.entries = dict(entries)
        row_set, col_set = set(self.rows), set(self.cols)
        for r, c in self.entries:
            if r not in row_set or c not in col_set:
                raise ValueError("entry outside the declared index sets")

    @classmethod
    def from_columns(cls, columns):
        """columns: list of (col_label, {row_label: entry})."""
        rows = sorted({r for _, col in columns for r in col}, key=str)
        entries = {}
        for label, col in columns:
            for r, v in col.items():
                if v:
                    entries[(r, label)] = entries.get((r, label), 0) + v
        return cls(rows, [label for label, _ in columns], entries)

    def dense(self):
        return [
            [self.entries.get((r, c), 0) for c in self.cols] for r in self.rows
        ]

    def rank(self):
        if not self.rows or not self.cols:
            return 0
        return matrix_rank(self.dense())

    def kernel_vectors(self):
        if not self.cols:
            return []
        if not self.rows:
            basis = [[0] * len(self.cols) for _ in self.cols]
            for i in range(len(self.cols)):
                basis[i][i] = 1
            return basis
        return kernel_basis(self.dense(), ncols=len(self.cols))

    def column_support(self, col):
        return {r for (r, c) in self.entries if c == col}

    def __repr__(self):
        return "SparseIntMatrix(%d x %d, nnz=%d)" % (
            len(self.rows),
            len(self.cols),
            len(self.entries),
        )


def check_injective(mat):
    """True exactly when the integer kernel is trivial."""
    return mat.rank() == len(mat.cols)


def admissible_subgroups(cell, height):
    """Rank-2 symplectic subgroups compatible with a cell.

    Either the subgroup is orthogonal to every curve class, meets their
    span only in zero, and some piece has positive genus to host it; or
    the cell carries a loop whose class generates a free handle inside
    the subgroup, with the subgroup orthogonal to all other classes.
    """
    return [u for u in enumerate_symplectic_rank2(height) if is_admissible(cell, u)]


def is_admissible(cell, u):
    """Whether one subgroup fits the cell (either admissibility route)."""
    m = cell.multicurve
    class_rows = m.class_rows()
    base_rank = matrix_rank(class_rows)
    has_genus = any(g >= 1 for _, g in m.graph.vertices)
    loops = [e for e in m.edge_ids() if m.graph.is_loop(e)]
    u_rows = [list(v.coords) for v in u.vectors()]
    if _admissible_with_genus(m, u, class_rows, base_rank, u_rows, has_genus):
        return True
    return _admissible_with_loop(m, u, loops, u_rows)


def _admissible_with_genus(m, u, class_rows, base_rank, u_rows, has_genus):
    if not has_genus:
        return False
    for v in u.vectors():
        for c in m.classes.values():
            if intersection(v, c) != 0:
                return False
    return matrix_rank(class_rows + u_rows) == base_rank + 2


def _admissible_with_loop(m, u, loops, u_rows):
    for e in loops:
        cls = m.class_of(e)
        if not u.contains(cls):
            continue
        rest = [
            list(m.class_of(f).coords) for f in m.edge_ids() if f != e
        ]
        if any(
            intersection(v, m.class_of(f)) != 0
            for v in u.vectors()
            for f in m.edge_ids()
            if f != e
        ):
            continue
        rest_rank = matrix_rank(rest) if rest else 0
        if matrix_rank(rest + [list(cls.coords)]) == rest_rank:
            continue
        if matrix_rank(rest + u_rows) == rest_rank + 2:
            return True
    return False


SUPPORTED_POSITIONS = ((3, 1), (2, 1), (2, 2), (1, 2), (1, 3), (0, 3))


def build_e1(position, trunc):
    """Labeled basis of a truncated page position.

    Positions and their labels: (3,1) one twist class per translated
    3-cell orbit; (2,1) conjugated twist classes within the window;
    (2,2)/(1,2) abelian cycles per ladder cell or edge, sheet, and
    admissible subgroup; (1,3) pair tags per splitting organized by type;
    (0,3) one splitting tag per splitting.
    """
    if position == (3, 1):
        return _build_31(trunc)
    if position == (2, 1):
        return _build_21(trunc)
    if position in ((2, 2), (1, 2)):
        return _build_ladder_position(position, trunc)
    if position == (1, 3):
        if trunc.y is not None:
            return _build_13_tilde(trunc)
        return _build_13(trunc)
    if position == (0, 3):
        basis = [
            (("vertex", s.unordered_key()), GeneratorTag.a3(s))
            for s in trunc.splittings
        ]
        index = {s.unordered_key(): s for s in trunc.splittings}
        return E1Truncation(position, basis, trunc, index)
    raise ValueError(f"unsupported position {position}")


def _build_31(trunc):
    if not trunc.orbits or not trunc.K:
        raise ValueError("need orbits and a conjugation window")
    basis = [
        ((orbit, j), GeneratorTag.bp_twist(0))
        for orbit in trunc.orbits
        for j in range(trunc.K)
    ]
    return E1Truncation((3, 1), basis, trunc)


def _build_21(trunc):
    if not trunc.orbits or not trunc.K:
        raise ValueError("need orbits and a conjugation window")
    basis = [
        (orbit, GeneratorTag.bp_twist(k))
        for orbit in trunc.orbits
        for k in range(-trunc.K, trunc.K + 1)
    ]
    return E1Truncation((2, 1), basis, trunc)


def _build_ladder_position(position, trunc):
    ladder = trunc.ladder
    sheets = trunc.sheets or ("plain", "appended")
    height = 1 if trunc.height is None else trunc.height
    subgroups = trunc.subgroups
    tags = ladder.two_cells() if position == (2, 2) else ladder.edges()
    cells = (
        ladder.cell_cells if position == (2, 2) else ladder.edge_cells
    )
    basis = []
    for sheet in sheets:
        for tag in tags:
            cell = cells[tag]
            if sheet == "appended":
                cell = append_loop(cell)
            for u in subgroups:
                if u.height() > height:
                    raise AdmissibilityError(
                        f"subgroup {u.key()} exceeds height {height}"
                    )
                if not is_admissible(cell, u):
                    raise AdmissibilityError(
                        f"subgroup {u.key()} not admissible for {tag}/{sheet}"
                    )
                basis.append(((tag, sheet), GeneratorTag.a2(u)))
    return E1Truncation(position, basis, trunc)


def append_loop(cell, name="beta", cls=_A3_CLASS):
    """The same cell with one extra loop on a positive-genus piece.

    The loop spends one unit of genus and carries a class independent of
    the others, so the polytope combinatorics are unchanged while every
    multicurve in sight gains the loop.
    """
    m = cell.multicurve
    host = None
    for v, g in m.graph.vertices:
        if g >= 1:
            host = v
            break
    if host is None:
        raise AdmissibilityError("no piece can host the loop")
    vertices = [
        (v, g - 1 if v == host else g) for v, g in m.graph.vertices
    ]
    edges = list(m.graph.edges) + [(name, host, host)]
    classes = dict(m.classes)
    classes[name] = cls
    graph = DecompGraph(vertices, edges)
    return CellInstance(LabeledMulticurve(graph, classes, m.x + cls))


def d31_apply(src):
    """Difference of the two conjugate twist labels, per source cell."""
    if src.position != (3, 1):
        raise ValueError("source must sit at position (3, 1)")
    K = src.trunc.K
    columns = []
    for orbit, tag in src.basis:
        base, j = orbit
        if tag.kind != "bp":
            raise AdmissibilityError(f"unexpected tag {tag!r} at (3, 1)")
        if not (0 <= j and j + 1 <= K):
            raise TruncationOverflowError(
                f"translate {j} needs window {j + 1}, have {K}"
            )
        plus = (base, GeneratorTag.bp_twist(j))
        minus = (base, GeneratorTag.bp_twist(-j - 1))
        columns.append(((orbit, tag), {plus: 1, minus: -1}))
    return SparseIntMatrix.from_columns(columns)


def d22_apply(src, ladder):
    """Ladder boundary with the subgroup tag carried to every face."""
    if src.position != (2, 2):
        raise ValueError("source must sit at position (2, 2)")
    columns = []
    for (tag, sheet), gen in src.basis:
        if tag not in ladder.cell_boundary:
            raise TruncationOverflowError(f"cell {tag} outside the ladder")
        col = {}
        for edge, sign in ladder.cell_boundary[tag].items():
            if edge not in ladder.edge_endpoints:
                raise TruncationOverflowError(f"face {edge} outside the ladder")
            col[((edge, sheet), gen)] = sign
        columns.append((((tag, sheet), gen), col))
    return SparseIntMatrix.from_columns(columns)


def check_image_separation(ladder, u):
    """Faces of plain cells never meet the subgroup; faces of appended
    cells always do, through the loop class."""
    for tag in ladder.two_cells():
        plain = ladder.cell_cells[tag]
        for _, face in boundary_faces(plain):
            if any(u.contains(c) for c in face.multicurve.classes.values()):
                return False
        appended = append_loop(plain)
        for _, face in boundary_faces(appended):
            if not any(
                u.contains(c) for c in face.multicurve.classes.values()
            ):
                return False
    return True


def _build_13(trunc):
    """Pair-tagged basis organized by splitting type relative to x."""
    x = trunc.x
    basis = []
    index = {}
    for s in trunc.splittings:
        letter, perm = splitting_type_wrt_x(x, s)
        parts = [s.parts[i] for i in perm]
        key = s.unordered_key()
        index[key] = s
        if letter == "a":
            gens = [GeneratorTag.a2_pair(parts[1], parts[2])]
        elif letter == "b":
            gens = [
                GeneratorTag.a2_pair(parts[1], parts[2]),
                GeneratorTag.a2_pair(parts[0], parts[2]),
            ]
        else:
            gens = [
                GeneratorTag.a2_pair(parts[1], parts[2]),
                GeneratorTag.a2_pair(parts[2], parts[0]),
                GeneratorTag.a2_pair(parts[0], parts[1]),
            ]
        for i, gen in enumerate(gens):
            basis.append((((letter, key, i)), gen))
    return E1Truncation((1, 3), basis, trunc, index)


def d13_apply(src):
    """Types (a) and (b) die; each type-(c) generator hits its splitting."""
    if src.position != (1, 3) or src.trunc.y is not None:
        raise ValueError("source must be the plain (1, 3) truncation")
    columns = []
    for orbit, tag in src.basis:
        letter, key, _ = orbit
        if letter not in ("a", "b", "c"):
            raise AdmissibilityError(f"unclassified generator {orbit!r}")
        col = {}
        if letter == "c":
            s = src.splitting_index[key]
            col[(("vertex", key), GeneratorTag.a3(s))] = 1
        columns.append(((orbit, tag), col))
    return SparseIntMatrix.from_columns(columns)


def _kernel_matches_pattern(src, mat, pattern):
    """The SNF kernel lattice must equal the span of the pattern rows."""
    labels = [(orbit, tag.key()) for orbit, tag in src.basis]
    position = {label: i for i, label in enumerate(labels)}
    rows = []
    for combo in pattern:
        vec = [0] * len(labels)
        for label, coeff in combo.items():
            vec[position[label]] = coeff
        rows.append(vec)
    kernel = mat.kernel_vectors()
    if len(kernel) != len(rows):
        return False
    if not rows:
        return True
    return hermite_row_form(rows) == hermite_row_form(kernel)


def e2_13_kernel(src):
    """Kernel of the differential out of (1, 3), with its basis pattern.

    One surviving generator per type-(a) splitting, both generators per
    type-(b), and the two consecutive differences per type-(c); the
    pattern is verified against the exact integer kernel.
    """
    mat = d13_apply(src)
    groups = {}
    for orbit, tag in src.basis:
        letter, key, i = orbit
        groups.setdefault((letter, key), []).append(((orbit, tag.key()), i))
    pattern = []
    for (letter, _), gens in sorted(groups.items(), key=str):
        gens.sort(key=lambda g: g[1])
        labels = [g[0] for g in gens]
        if letter == "a":
            pattern.append({labels[0]: 1})
        elif letter == "b":
            pattern.append({labels[0]: 1})
            pattern.append({labels[1]: 1})
        else:
            pattern.append({labels[0]: 1, labels[1]: -1})
            pattern.append({labels[1]: 1, labels[2]: -1})
    if not _kernel_matches_pattern(src, mat, pattern):
        raise AdmissibilityError("kernel does not match the expected pattern")
    return {"rank": len(pattern), "basis": pattern, "matrix": mat}


def _build_13_tilde(trunc):
    """Basis for the page of the stabilizer of a distinguished curve.

    Splittings must isolate x in one part; the y decomposition then
    yields types (1) to (4) with one, two, two and three generators.
    """
    x, y = trunc.x, trunc.y
    basis = []
    index = {}
    for s in trunc.splittings:
        letter, perm = splitting_type_wrt_x(x, s)
        if letter != "a":
            raise AdmissibilityError("x must lie in a single part")
        x_part = perm[0]
        ytype = splitting_type_wrt_y(y, s, x_part)
        comps = s.decompose(y)
        touched = [
            i for i in range(3) if i != x_part and not comps[i].is_zero()
        ]
        untouched = [
            i for i in range(3) if i != x_part and comps[i].is_zero()
        ]
        key = s.unordered_key()
        index[key] = s
        u = s.parts
        if ytype == 1:
            gens = [("t1", GeneratorTag.a2_pair(u[x_part], u[untouched[0]]))]
        elif ytype == 2:
            j, free = touched[0], untouched[0]
            gens = [
                ("t22", GeneratorTag.a2_pair(u[j], u[free])),
                ("t22p", GeneratorTag.a2_pair(u[x_part], u[free])),
            ]
        elif ytype == 3:
            j2, j3 = touched
            gens = [
                ("t32a", GeneratorTag.a2_pair(u[j3], u[x_part])),
                ("t32b", GeneratorTag.a2_pair(u[x_part], u[j2])),
            ]
        else:
            j2, j3 = touched
            gens = [
                ("t42", GeneratorTag.a2_pair(u[j2], u[j3])),
                ("t52a", GeneratorTag.a2_pair(u[j3], u[x_part])),
                ("t52b", GeneratorTag.a2_pair(u[x_part], u[j2])),
            ]
        for name, gen in gens:
            basis.append(((ytype, key, name), gen))
    return E1Truncation((1, 3), basis, trunc, index)


def d13_tilde_apply(src):
    """Images per the typed list for the restricted complex."""
    if src.position != (1, 3) or src.trunc.y is None:
        raise ValueError("source must be the restricted (1, 3) truncation")
    columns = []
    for orbit, tag in src.basis:
        ytype, key, name = orbit
        s = src.splitting_index[key]
        col = {}
        if name in ("t1", "t22p"):
            pass
        elif name == "t22":
            col[(("b1b2", key), tag)] = 1
            col[(("b1'b2", key), tag)] = -1
        elif name in ("t32a", "t32b"):
            col[(("b2b3", key), GeneratorTag.a3(s))] = 1
        elif name == "t42":
            col[(("b1b2b3", key), tag)] = 1
            col[(("b1'b2b3", key), tag)] = -1
        elif name in ("t52a", "t52b"):
            col[(("b1b2b3", key), GeneratorTag.a3(s))] = 1
        else:
            raise AdmissibilityError(f"unclassified generator {orbit!r}")
        columns.append(((orbit, tag), col))
    return SparseIntMatrix.from_columns(columns)


def e2_13_tilde_kernel(src):
    """Kernel pattern: the lone type-(1) generator, the second type-(2)
    generator, and one difference each for types (3) and (4)."""
    mat = d13_tilde_apply(src)
    groups = {}
    for orbit, tag in src.basis:
        ytype, key, name = orbit
        groups.setdefault((ytype, key), {})[name] = (orbit, tag.key())
    pattern = []
    for (ytype, _), gens in sorted(groups.items(), key=str):
        if ytype == 1:
            pattern.append({gens["t1"]: 1})
        elif ytype == 2:
            pattern.append({gens["t22p"]: 1})
        elif ytype == 3:
            pattern.append({gens["t32a"]: 1, gens["t32b"]: -1})
        else:
            pattern.append({gens["t52a"]: 1, gens["t52b"]: -1})
    if not _kernel_matches_pattern(src, mat, pattern):
        raise AdmissibilityError("kernel does not match the expected pattern")
    return {"rank": len(pattern), "basis": pattern, "matrix": mat}


def vanishing_census():
    """Vanishing table for stabilizer homology over the census.

    Each type's entry records the degree bound above which the homology
    of the stabilizer vanishes; the restricted page at (0, 4) is zero
    because the bound on the cut-open sphere caps the degree at three.
    """
    table = []
    for p in range(4):
        for entry in classify_types(3, p):
            bound = cd_upper_bound(entry.witness)
            table.append(
                {
                    "fingerprint": entry.fingerprint,
                    "dim": p,
                    "cd_bound": bound,
                    "zero_above": bound,
                }
            )
    return {
        "types": table,
        "tilde_0_4_zero": not dim_cd_inequality(0, 4, 3),
    }
