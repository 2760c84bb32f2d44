"""Integer linear algebra on the genus-3 symplectic lattice.

The ambient lattice is Z^6 with ordered basis (a1, b1, a2, b2, a3, b3) and the
standard alternating form built from three hyperbolic planes.  Everything runs
over plain Python integers; the few spots that need division go through
fractions.Fraction and check integrality afterwards.

Matrices are sequences of rows.  Sublattices are always stored through their
Hermite canonical basis, so equal sublattices compare equal.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd


class HVector:
    """A lattice element in the fixed basis (a1, b1, a2, b2, a3, b3)."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != 6:
            raise ValueError("expected 6 coordinates, got %d" % len(coords))
        self.coords = coords

    def __add__(self, other):
        return HVector(x + y for x, y in zip(self.coords, other.coords))

    def __sub__(self, other):
        return HVector(x - y for x, y in zip(self.coords, other.coords))

    def __neg__(self):
        return HVector(-x for x in self.coords)

    def __rmul__(self, k):
        return HVector(int(k) * x for x in self.coords)

    def __eq__(self, other):
        return isinstance(other, HVector) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self):
        return all(x == 0 for x in self.coords)

    def __repr__(self):
        names = ("a1", "b1", "a2", "b2", "a3", "b3")
        terms = []
        for c, name in zip(self.coords, names):
            if c == 0:
                continue
            if c == 1:
                terms.append("+%s" % name)
            elif c == -1:
                terms.append("-%s" % name)
            else:
                terms.append("%+d%s" % (c, name))
        return "HVector(%s)" % ("".join(terms).lstrip("+") or "0")


A1 = HVector((1, 0, 0, 0, 0, 0))
B1 = HVector((0, 1, 0, 0, 0, 0))
A2 = HVector((0, 0, 1, 0, 0, 0))
B2 = HVector((0, 0, 0, 1, 0, 0))
A3 = HVector((0, 0, 0, 0, 1, 0))
B3 = HVector((0, 0, 0, 0, 0, 1))
ZERO = HVector((0, 0, 0, 0, 0, 0))
BASIS = (A1, B1, A2, B2, A3, B3)


class SymplecticForm:
    """The standard alternating pairing, <a_i, b_i> = 1."""

    __slots__ = ("gram",)

    def __init__(self):
        g = [[0] * 6 for _ in range(6)]
        for i in (0, 2, 4):
            g[i][i + 1] = 1
            g[i + 1][i] = -1
        self.gram = tuple(tuple(row) for row in g)

    def pairing(self, u, v):
        g = self.gram
        uc, vc = u.coords, v.coords
        return sum(uc[i] * g[i][j] * vc[j] for i in range(6) for j in range(6))

    def form_row(self, u):
        """The linear functional <u, .> as a coefficient row."""
        g = self.gram
        uc = u.coords
        return tuple(sum(uc[i] * g[i][j] for i in range(6)) for j in range(6))


STANDARD_FORM = SymplecticForm()


def intersection(u, v):
    """Algebraic intersection number of two classes.

    >>> intersection(A1 + 2 * B2, 3 * A2 - B1)
    -7
    """
    return STANDARD_FORM.pairing(u, v)


# ---------------------------------------------------------------------------
# plain integer matrix utilities


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m):
    return [list(col) for col in zip(*m)]


def matrix_product(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matrix_vector(m, v):
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def smith_normal_form(m):
    """Smith normal form with transforms.

    Returns (factors, left, right) with left * m * right diagonal, the
    diagonal entries nonnegative and each dividing the next.

    >>> smith_normal_form([[2, 4], [6, 8]])[0]
    (2, 4)
    """
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    left = identity_matrix(rows)
    right = identity_matrix(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + k * y for x, y in zip(left[dst], left[src])]

    def add_col(src, dst, k):
        for row in a:
            row[dst] += k * row[src]
        for row in right:
            row[dst] += k * row[src]

    def min_entry(t):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        return best

    t = 0
    while t < min(rows, cols):
        pivot = min_entry(t)
        if pivot is None:
            break
        while True:
            # divide by the smallest entry of the block each sweep; the
            # pivot shrinks like a gcd computation, keeping entries small
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    add_row(t, i, -(a[i][t] // a[t][t]))
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    add_col(t, j, -(a[t][j] // a[t][t]))
            if all(a[i][t] == 0 for i in range(t + 1, rows)) and all(
                a[t][j] == 0 for j in range(t + 1, cols)
            ):
                break
            pivot = min_entry(t)
        t += 1

    # enforce the divisibility chain; rows t and t+1 are zero outside their
    # diagonal entries here, so the repair stays inside the 2x2 corner
    t = 0
    while t < min(rows, cols) - 1:
        if a[t][t] != 0 and a[t + 1][t + 1] % a[t][t] != 0:
            add_col(t + 1, t, 1)
            while a[t + 1][t] != 0 or a[t][t + 1] != 0:
                while a[t + 1][t] != 0:
                    if a[t][t] == 0 or abs(a[t + 1][t]) < abs(a[t][t]):
                        swap_rows(t, t + 1)
                    q = a[t + 1][t] // a[t][t]
                    add_row(t, t + 1, -q)
                while a[t][t + 1] != 0:
                    if a[t][t] == 0 or abs(a[t][t + 1]) < abs(a[t][t]):
                        swap_cols(t, t + 1)
                    q = a[t][t + 1] // a[t][t]
                    add_col(t, t + 1, -q)
            t = max(t - 1, 0)
        else:
            t += 1

    for i in range(min(rows, cols)):
        if a[i][i] < 0:
            for j in range(cols):
                a[i][j] = -a[i][j]
            for j in range(rows):
                left[i][j] = -left[i][j]

    factors = tuple(a[i][i] for i in range(min(rows, cols)))
    return factors, left, right


def matrix_rank(m):
    if not m:
        return 0
    return sum(1 for f in smith_normal_form(m)[0] if f != 0)


def kernel_basis(m, ncols=None):
    """Basis rows for the saturated kernel {x : m x = 0}."""
    if ncols is None:
        if not m:
            raise ValueError("empty matrix needs an explicit column count")
        ncols = len(m[0])
    rows = [list(r) for r in m if any(r)]
    if not rows:
        return [tuple(row) for row in identity_matrix(ncols)]
    factors, _left, right = smith_normal_form(rows)
    rank = sum(1 for f in factors if f != 0)
    cols = []
    for j in range(ncols):
        if j >= rank:
            cols.append(tuple(right[i][j] for i in range(ncols)))
    return cols


def saturate(rows, ncols=None):
    """Basis of the smallest primitive sublattice containing the rows."""
    return kernel_basis(kernel_basis(rows, ncols), ncols)


def hermite_row_form(m):
    """Row-style Hermite normal form.

    Pivots are positive, entries above a pivot are reduced into [0, pivot),
    zero rows are dropped.  The result is a tuple of tuples and is the unique
    canonical basis of the row lattice.
    """
    rows = [list(r) for r in m if any(r)]
    if not rows:
        return ()
    ncols = len(rows[0])
    r = 0
    for j in range(ncols):
        # gcd-eliminate column j below row r
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][j] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        changed = True
        while changed:
            changed = False
            for i in range(r + 1, len(rows)):
                if rows[i][j] == 0:
                    continue
                if abs(rows[i][j]) < abs(rows[r][j]):
                    rows[r], rows[i] = rows[i], rows[r]
                q = rows[i][j] // rows[r][j]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                if rows[i][j] != 0:
                    changed = True
        if rows[r][j] < 0:
            rows[r] = [-x for x in rows[r]]
        for i in range(r):
            q = rows[i][j] // rows[r][j]
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    rows = [row for row in rows[:r] if any(row)]
    return tuple(tuple(row) for row in rows)


def bareiss_determinant(m):
    """Fraction-free determinant of a square integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve_rational(m, target):
    """One exact solution x of m x = target, or None if inconsistent.

    Free variables are set to zero.  Entries of the result are Fractions.
    """
    rows = len(m)
    if rows == 0:
        return [] if all(t == 0 for t in target) else None
    cols = len(m[0])
    a = [[Fraction(x) for x in row] + [Fraction(t)] for row, t in zip(m, target)]
    pivots = []
    r = 0
    for j in range(cols):
        piv = next((i for i in range(r, rows) if a[i][j] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        scale = a[r][j]
        a[r] = [x / scale for x in a[r]]
        for i in range(rows):
            if i != r and a[i][j] != 0:
                f = a[i][j]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(j)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if a[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, j in enumerate(pivots):
        x[j] = a[i][cols]
    return x


# ---------------------------------------------------------------------------
# sublattices


class SymplecticSubgroup:
    """A primitive sublattice of H, stored by its Hermite canonical basis.

    The constructor insists the given rows already span a primitive lattice
    (all Smith factors 1); use spanned_by() to saturate arbitrary generators
    first.
    """

    __slots__ = ("basis",)

    def __init__(self, rows):
        clean = []
        for r in rows:
            coords = r.coords if isinstance(r, HVector) else tuple(int(c) for c in r)
            if len(coords) != 6:
                raise ValueError("basis rows must have 6 coordinates")
            clean.append(coords)
        h = hermite_row_form(clean)
        if h:
            factors = smith_normal_form([list(row) for row in h])[0]
            if any(f != 1 for f in factors[: len(h)]):
                raise ValueError("generators span a non-primitive sublattice")
        self.basis = h

    @classmethod
    def spanned_by(cls, vectors):
        rows = [v.coords if isinstance(v, HVector) else tuple(v) for v in vectors]
        return cls(saturate(rows, 6))

    @property
    def rank(self):
        return len(self.basis)

    def vectors(self):
        return [HVector(row) for row in self.basis]

    def contains(self, v):
        coords = list(v.coords if isinstance(v, HVector) else v)
        for row in self.basis:
            j = next(i for i, x in enumerate(row) if x != 0)
            q, rem = divmod(coords[j], row[j])
            if rem:
                return False
            coords = [x - q * y for x, y in zip(coords, row)]
        return all(x == 0 for x in coords)

    def gram(self):
        vs = self.vectors()
        return [[intersection(u, v) for v in vs] for u in vs]

    def height(self):
        return max((abs(x) for row in self.basis for x in row), default=0)

    def key(self):
        return self.basis

    def __eq__(self, other):
        return isinstance(other, SymplecticSubgroup) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        return "SymplecticSubgroup(rank=%d, basis=%r)" % (self.rank, self.basis)


def is_symplectic_rank2(u):
    """True iff the rank-2 subgroup is unimodular for the restricted form."""
    if u.rank != 2:
        raise ValueError("rank-2 subgroup required, got rank %d" % u.rank)
    g = u.gram()
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    return det == 1


def orthogonal_complement(u):
    """The saturated orthogonal complement with respect to the pairing."""
    form_rows = [STANDARD_FORM.form_row(v) for v in u.vectors()]
    return SymplecticSubgroup(kernel_basis(form_rows, 6))


class Splitting:
    """An ordered triple of pairwise orthogonal unimodular symplectic planes.

    The parts must sum to the whole lattice; the stacked 6x6 basis having
    determinant +-1 is implied by the Gram conditions but is checked anyway.
    """

    __slots__ = ("parts",)

    def __init__(self, parts):
        parts = tuple(parts)
        if len(parts) != 3:
            raise ValueError("a splitting needs exactly 3 parts")
        for p in parts:
            if not isinstance(p, SymplecticSubgroup):
                raise TypeError("parts must be SymplecticSubgroup instances")
            if p.rank != 2 or not is_symplectic_rank2(p):
                raise ValueError("each part must be a unimodular symplectic plane")
        for i in range(3):
            for j in range(i + 1, 3):
                for vi in parts[i].vectors():
                    for vj in parts[j].vectors():
                        if intersection(vi, vj) != 0:
                            raise ValueError("parts %d and %d are not orthogonal" % (i, j))
        stacked = [list(row) for p in parts for row in p.basis]
        det = bareiss_determinant(stacked)
        if det not in (1, -1):
            raise ValueError("parts do not span the full lattice (det %d)" % det)
        self.parts = parts

    def decompose(self, x):
        """Write x as a sum of one component per part."""
        stacked = [list(row) for p in self.parts for row in p.basis]
        sol = solve_rational(transpose(stacked), list(x.coords))
        assert sol is not None
        coeffs = []
        for c in sol:
            assert c.denominator == 1
            coeffs.append(int(c))
        comps = []
        for i in range(3):
            comp = ZERO
            for c, row in zip(coeffs[2 * i : 2 * i + 2], self.parts[i].basis):
                comp = comp + c * HVector(row)
            comps.append(comp)
        return tuple(comps)

    def ordered_key(self):
        return tuple(p.basis for p in self.parts)

    def unordered_key(self):
        return tuple(sorted(p.basis for p in self.parts))

    def canonical(self):
        return Splitting(sorted(self.parts, key=lambda p: p.basis))

    def __eq__(self, other):
        return isinstance(other, Splitting) and self.ordered_key() == other.ordered_key()

    def __hash__(self):
        return hash(self.ordered_key())

    def __repr__(self):
        return "Splitting(%r)" % (self.ordered_key(),)


STANDARD_SPLITTING = Splitting(
    [
        SymplecticSubgroup([A1, B1]),
        SymplecticSubgroup([A2, B2]),
        SymplecticSubgroup([A3, B3]),
    ]
)


def splitting_type_wrt_x(x, splitting):
    """Classify a splitting by which parts the class x touches.

    Returns (letter, perm): letter "a", "b" or "c" counts the nonzero
    components, perm lists the part indices with the touched ones first.
    """
    if x.is_zero():
        raise ValueError("x must be nonzero")
    comps = splitting.decompose(x)
    touched = [i for i in range(3) if not comps[i].is_zero()]
    letter = {1: "a", 2: "b", 3: "c"}[len(touched)]
    perm = tuple(touched + [i for i in range(3) if i not in touched])
    return letter, perm


def splitting_type_wrt_y(y, splitting, x_part):
    """Classify the second class y relative to the part holding x.

    Types 1..4 record whether y touches the x-part and how many of the other
    two parts it touches.  A class y inside the x-part has no type.
    """
    if x_part not in (0, 1, 2):
        raise ValueError("x_part must be 0, 1 or 2")
    if y.is_zero():
        raise ValueError("y must be nonzero")
    comps = splitting.decompose(y)
    in_x = not comps[x_part].is_zero()
    others = sum(1 for i in range(3) if i != x_part and not comps[i].is_zero())
    if others == 1:
        return 2 if in_x else 1
    if others == 2:
        return 4 if in_x else 3
    raise ValueError("y lies in the part containing x; no type applies")


def primitive_part(x):
    """Split x as k * a with k > 0 and a primitive.

    >>> primitive_part(HVector((2, 0, 4, 0, 0, 0)))[0]
    2
    """
    if x.is_zero():
        raise ValueError("the zero class has no primitive part")
    k = 0
    for c in x.coords:
        k = gcd(k, abs(c))
    return k, HVector(c // k for c in x.coords)


# ---------------------------------------------------------------------------
# transvections


def transvection(c, v, power=1):
    """Image of v under the c-transvection, v + power * <v, c> c."""
    return v + (power * intersection(v, c)) * c


def transvection_matrix(c, power=1):
    """The 6x6 matrix of the c-transvection acting on column vectors."""
    row = STANDARD_FORM.form_row(c)
    # <v, c> = -<c, v>, so as a functional of v use the negated form row of c
    functional = tuple(-x for x in row)
    mat = identity_matrix(6)
    for i in range(6):
        for j in range(6):
            mat[i][j] += power * c.coords[i] * functional[j]
    return [tuple(r) for r in mat]


def apply_matrix(mat, v):
    return HVector(matrix_vector(mat, list(v.coords)))


def transform_subgroup(mat, u):
    return SymplecticSubgroup([apply_matrix(mat, v) for v in u.vectors()])


def transform_splitting(mat, splitting):
    return Splitting([transform_subgroup(mat, p) for p in splitting.parts])


# ---------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def enumerate_symplectic_rank2(height):
    """All unimodular symplectic planes whose canonical basis entries fit in
    [-height, height], sorted by canonical key.

    The Hermite shape is enumerated directly: two pivot columns j1 < j2 with
    positive pivots, the row-1 entry over the second pivot reduced, all other
    entries free in the box.  A candidate is kept iff the basis pairing is
    +-1, which also forces primitivity.
    """
    if height < 1:
        raise ValueError("height must be at least 1")
    span = range(-height, height + 1)
    found = []
    for j1 in range(6):
        for j2 in range(j1 + 1, 6):
            free2 = [j for j in range(j2 + 1, 6)]
            free1 = [j for j in range(j1 + 1, 6) if j != j2]
            for p2 in range(1, height + 1):
                row2_list = []
                for vals in product(span, repeat=len(free2)):
                    row = [0] * 6
                    row[j2] = p2
                    for idx, v in zip(free2, vals):
                        row[idx] = v
                    row2_list.append((tuple(row), STANDARD_FORM.form_row(HVector(row))))
                for p1 in range(1, height + 1):
                    for top in range(0, min(height, p2 - 1) + 1):
                        for vals in product(span, repeat=len(free1)):
                            row1 = [0] * 6
                            row1[j1] = p1
                            row1[j2] = top
                            for idx, v in zip(free1, vals):
                                row1[idx] = v
                            for row2, fr2 in row2_list:
                                pair = -sum(a * b for a, b in zip(row1, fr2))
                                if pair in (1, -1):
                                    found.append(SymplecticSubgroup((tuple(row1), row2)))
    seen = {}
    for u in found:
        seen[u.key()] = u
    assert len(seen) == len(found), "Hermite-shape enumeration produced a duplicate"
    return tuple(sorted(seen.values(), key=lambda u: u.key()))


@lru_cache(maxsize=None)
def _splittings_cached(bound):
    # A pairwise orthogonal triple of unimodular symplectic planes always
    # spans the whole lattice (a unimodular sublattice of full rank inside a
    # unimodular complement has index 1), so splittings within the bound are
    # exactly the triangles of the orthogonality graph on the plane list.
    subs = enumerate_symplectic_rank2(bound)
    n = len(subs)
    row_ids = {}
    for u in subs:
        for row in u.basis:
            row_ids.setdefault(row, len(row_ids))
    rows = [None] * len(row_ids)
    for row, idx in row_ids.items():
        rows[idx] = row
    forms = [STANDARD_FORM.form_row(HVector(r)) for r in rows]
    subs_using = [0] * len(rows)
    sub_rows = []
    for i, u in enumerate(subs):
        ids = tuple(row_ids[row] for row in u.basis)
        sub_rows.append(ids)
        for rid in ids:
            subs_using[rid] |= 1 << i
    full_mask = (1 << n) - 1
    # both_mask[r]: planes both of whose basis rows pair to zero with row r
    both_mask = []
    for f in forms:
        bad = 0
        for other, r in enumerate(rows):
            s = (
                f[0] * r[0] + f[1] * r[1] + f[2] * r[2]
                + f[3] * r[3] + f[4] * r[4] + f[5] * r[5]
            )
            if s != 0:
                bad |= subs_using[other]
        both_mask.append(full_mask & ~bad)
    orth = [both_mask[ids[0]] & both_mask[ids[1]] for ids in sub_rows]

    found = []
    for i in range(n):
        mi = orth[i] & (full_mask << (i + 1))
        m = mi
        while m:
            low = m & -m
            m ^= low
            j = low.bit_length() - 1
            common = orth[i] & orth[j] & (full_mask << (j + 1))
            while common:
                lowk = common & -common
                common ^= lowk
                k = lowk.bit_length() - 1
                parts = sorted([subs[i], subs[j], subs[k]], key=lambda u: u.key())
                found.append(Splitting(parts))
    found.sort(key=lambda s: s.ordered_key())
    return tuple(found)


def enumerate_splittings(coefficient_bound):
    """All splittings whose three parts have canonical height <= bound."""
    if coefficient_bound < 1:
        raise ValueError("coefficient bound must be at least 1")
    return list(_splittings_cached(coefficient_bound))
