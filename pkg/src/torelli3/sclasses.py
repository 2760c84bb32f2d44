"""Formal s-classes and their relation module.

Each ordered splitting carries a formal generator.  Swapping the last
two parts gives the same class; the three cyclic rotations sum to zero.
This file provides normal forms for that presentation, the rank-2
per-splitting quotient with its symmetric-group action, the evaluation
homomorphisms on symbolic twist generators, the determinant pairing on
abelian cycles, the homology-level lantern checker, and the map sending
an s-class into the kernel of the page differential.
"""

from .cycles import PreconditionError
from .lattice import (
    STANDARD_FORM,
    identity_matrix,
    intersection,
    kernel_basis,
    hermite_row_form,
    matrix_product,
    matrix_rank,
    primitive_part,
    smith_normal_form,
    splitting_type_wrt_x,
    transvection_matrix,
)

_RANK = 6


class SClassElement:
    """Integer combination of ordered-splitting generators."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for key, coeff in (terms or {}).items():
            if not isinstance(coeff, int) or isinstance(coeff, bool):
                raise ValueError("coefficients must be integers")
            triple = tuple(key)
            if len(triple) != 3 or len(set(triple)) != 3:
                raise ValueError("term must name three distinct parts")
            if coeff:
                clean[triple] = clean.get(triple, 0) + coeff
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def generator(cls, splitting):
        return cls({splitting.ordered_key(): 1})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        merged = dict(self.terms)
        for k, v in other.terms.items():
            merged[k] = merged.get(k, 0) + v
        return SClassElement(merged)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        return SClassElement({k: scalar * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, SClassElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def to_json(self):
        out = []
        for key in sorted(self.terms, key=str):
            out.append(
                {
                    "splitting_key_triple": [
                        [list(v) for v in part] for part in key
                    ],
                    "coefficient": self.terms[key],
                }
            )
        return out

    def __repr__(self):
        return f"SClassElement({len(self.terms)} terms)"


def normal_form(e):
    """Project onto the two canonical generators per splitting.

    The tail of each term is sorted (the class does not see the order of
    the last two parts) and the generator led by the largest part key is
    rewritten as minus the sum of the other two.
    """
    out = {}

    def put(first, others, coeff):
        tail = tuple(sorted(others))
        key = (first, tail[0], tail[1])
        out[key] = out.get(key, 0) + coeff

    for (p, q, r), coeff in e.terms.items():
        ordered = sorted((p, q, r))
        if p == ordered[2]:
            put(ordered[0], (ordered[1], ordered[2]), -coeff)
            put(ordered[1], (ordered[0], ordered[2]), -coeff)
        else:
            put(p, (q, r), coeff)
    return SClassElement(out)


PERMUTATIONS = (
    (0, 1, 2),
    (0, 2, 1),
    (1, 0, 2),
    (1, 2, 0),
    (2, 0, 1),
    (2, 1, 0),
)


def relation_matrix():
    """Rows spanning the relations among the six ordered generators."""
    index = {p: i for i, p in enumerate(PERMUTATIONS)}
    rows = []
    for a in range(3):
        b, c = (i for i in range(3) if i != a)
        row = [0] * 6
        row[index[(a, b, c)]] = 1
        row[index[(a, c, b)]] = -1
        rows.append(row)
    for start in ((0, 1, 2), (0, 2, 1)):
        row = [0] * 6
        a, b, c = start
        for rotation in ((a, b, c), (b, c, a), (c, a, b)):
            row[index[rotation]] += 1
        rows.append(row)
    return rows

def per_splitting_rank():
    """Free rank of the quotient by the relations; torsion would be a bug."""
    factors = smith_normal_form(relation_matrix())[0]
    nonzero = [f for f in factors if f]
    if any(f != 1 for f in nonzero):
        raise ArithmeticError("unexpected torsion in the relation quotient")
    return 6 - len(nonzero)


def o_module_reduce(coeffs):
    """Normal form of a triple modulo the all-ones relation."""
    l1, l2, l3 = coeffs
    for value in (l1, l2, l3):
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError("coefficients must be integers")
    return (l1 - l3, l2 - l3)


def s3_equivariance_check():
    """The first-part map to the diagonal quotient commutes with S3."""

    def reduced_unit(i):
        v = [0, 0, 0]
        v[i] = 1
        return o_module_reduce(tuple(v))

    for h in PERMUTATIONS:
        for p in PERMUTATIONS:
            composed = tuple(h[p[i]] for i in range(3))
            v = [0, 0, 0]
            v[p[0]] = 1
            acted = [0, 0, 0]
            for i in range(3):
                acted[h[i]] = v[i]
            if reduced_unit(composed[0]) != o_module_reduce(tuple(acted)):
                return False
    for p in PERMUTATIONS:
        swapped = (p[0], p[2], p[1])
        if reduced_unit(p[0]) != reduced_unit(swapped[0]):
            return False
        total = [0, 0, 0]
        a, b, c = p
        for rotation in ((a, b, c), (b, c, a), (c, a, b)):
            total[rotation[0]] += 1
        if o_module_reduce(tuple(total)) != (0, 0):
            return False
    return True


def _span_key(vector_rows):
    return hermite_row_form([list(r) for r in vector_rows])


def _mod_gamma_key(vectors, gamma):
    rows = [list(v.coords) for v in vectors] + [list(gamma.coords)]
    return _span_key(rows)


def _orthogonal_rows(vectors):
    """Integer basis of the common pairing kernel of the given vectors."""
    form_rows = [STANDARD_FORM.form_row(v) for v in vectors]
    return kernel_basis(form_rows, _RANK)


class NuHomomorphism:
    """Evaluation data: a nonseparating class and a two-part splitting of
    the cut-open homology."""

    __slots__ = ("gamma", "parts")

    def __init__(self, gamma, parts):
        if gamma.is_zero() or primitive_part(gamma)[0] != 1:
            raise PreconditionError("the curve class must be primitive")
        w1, w2 = parts
        for v in tuple(w1.vectors()) + tuple(w2.vectors()):
            if intersection(gamma, v) != 0:
                raise PreconditionError("parts must pair to zero with the curve")
        for u in w1.vectors():
            for v in w2.vectors():
                if intersection(u, v) != 0:
                    raise PreconditionError("parts must be mutually orthogonal")
        span = [list(gamma.coords)]
        for v in tuple(w1.vectors()) + tuple(w2.vectors()):
            span.append(list(v.coords))
        if matrix_rank(span) != _RANK - 1:
            raise PreconditionError("parts must span the cut-open homology")
        self.gamma = gamma
        self.parts = (w1, w2)

    def side_keys(self):
        return frozenset(
            _mod_gamma_key(part.vectors(), self.gamma) for part in self.parts
        )

    def __repr__(self):
        return f"NuHomomorphism(gamma={self.gamma!r})"


class SeparatingTwist:
    """Twist about a curve cutting off the handle pair spanned by U."""

    __slots__ = ("subgroup",)

    def __init__(self, subgroup):
        if subgroup.rank != 2:
            raise PreconditionError("separating data must have rank 2")
        self.subgroup = subgroup

    def __repr__(self):
        return f"SeparatingTwist({self.subgroup!r})"


class BoundingPairTwist:
    """Opposite twists about two disjoint curves of one primitive class."""

    __slots__ = ("curve_class", "induced")

    def __init__(self, curve_class, induced):
        if curve_class.is_zero() or primitive_part(curve_class)[0] != 1:
            raise PreconditionError("bounding pair class must be primitive")
        self.curve_class = curve_class
        self.induced = tuple(induced)

    def __repr__(self):
        return f"BoundingPairTwist({self.curve_class!r})"


def nu_eval(generator, nu):
    """The three evaluation rules.

    A separating twist scores 1 exactly when the two sides it cuts out
    are the two parts of nu; the bounding pair through the curve itself
    scores -1 when it induces the same two parts; any other disjoint
    generator scores 0.
    """
    gamma = nu.gamma
    if isinstance(generator, SeparatingTwist):
        u = generator.subgroup
        if any(intersection(gamma, v) != 0 for v in u.vectors()):
            raise PreconditionError("twist data crosses the curve")
        near = _mod_gamma_key(u.vectors(), gamma)
        far_rows = _orthogonal_rows(list(u.vectors()) + [gamma])
        far = _span_key(far_rows + [list(gamma.coords)])
        if {near, far} == set(nu.side_keys()):
            return 1
        return 0
    if isinstance(generator, BoundingPairTwist):
        c = generator.curve_class
        if c == gamma or c == -gamma:
            induced = frozenset(
                _mod_gamma_key(part.vectors(), gamma)
                for part in generator.induced
            )
            return -1 if induced == nu.side_keys() else 0
        if intersection(c, gamma) != 0:
            raise PreconditionError("bounding pair crosses the curve")
        return 0
    raise PreconditionError(f"cannot evaluate {generator!r}")


def cup_det_pair(nu1, nu2, h1, h2):
    """Minus the determinant of the two-by-two evaluation matrix."""
    a = nu_eval(h1, nu1)
    b = nu_eval(h2, nu1)
    c = nu_eval(h1, nu2)
    d = nu_eval(h2, nu2)
    return -(a * d - b * c)


def lantern_check(b1, b2, b3, b4, x, y, z):
    """Necessary homology-level check of the four-holed-sphere relation.

    The three interior twists must equal the four boundary twists as
    products of transvections; the oriented boundary classes must
    already satisfy their linear relation or the configuration is not a
    candidate at all.
    """
    if b1 + b2 + b3 != b4:
        raise PreconditionError(
            "boundary classes must satisfy [b1] + [b2] + [b3] = [b4]"
        )
    lhs = identity_matrix(_RANK)
    for c in (x, y, z):
        lhs = matrix_product(lhs, transvection_matrix(c))
    rhs = identity_matrix(_RANK)
    for c in (b1, b2, b3, b4):
        rhs = matrix_product(rhs, transvection_matrix(c))
    return [list(r) for r in lhs] == [list(r) for r in rhs]


def sclass_image_in_e2(splitting, src):
    """Send an ordered three-part splitting into the page kernel.

    The image is the difference of the two generators doubling the
    second and third listed parts, with the global sign fixed to plus.
    Returns a label-to-coefficient map over the basis of src.
    """
    key = splitting.unordered_key()
    stored = src.splitting_index.get(key)
    if stored is None:
        raise PreconditionError("splitting is not part of the truncation")
    letter, perm = splitting_type_wrt_x(src.trunc.x, stored)
    if letter != "c":
        raise PreconditionError("splitting must meet all three parts")
    stored_parts = [stored.parts[i] for i in perm]
    position = {p.key(): i for i, p in enumerate(stored_parts)}
    try:
        second = position[splitting.parts[1].key()]
        third = position[splitting.parts[2].key()]
    except KeyError:
        raise PreconditionError("parts do not match the stored splitting")
    labels = {
        orbit[2]: (orbit, tag.key())
        for orbit, tag in src.basis
        if orbit[0] == "c" and orbit[1] == key
    }
    return {labels[second]: 1, labels[third]: -1}
