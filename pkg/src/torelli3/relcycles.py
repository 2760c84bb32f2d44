"""Relative cycles on a sphere with paired marked points.

Cutting the genus-g surface along a full system of handle curves leaves
a sphere with g source and g sink punctures.  A relative basic 1-cycle
routes each source to exactly one sink, so its support is a matching
between the two puncture families.  This module enumerates those
matchings, records the dimension bound satisfied by cell stabilizers on
that sphere, and attaches injective labels to handle splittings so that
contributions from different splittings can never be confused.
"""

from itertools import permutations

from .lattice import Splitting


class DuplicateKeyError(ValueError):
    """Two inputs collapse onto one label key."""


class MultiarcSupport:
    """Endpoint data of a multiarc: pairs (source index, sink index).

    Indices run from 1 to the genus.  Arbitrary multiplicities are
    allowed; ``is_matching`` singles out the supports of relative basic
    1-cycles, which hit every source and every sink exactly once.
    """

    __slots__ = ("g", "pairs")

    def __init__(self, g, pairs):
        if not isinstance(g, int) or g < 1:
            raise ValueError("invalid parameter: genus must be a positive integer")
        pairs = tuple((int(p), int(q)) for p, q in pairs)
        for p, q in pairs:
            if not (1 <= p <= g and 1 <= q <= g):
                raise ValueError(
                    f"invalid parameter: pair ({p}, {q}) outside 1..{g}"
                )
        self.g = g
        self.pairs = pairs

    def is_matching(self):
        sources = sorted(p for p, _ in self.pairs)
        sinks = sorted(q for _, q in self.pairs)
        return sources == list(range(1, self.g + 1)) and sinks == sources

    def boundary(self):
        """Multiset of signed endpoints: sink counts minus source counts."""
        out = {}
        for p, q in self.pairs:
            out[q] = out.get(q, 0) + 1
            out[p] = out.get(p, 0) - 1
        return {i: c for i, c in out.items() if c}

    def key(self):
        return (self.g, tuple(sorted(self.pairs)))

    def to_dict(self):
        return {"g": self.g, "pairs": [list(p) for p in self.pairs]}

    def __eq__(self, other):
        if not isinstance(other, MultiarcSupport):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"MultiarcSupport(g={self.g}, pairs={list(self.pairs)})"


def enumerate_matching_supports(g):
    """All matching-level supports on the 2g-punctured sphere.

    >>> len(enumerate_matching_supports(3))
    6
    """
    if not isinstance(g, int) or g < 1:
        raise ValueError("invalid parameter: genus must be a positive integer")
    out = []
    for perm in permutations(range(1, g + 1)):
        out.append(MultiarcSupport(g, [(i, q) for i, q in enumerate(perm, start=1)]))
    return out


def dim_cd_inequality(dim_sigma, cd_stab, g):
    """Whether a cell of the given dimension can carry a stabilizer of
    the given cohomological dimension on the 2g-punctured sphere."""
    return dim_sigma + cd_stab <= 2 * g - 3


class SplittingArcLabel:
    """A handle splitting together with a reference multiarc on the
    cut-open sphere; keyed by the splitting alone."""

    __slots__ = ("splitting", "arcs")

    def __init__(self, splitting, arcs):
        if not isinstance(splitting, Splitting):
            raise ValueError("invalid parameter: need a splitting")
        if arcs.g != 3:
            raise ValueError("invalid parameter: reference arcs live at genus 3")
        if not arcs.is_matching():
            raise ValueError("invalid parameter: reference arcs must be a matching")
        self.splitting = splitting
        self.arcs = arcs

    def key(self):
        return self.splitting.unordered_key()

    def to_dict(self):
        return {
            "splitting": [
                [list(v.coords) for v in part.vectors()]
                for part in self.splitting.parts
            ],
            "arcs": self.arcs.to_dict(),
        }

    def __eq__(self, other):
        if not isinstance(other, SplittingArcLabel):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"SplittingArcLabel({self.splitting!r})"


def make_arc_labels(splittings):
    """One distinct label per splitting, in input order.

    Labels are keyed by the canonical splitting form, so families that
    repeat a splitting, even with permuted parts, are rejected.
    """
    reference = enumerate_matching_supports(3)[0]
    labels = []
    seen = set()
    for s in splittings:
        label = SplittingArcLabel(s, reference)
        if label.key() in seen:
            raise DuplicateKeyError(f"splitting repeats under canonical form: {s!r}")
        seen.add(label.key())
        labels.append(label)
    return labels
