import pytest

from torelli3.cycles import CellInstance, boundary_faces, build_ladder
from torelli3.lattice import (
    A1,
    A2,
    A3,
    B1,
    B2,
    B3,
    STANDARD_SPLITTING,
    Splitting,
    SymplecticSubgroup,
    splitting_type_wrt_x,
    transvection,
)
from torelli3.specseq import (
    AdmissibilityError,
    E1Truncation,
    GeneratorTag,
    SparseIntMatrix,
    Truncation,
    TruncationOverflowError,
    admissible_subgroups,
    append_loop,
    build_e1,
    check_image_separation,
    check_injective,
    d13_apply,
    d13_tilde_apply,
    d22_apply,
    d31_apply,
    e2_13_kernel,
    e2_13_tilde_kernel,
    is_admissible,
    vanishing_census,
)
from torelli3.surface import DecompGraph, LabeledMulticurve, classify_types


U23 = SymplecticSubgroup.spanned_by([A2, B2])
U33 = SymplecticSubgroup.spanned_by([A3, B3])
U33_SKEW = SymplecticSubgroup.spanned_by([A3, B3 + A2])


def bounding_pair_cell():
    g = DecompGraph([(0, 1), (1, 1)], [("e1", 0, 1), ("e2", 1, 0)])
    return CellInstance(LabeledMulticurve(g, {"e1": A1, "e2": A1}, A1))


def translated_splitting(c):
    """Image of the standard splitting under the transvection along c."""
    return Splitting(
        [
            SymplecticSubgroup.spanned_by([transvection(c, v) for v in p.vectors()])
            for p in STANDARD_SPLITTING.parts
        ]
    )


def plain_13_family():
    """Two one-part splittings, one two-part, one three-part, for x = a1."""
    splittings = [
        STANDARD_SPLITTING,
        translated_splitting(A2 + A3),
        translated_splitting(B1 + A2),
        translated_splitting(B1 + A2 + A3),
    ]
    letters = [splitting_type_wrt_x(A1, s)[0] for s in splittings]
    assert letters == ["a", "a", "b", "c"]
    return splittings


def tilde_family():
    """One splitting of each type for x = a1, y = a2 + a3."""
    s1 = Splitting(
        [
            SymplecticSubgroup.spanned_by([A1, B1]),
            SymplecticSubgroup.spanned_by([A2 + A3, B3]),
            SymplecticSubgroup.spanned_by([A2, B2 - B3]),
        ]
    )
    s2 = Splitting(
        [
            SymplecticSubgroup.spanned_by([A1, B1 - B3]),
            SymplecticSubgroup.spanned_by([A1 + A2 + A3, B2]),
            SymplecticSubgroup.spanned_by([A1 + A3, B3 - B2]),
        ]
    )
    s3 = STANDARD_SPLITTING
    s4 = Splitting(
        [
            SymplecticSubgroup.spanned_by([A1, B1 - B3]),
            SymplecticSubgroup.spanned_by([A2, B2]),
            SymplecticSubgroup.spanned_by([A1 + A3, B3]),
        ]
    )
    return [s1, s2, s3, s4]


def test_tag_identity_and_ordering():
    assert GeneratorTag.bp_twist(2) == GeneratorTag.bp_twist(2)
    assert GeneratorTag.bp_twist(2) != GeneratorTag.bp_twist(-3)
    assert hash(GeneratorTag.a2(U33)) == hash(GeneratorTag.a2(U33))
    assert GeneratorTag.a2(U23) != GeneratorTag.a2(U33)


def test_pair_tag_antisymmetry():
    forward = GeneratorTag.a2_pair(U23, U33)
    backward = GeneratorTag.a2_pair(U33, U23)
    assert forward.data[:2] == backward.data[:2]
    assert forward.sign == -backward.sign


def test_pair_tag_rejects_bad_parts():
    with pytest.raises(AdmissibilityError):
        GeneratorTag.a2_pair(U23, U23)
    overlapping = SymplecticSubgroup.spanned_by([B2 + A3, B3])
    with pytest.raises(AdmissibilityError):
        GeneratorTag.a2_pair(U23, overlapping)


def test_admissible_for_bounding_pair():
    keys = {u.key() for u in admissible_subgroups(bounding_pair_cell(), 1)}
    assert U23.key() in keys
    assert U33.key() in keys
    assert SymplecticSubgroup.spanned_by([A1, B1]).key() not in keys


def test_admissible_empty_for_full_support():
    full = next(
        e
        for e in classify_types(3, 3)
        if e.fingerprint == (4, 6, (0, 0, 0, 0), ())
    )
    assert admissible_subgroups(CellInstance(full.witness), 1) == []


def test_appended_sheet_geometry():
    ladder = build_ladder(1, 1, 2)
    plain = ladder.cell_cells[("R", -1)]
    appended = append_loop(plain)
    g = appended.multicurve.graph
    assert (len(g.vertices), len(g.edges)) == (3, 5)
    assert g.genus_multiset() == (0, 0, 0)
    assert g.multiedge_profile() == (2,)
    assert appended.dim == plain.dim
    assert len(appended.verts) == len(plain.verts)
    profiles = sorted(
        (
            face.multicurve.graph.genus_multiset(),
            face.multicurve.graph.multiedge_profile(),
        )
        for _, face in boundary_faces(appended)
    )
    assert profiles == [
        ((0, 0), (2,)),
        ((0, 0), (2,)),
        ((0, 0), (3,)),
        ((0, 0), (3,)),
    ]


def test_appended_admissibility_uses_the_loop():
    ladder = build_ladder(1, 1, 2)
    plain = ladder.cell_cells[("R", -1)]
    appended = append_loop(plain)
    assert is_admissible(plain, U33)
    assert is_admissible(appended, U33)
    shifted = SymplecticSubgroup.spanned_by([A1 + A3, B3])
    assert is_admissible(plain, shifted)
    assert not is_admissible(appended, shifted)


def test_append_loop_needs_genus():
    ladder = build_ladder(1, 1, 2)
    appended = append_loop(ladder.cell_cells[("R", -1)])
    with pytest.raises(AdmissibilityError):
        append_loop(appended)


def test_sparse_matrix_validates_labels():
    with pytest.raises(ValueError):
        SparseIntMatrix(["r"], ["c"], {("bad", "c"): 1})


def test_check_injective_examples():
    yes = SparseIntMatrix(["r1", "r2"], ["c"], {("r1", "c"): 1, ("r2", "c"): -1})
    assert check_injective(yes)
    no = SparseIntMatrix(
        ["r1", "r2"], ["c1", "c2"], {("r1", "c1"): 2}
    )
    assert not check_injective(no)


def test_truncation_rejects_unknown_fields():
    with pytest.raises(ValueError):
        Truncation(window=3)
    with pytest.raises(ValueError):
        build_e1((5, 5), Truncation())


def test_build_31_and_21_sizes():
    src = build_e1((3, 1), Truncation(orbits=["O1", "O2"], K=3))
    assert len(src) == 6
    assert src.basis[0] == (("O1", 0), GeneratorTag.bp_twist(0))
    tgt = build_e1((2, 1), Truncation(orbits=["O1"], K=2))
    assert len(tgt) == 5
    labels = [tag.data for _, tag in tgt.basis]
    assert labels == [-2, -1, 0, 1, 2]


def test_duplicate_labels_rejected():
    tag = GeneratorTag.bp_twist(0)
    with pytest.raises(ValueError):
        E1Truncation((2, 1), [("O", tag), ("O", tag)], Truncation())


def test_d31_columns_are_twist_differences():
    src = build_e1((3, 1), Truncation(orbits=["O"], K=3))
    mat = d31_apply(src)
    col = (("O", 1), GeneratorTag.bp_twist(0))
    assert mat.entries[(("O", GeneratorTag.bp_twist(1)), col)] == 1
    assert mat.entries[(("O", GeneratorTag.bp_twist(-2)), col)] == -1
    assert len(mat.column_support(col)) == 2


def test_d31_image_pairs_disjoint():
    src = build_e1((3, 1), Truncation(orbits=["O1", "O2"], K=4))
    mat = d31_apply(src)
    supports = [frozenset(mat.column_support(c)) for c in mat.cols]
    for i, s in enumerate(supports):
        for t in supports[i + 1 :]:
            assert not (s & t)


@pytest.mark.parametrize("K", range(1, 9))
def test_d31_injective(K):
    src = build_e1((3, 1), Truncation(orbits=["O"], K=K))
    mat = d31_apply(src)
    assert check_injective(mat)
    assert mat.rank() == len(mat.cols) == K


def test_d31_empty_is_zero():
    src = E1Truncation((3, 1), [], Truncation(K=2))
    mat = d31_apply(src)
    assert (len(mat.rows), len(mat.cols)) == (0, 0)
    assert check_injective(mat)


def test_d31_overflow():
    src = E1Truncation(
        (3, 1), [(("O", 5), GeneratorTag.bp_twist(0))], Truncation(K=2)
    )
    with pytest.raises(TruncationOverflowError):
        d31_apply(src)


def test_d22_basis_and_blocks():
    ladder = build_ladder(1, 1, 2)
    trunc = Truncation(ladder=ladder, subgroups=[U33, U33_SKEW], height=1)
    src = build_e1((2, 2), trunc)
    assert len(src) == 2 * 2 * len(ladder.two_cells())
    mat = d22_apply(src, ladder)
    assert check_injective(mat)
    for (row, col) in mat.entries:
        assert row[0][1] == col[0][1]
        assert row[1] == col[1]


def test_d22_rectangle_column():
    ladder = build_ladder(1, 1, 2)
    src = build_e1((2, 2), Truncation(ladder=ladder, subgroups=[U33], height=1))
    mat = d22_apply(src, ladder)
    gen = GeneratorTag.a2(U33)
    col = ((("R", -1), "plain"), gen)
    expected = {
        ((("c+", -1), "plain"), gen): 1,
        ((("d", 0), "plain"), gen): 1,
        ((("c-", -1), "plain"), gen): -1,
        ((("d", -1), "plain"), gen): -1,
    }
    assert {r: mat.entries[(r, col)] for r in mat.column_support(col)} == expected


@pytest.mark.parametrize("shape", [(1, 1), (1, 2), (2, 3)])
def test_d22_kernel_zero(shape):
    m, n = shape
    for K in (1, 3, 6):
        ladder = build_ladder(m, n, K)
        src = build_e1(
            (2, 2), Truncation(ladder=ladder, subgroups=[U33], height=1)
        )
        mat = d22_apply(src, ladder)
        assert check_injective(mat)
        assert mat.kernel_vectors() == []


def test_d22_separation():
    ladder = build_ladder(1, 2, 2)
    assert check_image_separation(ladder, U33)


def test_d22_rejects_inadmissible_subgroup():
    ladder = build_ladder(1, 1, 1)
    bad = SymplecticSubgroup.spanned_by([A1, B1])
    with pytest.raises(AdmissibilityError):
        build_e1((2, 2), Truncation(ladder=ladder, subgroups=[bad], height=1))
    with pytest.raises(AdmissibilityError):
        build_e1(
            (2, 2),
            Truncation(ladder=ladder, subgroups=[U33_SKEW], height=0),
        )


def test_d22_overflow_on_foreign_cell():
    ladder = build_ladder(1, 1, 1)
    src = E1Truncation(
        (2, 2),
        [(((("R", 99)), "plain"), GeneratorTag.a2(U33))],
        Truncation(ladder=ladder),
    )
    with pytest.raises(TruncationOverflowError):
        d22_apply(src, ladder)


def test_edge_position_basis():
    ladder = build_ladder(1, 1, 1)
    src = build_e1((1, 2), Truncation(ladder=ladder, subgroups=[U33], height=1))
    assert len(src) == 2 * len(ladder.edges())


def test_page_composition_vanishes():
    ladder = build_ladder(1, 2, 2)
    d1 = SparseIntMatrix.from_columns(
        [
            (e, {ladder.edge_endpoints[e][0]: -1, ladder.edge_endpoints[e][1]: 1})
            for e in ladder.edges()
        ]
    )
    for cell in ladder.two_cells():
        total = {}
        for edge, sign in ladder.cell_boundary[cell].items():
            for v in d1.column_support(edge):
                total[v] = total.get(v, 0) + sign * d1.entries[(v, edge)]
        assert all(value == 0 for value in total.values())


def test_d13_basis_sizes_by_type():
    src = build_e1((1, 3), Truncation(splittings=plain_13_family(), x=A1))
    counts = {}
    for (letter, _, _), _ in src.basis:
        counts[letter] = counts.get(letter, 0) + 1
    assert counts == {"a": 2, "b": 2, "c": 3}


def test_d13_images():
    src = build_e1((1, 3), Truncation(splittings=plain_13_family(), x=A1))
    mat = d13_apply(src)
    for (orbit, tag) in src.basis:
        col = (orbit, tag)
        support = mat.column_support(col)
        if orbit[0] in ("a", "b"):
            assert support == set()
        else:
            assert len(support) == 1
            row = next(iter(support))
            assert row[0][0] == "vertex"
            assert mat.entries[(row, col)] == 1


def test_d13_kernel_rank_and_pattern():
    src = build_e1((1, 3), Truncation(splittings=plain_13_family(), x=A1))
    result = e2_13_kernel(src)
    assert result["rank"] == 2 + 2 * 1 + 2 * 1
    singles = [c for c in result["basis"] if len(c) == 1]
    doubles = [c for c in result["basis"] if len(c) == 2]
    assert len(singles) == 4
    assert len(doubles) == 2
    for combo in doubles:
        assert sorted(combo.values()) == [-1, 1]
        letters = {orbit[0] for orbit, _ in combo}
        assert letters == {"c"}


def test_d13_rejects_unclassified():
    src = E1Truncation(
        (1, 3),
        [(("z", "key", 0), GeneratorTag.a2_pair(U23, U33))],
        Truncation(x=A1),
    )
    with pytest.raises(AdmissibilityError):
        d13_apply(src)


def test_d13_monotone_under_more_splittings():
    family = plain_13_family()
    small = build_e1((1, 3), Truncation(splittings=family[:2], x=A1))
    large = build_e1((1, 3), Truncation(splittings=family, x=A1))
    small_kernel = e2_13_kernel(small)
    large_kernel = e2_13_kernel(large)
    assert small_kernel["rank"] <= large_kernel["rank"]
    small_labels = {frozenset(c) for c in small_kernel["basis"]}
    large_labels = {frozenset(c) for c in large_kernel["basis"]}
    assert small_labels <= large_labels


def test_tilde_basis_types_and_sizes():
    src = build_e1(
        (1, 3), Truncation(splittings=tilde_family(), x=A1, y=A2 + A3)
    )
    counts = {}
    for (ytype, _, _), _ in src.basis:
        counts[ytype] = counts.get(ytype, 0) + 1
    assert counts == {1: 1, 2: 2, 3: 2, 4: 3}


def test_tilde_images():
    src = build_e1(
        (1, 3), Truncation(splittings=tilde_family(), x=A1, y=A2 + A3)
    )
    mat = d13_tilde_apply(src)
    by_name = {orbit[2]: (orbit, tag) for orbit, tag in src.basis}
    assert mat.column_support(by_name["t1"]) == set()
    assert mat.column_support(by_name["t22p"]) == set()
    t22 = mat.column_support(by_name["t22"])
    assert {row[0][0] for row in t22} == {"b1b2", "b1'b2"}
    assert sorted(mat.entries[(r, by_name["t22"])] for r in t22) == [-1, 1]
    a_row = mat.column_support(by_name["t32a"])
    assert a_row == mat.column_support(by_name["t32b"])
    assert next(iter(a_row))[1].kind == "a3"
    t42 = mat.column_support(by_name["t42"])
    assert {row[0][0] for row in t42} == {"b1b2b3", "b1'b2b3"}
    t52 = mat.column_support(by_name["t52a"])
    assert t52 == mat.column_support(by_name["t52b"])
    assert len(t52) == 1


def test_tilde_kernel_rank_and_pattern():
    src = build_e1(
        (1, 3), Truncation(splittings=tilde_family(), x=A1, y=A2 + A3)
    )
    result = e2_13_tilde_kernel(src)
    assert result["rank"] == 4
    names = []
    for combo in result["basis"]:
        names.append(sorted(orbit[2] for orbit, _ in combo))
    assert sorted(map(tuple, names)) == [
        ("t1",),
        ("t22p",),
        ("t32a", "t32b"),
        ("t52a", "t52b"),
    ]


def test_tilde_requires_isolated_x():
    with pytest.raises(AdmissibilityError):
        build_e1(
            (1, 3),
            Truncation(splittings=[STANDARD_SPLITTING], x=A1 + A2, y=A3),
        )


def test_position_03_labels():
    family = plain_13_family()
    src = build_e1((0, 3), Truncation(splittings=family))
    assert len(src) == len(family)
    assert all(tag.kind == "a3" for _, tag in src.basis)


def test_vanishing_census_table():
    table = vanishing_census()
    rows = {tuple(map(str, [r["fingerprint"]])): r for r in table["types"]}
    assert len(table["types"]) == 14
    by_fp = {r["fingerprint"]: r for r in table["types"]}
    assert by_fp[(2, 3, (0, 1), (3,))]["zero_above"] == 2
    assert by_fp[(1, 2, (1,), (2,))]["zero_above"] == 3
    assert by_fp[(4, 6, (0, 0, 0, 0), ())]["zero_above"] == 0
    assert table["tilde_0_4_zero"]
    assert rows
