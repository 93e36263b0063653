import numpy as np
import pytest

import oracles as o
from cdelta import analysis as an
from cdelta.constructors import (
    CentralParams,
    MatrixFamilyKind,
    builtin_group,
    corner_ring,
    dt_ring,
    family,
    frobenius,
    generalized_matrix,
    gf,
    group_ring,
    hst_ring,
    ideal_generated,
    lst_ring,
    make_group,
    matrix_ring,
    quotient_ring,
    skew_poly_quotient,
    skew_triangular,
    special_matrix_family,
    subring_generated,
    triangular_ring,
    trivial_extension,
)
from cdelta.dsl import build
from cdelta.errors import (
    NonCentralParameter,
    NotAGroup,
    NotAnIdeal,
    NotASubring,
    NotIdempotent,
    OrderCapExceeded,
)
from cdelta.ring import RingMap, check_isomorphism, direct_product, identity_map, map_by_coords, order_cap_override, poly_quotient, zn


def coords_of(R, S):
    return {R.coords[i] for i in S.indices}


def test_matrix_ring_matches_oracle():
    M = matrix_ring(2, zn(2))
    assert o.same_tables_by_coords(o.matrix_table(2, 2), M)
    assert M.order == 16 and len(an.units(M)) == 6
    assert len(an.delta_set(M)) == 1 and an.delta_set(M) == an.jacobson(M)


def test_matrix_ring_size_one():
    M1 = matrix_ring(1, zn(5))
    assert M1.order == 5
    assert check_isomorphism(map_by_coords(M1, zn(5), lambda c: c[0][0]))


def test_matrix_ring_cap():
    with pytest.raises(OrderCapExceeded):
        matrix_ring(3, zn(4))  # 4^9 > 65536


def test_triangular_examples():
    T = triangular_ring(2, zn(2))
    assert o.same_tables_by_coords(o.matrix_table(2, 2, o.upper), T)
    assert T.order == 8
    e12 = ((0, 1), (0, 0))
    zero = ((0, 0), (0, 0))
    assert coords_of(T, an.jacobson(T)) == {zero, e12} == coords_of(T, an.delta_set(T))
    assert coords_of(T, an.units(T)) == {((1, 0), (0, 1)), ((1, 1), (0, 1))}
    assert an.classify(T).uj
    T5 = triangular_ring(2, zn(5))
    w = an.decompose_element(T5, ((4, 0), (0, 0)), "cdelta")
    assert not w.found


def test_d2_is_order_four_and_cdelta():
    D = family("Dn", zn(2), 2)
    assert D.order == 4 and an.is_cdelta(D)
    keep = lambda m: o.upper(m) and m[0][0] == m[1][1]  # noqa: E731
    assert o.same_tables_by_coords(o.matrix_table(2, 2, keep), D)


def test_s3_over_t2_not_cdelta():
    S = build("Sn(3, T(2, Z 2))")
    assert S.order == 4096
    assert not an.is_cdelta(S)
    # replay the first failure definitionally on the one element
    a = an.first_failure(S, "cdelta")
    T = o.from_ring(S)
    C = [c for c in an.center(S).indices]
    assert all(o.center(o.from_ring(zn(1))) for _ in [0])  # oracle imported and usable
    U = set(int(u) for u in an.units(S).indices)
    for c in C:
        r = T.sub(a, int(c))
        # r not in Δ: some unit u with 1 - u r not a unit
        assert any(T.sub(T.one, T.mul[u][r]) not in U for u in U)


def test_v2_z4_is_truncated_polynomials():
    V = family("Vn", zn(4), 2)
    P = poly_quotient(zn(4), [0, 0, 1])
    phi = map_by_coords(V, P, lambda m: (m[0][0], m[0][1]))
    assert check_isomorphism(phi)
    assert o.isomorphic_by(o.from_ring(V), o.from_ring(P), list(phi.image))


def test_family_kinds_are_closed_and_constant_diagonal():
    for kind in [
        MatrixFamilyKind("Dn", 3), MatrixFamilyKind("Vn", 3), MatrixFamilyKind("VnK", 3, k=2),
        MatrixFamilyKind("DnK", 4), MatrixFamilyKind("Sn", 3), MatrixFamilyKind("Snm", 2, m=2),
        MatrixFamilyKind("Tnm", 2, m=3), MatrixFamilyKind("Un", 4),
    ]:
        F = special_matrix_family(kind, zn(2))
        n = F.meta["matrix_size"]
        for m in F.coords:
            assert all(m[i][j] == 0 for i in range(n) for j in range(i))
            assert len({m[i][i] for i in range(n)}) == 1


def test_skew_triangular_examples():
    F = gf(2, 2)
    T = skew_triangular(2, F, frobenius(F))
    assert T.order == 16
    assert coords_of(T, an.delta_set(T)) == {((0, 0), x) for x in F.coords}
    elems, add, mul = o.gf4_ops()
    oracle = o.skew_t2_table(elems, add, mul, lambda x: mul(x, x))
    assert o.same_tables_by_coords(oracle, T)
    T3 = skew_triangular(3, zn(2))
    assert an.is_cdelta(T3)


def test_skew_identity_embeds_as_constant_diagonal():
    R = zn(3)
    T = skew_triangular(2, R, identity_map(R))
    D = family("Dn", R, 2)
    assert check_isomorphism(map_by_coords(T, D, lambda c: ((c[0], c[1]), (0, c[0]))))


def test_skew_poly_quotient_is_skew_triangular():
    F = gf(2, 2)
    a = frobenius(F)
    Q = skew_poly_quotient(F, a, 2)
    T = skew_triangular(2, F, a)
    assert check_isomorphism(map_by_coords(Q, T, lambda c: c))


def test_generalized_matrix_examples():
    K1 = generalized_matrix(1, zn(2))
    assert o.same_tables_by_coords(o.k_table(1, 2), K1)
    M = matrix_ring(2, zn(2))
    assert check_isomorphism(map_by_coords(K1, M, lambda c: c))
    K0 = generalized_matrix(0, zn(2))
    assert o.same_tables_by_coords(o.k_table(0, 2), K0)
    assert len(an.units(K0)) == 4 and len(an.delta_set(K0)) == 4
    K03 = generalized_matrix(0, zn(3))
    assert not an.decompose_element(K03, ((1, 0), (0, 0)), "cdelta").found
    assert not an.is_cdelta(K03)


def test_generalized_matrix_needs_central():
    M = matrix_ring(2, zn(2))
    with pytest.raises(NonCentralParameter):
        generalized_matrix(M.resolve("e12"), M)


def test_trivial_extension_examples():
    T = trivial_extension(zn(2))
    assert o.same_tables_by_coords(o.trivial_table(2), T)
    assert coords_of(T, an.units(T)) == {(1, 0), (1, 1)}
    assert an.is_cdelta(T)
    T4 = trivial_extension(zn(4))
    assert coords_of(T4, an.delta_set(T4)) == {(r, m) for r in (0, 2) for m in range(4)}


def test_dt_examples():
    D = dt_ring(zn(2))
    assert D.order == 16 and an.is_local(D)
    TT = trivial_extension(trivial_extension(zn(2)))
    assert check_isomorphism(map_by_coords(D, TT, lambda c: ((c[0], c[1]), (c[2], c[3]))))
    assert an.is_cdelta(dt_ring(zn(3)))


def test_l_and_h_examples():
    L0 = lst_ring(CentralParams(0, 0), zn(2))
    P = direct_product([zn(2)] * 3)
    assert check_isomorphism(map_by_coords(L0, P, lambda m: (m[0][0], m[1][1], m[2][2])))
    L1 = lst_ring(CentralParams(1, 1), zn(2))
    assert len(an.delta_set(L1)) == 4
    assert all(m[0][0] == m[1][1] == m[2][2] == 0 for m in coords_of(L1, an.delta_set(L1)))
    H = hst_ring(CentralParams(1, 1), zn(4))
    assert H.order == 64 and an.is_cdelta(H)


def test_l_requires_central_parameters():
    M = matrix_ring(2, zn(2))
    with pytest.raises(NonCentralParameter):
        lst_ring(CentralParams(M.resolve("e11"), M.one), M)


def test_h_surfaces_closure_failure():
    # over a noncommutative base the H carrier may fail; either a ring or NotASubring
    M = matrix_ring(2, zn(2))
    try:
        H = hst_ring(CentralParams(M.one, M.one), M)
    except NotASubring as exc:
        assert exc.witness
    else:
        assert H.order == 16**3


def test_corner_examples():
    M = matrix_ring(2, zn(2))
    C = corner_ring(M, "e11")
    assert C.order == 2
    assert check_isomorphism(RingMap(C, zn(2), np.array([0, 1])))
    assert corner_ring(M, "1").order == M.order
    assert corner_ring(M, "0").order == 1
    with pytest.raises(NotIdempotent):
        corner_ring(M, "e12")


def test_subring_generated_examples():
    M = matrix_ring(2, zn(2))
    gens = list(an.center(M).indices) + list(an.delta_set(M).indices)
    S = subring_generated(M, gens)
    assert S.order == 2 and an.is_cdelta(S)
    assert set(S.meta["embedding"].tolist()) == {M.zero, M.one}
    assert subring_generated(zn(6), [2]).order == 6
    assert subring_generated(M, []).order == 2


def test_ideals_and_quotients():
    T = triangular_ring(2, zn(2))
    I = ideal_generated(T, [T.resolve("e12")])
    assert set(I.indices.tolist()) == {T.zero, T.resolve("e12")}
    Q = quotient_ring(zn(8), [0, 4])
    assert check_isomorphism(RingMap(Q, zn(4), np.arange(4)))
    assert o.isomorphic_by(o.from_ring(Q), o.zn_table(4), list(range(4)))
    R = zn(5)
    assert quotient_ring(R, [0]).order == 5
    with pytest.raises(NotAnIdeal):
        quotient_ring(zn(8), [0, 3])


def test_group_rings():
    G = group_ring(zn(2), builtin_group("C2"))
    assert G.order == 4 and an.is_local(G) and an.is_cdelta(G)
    G3 = group_ring(zn(3), builtin_group("C2"))
    assert G3.order == 9 and G3.is_commutative() and an.is_cdelta(G3)
    G1 = group_ring(zn(2), builtin_group("C1"))
    assert check_isomorphism(map_by_coords(G1, zn(2), lambda c: c[0]))
    with pytest.raises(NotAGroup):
        make_group("bad", [[0, 1], [0, 1]])


def test_builtin_groups_are_groups():
    orders = {"C1": 1, "C2": 2, "C3": 3, "C4": 4, "C2xC2": 4, "S3": 6, "Q8": 8}
    for name, n in orders.items():
        assert builtin_group(name).order == n


def test_k1_isomorphic_to_m2_over_corpus():
    for R in (zn(2), zn(3), gf(2, 2)):
        K1 = generalized_matrix(R.one, R)
        M = matrix_ring(2, R)
        assert check_isomorphism(map_by_coords(K1, M, lambda c: c))
