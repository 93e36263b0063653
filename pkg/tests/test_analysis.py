import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as o
from cdelta import analysis as an
from cdelta.dsl import build
from cdelta.errors import PredicateParseError, UnknownKind
from cdelta.ring import zn

SMALL = [
    "Z 1", "Z 2", "Z 3", "Z 4", "Z 5", "Z 6", "Z 8", "Z 9", "Z 12", "GF(2,2)", "GF(3,2)",
    "Z 2 * Z 2", "Z 2 * Z 4", "Z 3 * Z 4", "M(2, Z 2)", "T(2, Z 2)", "T(2, Z 3)", "T(3, Z 2)",
    "Dn(2, Z 4)", "Vn(3, Z 2)", "TSkew(2, GF(2,2), frob)", "TSkew(2, GF(2,2), id)",
    "K(0, Z 2)", "K(1, Z 2)", "Triv(Z 2)", "Triv(Z 4)", "DT(Z 2)", "L(1, 1, Z 2)",
    "Quot(Z 8, {4})", "Corner(M(2, Z 2), e11)", "GroupRing(Z 2, C2)", "GroupRing(Z 2, S3)",
    "T(2, Z 2) * Z 3",
]

_BUILT: dict = {}


def ring(expr):
    if expr not in _BUILT:
        _BUILT[expr] = (build(expr), None)
    R, T = _BUILT[expr]
    if T is None:
        T = o.from_ring(R)
        _BUILT[expr] = (R, T)
    return R, T


def idx(S):
    return set(int(i) for i in S.indices)


# -- named examples -----------------------------------------------------------


def test_zn_subsets():
    assert idx(an.units(zn(6))) == {1, 5}
    assert idx(an.jacobson(zn(12))) == {0, 6}
    assert idx(an.delta_set(zn(4))) == {0, 2}
    assert idx(an.nilpotents(zn(8))) == {0, 2, 4, 6}
    assert idx(an.idempotents(zn(6))) == {0, 1, 3, 4}
    assert idx(an.center(zn(5))) == set(range(5))


def test_m2z2_subsets():
    M = build("M(2, Z 2)")
    assert len(an.units(M)) == 6
    assert idx(an.delta_set(M)) == {M.zero}
    assert idx(an.center(M)) == {M.zero, M.one}
    assert idx(an.nil_star(M)) == {M.zero}
    assert len(an.nilpotents(M)) == 4


def test_k0z2_delta_has_zero_diagonal():
    K = build("K(0, Z 2)")
    D = [K.coords[i] for i in an.delta_set(K).indices]
    assert len(D) == 4 and all(m[0][0] == m[1][1] == 0 for m in D)


def test_decompose_examples():
    w = an.decompose_element(zn(6), 4, "cdelta")
    assert w.found and w.parts == (4, 0)
    M = build("M(2, Z 2)")
    assert not an.decompose_element(M, "e11", "cdelta").found
    w = an.decompose_element(zn(3), 2, "feebly-delta-clean")
    assert w.found and w.parts == (0, 0, 1) and w.roles == ("d", "e", "f")
    assert an.witness_replays(zn(3), w)


def test_decompose_kind_aliases():
    assert an.normalize_kind("CΔ") == "cdelta"
    assert an.normalize_kind("Strongly-Clean") == "strongly-clean"
    with pytest.raises(UnknownKind):
        an.normalize_kind("bogus")


def test_found_witnesses_replay_everywhere():
    for expr in ("M(2, Z 2)", "T(2, Z 3)", "Triv(Z 4)", "GroupRing(Z 2, S3)"):
        R, _ = ring(expr)
        for kind in an.KINDS:
            for a in range(R.order):
                w = an.decompose_element(R, a, kind)
                assert w.found == bool(an.decomposable(R, kind)[a])
                if w.found:
                    assert an.witness_replays(R, w)


def test_classify_flags():
    r = an.classify(zn(4))
    assert r.commutative and r.cdelta and r.local and not r.uniquely_cdelta and r.uj
    m = an.classify(build("M(2, Z 2)"))
    assert not m.cdelta and not m.cu and m.clean and not m.commutative and not m.two_primal
    assert m.counts["units"] == 6
    t = an.classify(build("T(2, Z 2)"))
    assert not t.cdelta and t.uj and not t.abelian and t.two_primal


def test_uniquely_cdelta_counts():
    for n, expected in [(4, 2), (8, 4), (12, 2), (6, 1), (5, 1)]:
        T = o.zn_table(n)
        assert max(o.cdelta_count(T, a) for a in range(n)) == expected
        assert int(an.cdelta_witness_counts(zn(n)).max()) == expected


def test_search_examples():
    corpus = [(e, build(e)) for e in ("Z 4", "Z 3", "T(2, Z 2)")]
    assert [n for n, _ in an.search(corpus, "UJ & !UU")] == []
    both = [(e, build(e)) for e in ("Z 6", "M(2, Z 2)")]
    assert [n for n, _ in an.search(both, "commutative")] == ["Z 6"]
    lazy = [("Z 2", lambda: zn(2))]
    assert [n for n, _ in an.search(lazy, "CDelta & (local | !reduced)")] == ["Z 2"]


def test_predicate_parser():
    rep = an.classify(zn(2))
    assert an.parse_predicate("!!cdelta")(rep)
    assert an.parse_predicate("Dedekind-finite & 2primal")(rep)
    for bad in ("", "cdelta &", "cdelta and cj", "nonsense", "(cdelta", "cdelta $"):
        with pytest.raises(PredicateParseError):
            an.parse_predicate(bad)


# -- oracle equivalence over a zoo of small rings ---------------------------


@pytest.mark.parametrize("expr", SMALL)
def test_subsets_match_oracles(expr):
    R, T = ring(expr)
    assert idx(an.units(R)) == o.units(T)
    assert idx(an.jacobson(R)) == o.jacobson(T)
    assert idx(an.delta_set(R)) == o.delta(T)
    assert idx(an.center(R)) == o.center(T)
    assert idx(an.nilpotents(R)) == o.nilpotents(T)
    assert idx(an.idempotents(R)) == o.idempotents(T)
    assert idx(an.nil_star(R)) == o.strongly_nilpotent(T)


@pytest.mark.parametrize("expr", SMALL)
def test_classification_matches_oracles(expr):
    R, T = ring(expr)
    rep = an.classify(R)
    assert rep.cdelta == o.is_cdelta(T)
    assert rep.cj == o.is_cj(T)
    assert rep.cn == o.is_cn(T)
    assert rep.cu == o.is_cu(T)
    assert rep.commutative == o.is_commutative(T)
    assert rep.clean == o.is_clean(T)
    counts = [o.cdelta_count(T, a) for a in range(T.n)]
    assert an.cdelta_witness_counts(R).tolist() == counts


@given(st.sampled_from(SMALL))
def test_delta_invariants(expr):
    R, T = ring(expr)
    U, J, D = o.units(T), o.jacobson(T), o.delta(T)
    assert J <= D
    # U + Δ = U
    assert all(T.add[u][d] in U for u in U for d in D)
    # Δ is closed under addition and multiplication
    assert all(T.add[a][b] in D and T.mul[a][b] in D for a in D for b in D)
    # agreement with the package
    assert idx(an.delta_set(R)) == D


@given(st.sampled_from(SMALL))
def test_nil_star_invariants(expr):
    R, T = ring(expr)
    S = idx(an.nil_star(R))
    assert o.is_ideal(T, S)
    assert S <= o.nilpotents(T)
    assert an.is_ideal(R, an.nil_star(R))
    if o.is_commutative(T):
        assert S == o.nilpotents(T)


@given(st.sampled_from(SMALL), st.data())
def test_decompose_agrees_with_oracle(expr, data):
    R, T = ring(expr)
    a = data.draw(st.integers(0, R.order - 1))
    kind = data.draw(st.sampled_from(["cdelta", "cj", "cn", "cu"]))
    summands = {"cdelta": o.delta, "cj": o.jacobson, "cn": o.nilpotents, "cu": o.units}[kind](T)
    w = an.decompose_element(R, a, kind)
    assert w.found == o.decomposable(T, a, summands)
    if w.found:
        c, r = w.parts
        # first central element in ascending order
        first = min(c2 for c2 in o.center(T) if T.sub(a, c2) in summands)
        assert c == first and T.add[c][r] == a


def test_decomposable_mask_shape():
    R = zn(6)
    m = an.decomposable(R, "clean")
    assert m.dtype == np.bool_ and m.shape == (6,)
