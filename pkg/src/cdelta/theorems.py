"""Executable catalog of structural statements about CΔ rings.

Each check evaluates its hypothesis on a ring; when the hypothesis is unmet the
verdict is ``not-applicable`` with the unmet hypothesis named.  Otherwise the
conclusion is evaluated exhaustively.  A failing check carries witness elements
and a ``replay`` callable that re-derives the violation with naive scans that do
not share the cached subsets used by the check itself.

Checks that need auxiliary rings (matrix rings over R, triangular extensions,
...) pin their size parameters and skip, as not-applicable, any auxiliary ring
whose order exceeds the derived-ring budget.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import analysis as an
from .constructors import (
    CentralParams,
    MatrixFamilyKind,
    corner_ring,
    dt_ring,
    frobenius,
    generalized_matrix,
    hst_ring,
    ideal_generated,
    is_central,
    lst_ring,
    matrix_ring,
    power_map,
    quotient_ring,
    skew_poly_quotient,
    skew_triangular,
    special_matrix_family,
    subring_generated,
    triangular_ring,
    trivial_extension,
    v2_lst_ring,
)
from .errors import CDeltaError, NotAHomomorphism, NotASubring, NotUnital, OrderCapExceeded, UnknownCheck
from .ring import (
    FiniteRing,
    RingMap,
    Subset,
    check_isomorphism,
    direct_product,
    homomorphism_violation,
    identity_map,
    map_by_coords,
    order_cap,
    poly_quotient,
)

DEFAULT_DERIVED_BUDGET = 1024
REWRITE_BUDGET = 256  # element count for the term-rewriting skew polynomial quotient
MAX_PRINCIPAL_IDEALS = 64


class NotApplicable(Exception):
    def __init__(self, hypothesis: str):
        self.hypothesis = hypothesis
        super().__init__(hypothesis)


@dataclass(frozen=True)
class WitnessItem:
    role: str
    ring: str
    index: int
    label: str

    def as_dict(self) -> dict:
        return {"role": self.role, "ring": self.ring, "index": self.index, "label": self.label}


def item(R: FiniteRing, role: str, index) -> WitnessItem:
    return WitnessItem(role, R.provenance, int(index), R.label(int(index)))


@dataclass
class Failure:
    witness: tuple[WitnessItem, ...]
    detail: str
    replay: Callable[[], bool]


@dataclass
class CheckResult:
    check_id: str
    ring: str
    verdict: str
    witness: tuple[WitnessItem, ...] = ()
    hypothesis: str | None = None
    detail: str = ""
    elapsed: float = 0.0
    replay: Callable[[], bool] | None = field(default=None, repr=False, compare=False)

    def as_dict(self, timing: bool = True) -> dict:
        d = {"check": self.check_id, "ring": self.ring, "verdict": self.verdict}
        if self.hypothesis is not None:
            d["unmet_hypothesis"] = self.hypothesis
        if self.witness:
            d["witness"] = [w.as_dict() for w in self.witness]
        if self.detail:
            d["detail"] = self.detail
        if timing:
            d["elapsed"] = round(self.elapsed, 6)
        return d


# ---------------------------------------------------------------------------
# naive re-verification used by replays


def n_unit(R: FiniteRing, x: int) -> bool:
    return bool(np.any((R.mul[x] == R.one) & (R.mul[:, x] == R.one)))


def n_units(R: FiniteRing) -> list[int]:
    return [x for x in range(R.order) if n_unit(R, x)]


def n_delta(R: FiniteRing, a: int) -> bool:
    return all(n_unit(R, int(R.sub(R.one, R.mul[u, a]))) for u in n_units(R))


def n_jacobson(R: FiniteRing, a: int) -> bool:
    return all(n_unit(R, int(R.sub(R.one, R.mul[r, a]))) for r in range(R.order))


def n_central(R: FiniteRing, c: int) -> bool:
    return bool(np.array_equal(R.mul[c], R.mul[:, c]))


def n_nilpotent(R: FiniteRing, a: int) -> bool:
    x = a
    for _ in range(R.order + 1):
        if x == R.zero:
            return True
        x = int(R.mul[x, a])
    return x == R.zero


def n_idempotent(R: FiniteRing, e: int) -> bool:
    return int(R.mul[e, e]) == e


_SUMMAND = {"cdelta": n_delta, "cj": n_jacobson, "cn": n_nilpotent, "cu": n_unit}


def n_decomposable(R: FiniteRing, a: int, kind: str = "cdelta") -> bool:
    """a = c + r with c central and r in the set named by ``kind``."""
    member = _SUMMAND[kind]
    return any(n_central(R, c) and member(R, int(R.sub(a, c))) for c in range(R.order))


def n_clean(R: FiniteRing, a: int, strong: bool = False) -> bool:
    for e in range(R.order):
        if not n_idempotent(R, e):
            continue
        u = int(R.sub(a, e))
        if n_unit(R, u) and (not strong or R.mul[e, u] == R.mul[u, e]):
            return True
    return False


# ---------------------------------------------------------------------------
# context: the ring under test plus cached auxiliary rings


class Context:
    def __init__(self, R: FiniteRing, budget: int):
        self.R = R
        self.budget = budget

    def derived(self, key: str, order: int, build: Callable[[], FiniteRing], budget: int | None = None) -> FiniteRing:
        """Auxiliary ring ``key`` built from the ring under test, cached on it.

        Raises NotApplicable when the ring would exceed the budget, or when the
        construction itself is refused (carrier not a subring, ...).
        """
        limit = min(self.budget if budget is None else budget, order_cap())
        if order > limit:
            raise NotApplicable(f"auxiliary ring {key} has order {order}, above the budget {limit}")

        def compute():
            try:
                return build()
            except (NotASubring, OrderCapExceeded, NotAHomomorphism, NotUnital) as exc:
                return exc

        out = self.R.cached("derived:" + key, compute)
        if isinstance(out, Exception):
            raise NotApplicable(f"auxiliary ring {key} could not be built: {out}")
        return out


def _base(R: FiniteRing) -> FiniteRing | None:
    return R.meta.get("base")


def _family(R: FiniteRing) -> str | None:
    return R.meta.get("family")


def _sub(R: FiniteRing, a, b) -> int:
    return int(R.sub(int(a), int(b)))


def _first_index(mask: np.ndarray) -> int | None:
    hits = np.flatnonzero(mask)
    return int(hits[0]) if hits.size else None


def _undecomposable(R: FiniteRing, kind: str = "cdelta") -> int | None:
    return an.first_failure(R, kind)


def _require(cond: bool, hypothesis: str) -> None:
    if not cond:
        raise NotApplicable(hypothesis)


def _not_kind(S: FiniteRing, a: int, kind: str = "cdelta") -> Failure:
    return Failure(
        (item(S, f"no {kind} decomposition", a),),
        f"{S.provenance} is not {kind}",
        lambda: not n_decomposable(S, a, kind),
    )


def _equivalent(A: FiniteRing, B: FiniteRing, kind: str = "cdelta") -> Failure | None:
    """A and B must be both CΔ or both not; the witness is an undecomposable element
    of the side that fails, and the replay also confirms the other side holds."""
    a_ok = not (an.decomposable(A, kind) == False).any()  # noqa: E712
    b_ok = not (an.decomposable(B, kind) == False).any()  # noqa: E712
    if a_ok == b_ok:
        return None
    bad, good = (B, A) if a_ok else (A, B)
    x = _undecomposable(bad, kind)
    return Failure(
        (item(bad, f"no {kind} decomposition", x),),
        f"{good.provenance} is {kind} but {bad.provenance} is not",
        lambda: not n_decomposable(bad, x, kind) and bool(an.decomposable(good, kind).all()),
    )


def _implies(premise: FiniteRing, conclusion: FiniteRing, kind: str = "cdelta") -> Failure | None:
    if an.decomposable(premise, kind).all() and not an.decomposable(conclusion, kind).all():
        return _equivalent(premise, conclusion, kind)
    return None


def _membership_mismatch(S: FiniteRing, computed: np.ndarray, formula: np.ndarray, what: str, naive) -> Failure | None:
    bad = _first_index(computed != formula)
    if bad is None:
        return None
    expected = bool(formula[bad])
    return Failure(
        (item(S, "element", bad),),
        f"{what}: formula says {expected}, exhaustive search says {not expected}",
        lambda: naive(S, bad) != expected,
    )


def _iso_failure(phi: RingMap, what: str) -> Failure | None:
    """None when phi is bijective and preserves 0, 1, + and *."""
    if check_isomorphism(phi):
        return None
    S, T = phi.source, phi.target
    bad = homomorphism_violation(phi)
    if bad is None:
        seen: dict[int, int] = {}
        for x, y in enumerate(phi.image):
            if int(y) in seen:
                a, b = seen[int(y)], x
                break
            seen[int(y)] = x
        return Failure((item(S, "a", a), item(S, "b", b)), f"{what}: not injective",
                       lambda: phi.image[a] == phi.image[b] and a != b)
    law, w = bad
    a, b = (int(w[0]), int(w[-1]))
    op = S.mul if law == "multiplication" else S.add
    top = T.mul if law == "multiplication" else T.add
    img = phi.image
    if law in ("one", "zero"):
        return Failure((item(S, law, a),), f"{what}: {law} is not preserved",
                       lambda: img[a] != (T.one if law == "one" else T.zero))
    return Failure((item(S, "a", a), item(S, "b", b)), f"{what}: {law} is not preserved",
                   lambda: img[op[a, b]] != top[img[a], img[b]])


def _first(*outcomes) -> Failure | None:
    for o in outcomes:
        if o is not None:
            return o
    return None


# ---------------------------------------------------------------------------
# candidate ideals inside J(R)


def candidate_ideals(R: FiniteRing) -> list[tuple[str, Subset]]:
    """{0}, J, the powers of J, and R a R for a in J (when J is small)."""

    def compute():
        J = an.jacobson(R)
        found: dict[int, tuple[str, Subset]] = {}

        def add(name, S):
            found.setdefault(S.bits, (name, S))

        add("0", Subset.from_indices(R, [R.zero]))
        add("J", J)
        power, k = J, 1
        while True:
            k += 1
            prods = R.mul[power.indices[:, None], J.indices[None, :]].ravel()
            nxt = ideal_generated(R, Subset.from_indices(R, prods))
            if nxt == power:
                break
            add(f"J^{k}", nxt)
            power = nxt
        if len(J) <= MAX_PRINCIPAL_IDEALS:
            for a in J.indices:
                add(f"<{R.label(a)}>", ideal_generated(R, [int(a)]))
        return sorted(found.values(), key=lambda t: (len(t[1]), t[1].bits))

    return R.cached("candidate_ideals", compute)


def _quotient(R: FiniteRing, name: str, I: Subset) -> FiniteRing:
    return R.cached(f"quotient:{I.bits}", lambda: quotient_ring(R, I))


# ---------------------------------------------------------------------------
# checks


def chk_units_absorb_delta(ctx: Context):
    R = ctx.R
    U, D = an.units(R), an.delta_set(R)
    sums = R.add[U.indices[:, None], D.indices[None, :]]
    bad = np.argwhere(~U.mask[sums])
    if bad.size:
        u, d = int(U.indices[bad[0][0]]), int(D.indices[bad[0][1]])
        return Failure(
            (item(R, "unit", u), item(R, "delta element", d)),
            "unit plus Δ-element is not a unit",
            lambda: n_unit(R, u) and n_delta(R, d) and not n_unit(R, int(R.add[u, d])),
        )


def _matrix_over(ctx: Context, n: int = 2) -> FiniteRing:
    R = ctx.R
    if _family(R) == "M" and R.meta.get("n", 0) >= 2:
        return R
    return ctx.derived(f"M({n})", R.order ** (n * n), lambda: matrix_ring(n, R))


def chk_matrix_delta(ctx: Context):
    M = _matrix_over(ctx)
    B = _base(M)
    D, J = an.delta_set(M), an.jacobson(M)
    entries_in_J = an.jacobson(B).mask[M.meta["vectors"]].all(axis=1)
    return _first(
        _membership_mismatch(M, D.mask, J.mask, "Δ versus J", n_delta),
        _membership_mismatch(M, J.mask, entries_in_J, "J versus matrices over J(R)", n_jacobson),
    )


def chk_delta_zero_quotient(ctx: Context):
    R = ctx.R
    D, J = an.delta_set(R), an.jacobson(R)
    applicable = False
    for name, I in candidate_ideals(R):
        Q = _quotient(R, name, I)
        if len(an.delta_set(Q)) != 1:
            continue
        applicable = True
        for target, what in ((I.mask, f"Δ(R) = {name}"), (J.mask, f"{name} = J(R)")):
            lhs = D.mask if what.startswith("Δ") else I.mask
            bad = _first_index(lhs != target)
            if bad is not None:
                return Failure(
                    (item(R, "element", bad),),
                    f"Δ(R/{name}) = 0 yet {what} fails",
                    lambda b=bad: (n_delta(R, b) != bool(I.mask[b])) or (bool(I.mask[b]) != n_jacobson(R, b)),
                )
    _require(applicable, "some ideal I inside J(R) with Δ(R/I) = 0")


def chk_delta_equals_j(ctx: Context):
    R = ctx.R
    D, J = an.delta_set(R), an.jacobson(R)
    Q = _quotient(R, "J", J)
    lhs = D == J
    rhs = len(an.delta_set(Q)) == 1
    if lhs == rhs:
        return None
    if not lhs:
        a = _first_index(D.mask & ~J.mask)
        return Failure((item(R, "in Δ but not J", a),), "Δ(R) ≠ J(R) although Δ(R/J) = 0",
                       lambda: n_delta(R, a) and not n_jacobson(R, a))
    q = _first_index(an.delta_set(Q).mask & (np.arange(Q.order) != Q.zero))
    return Failure((item(Q, "nonzero Δ element of R/J", q),), "Δ(R) = J(R) although Δ(R/J) ≠ 0",
                   lambda: n_delta(Q, q) and q != Q.zero)


def chk_delta_of_quotient(ctx: Context):
    R = ctx.R
    D = an.delta_set(R)
    for name, I in candidate_ideals(R):
        Q = _quotient(R, name, I)
        proj = Q.meta["projection"]
        image = np.zeros(Q.order, dtype=bool)
        image[proj[D.indices]] = True
        bad = _first_index(image != an.delta_set(Q).mask)
        if bad is not None:
            expected = bool(image[bad])
            return Failure(
                (item(Q, "coset", bad),),
                f"(I + Δ(R))/I and Δ(R/I) differ for I = {name}",
                lambda: n_delta(Q, bad) != expected,
            )


def chk_basic_classes(ctx: Context):
    R = ctx.R
    rep = an.classify(R)
    J, D = an.jacobson(R), an.delta_set(R)
    hyps = {
        "commutative": rep.commutative,
        "radical ring (R = J(R))": len(J) == R.order,
        "Δ-ring (R = Δ(R))": len(D) == R.order,
        "CJ": rep.cj,
    }
    met = [h for h, v in hyps.items() if v]
    _require(bool(met), "commutative, radical, Δ-ring or CJ")
    if not rep.cdelta:
        x = _undecomposable(R)
        return Failure((item(R, "no cdelta decomposition", x),), f"{', '.join(met)} but not CΔ",
                       lambda: not n_decomposable(R, x))


def _require_cdelta(R: FiniteRing) -> None:
    _require(an.is_cdelta(R), "ring is CΔ")


def chk_cdelta_quotients(ctx: Context):
    R = ctx.R
    _require_cdelta(R)
    for name, I in candidate_ideals(R):
        Q = _quotient(R, name, I)
        x = _undecomposable(Q)
        if x is not None:
            f = _not_kind(Q, x)
            f.detail = f"R/{name} is not CΔ"
            return f


def chk_commutators(ctx: Context):
    R = ctx.R
    _require_cdelta(R)
    comm = R.add[R.mul, R.neg[R.mul.T]]
    bad = np.argwhere(~an.delta_set(R).mask[comm])
    if bad.size:
        a, b = (int(v) for v in bad[0])
        return Failure((item(R, "a", a), item(R, "b", b)), "ab - ba is not in Δ",
                       lambda: not n_delta(R, _sub(R, R.mul[a, b], R.mul[b, a])))


def chk_dedekind_finite(ctx: Context):
    R = ctx.R
    _require_cdelta(R)
    hit = R.mul == R.one
    bad = np.argwhere(hit & ~hit.T)
    if bad.size:
        a, b = (int(v) for v in bad[0])
        return Failure((item(R, "a", a), item(R, "b", b)), "ab = 1 but ba ≠ 1",
                       lambda: R.mul[a, b] == R.one and R.mul[b, a] != R.one)


def _square_closed(ctx: Context, S: Callable[[FiniteRing], Subset], naive, name: str):
    R = ctx.R
    _require_cdelta(R)
    m = S(R).mask
    sq = np.diagonal(R.mul)
    a = _first_index(m[sq] & ~m)
    if a is not None:
        return Failure((item(R, "a", a),), f"a^2 in {name} but a is not",
                       lambda: naive(R, int(R.mul[a, a])) and not naive(R, a))


def chk_square_delta(ctx: Context):
    return _square_closed(ctx, an.delta_set, n_delta, "Δ")


def chk_cu(ctx: Context):
    R = ctx.R
    _require_cdelta(R)
    x = _undecomposable(R, "cu")
    if x is not None:
        return _not_kind(R, x, "cu")


def chk_nil_in_radicals(ctx: Context):
    R = ctx.R
    _require_cdelta(R)
    N = an.nilpotents(R).mask
    for S, naive, name in ((an.jacobson(R).mask, n_jacobson, "J"), (an.delta_set(R).mask, n_delta, "Δ")):
        a = _first_index(N & ~S)
        if a is not None:
            return Failure((item(R, "nilpotent", a),), f"nilpotent element outside {name}",
                           lambda: n_nilpotent(R, a) and not naive(R, a))


def chk_square_jacobson(ctx: Context):
    return _square_closed(ctx, an.jacobson, n_jacobson, "J")


def _corners(R: FiniteRing):
    for e in an.idempotents(R).indices:
        yield int(e), R.cached(f"corner:{int(e)}", lambda e=int(e): corner_ring(R, e))


def _corner_kind(ctx: Context, kind: str):
    R = ctx.R
    for e, C in _corners(R):
        x = _undecomposable(C, kind)
        if x is not None:
            emb = int(C.meta["embedding"][x])
            return Failure(
                (item(R, "idempotent", e), item(R, "element of eRe", emb)),
                f"corner ring at {R.label(e)} is not {kind}",
                lambda: not n_decomposable(C, x, kind),
            )


def chk_corners_cdelta(ctx: Context):
    _require_cdelta(ctx.R)
    return _corner_kind(ctx, "cdelta")


def chk_exchange_clean(ctx: Context):
    R = ctx.R
    rep = an.classify(R)
    _require(rep.exchange and rep.cdelta, "exchange and CΔ")
    x = an.first_failure(R, "clean")
    if x is not None:
        return Failure((item(R, "not clean", x),), "exchange CΔ ring with a non-clean element",
                       lambda: not n_clean(R, x))


def chk_unique_decomposition(ctx: Context):
    R = ctx.R
    _require_cdelta(R)
    counts = an.cdelta_witness_counts(R)
    uniquely = bool(np.all(counts == 1))
    meet = an.delta_set(R) & an.center(R)
    zero_meet = len(meet) == 1
    if uniquely == zero_meet:
        return None
    if not zero_meet:
        z = int(next(i for i in meet.indices if i != R.zero))
        return Failure((item(R, "central Δ element", z),), "decompositions unique but Δ ∩ C ≠ 0",
                       lambda: n_delta(R, z) and n_central(R, z) and z != R.zero)
    a = int(np.flatnonzero(counts > 1)[0])
    C = an.center(R).indices
    cs = [int(c) for c in C if an.delta_set(R).mask[R.sub(a, c)]][:2]
    return Failure(
        (item(R, "element", a), item(R, "first central part", cs[0]), item(R, "second central part", cs[1])),
        "Δ ∩ C = 0 but decomposition is not unique",
        lambda: all(n_central(R, c) and n_delta(R, _sub(R, a, c)) for c in cs),
    )


def _center_plus_delta(R: FiniteRing) -> FiniteRing:
    gens = list(an.center(R).indices) + list(an.delta_set(R).indices)
    return R.cached("center_plus_delta", lambda: subring_generated(R, [int(g) for g in gens]))


def chk_center_plus_delta_sets(ctx: Context):
    R = ctx.R
    S = _center_plus_delta(R)
    emb = S.meta["embedding"]
    pos = {int(x): i for i, x in enumerate(emb)}
    checks = (
        (an.units(R).mask[emb], an.units(S).mask, "unit of R in C+Δ is not a unit of C+Δ", n_unit),
        (an.delta_set(R).mask[emb], an.delta_set(S).mask, "Δ(R) element outside Δ(C+Δ)", n_delta),
        (an.center(R).mask[emb], an.center(S).mask, "C(R) element outside C(C+Δ)", n_central),
    )
    for inner, outer, what, naive in checks:
        i = _first_index(inner & ~outer)
        if i is not None:
            x = int(emb[i])
            return Failure((item(R, "element", x),), what, lambda: not naive(S, pos[x]))


def chk_center_plus_delta_cdelta(ctx: Context):
    R = ctx.R
    S = _center_plus_delta(R)
    C, D = an.center(R).indices, an.delta_set(R).indices
    sums = np.zeros(R.order, dtype=bool)
    sums[R.add[C[:, None], D[None, :]].ravel()] = True
    extra = _first_index(~sums[S.meta["embedding"]])
    if extra is not None:
        x = int(S.meta["embedding"][extra])
        return Failure((item(R, "outside C+Δ", x),), "C(R) + Δ(R) is not closed under the ring operations",
                       lambda: not any(n_central(R, c) and n_delta(R, _sub(R, x, c)) for c in range(R.order)))
    x = _undecomposable(S)
    if x is not None:
        return _not_kind(S, x)


def chk_delta_u(ctx: Context):
    R = ctx.R
    rep = an.classify(R)
    _require(rep.delta_u, "ΔU: U(R) = 1 + Δ(R)")
    if rep.cdelta != rep.cu:
        kind = "cu" if rep.cdelta else "cdelta"
        return _not_kind(R, _undecomposable(R, kind), kind)


def _conjugation(R: FiniteRing):
    dec = an.decomposable(R, "cdelta")
    U = an.units(R).indices
    inv = an.inverses(R)
    conj = R.mul[R.mul[U[:, None], np.arange(R.order)[None, :]], inv[U][:, None]]
    bad = np.argwhere(dec[conj] != dec[None, :])
    if bad.size:
        p, a = int(U[bad[0][0]]), int(bad[0][1])
        b = int(conj[bad[0][0], a])
        return Failure(
            (item(R, "unit p", p), item(R, "a", a), item(R, "p a p^-1", b)),
            "conjugation changes CΔ-decomposability",
            lambda: n_decomposable(R, a) != n_decomposable(R, b),
        )


def chk_conjugation(ctx: Context):
    return _conjugation(ctx.R)


def chk_unit_nil_relations(ctx: Context):
    R = ctx.R
    rep = an.classify(R)
    N, J, D = an.nilpotents(R).mask, an.jacobson(R).mask, an.delta_set(R).mask
    parts = []
    if rep.uj:
        parts.append(("UJ", N, J, n_nilpotent, n_jacobson, "nilpotent outside J"))
    if rep.uu:
        parts.append(("UU", J, N, n_jacobson, n_nilpotent, "J element not nilpotent"))
        parts.append(("UU", D, N, n_delta, n_nilpotent, "Δ element not nilpotent"))
    if rep.delta_u:
        parts.append(("ΔU", N, D, n_nilpotent, n_delta, "nilpotent outside Δ"))
    _require(bool(parts), "UJ, UU or ΔU")
    for hyp, A, B, na, nb, what in parts:
        a = _first_index(A & ~B)
        if a is not None:
            return Failure((item(R, "element", a),), f"{hyp}: {what}", lambda: na(R, a) and not nb(R, a))


def chk_class_implications(ctx: Context):
    R = ctx.R
    rep = an.classify(R)
    rules = [
        (rep.uu and rep.cdelta, "UU and CΔ", "cn"),
        (rep.delta_u and rep.cn, "ΔU and CN", "cdelta"),
        (rep.uj and rep.cn, "UJ and CN", "cj"),
        (rep.uu and rep.cj, "UU and CJ", "cn"),
    ]
    live = [r for r in rules if r[0]]
    _require(bool(live), "one of: UU and CΔ, ΔU and CN, UJ and CN, UU and CJ")
    for _, hyp, kind in live:
        x = _undecomposable(R, kind)
        if x is not None:
            f = _not_kind(R, x, kind)
            f.detail = f"{hyp} but not {kind}"
            return f


def _three_way(R: FiniteRing):
    kinds = ("cn", "cj", "cdelta")
    vals = {k: bool(an.decomposable(R, k).all()) for k in kinds}
    if len(set(vals.values())) == 1:
        return None
    bad = next(k for k in kinds if not vals[k])
    good = next(k for k in kinds if vals[k])
    x = _undecomposable(R, bad)
    return Failure((item(R, f"no {bad} decomposition", x),), f"ring is {good} but not {bad}",
                   lambda: not n_decomposable(R, x, bad))


def chk_commutative_equivalence(ctx: Context):
    _require(ctx.R.is_commutative(), "commutative")
    return _three_way(ctx.R)


def chk_finite_equivalence(ctx: Context):
    return _three_way(ctx.R)


def chk_semipotent_cn_cj(ctx: Context):
    R = ctx.R
    rep = an.classify(R)
    _require(rep.semipotent and rep.cn, "semipotent and CN")
    x = _undecomposable(R, "cj")
    if x is not None:
        return _not_kind(R, x, "cj")


def chk_semipotent_cn_quotient(ctx: Context):
    R = ctx.R
    rep = an.classify(R)
    _require(rep.semipotent and rep.cn, "semipotent and CN")
    Q = an.radical_quotient(R)
    w = Q.commutativity_witness()
    if w is not None:
        a, b = (int(v) for v in w)
        return Failure((item(Q, "a", a), item(Q, "b", b)), "R/J(R) is not commutative",
                       lambda: Q.mul[a, b] != Q.mul[b, a])


def chk_cn_abelian(ctx: Context):
    R = ctx.R
    _require(an.classify(R).cn, "CN")
    I, C = an.idempotents(R).mask, an.center(R).mask
    e = _first_index(I & ~C)
    if e is not None:
        r = int(np.flatnonzero(R.mul[e] != R.mul[:, e])[0])
        return Failure((item(R, "idempotent", e), item(R, "r", r)), "idempotent is not central",
                       lambda: n_idempotent(R, e) and R.mul[e, r] != R.mul[r, e])


def chk_cn_corners(ctx: Context):
    _require(an.classify(ctx.R).cn, "CN")
    return _corner_kind(ctx, "cn")


def chk_exchange_cn_strongly_clean(ctx: Context):
    R = ctx.R
    rep = an.classify(R)
    _require(rep.exchange and rep.cn, "exchange and CN")
    x = an.first_failure(R, "strongly-clean")
    if x is not None:
        return Failure((item(R, "not strongly clean", x),), "exchange CN ring with a non-strongly-clean element",
                       lambda: not n_clean(R, x, strong=True))


def chk_matrix_scalar_criterion(ctx: Context):
    R = ctx.R
    base = _base(R) if _family(R) == "M" else R
    _require(base is not None and base.is_commutative(), "commutative base ring")
    M = _matrix_over(ctx)
    base = _base(M)
    n = M.meta["matrix_size"]
    V = M.meta["vectors"]
    Jb = an.jacobson(base).mask
    diag = [i * n + i for i in range(n)]
    ok = np.zeros(M.order, dtype=bool)
    for c in range(base.order):
        W = V.copy()
        W[:, diag] = base.add[W[:, diag], base.neg[c]]
        ok |= Jb[W].all(axis=1)
    dec = an.decomposable(M, "cdelta")
    a = _first_index(dec != ok)
    if a is not None:
        expected = bool(ok[a])
        return Failure((item(M, "matrix", a),), "scalar-shift criterion disagrees with CΔ-decomposability",
                       lambda: n_decomposable(M, a) != expected)


def chk_matrix_conjugation(ctx: Context):
    return _conjugation(_matrix_over(ctx))


def chk_matrix_never_cdelta(ctx: Context):
    R = ctx.R
    base = _base(R) if _family(R) == "M" else R
    _require(base is not None and base.order > 1, "nonzero base ring")
    M = _matrix_over(ctx)
    if an.is_cdelta(M):
        e = M.resolve("e11")
        w = an.decompose_element(M, e, "cdelta")
        c, r = w.parts
        return Failure((item(M, "e11", e), item(M, "central part", c), item(M, "Δ part", r)),
                       "matrix ring is CΔ", lambda: n_central(M, c) and n_delta(M, r))


def _triangular_over(ctx: Context) -> tuple[FiniteRing, FiniteRing]:
    R = ctx.R
    if _family(R) == "T" and R.meta.get("n") == 2:
        return R, _base(R)
    return ctx.derived("T(2)", R.order**3, lambda: triangular_ring(2, R)), R


def chk_triangular_criterion(ctx: Context):
    R = ctx.R
    base = _base(R) if _family(R) == "T" and R.meta.get("n") == 2 else R
    _require(base.is_commutative(), "commutative base ring")
    T, base = _triangular_over(ctx)
    D = an.delta_set(base).mask
    q = base.order
    X = D[base.add[np.arange(q)[:, None], base.neg[None, :]]]  # X[a, c]: a - c in Δ
    pair_ok = (X.astype(np.int64) @ X.T.astype(np.int64)) > 0
    crit = bool(pair_ok.all())
    if crit == an.is_cdelta(T):
        return None
    if not crit:
        a, b = (int(v) for v in np.argwhere(~pair_ok)[0])
        return Failure((item(base, "a", a), item(base, "b", b)), "T2 is CΔ but no common c works for (a, b)",
                       lambda: not any(n_delta(base, _sub(base, a, c)) and n_delta(base, _sub(base, b, c))
                                       for c in range(q)))
    return _not_kind(T, _undecomposable(T))


def chk_example_triangular_z5(ctx: Context):
    R = ctx.R
    is_t2z5 = _family(R) == "T" and R.meta.get("n") == 2 and _base(R).provenance == "Z 5"
    _require(is_t2z5 or R.provenance == "Z 5", "ring is Z 5 or T(2, Z 5)")
    T = R if is_t2z5 else ctx.derived("T(2)", 125, lambda: triangular_ring(2, R))
    A = T.resolve(((4, 0), (0, 0)))
    w = an.decompose_element(T, A, "cdelta")
    if w.found:
        c, r = w.parts
        return Failure((item(T, "diag(4,0)", A), item(T, "central part", c), item(T, "Δ part", r)),
                       "diag(4,0) has a CΔ decomposition", lambda: n_central(T, c) and n_delta(T, r))


FAMILY_TAGS = ("Dn", "Sn", "Vn", "VnK", "DnK", "Snm", "Tnm", "Un")


def _family_checks(ctx: Context, kinds: Sequence[MatrixFamilyKind], own_tags: Sequence[str]):
    R = ctx.R
    outcomes = []
    applicable = False
    if _family(R) in own_tags:
        applicable = True
        outcomes.append(_equivalent(_base(R), R))
    for kind in kinds:
        size_params = _family_params(kind)
        try:
            F = ctx.derived(kind.expression("R"), R.order**size_params,
                            lambda kind=kind: special_matrix_family(kind, R))
        except NotApplicable:
            continue
        applicable = True
        outcomes.append(_equivalent(R, F))
    _require(applicable, "auxiliary family rings within the budget")
    return _first(*outcomes)


def _family_params(kind: MatrixFamilyKind) -> int:
    from .constructors import _family_pattern

    return _family_pattern(kind)[2]


def chk_constant_diagonal_families(ctx: Context):
    kinds = [MatrixFamilyKind("Dn", 2), MatrixFamilyKind("Vn", 2), MatrixFamilyKind("VnK", 3, k=2),
             MatrixFamilyKind("DnK", 3)]
    return _family_checks(ctx, kinds, ("Dn", "Vn", "VnK", "DnK"))


def chk_direct_product(ctx: Context):
    R = ctx.R
    factors = R.meta.get("factors")
    _require(bool(factors), "ring is a direct product")
    for F in factors:
        if an.is_cdelta(R) and not an.is_cdelta(F):
            return _equivalent(R, F)
    if not an.is_cdelta(R) and all(an.is_cdelta(F) for F in factors):
        x = _undecomposable(R)
        return Failure((item(R, "no cdelta decomposition", x),), "all factors CΔ but the product is not",
                       lambda: not n_decomposable(R, x))


STANDARD_CENTRAL_PAIRS = ((0, 0), (1, 1))


def _l_rings(ctx: Context, tag: str, build, order_of):
    """(ring, base, s, t) for the ring itself when it is of this family, plus
    auxiliary rings over R for the pinned central pairs."""
    R = ctx.R
    out = []
    if _family(R) == tag:
        out.append((R, _base(R), R.meta["s"], R.meta["t"]))
    for s, t in STANDARD_CENTRAL_PAIRS:
        s_i, t_i = R.resolve(str(s)), R.resolve(str(t))
        key = f"{tag}({s},{t})"
        try:
            S = ctx.derived(key, order_of(R, s_i, t_i), lambda s_i=s_i, t_i=t_i: build(CentralParams(s_i, t_i), R))
        except NotApplicable:
            continue
        out.append((S, R, s_i, t_i))
    return out


def _l_order(R, s, t):
    return R.order**3 * np.unique(R.mul[s]).size * np.unique(R.mul[t]).size


def _h_order(R, s, t):
    return R.order**3


def _diag_delta_formula(rings, what: str):
    _require(bool(rings), "auxiliary rings within the budget")
    for S, base, _, _ in rings:
        V = S.meta["vectors"]
        formula = an.delta_set(base).mask[V[:, [0, 4, 8]]].all(axis=1)
        f = _membership_mismatch(S, an.delta_set(S).mask, formula, what, n_delta)
        if f is not None:
            return f


def chk_l_delta(ctx: Context):
    return _diag_delta_formula(_l_rings(ctx, "L", lst_ring, _l_order), "Δ(L) versus diagonal in Δ(R)")


def _l_condition(base: FiniteRing, s: int, t: int) -> bool:
    """For all a, d, f there are decompositions a = x+p, d = y+q, f = z+r with
    sx = sy and ty = tz."""
    C = an.center(base).indices
    D = an.delta_set(base).mask
    parts = [C[D[base.add[a, base.neg[C]]]] for a in range(base.order)]
    s_sets = {frozenset(base.mul[s, p].tolist()) for p in parts}
    t_sets = {frozenset(base.mul[t, p].tolist()) for p in parts}
    for ys in {tuple(p.tolist()) for p in parts}:
        for sa in s_sets:
            for tf in t_sets:
                if not any(int(base.mul[s, y]) in sa and int(base.mul[t, y]) in tf for y in ys):
                    return False
    return True


def chk_l_transfer(ctx: Context):
    R = ctx.R
    outcomes = []
    applicable = False
    if _family(R) == "L":
        base, s, t = _base(R), R.meta["s"], R.meta["t"]
        pairs = [(base, s, t, R)]
    else:
        base = R
        pairs = [(R, R.resolve(str(s)), R.resolve(str(t)), None) for s, t in STANDARD_CENTRAL_PAIRS]
    for B, s, t, L in pairs:
        try:
            V = ctx.derived(f"V2L({B.label(s)},{B.label(t)})", B.order * np.unique(B.mul[t]).size,
                            lambda B=B, s=s, t=t: v2_lst_ring(CentralParams(s, t), B))
            applicable = True
            outcomes.append(_equivalent(B, V))
        except NotApplicable:
            pass
        if an.is_cdelta(B) and _l_condition(B, s, t):
            if L is None:
                try:
                    L = ctx.derived(f"L({B.label(s)},{B.label(t)})", _l_order(B, s, t),
                                    lambda B=B, s=s, t=t: lst_ring(CentralParams(s, t), B))
                except NotApplicable:
                    continue
            applicable = True
            outcomes.append(_implies(B, L))
    _require(applicable, "auxiliary rings within the budget")
    return _first(*outcomes)


def chk_l_descends(ctx: Context):
    rings = _l_rings(ctx, "L", lst_ring, _l_order)
    _require(bool(rings), "auxiliary rings within the budget")
    return _first(*(_implies(S, base) for S, base, _, _ in rings))


def chk_example_l_z5(ctx: Context):
    R = ctx.R
    own = _family(R) == "L" and _base(R).provenance == "Z 5" and (R.meta["s"], R.meta["t"]) == (1, 1)
    _require(own or R.provenance == "Z 5", "ring is Z 5 or L(1, 1, Z 5)")
    L = R if own else ctx.derived("L(1,1)", 3125, lambda: lst_ring(CentralParams(1, 1), R), budget=order_cap())
    A = L.resolve(((1, 0, 0), (2, 2, 1), (0, 0, 1)))
    w = an.decompose_element(L, A, "cdelta")
    if w.found:
        c, r = w.parts
        return Failure((item(L, "A", A), item(L, "central part", c), item(L, "Δ part", r)),
                       "A has a CΔ decomposition", lambda: n_central(L, c) and n_delta(L, r))


def chk_l_zero(ctx: Context):
    R = ctx.R
    if _family(R) == "L" and (R.meta["s"], R.meta["t"]) == (_base(R).zero, _base(R).zero):
        L, base = R, _base(R)
    else:
        base = R
        L = ctx.derived("L(0,0)", R.order**3, lambda: lst_ring(CentralParams(R.zero, R.zero), R))
    P = ctx.derived("R^3", base.order**3, lambda: direct_product([base, base, base])) if base is R else \
        base.cached("derived:R^3", lambda: direct_product([base, base, base]))
    phi = map_by_coords(L, P, lambda m: (m[0][0], m[1][1], m[2][2]))
    return _first(_iso_failure(phi, "diagonal map L(0,0)(R) -> R x R x R"), _equivalent(base, L))


def chk_h_delta(ctx: Context):
    return _diag_delta_formula(_l_rings(ctx, "H", hst_ring, _h_order), "Δ(H) versus diagonal in Δ(R)")


def chk_h_transfer(ctx: Context):
    rings = _l_rings(ctx, "H", hst_ring, _h_order)
    _require(bool(rings), "H(s,t)(R) is a subring within the budget")
    return _first(*(_equivalent(base, S) for S, base, _, _ in rings))


def _k0(ctx: Context) -> tuple[FiniteRing, FiniteRing]:
    R = ctx.R
    if _family(R) == "K" and R.meta["s"] == _base(R).zero:
        return R, _base(R)
    return ctx.derived("K(0)", R.order**4, lambda: generalized_matrix(R.zero, R)), R


def chk_k0_structure(ctx: Context):
    R = ctx.R
    base = _base(R) if _family(R) == "K" else R
    _require(base is not None and base.is_commutative(), "commutative base ring")
    K, base = _k0(ctx)
    V = K.meta["vectors"]
    scalar = (V[:, 0] == V[:, 3]) & (V[:, 1] == base.zero) & (V[:, 2] == base.zero)
    units_formula = an.units(base).mask[V[:, 0]] & an.units(base).mask[V[:, 3]]
    delta_formula = an.delta_set(base).mask[V[:, 0]] & an.delta_set(base).mask[V[:, 3]]
    return _first(
        _membership_mismatch(K, an.center(K).mask, scalar, "center versus scalar matrices", n_central),
        _membership_mismatch(K, an.units(K).mask, units_formula, "units versus a, d units", n_unit),
        _membership_mismatch(K, an.delta_set(K).mask, delta_formula, "Δ versus a, d in Δ", n_delta),
    )


def chk_k0_diagonal(ctx: Context):
    R = ctx.R
    K = ctx.derived("K(0)", R.order**4, lambda: generalized_matrix(R.zero, R))
    D = ctx.derived("D2(K(0))", R.order**8, lambda: special_matrix_family(MatrixFamilyKind("Dn", 2), K))
    return _equivalent(R, D)


def chk_example_k0_z3(ctx: Context):
    R = ctx.R
    own = _family(R) == "K" and _base(R).provenance == "Z 3" and R.meta["s"] == 0
    _require(own or R.provenance == "Z 3", "ring is Z 3 or K(0, Z 3)")
    K = R if own else ctx.derived("K(0)", 81, lambda: generalized_matrix(0, R))
    A = K.resolve(((1, 0), (0, 0)))
    w = an.decompose_element(K, A, "cdelta")
    if w.found:
        c, r = w.parts
        return Failure((item(K, "e11", A), item(K, "central part", c), item(K, "Δ part", r)),
                       "e11 has a CΔ decomposition", lambda: n_central(K, c) and n_delta(K, r))


def _trivial(ctx: Context) -> tuple[FiniteRing, FiniteRing]:
    R = ctx.R
    if _family(R) == "Triv":
        return R, _base(R)
    return ctx.derived("Triv", R.order**2, lambda: trivial_extension(R)), R


def chk_trivial_extension(ctx: Context):
    T, base = _trivial(ctx)
    C = an.center(base).indices
    commuting = bool(np.all(base.mul[C] == base.mul[:, C].T))
    return _first(_implies(T, base), _implies(base, T) if commuting else None)


def chk_trivial_extension_equivalence(ctx: Context):
    T, base = _trivial(ctx)
    V = T.meta["vectors"]
    return _first(
        _equivalent(base, T),
        _membership_mismatch(T, an.delta_set(T).mask, an.delta_set(base).mask[V[:, 0]], "Δ(T(R,R)) versus T(Δ(R),R)",
                             n_delta),
        _membership_mismatch(T, an.units(T).mask, an.units(base).mask[V[:, 0]], "U(T(R,R)) versus T(U(R),R)", n_unit),
    )


def endomorphism_candidates(R: FiniteRing) -> list[RingMap]:
    """The identity, and x -> x^p for primes p dividing the order when that is a
    unital ring endomorphism (the Frobenius map on fields of order p^k)."""

    def compute():
        out = [identity_map(R)]
        seen = {tuple(range(R.order))}
        n, p = R.order, 2
        primes = []
        while n > 1:
            if n % p == 0:
                primes.append(p)
                while n % p == 0:
                    n //= p
            p += 1
        for p in primes:
            try:
                f = power_map(R, p, name="frob" if p == _characteristic(R) else f"pow{p}")
            except (NotAHomomorphism, NotUnital):
                continue
            key = tuple(int(v) for v in f.image)
            if key not in seen:
                seen.add(key)
                out.append(f)
        return out

    return R.cached("endomorphism_candidates", compute)


def _characteristic(R: FiniteRing) -> int:
    from .constructors import characteristic

    return characteristic(R)


def _skew_rings(ctx: Context):
    R = ctx.R
    out = []
    if _family(R) == "TSkew" and R.meta["n"] == 2:
        out.append((R, _base(R), R.meta["alpha"]))
    for alpha in endomorphism_candidates(R):
        key = f"TSkew(2,{alpha.name or 'alpha'})"
        try:
            T = ctx.derived(key, R.order**2, lambda a=alpha: skew_triangular(2, R, a))
        except NotApplicable:
            continue
        out.append((T, R, alpha))
    return out


def chk_skew_triangular(ctx: Context):
    rings = _skew_rings(ctx)
    _require(bool(rings), "auxiliary rings within the budget")
    outcomes = []
    for T, base, _ in rings:
        V = T.meta["vectors"]
        outcomes.append(_equivalent(base, T))
        outcomes.append(_membership_mismatch(T, an.delta_set(T).mask, an.delta_set(base).mask[V[:, 0]],
                                             "Δ(T_n(R,α)) versus a0 in Δ(R)", n_delta))
    return _first(*outcomes)


def chk_skew_quotient_iso(ctx: Context):
    rings = _skew_rings(ctx)
    rings = [r for r in rings if r[1].order ** 2 <= REWRITE_BUDGET]
    _require(bool(rings), f"skew polynomial quotient with at most {REWRITE_BUDGET} elements")
    for T, base, alpha in rings:
        Q = base.cached(f"derived:SkewPoly({alpha.name},{tuple(alpha.image)})",
                        lambda b=base, a=alpha: skew_poly_quotient(b, a, 2))
        f = _iso_failure(map_by_coords(Q, T, lambda c: c), f"coefficient map R[x;α]/<x^2> -> {T.provenance}")
        if f is not None:
            return f


def chk_truncated_polynomials(ctx: Context):
    R = ctx.R
    if R.is_commutative():
        P = ctx.derived("R[x]/<x^2>", R.order**2, lambda: poly_quotient(R, ["0", "0", "1"]))
    else:
        _require(R.order**2 <= REWRITE_BUDGET, f"skew polynomial quotient with at most {REWRITE_BUDGET} elements")
        P = ctx.derived("R[x]/<x^2>", R.order**2, lambda: skew_poly_quotient(R, identity_map(R), 2))
    return _equivalent(R, P)


def chk_double_trivial(ctx: Context):
    R = ctx.R
    D = ctx.derived("DT", R.order**4, lambda: dt_ring(R))
    TT = ctx.derived("Triv(Triv)", R.order**4, lambda: trivial_extension(trivial_extension(R)))
    phi = map_by_coords(D, TT, lambda c: ((c[0], c[1]), (c[2], c[3])))
    iso = _iso_failure(phi, "DT(R,R) -> T(T(R,R),T(R,R))")
    outcomes = [iso, _equivalent(R, D)]
    if R.is_commutative():
        P = ctx.derived("R[x,y]/<x^2,y^2>", R.order**4,
                        lambda: poly_quotient(poly_quotient(R, ["0", "0", "1"]), ["0", "0", "1"]))
        outcomes.append(_equivalent(R, P))
    return _first(*outcomes)


def chk_sn(ctx: Context):
    return _family_checks(ctx, [MatrixFamilyKind("Sn", 2), MatrixFamilyKind("Sn", 3)], ("Sn",))


def chk_snm_tnm_un(ctx: Context):
    kinds = [MatrixFamilyKind("Snm", 2, m=2), MatrixFamilyKind("Tnm", 2, m=2), MatrixFamilyKind("Un", 3)]
    return _family_checks(ctx, kinds, ("Snm", "Tnm", "Un"))


def chk_presentations(ctx: Context):
    kinds = [MatrixFamilyKind("Tnm", 2, m=3), MatrixFamilyKind("Snm", 3, m=2), MatrixFamilyKind("Un", 4)]
    return _family_checks(ctx, kinds, ())


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    statement: str
    hypothesis: str
    run: Callable[[Context], Failure | None]
    pinned: str = ""


def _spec(check_id, statement, hypothesis, run, pinned=""):
    return CheckSpec(check_id, statement, hypothesis, run, pinned)


CATALOG: dict[str, CheckSpec] = {s.check_id: s for s in [
    _spec("lemma_2_2", "adding a Δ-element to a unit gives a unit", "none", chk_units_absorb_delta),
    _spec("lemma_2_3", "in a matrix ring of size at least 2, Δ = J = matrices over J(R)", "none", chk_matrix_delta,
          "M(2, R), or R itself when it is a matrix ring"),
    _spec("lemma_2_7", "if I lies in J and Δ(R/I) = 0 then Δ(R) = I = J(R)", "such an ideal among the candidates",
          chk_delta_zero_quotient, "candidate ideals: 0, J, powers of J, principal ideals of J"),
    _spec("cor_2_8", "Δ(R) = J(R) exactly when Δ(R/J(R)) = 0", "none", chk_delta_equals_j),
    _spec("cor_2_9", "for I inside J, Δ(R/I) is the image of Δ(R)", "none", chk_delta_of_quotient,
          "candidate ideals: 0, J, powers of J, principal ideals of J"),
    _spec("example_2_10", "commutative, radical, Δ-rings and CJ rings are CΔ",
          "one of these classes", chk_basic_classes),
    _spec("prop_4_3_i", "quotients of a CΔ ring by ideals inside J are CΔ", "CΔ", chk_cdelta_quotients),
    _spec("prop_4_3_ii", "commutators of a CΔ ring lie in Δ", "CΔ", chk_commutators),
    _spec("prop_4_3_iii", "a CΔ ring is Dedekind-finite", "CΔ", chk_dedekind_finite),
    _spec("prop_4_3_iv", "in a CΔ ring, a^2 in Δ forces a in Δ", "CΔ", chk_square_delta),
    _spec("prop_4_3_v", "a CΔ ring is CU", "CΔ", chk_cu),
    _spec("prop_4_3_vi", "in a CΔ ring nilpotents lie in J and in Δ", "CΔ", chk_nil_in_radicals),
    _spec("prop_4_3_vii", "in a CΔ ring, a^2 in J forces a in J", "CΔ", chk_square_jacobson),
    _spec("prop_4_3_viii", "corner rings eRe of a CΔ ring are CΔ", "CΔ", chk_corners_cdelta),
    _spec("cor_exchange_clean", "exchange CΔ rings are clean", "exchange and CΔ", chk_exchange_clean),
    _spec("prop_2_14", "a CΔ ring has unique decompositions exactly when Δ ∩ C = 0", "CΔ",
          chk_unique_decomposition),
    _spec("prop_2_15", "units, Δ and center of R restrict into those of the subring C + Δ", "none",
          chk_center_plus_delta_sets),
    _spec("cor_2_16", "C(R) + Δ(R) is a CΔ ring", "none", chk_center_plus_delta_cdelta),
    _spec("remark_2_18", "for ΔU rings, CΔ and CU coincide", "ΔU", chk_delta_u),
    _spec("prop_2_19", "CΔ-decomposability is invariant under conjugation by units", "none", chk_conjugation),
    _spec("lemma_2_22", "UJ gives Nil in J; UU gives J and Δ in Nil; ΔU gives Nil in Δ", "UJ, UU or ΔU",
          chk_unit_nil_relations),
    _spec("cor_2_23", "UU+CΔ gives CN, ΔU+CN gives CΔ, UJ+CN gives CJ, UU+CJ gives CN", "one of the premises",
          chk_class_implications),
    _spec("lemma_4_1", "for commutative rings CN, CJ and CΔ coincide", "commutative", chk_commutative_equivalence),
    _spec("cor_4_4", "for finite rings CN, CJ and CΔ coincide", "none", chk_finite_equivalence),
    _spec("lemma_4_5", "semipotent CN rings are CJ", "semipotent and CN", chk_semipotent_cn_cj),
    _spec("cor_4_8", "semipotent CN rings have commutative R/J", "semipotent and CN", chk_semipotent_cn_quotient),
    _spec("lemma_4_6", "CN rings are abelian", "CN", chk_cn_abelian),
    _spec("lemma_4_9", "corner rings eRe of a CN ring are CN", "CN", chk_cn_corners),
    _spec("cor_4_7", "exchange CN rings are strongly clean", "exchange and CN", chk_exchange_cn_strongly_clean),
    _spec("lemma_2_20", "over a commutative ring, A is CΔ-decomposable iff A - cI has entries in J for some c",
          "commutative base", chk_matrix_scalar_criterion, "M(2, R)"),
    _spec("cor_2_21", "in a matrix ring, CΔ-decomposability is invariant under GL conjugation", "none",
          chk_matrix_conjugation, "M(2, R)"),
    _spec("remark_mn", "matrix rings of size at least 2 over a nonzero ring are never CΔ", "nonzero base",
          chk_matrix_never_cdelta, "M(2, R)"),
    _spec("prop_2_25", "over a commutative ring, T2 is CΔ iff any a, b share a c with a - c, b - c in Δ",
          "commutative base", chk_triangular_criterion, "T(2, R)"),
    _spec("example_2_26_finite", "diag(4,0) in T(2, Z 5) has no CΔ decomposition", "ring is Z 5 or T(2, Z 5)",
          chk_example_triangular_z5),
    _spec("prop_3_1", "constant-diagonal families over R are CΔ iff R is", "none", chk_constant_diagonal_families,
          "Dn(2), Vn(2), VnK(3, 2), DnK(3)"),
    _spec("prop_3_2", "a direct product is CΔ iff every factor is", "direct product", chk_direct_product),
    _spec("lemma_3_3", "Δ(L(s,t)) is the set with diagonal entries in Δ(R)", "none", chk_l_delta,
          "(s, t) in {(0, 0), (1, 1)}"),
    _spec("prop_3_4", "R is CΔ iff V2(L(s,t)(R)) is; R CΔ plus compatible decompositions make L(s,t)(R) CΔ",
          "none", chk_l_transfer, "(s, t) in {(0, 0), (1, 1)}; compatibility read existentially"),
    _spec("cor_3_5", "if L(s,t)(R) is CΔ then R is", "none", chk_l_descends, "(s, t) in {(0, 0), (1, 1)}"),
    _spec("example_3_6_finite", "[[1,0,0],[2,2,1],[0,0,1]] in L(1,1)(Z 5) has no CΔ decomposition",
          "ring is Z 5 or L(1, 1, Z 5)", chk_example_l_z5),
    _spec("prop_3_7", "L(0,0)(R) is R x R x R, and is CΔ iff R is", "none", chk_l_zero),
    _spec("lemma_3_8", "Δ(H(s,t)) is the set with diagonal entries in Δ(R)", "H(s,t)(R) is a subring", chk_h_delta,
          "(s, t) in {(0, 0), (1, 1)}"),
    _spec("thm_3_9", "R is CΔ iff H(s,t)(R) is", "H(s,t)(R) is a subring", chk_h_transfer,
          "(s, t) in {(0, 0), (1, 1)}"),
    _spec("prop_3_10", "over a commutative ring, K0 has scalar center, units and Δ read off the diagonal",
          "commutative base", chk_k0_structure, "K(0, R)"),
    _spec("prop_3_11", "R is CΔ iff Dn(K0(R)) is", "none", chk_k0_diagonal, "n = 2"),
    _spec("example_3_12_finite", "e11 in K(0, Z 3) has no CΔ decomposition", "ring is Z 3 or K(0, Z 3)",
          chk_example_k0_z3),
    _spec("prop_3_15", "T(R,R) CΔ gives R CΔ; the converse when C(R) commutes with the module", "none",
          chk_trivial_extension),
    _spec("cor_3_16", "T(R,R) is CΔ iff R is; its Δ and units are read off the first coordinate", "none",
          chk_trivial_extension_equivalence),
    _spec("prop_3_17", "T_n(R, α) is CΔ iff R is", "none", chk_skew_triangular,
          "n = 2; α in {identity, x -> x^p endomorphisms}"),
    _spec("cor_3_18", "R[x;α]/<x^n> is isomorphic to T_n(R, α) by coefficients", "none", chk_skew_quotient_iso,
          "n = 2; α in {identity, x -> x^p endomorphisms}"),
    _spec("cor_3_19", "R[x]/<x^n> is CΔ iff R is", "none", chk_truncated_polynomials, "n = 2"),
    _spec("cor_dt", "DT(R,R) and R[x,y]/<x^2,y^2> are CΔ iff R is; DT(R,R) is T(T(R,R),T(R,R))", "none",
          chk_double_trivial),
    _spec("cor_3_20", "Sn(R) is CΔ iff R is", "none", chk_sn, "n in {2, 3}"),
    _spec("cor_3_21", "Snm, Tnm and Un over R are CΔ iff R is", "none", chk_snm_tnm_un,
          "Snm(2, 2), Tnm(2, 2), Un(3)"),
    _spec("cor_3_23", "the presented rings A, B, C (via their matrix forms) are CΔ iff R is", "none",
          chk_presentations, "Tnm(2, 3), Snm(3, 2), Un(4)"),
]}

CHECK_IDS = tuple(CATALOG)


def run_check(check_id: str, ring, budget: int = DEFAULT_DERIVED_BUDGET, name: str | None = None) -> CheckResult:
    """Run one catalog check on a ring (or a ring expression)."""
    try:
        spec = CATALOG[check_id]
    except KeyError:
        raise UnknownCheck(f"unknown check {check_id!r}") from None
    if isinstance(ring, str):
        from .dsl import build

        ring = build(ring)
    label = name or ring.provenance
    start = time.perf_counter()
    try:
        outcome = spec.run(Context(ring, budget))
    except NotApplicable as na:
        return CheckResult(check_id, label, "not-applicable", hypothesis=na.hypothesis,
                           elapsed=time.perf_counter() - start)
    elapsed = time.perf_counter() - start
    if outcome is None:
        return CheckResult(check_id, label, "pass", elapsed=elapsed)
    return CheckResult(check_id, label, "fail", witness=tuple(outcome.witness), detail=outcome.detail,
                       elapsed=elapsed, replay=outcome.replay)


@dataclass
class SuiteReport:
    results: list[CheckResult]
    errors: list[dict]
    tallies: dict[str, dict[str, int]]
    corpus: list[str]
    checks: list[str]

    @property
    def fail_count(self) -> int:
        return sum(t["fail"] for t in self.tallies.values())

    def as_dict(self, timing: bool = True) -> dict:
        d = {
            "corpus": self.corpus,
            "checks": self.checks,
            "tallies": self.tallies,
            "totals": {k: sum(t[k] for t in self.tallies.values()) for k in ("pass", "fail", "not-applicable")},
            "errors": self.errors,
            "results": [r.as_dict(timing=False) for r in self.results],
        }
        if timing:
            d["timing"] = {f"{r.check_id}@{r.ring}": round(r.elapsed, 6) for r in self.results}
        return d


def run_suite(
    corpus: Iterable[tuple[str, object]],
    selection: Sequence[str] | None = None,
    *,
    threads: int = 1,
    budget: int = DEFAULT_DERIVED_BUDGET,
) -> SuiteReport:
    """Run the selected checks over every corpus ring.

    ``corpus`` holds (name, ring-or-expression-or-builder).  A ring that fails to
    build or a check that raises is recorded in ``errors``; other entries go on.
    Results are ordered by catalog position, then corpus position.
    """
    ids = list(CHECK_IDS if selection is None else selection)
    for cid in ids:
        if cid not in CATALOG:
            raise UnknownCheck(f"unknown check {cid!r}")
    ids = [cid for cid in CHECK_IDS if cid in set(ids)]
    entries = list(corpus)
    names = [n for n, _ in entries]
    errors: list[dict] = []

    def materialize(obj):
        if isinstance(obj, FiniteRing):
            return obj
        if isinstance(obj, str):
            from .dsl import build

            return build(obj)
        return obj()

    rings: dict[int, FiniteRing] = {}
    for k, (name, obj) in enumerate(entries):
        try:
            rings[k] = materialize(obj)
        except CDeltaError as exc:
            errors.append({"ring": name, "check": None, "error": type(exc).__name__, "message": str(exc)})

    jobs = [(ci, k) for ci, cid in enumerate(ids) for k in range(len(entries)) if k in rings]

    def work(job):
        ci, k = job
        try:
            return job, run_check(ids[ci], rings[k], budget=budget, name=names[k])
        except CDeltaError as exc:
            return job, exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            done = list(pool.map(work, jobs))
    else:
        done = [work(j) for j in jobs]
    done.sort(key=lambda t: t[0])
    results = []
    tallies = {cid: {"pass": 0, "fail": 0, "not-applicable": 0, "error": 0} for cid in ids}
    for (ci, k), out in done:
        if isinstance(out, Exception):
            errors.append({"ring": names[k], "check": ids[ci], "error": type(out).__name__, "message": str(out)})
            tallies[ids[ci]]["error"] += 1
            continue
        results.append(out)
        tallies[ids[ci]][out.verdict] += 1
    return SuiteReport(results, errors, tallies, names, ids)
