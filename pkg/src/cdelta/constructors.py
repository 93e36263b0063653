"""Ring families built from a base ring.

Matrix-shaped families are described by an entry *pattern*: each matrix entry is
a sum of terms ``coef * param`` (``coef`` a base element or ``None`` for one).
Parameters run over the whole base ring, lexicographically with the first
parameter most significant; duplicate matrices keep their first occurrence.
Every carrier is checked for closure and for containing the identity; a failing
carrier raises :class:`NotASubring` with the offending pair of elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InvalidParameter,
    NonCentralParameter,
    OrderCapExceeded,
    NotAGroup,
    NotAnIdeal,
    NotASubring,
    NotIdempotent,
)
from .ring import (
    FiniteRing,
    RingMap,
    Subset,
    all_vectors,
    coordinate_ring,
    encode_tuple,
    endomorphism_of,
    ensure_within_cap,
    identity_map,
    poly_quotient,
    render_coord,
    zn,
)

Pattern = dict  # (row, col) -> list[(coef | None, param)]


def _coords_of(R: FiniteRing) -> list:
    return R.coords if R.coords is not None else list(range(R.order))


def _lit(R: FiniteRing, i: int) -> str:
    return render_coord(_coords_of(R)[int(i)])


def _not_subring(reason, witness):
    return NotASubring(f"not closed under {reason}" if reason not in ("zero", "identity") else f"{reason} missing", witness)


def _matrix_product(R: FiniteRing, n: int, support=None):
    """Matrix product on row-major vectors; ``support`` lists the positions that
    may be nonzero in some element, so other terms are skipped."""
    add, mul = R.add, R.mul
    support = set(support) if support is not None else {(i, j) for i in range(n) for j in range(n)}
    terms = {
        (i, j): [l for l in range(n) if (i, l) in support and (l, j) in support]
        for i in range(n)
        for j in range(n)
    }

    def product(X, Y):
        shape = (1,) * (X.ndim - 1)
        out = []
        for i in range(n):
            for j in range(n):
                ls = terms[(i, j)]
                if not ls:
                    out.append(np.full(shape, R.zero, dtype=np.int64))
                    continue
                acc = mul[X[..., i * n + ls[0]], Y[..., ls[0] * n + j]]
                for l in ls[1:]:
                    acc = add[acc, mul[X[..., i * n + l], Y[..., l * n + j]]]
                out.append(acc)
        return out

    return product


ENUMERATION_LIMIT = 1 << 24


def _pattern_ring(
    R: FiniteRing, n: int, pattern: Pattern, nparams: int, provenance: str, meta: dict, order: int | None = None
) -> FiniteRing:
    """``order`` is the exact carrier size when parameters are not independent."""
    ensure_within_cap(order if order is not None else R.order**nparams)
    if R.order**nparams > ENUMERATION_LIMIT:
        raise OrderCapExceeded(R.order**nparams, ENUMERATION_LIMIT)
    params = all_vectors(R.order, nparams)
    vectors = np.full((params.shape[0], n * n), R.zero, dtype=np.int64)
    for (i, j), terms in pattern.items():
        acc = np.full(params.shape[0], R.zero, dtype=np.int64)
        for coef, p in terms:
            v = params[:, p] if coef is None else R.mul[coef, params[:, p]]
            acc = R.add[acc, v]
        vectors[:, i * n + j] = acc
    base = _coords_of(R)

    def coord(v):
        return tuple(tuple(base[v[i * n + j]] for j in range(n)) for i in range(n))

    m = {"matrix_size": n}
    m.update(meta)
    return coordinate_ring(
        R, vectors, _matrix_product(R, n, pattern.keys()), provenance, coord=coord, meta=m, dedupe=True, on_missing=_not_subring
    )


class _Params:
    """Hands out parameter ids in order of first request."""

    def __init__(self):
        self.ids: dict = {}

    def __call__(self, key) -> int:
        return self.ids.setdefault(key, len(self.ids))

    def __len__(self):
        return len(self.ids)


def matrix_ring(n: int, R: FiniteRing) -> FiniteRing:
    """M_n(R), entries row-major."""
    if n < 1:
        raise InvalidParameter("matrix size must be at least 1")
    ensure_within_cap(R.order ** (n * n))
    pattern = {(i, j): [(None, i * n + j)] for i in range(n) for j in range(n)}
    return _pattern_ring(R, n, pattern, n * n, f"M({n}, {R.provenance})", {"family": "M", "n": n})


def triangular_ring(n: int, R: FiniteRing) -> FiniteRing:
    """T_n(R); parameters are the upper-triangle entries, row-major."""
    if n < 1:
        raise InvalidParameter("matrix size must be at least 1")
    P = _Params()
    pattern = {(i, j): [(None, P((i, j)))] for i in range(n) for j in range(i, n)}
    return _pattern_ring(R, n, pattern, len(P), f"T({n}, {R.provenance})", {"family": "T", "n": n})


FAMILY_TAGS = ("Dn", "Vn", "VnK", "DnK", "Sn", "Snm", "Tnm", "Un")


@dataclass(frozen=True)
class MatrixFamilyKind:
    tag: str
    n: int
    m: int | None = None
    k: int | None = None

    def __post_init__(self):
        if self.tag not in FAMILY_TAGS:
            raise InvalidParameter(f"unknown matrix family {self.tag!r}")
        if self.n < 1:
            raise InvalidParameter("n must be at least 1")
        if self.tag in ("Snm", "Tnm") and (self.m is None or self.m < 1):
            raise InvalidParameter(f"{self.tag} needs m >= 1")
        if self.tag == "VnK" and (self.k is None or not 1 <= self.k <= self.n):
            raise InvalidParameter("VnK needs 1 <= k <= n")
        if self.tag == "DnK" and self.k is not None and self.k != self.n // 2:
            raise InvalidParameter("DnK requires k = floor(n/2)")

    @property
    def size(self) -> int:
        if self.tag == "Snm":
            return self.n + self.m - 1
        if self.tag == "Tnm":
            return self.n + self.m
        return self.n

    def expression(self, inner: str) -> str:
        if self.tag in ("Snm", "Tnm"):
            return f"{self.tag}({self.n}, {self.m}, {inner})"
        if self.tag == "VnK":
            return f"VnK({self.n}, {self.k}, {inner})"
        return f"{self.tag}({self.n}, {inner})"


def _family_pattern(kind: MatrixFamilyKind) -> tuple[int, Pattern, int]:
    N = kind.size
    P = _Params()
    pattern: Pattern = {}
    tag, n = kind.tag, kind.n
    for i in range(N):
        for j in range(i, N):
            d = j - i
            key = None
            if tag in ("Dn", "Sn"):
                key = "a" if d == 0 else (i, j)
            elif tag == "Vn":
                key = ("diag", d)
            elif tag == "VnK":
                key = ("diag", d) if d < kind.k else (i, j)
            elif tag == "DnK":
                k = n // 2
                if d == 0:
                    key = "a"
                elif i < k <= j or (i == k and j >= k + 1):
                    key = (i, j)
            elif tag == "Snm":
                if d == 0:
                    key = "a"
                elif j <= n - 1:
                    key = ("b", d)
                elif i >= n - 1:
                    key = ("d", d)
                else:
                    key = (i, j)
            elif tag == "Tnm":
                if d == 0:
                    key = "a"
                elif j < n:
                    key = ("b", d)
                elif i >= n:
                    key = ("c", d)
            elif tag == "Un":
                key = "a" if d == 0 else (("b" if i % 2 == 0 else "c"), d)
            if key is not None:
                pattern[(i, j)] = [(None, P(key))]
    return N, pattern, len(P)


def special_matrix_family(kind: MatrixFamilyKind, R: FiniteRing) -> FiniteRing:
    """Subrings of T_N(R) with constant diagonal.

    * ``Dn``/``Sn``: upper triangular, all diagonal entries equal.
    * ``Vn``: upper triangular Toeplitz.
    * ``VnK``: diagonals 0..k-1 constant, the rest free.
    * ``DnK``: cI plus free entries in rows 1..k x columns k+1..n and in row k+1
      right of the diagonal, k = floor(n/2).
    * ``Snm``: size n+m-1, Toeplitz on the leading n x n and trailing m x m blocks,
      free entries in rows 1..n-1 x columns n+1..n+m-1.
    * ``Tnm``: block diagonal of an n x n and an m x m Toeplitz block sharing the diagonal.
    * ``Un``: Toeplitz-like with superdiagonals taken from b on odd rows, c on even rows.
    """
    N, pattern, nparams = _family_pattern(kind)
    meta = {"family": kind.tag, "kind": kind, "n": kind.n}
    return _pattern_ring(R, N, pattern, nparams, kind.expression(R.provenance), meta)


def family(tag: str, R: FiniteRing, n: int, m: int | None = None, k: int | None = None) -> FiniteRing:
    return special_matrix_family(MatrixFamilyKind(tag, n, m, k), R)


def is_central(R: FiniteRing, s: int) -> bool:
    return bool(np.array_equal(R.mul[s], R.mul[:, s]))


def _central(R: FiniteRing, s) -> int:
    s = R.resolve(s)
    if not is_central(R, s):
        raise NonCentralParameter(f"{R.label(s)} is not central in {R.provenance}")
    return s


@dataclass(frozen=True)
class CentralParams:
    s: int
    t: int


def lst_ring(params: CentralParams, R: FiniteRing) -> FiniteRing:
    """L_(s,t)(R) = {[[a,0,0],[sc,d,te],[0,0,f]]}, parameters (a, c, d, e, f)."""
    s, t = _central(R, params.s), _central(R, params.t)
    pattern = {(0, 0): [(None, 0)], (1, 0): [(s, 1)], (1, 1): [(None, 2)], (1, 2): [(t, 3)], (2, 2): [(None, 4)]}
    prov = f"L({_lit(R, s)}, {_lit(R, t)}, {R.provenance})"
    order = R.order**3 * np.unique(R.mul[s]).size * np.unique(R.mul[t]).size
    return _pattern_ring(R, 3, pattern, 5, prov, {"family": "L", "s": s, "t": t}, order=order)


def hst_ring(params: CentralParams, R: FiniteRing) -> FiniteRing:
    """H_(s,t)(R) = {[[sc+te+f,0,0],[c,te+f,e],[0,0,f]]}, parameters (c, e, f)."""
    s, t = _central(R, params.s), _central(R, params.t)
    c, e, f = 0, 1, 2
    pattern = {
        (0, 0): [(s, c), (t, e), (None, f)],
        (1, 0): [(None, c)],
        (1, 1): [(t, e), (None, f)],
        (1, 2): [(None, e)],
        (2, 2): [(None, f)],
    }
    prov = f"H({_lit(R, s)}, {_lit(R, t)}, {R.provenance})"
    return _pattern_ring(R, 3, pattern, 3, prov, {"family": "H", "s": s, "t": t})


def v2_lst_ring(params: CentralParams, R: FiniteRing) -> FiniteRing:
    """The subring {[[a,0,0],[0,a,te],[0,0,a]]} of L_(s,t)(R)."""
    s, t = _central(R, params.s), _central(R, params.t)
    pattern = {(0, 0): [(None, 0)], (1, 1): [(None, 0)], (1, 2): [(t, 1)], (2, 2): [(None, 0)]}
    prov = f"V2L({_lit(R, s)}, {_lit(R, t)}, {R.provenance})"
    order = R.order * np.unique(R.mul[t]).size
    return _pattern_ring(R, 3, pattern, 2, prov, {"family": "V2L", "s": s, "t": t}, order=order)


# ---------------------------------------------------------------------------
# tuple rings with twisted products


def generalized_matrix(s, R: FiniteRing) -> FiniteRing:
    """K_s(R) on quadruples (a, x, y, b) written [[a, x], [y, b]]."""
    s = _central(R, s)
    add, mul = R.add, R.mul
    ensure_within_cap(R.order**4)

    def product(X, Y):
        a1, x1, y1, b1 = (X[..., i] for i in range(4))
        a2, x2, y2, b2 = (Y[..., i] for i in range(4))
        return np.stack(
            [
                add[mul[a1, a2], mul[s, mul[x1, y2]]],
                add[mul[a1, x2], mul[x1, b2]],
                add[mul[y1, a2], mul[b1, y2]],
                add[mul[s, mul[y1, x2]], mul[b1, b2]],
            ],
            axis=-1,
        )

    base = _coords_of(R)
    return coordinate_ring(
        R,
        all_vectors(R.order, 4),
        product,
        f"K({_lit(R, s)}, {R.provenance})",
        coord=lambda v: ((base[v[0]], base[v[1]]), (base[v[2]], base[v[3]])),
        meta={"family": "K", "s": s, "matrix_size": 2},
    )


def trivial_extension(R: FiniteRing) -> FiniteRing:
    """T(R, R): (r, m)(s, n) = (rs, rn + ms)."""
    add, mul = R.add, R.mul
    ensure_within_cap(R.order**2)

    def product(X, Y):
        r, m = X[..., 0], X[..., 1]
        s, n = Y[..., 0], Y[..., 1]
        return np.stack([mul[r, s], add[mul[r, n], mul[m, s]]], axis=-1)

    base = _coords_of(R)
    return coordinate_ring(
        R, all_vectors(R.order, 2), product, f"Triv({R.provenance})",
        coord=lambda v: (base[v[0]], base[v[1]]), meta={"family": "Triv"},
    )


def dt_ring(R: FiniteRing) -> FiniteRing:
    """DT(R, R) on quadruples (a, m, b, n)."""
    add, mul = R.add, R.mul
    ensure_within_cap(R.order**4)

    def product(X, Y):
        a1, m1, b1, n1 = (X[..., i] for i in range(4))
        a2, m2, b2, n2 = (Y[..., i] for i in range(4))
        last = add[add[mul[a1, n2], mul[m1, b2]], add[mul[b1, m2], mul[n1, a2]]]
        return np.stack(
            [mul[a1, a2], add[mul[a1, m2], mul[m1, a2]], add[mul[a1, b2], mul[b1, a2]], last], axis=-1
        )

    base = _coords_of(R)
    return coordinate_ring(
        R, all_vectors(R.order, 4), product, f"DT({R.provenance})",
        coord=lambda v: tuple(base[i] for i in v), meta={"family": "DT"},
    )


def skew_triangular(n: int, R: FiniteRing, alpha: RingMap | None = None, endo_name: str | None = None) -> FiniteRing:
    """T_n(R, alpha) on tuples (a_0..a_{n-1}); c_i = sum_j a_j alpha^j(b_{i-j})."""
    if n < 1:
        raise InvalidParameter("n must be at least 1")
    alpha = alpha if alpha is not None else identity_map(R)
    if alpha.source is not R or alpha.target is not R:
        raise InvalidParameter("alpha must be an endomorphism of the base ring")
    endomorphism_of(R, alpha.image)
    ensure_within_cap(R.order**n)
    powers = [alpha.power(j).image for j in range(n)]
    add, mul = R.add, R.mul

    def product(X, Y):
        out = []
        for i in range(n):
            acc = mul[X[..., 0], Y[..., i]]
            for j in range(1, i + 1):
                acc = add[acc, mul[X[..., j], powers[j][Y[..., i - j]]]]
            out.append(acc)
        return out

    name = endo_name or alpha.name or ("id" if alpha.is_identity() else "[" + ",".join(map(str, alpha.image)) + "]")
    base = _coords_of(R)
    return coordinate_ring(
        R, all_vectors(R.order, n), product, f"TSkew({n}, {R.provenance}, {name})",
        coord=lambda v: tuple(base[i] for i in v), meta={"family": "TSkew", "alpha": alpha, "n": n},
    )


def skew_poly_quotient(R: FiniteRing, alpha: RingMap, n: int) -> FiniteRing:
    """R[x; alpha]/<x^n> by rewriting: x b -> alpha(b) x, one step at a time.

    Elements are coefficient tuples (a_0, ..., a_{n-1}) of a_0 + a_1 x + ...
    """
    ensure_within_cap(R.order**n)
    q = R.order
    img = [int(v) for v in alpha.image]
    add = R.add.tolist()
    mul = R.mul.tolist()

    def shift(b: int, times: int) -> int:
        for _ in range(times):
            b = img[b]
        return b

    elems = list(itertools.product(range(q), repeat=n))
    orders = [q] * n
    N = len(elems)
    add_t = np.empty((N, N), dtype=np.int64)
    mul_t = np.empty((N, N), dtype=np.int64)
    for u, f in enumerate(elems):
        for v, g in enumerate(elems):
            add_t[u, v] = encode_tuple(orders, [add[x][y] for x, y in zip(f, g)])
            h = [R.zero] * n
            for i, a in enumerate(f):
                if a == R.zero:
                    continue
                for j, b in enumerate(g):
                    if i + j >= n:
                        break
                    h[i + j] = add[h[i + j]][mul[a][shift(b, i)]]
            mul_t[u, v] = encode_tuple(orders, h)
    base = _coords_of(R)
    zero = encode_tuple(orders, [R.zero] * n)
    one = encode_tuple(orders, [R.one] + [R.zero] * (n - 1))
    return FiniteRing(
        add_t, mul_t, zero, one, f"SkewPoly({R.provenance}, {alpha.name or 'alpha'}, {n})",
        coords=[tuple(base[i] for i in e) for e in elems], meta={"base": R, "alpha": alpha, "n": n},
    )


# ---------------------------------------------------------------------------
# finite fields and endomorphisms


def characteristic(R: FiniteRing) -> int:
    x, k = R.one, 1
    while x != R.zero:
        x = int(R.add[x, R.one])
        k += 1
    return k


def gf(p: int, k: int) -> FiniteRing:
    """GF(p^k) as Z_p[x]/<f> for the first monic irreducible f (lexicographic)."""
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise InvalidParameter(f"{p} is not prime")
    if k < 1:
        raise InvalidParameter("degree must be at least 1")
    ensure_within_cap(p**k)
    base = zn(p)
    for tail in itertools.product(range(p), repeat=k):
        coeffs = list(reversed(tail)) + [1]
        if k > 1 and coeffs[0] == 0:
            continue
        F = poly_quotient(base, coeffs, provenance=f"GF({p}, {k})")
        units = np.any(F.mul == F.one, axis=1).sum()
        if units == F.order - 1:
            F.meta["prime"] = p
            return F
    raise InvalidParameter(f"no irreducible polynomial of degree {k} over Z {p}")  # pragma: no cover


def power_map(R: FiniteRing, k: int, name: str = "") -> RingMap:
    img = np.arange(R.order)
    x = np.full(R.order, R.one)
    for _ in range(k):
        x = R.mul[x, img]
    return endomorphism_of(R, x, name=name or f"pow{k}")


def frobenius(R: FiniteRing) -> RingMap:
    p = characteristic(R)
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise InvalidParameter(f"Frobenius needs prime characteristic, {R.provenance} has {p}")
    return power_map(R, p, name="frob")


# ---------------------------------------------------------------------------
# substructures and quotients


def _sub_ring(R: FiniteRing, members: np.ndarray, one: int, provenance: str, meta: dict) -> FiniteRing:
    members = np.asarray(members, dtype=np.int64)
    pos = np.full(R.order, -1, dtype=np.int64)
    pos[members] = np.arange(members.size)
    add = pos[R.add[members[:, None], members[None, :]]]
    mul = pos[R.mul[members[:, None], members[None, :]]]
    if (add < 0).any() or (mul < 0).any():
        raise NotASubring("carrier not closed")
    coords = [R.coords[i] for i in members] if R.coords is not None else [int(i) for i in members]
    m = {"parent": R, "embedding": members}
    m.update(meta)
    return FiniteRing(add, mul, int(pos[R.zero]), int(pos[one]), provenance, coords=coords, meta=m)


def corner_ring(R: FiniteRing, e) -> FiniteRing:
    """eRe with identity e; e = 0 gives the zero ring."""
    e = R.resolve(e)
    if R.mul[e, e] != e:
        raise NotIdempotent(f"{R.label(e)} is not idempotent")
    values = np.unique(R.mul[R.mul[e, :], e])
    return _sub_ring(R, values, e, f"Corner({R.provenance}, {R.label(e)})", {"idempotent": e})


def _as_mask(R: FiniteRing, S) -> np.ndarray:
    if isinstance(S, Subset):
        if S.ring is not R:
            raise InvalidParameter("subset belongs to another ring")
        return S.mask.copy()
    mask = np.zeros(R.order, dtype=bool)
    for x in S:
        mask[R.resolve(x)] = True
    return mask


def _closure(R: FiniteRing, mask: np.ndarray, *, multiply: bool, two_sided_by_ring: bool) -> np.ndarray:
    mask = mask.copy()
    mask[R.zero] = True
    while True:
        idx = np.flatnonzero(mask)
        new = mask.copy()
        new[R.neg[idx]] = True
        new[R.add[idx[:, None], idx[None, :]].ravel()] = True
        if multiply:
            new[R.mul[idx[:, None], idx[None, :]].ravel()] = True
        if two_sided_by_ring:
            new[R.mul[:, idx].ravel()] = True
            new[R.mul[idx, :].ravel()] = True
        if np.array_equal(new, mask):
            return mask
        mask = new


def subring_generated(R: FiniteRing, S: Iterable = ()) -> FiniteRing:
    """Smallest subring containing S, 0 and 1; ``meta['embedding']`` maps back into R."""
    mask = _as_mask(R, S)
    mask[R.one] = True
    closed = _closure(R, mask, multiply=True, two_sided_by_ring=False)
    gens = ", ".join(R.label(i) for i in np.flatnonzero(_as_mask(R, S)))
    return _sub_ring(R, np.flatnonzero(closed), R.one, f"SubringGen({R.provenance}, {{{gens}}})", {})


def ideal_generated(R: FiniteRing, S: Iterable = ()) -> Subset:
    return Subset(R, _closure(R, _as_mask(R, S), multiply=False, two_sided_by_ring=True))


def ideal_violation(R: FiniteRing, I: Subset) -> tuple[str, tuple] | None:
    idx = I.indices
    if not I.mask[R.zero]:
        return "zero missing", (R.zero,)
    sums = R.add[idx[:, None], idx[None, :]]
    bad = ~I.mask[sums]
    if bad.any():
        i, j = np.argwhere(bad)[0]
        return "not closed under addition", (idx[i], idx[j])
    left = R.mul[:, idx]
    bad = ~I.mask[left]
    if bad.any():
        r, i = np.argwhere(bad)[0]
        return "not closed under left multiplication", (r, idx[i])
    right = R.mul[idx, :]
    bad = ~I.mask[right]
    if bad.any():
        i, r = np.argwhere(bad)[0]
        return "not closed under right multiplication", (idx[i], r)
    return None


def quotient_ring(R: FiniteRing, I) -> FiniteRing:
    """R/I on least-index coset representatives.

    ``meta['projection'][a]`` is the index of a + I; ``meta['representatives']``
    lists the chosen representative of each coset.
    """
    I = I if isinstance(I, Subset) else Subset(R, _as_mask(R, I))
    bad = ideal_violation(R, I)
    if bad is not None:
        raise NotAnIdeal(*bad)
    idx = I.indices
    rep = R.add[:, idx].min(axis=1)
    reps = np.unique(rep)
    pos = np.full(R.order, -1, dtype=np.int64)
    pos[reps] = np.arange(reps.size)
    proj = pos[rep]
    add = proj[R.add[reps[:, None], reps[None, :]]]
    mul = proj[R.mul[reps[:, None], reps[None, :]]]
    coords = [R.coords[i] for i in reps] if R.coords is not None else [int(i) for i in reps]
    gens = ", ".join(R.label(i) for i in idx if i != R.zero)
    return FiniteRing(
        add, mul, int(proj[R.zero]), int(proj[R.one]), f"Quot({R.provenance}, {{{gens}}})",
        coords=coords, meta={"parent": R, "ideal": I, "projection": proj, "representatives": reps},
    )


def projection(Q: FiniteRing) -> RingMap:
    return RingMap(Q.meta["parent"], Q, Q.meta["projection"], "projection")


# ---------------------------------------------------------------------------
# group rings


@dataclass(frozen=True)
class Group:
    name: str
    table: tuple

    @property
    def order(self) -> int:
        return len(self.table)


def make_group(name: str, table: Sequence[Sequence[int]]) -> Group:
    t = np.asarray(table, dtype=np.int64)
    m = t.shape[0] if t.ndim == 2 else 0
    if t.ndim != 2 or t.shape != (m, m) or m == 0:
        raise NotAGroup("table must be square and nonempty")
    if t.min() < 0 or t.max() >= m:
        raise NotAGroup("entry out of range")
    r = np.arange(m)
    ids = [i for i in range(m) if np.array_equal(t[i], r) and np.array_equal(t[:, i], r)]
    if not ids:
        raise NotAGroup("no identity")
    e = ids[0]
    lhs = t[t[:, :, None], r[None, None, :]]
    rhs = t[r[:, None, None], t[None, :, :]]
    if np.any(lhs != rhs):
        raise NotAGroup("associativity fails", tuple(np.argwhere(lhs != rhs)[0]))
    for g in range(m):
        if not np.any((t[g] == e) & (t[:, g] == e)):
            raise NotAGroup("no inverse", (g,))
    return Group(name, tuple(tuple(int(x) for x in row) for row in t))


def _cyclic(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def _s3():
    perms = sorted(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    return [[index[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms]


def _q8():
    # elements (sign, unit) with unit in 1, i, j, k
    units = {("1", "1"): (1, "1")}
    rules = {
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    }
    for u in "ijk":
        rules[("1", u)] = (1, u)
        rules[(u, "1")] = (1, u)
    rules.update(units)
    elems = [(s, u) for u in "1ijk" for s in (1, -1)]
    index = {e: i for i, e in enumerate(elems)}
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s, u = rules[(u1, u2)]
            row.append(index[(s1 * s2 * s, u)])
        table.append(row)
    return table


BUILTIN_GROUPS = {
    "C1": lambda: _cyclic(1),
    "C2": lambda: _cyclic(2),
    "C3": lambda: _cyclic(3),
    "C4": lambda: _cyclic(4),
    "C2xC2": lambda: [[i ^ j for j in range(4)] for i in range(4)],
    "S3": _s3,
    "Q8": _q8,
}


def builtin_group(name: str) -> Group:
    try:
        return make_group(name, BUILTIN_GROUPS[name]())
    except KeyError:
        raise InvalidParameter(f"unknown group {name!r}; known: {', '.join(BUILTIN_GROUPS)}") from None


def group_ring(R: FiniteRing, group: Group) -> FiniteRing:
    """RG on coefficient tuples indexed by group elements; convolution product."""
    if not isinstance(group, Group):
        group = make_group("G", group)
    m = group.order
    ensure_within_cap(R.order**m)
    t = group.table
    pairs = [[(g, h) for g in range(m) for h in range(m) if t[g][h] == k] for k in range(m)]
    add, mul = R.add, R.mul

    def product(X, Y):
        out = []
        for k in range(m):
            acc = None
            for g, h in pairs[k]:
                term = mul[X[..., g], Y[..., h]]
                acc = term if acc is None else add[acc, term]
            out.append(acc)
        return out

    base = _coords_of(R)
    return coordinate_ring(
        R, all_vectors(R.order, m), product, f"GroupRing({R.provenance}, {group.name})",
        coord=lambda v: tuple(base[i] for i in v), meta={"family": "GroupRing", "group": group},
    )
