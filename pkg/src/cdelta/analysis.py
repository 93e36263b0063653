"""Distinguished subsets, element decompositions and ring classification.

Everything is computed by exhaustive search over the Cayley tables and cached on
the ring, so a subset is computed at most once however many classifiers read it.
Witness scans run in ascending index order, which makes every report reproducible.
"""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass, fields
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import InternalInconsistency, PredicateParseError, UnknownKind
from .ring import FiniteRing, Subset

BLOCK = 4_000_000


def _subset(R: FiniteRing, key: str, fn: Callable[[], np.ndarray]) -> Subset:
    return R.cached(key, lambda: Subset(R, fn()))


def one_minus_products(R: FiniteRing) -> np.ndarray:
    """Table of 1 - xy indexed [x, y]."""
    return R.cached("one_minus_products", lambda: R.add[R.one][R.neg[R.mul]])


def units(R: FiniteRing) -> Subset:
    def compute():
        hit = R.mul == R.one
        return np.any(hit & hit.T, axis=1)

    return _subset(R, "units", compute)


def inverse(R: FiniteRing, a: int) -> int | None:
    """Two-sided inverse of ``a``, or None when ``a`` is not a unit."""
    a = R.resolve(a)
    both = (R.mul[a] == R.one) & (R.mul[:, a] == R.one)
    hits = np.flatnonzero(both)
    return int(hits[0]) if hits.size else None


def inverses(R: FiniteRing) -> np.ndarray:
    """inv[a] for units, -1 elsewhere."""

    def compute():
        hit = (R.mul == R.one) & (R.mul == R.one).T
        inv = np.argmax(hit, axis=1)
        inv[~hit.any(axis=1)] = -1
        return inv

    return R.cached("inverses", compute)


def jacobson(R: FiniteRing) -> Subset:
    """a is in J iff 1 - ra is a unit for every r; the right-hand version must agree."""

    def compute():
        u = units(R).mask
        t = one_minus_products(R)
        left = u[t].all(axis=0)
        right = u[t].all(axis=1)
        if not np.array_equal(left, right):
            a = int(np.flatnonzero(left != right)[0])
            raise InternalInconsistency(f"left and right quasi-regularity disagree at {R.label(a)}")
        return left

    return _subset(R, "jacobson", compute)


def delta_set(R: FiniteRing) -> Subset:
    """a is in Delta iff 1 - ua is a unit for every unit u."""

    def compute():
        u = units(R).mask
        t = one_minus_products(R)[units(R).indices]
        return u[t].all(axis=0)

    return _subset(R, "delta", compute)


def center(R: FiniteRing) -> Subset:
    return _subset(R, "center", lambda: np.all(R.mul == R.mul.T, axis=1))


def nilpotents(R: FiniteRing) -> Subset:
    def compute():
        # a^k = 0 for some k <= n iff a^(2^m) = 0 once 2^m >= n
        p = np.arange(R.order)
        steps = max(1, int(np.ceil(np.log2(max(R.order, 2)))))
        for _ in range(steps):
            p = R.mul[p, p]
        return p == R.zero

    return _subset(R, "nilpotents", compute)


def idempotents(R: FiniteRing) -> Subset:
    return _subset(R, "idempotents", lambda: np.diagonal(R.mul) == np.arange(R.order))


def strong_successors(R: FiniteRing) -> np.ndarray:
    """succ[x, r] = x r x."""
    return R.cached("strong_successors", lambda: R.mul[R.mul, np.arange(R.order)[:, None]])


def nil_star(R: FiniteRing) -> Subset:
    """Strongly nilpotent elements.

    x is strongly nilpotent when every path x -> xrx -> ... reaches 0.  This is
    the least set containing 0 and every x whose successors all lie in it; points
    outside it reach a cycle of nonzero elements.
    """

    def compute():
        succ = strong_successors(R)
        inside = np.zeros(R.order, dtype=bool)
        inside[R.zero] = True
        while True:
            grown = inside | inside[succ].all(axis=1)
            if np.array_equal(grown, inside):
                return inside
            inside = grown

    return _subset(R, "nil_star", compute)


def translate(R: FiniteRing, S: Subset, c: int) -> Subset:
    """c + S."""
    return Subset.from_indices(R, R.add[c, S.indices])


def principal_right(R: FiniteRing) -> np.ndarray:
    """m[a, x] is True iff x is in aR."""

    def compute():
        m = np.zeros((R.order, R.order), dtype=bool)
        rows = np.repeat(np.arange(R.order), R.order)
        m[rows, R.mul.ravel()] = True
        return m

    return R.cached("principal_right", compute)


def principal_left(R: FiniteRing) -> np.ndarray:
    """m[a, x] is True iff x is in Ra."""

    def compute():
        m = np.zeros((R.order, R.order), dtype=bool)
        cols = np.repeat(np.arange(R.order), R.order)
        m[cols, R.mul.T.ravel()] = True
        return m

    return R.cached("principal_left", compute)


def is_ideal(R: FiniteRing, S: Subset) -> bool:
    from .constructors import ideal_violation

    return ideal_violation(R, S) is None


# ---------------------------------------------------------------------------
# decompositions

KINDS = ("cdelta", "cj", "cn", "cu", "clean", "strongly-clean", "feebly-delta-clean", "strongly-feebly-delta-clean")

_KIND_ALIASES = {
    "cdelta": "cdelta", "cδ": "cdelta", "cd": "cdelta",
    "cj": "cj", "cn": "cn", "cu": "cu",
    "clean": "clean", "stronglyclean": "strongly-clean",
    "feeblydeltaclean": "feebly-delta-clean", "feeblyδclean": "feebly-delta-clean", "feebly": "feebly-delta-clean",
    "stronglyfeeblydeltaclean": "strongly-feebly-delta-clean", "stronglyfeeblyδclean": "strongly-feebly-delta-clean",
}

ROLES = {
    "cdelta": ("c", "r"), "cj": ("c", "r"), "cn": ("c", "r"), "cu": ("c", "r"),
    "clean": ("e", "u"), "strongly-clean": ("e", "u"),
    "feebly-delta-clean": ("d", "e", "f"), "strongly-feebly-delta-clean": ("d", "e", "f"),
}


def normalize_kind(kind: str) -> str:
    key = re.sub(r"[^0-9a-zδ]", "", kind.lower().replace("Δ", "δ"))
    try:
        return _KIND_ALIASES[key]
    except KeyError:
        raise UnknownKind(f"unknown decomposition kind {kind!r}; known: {', '.join(KINDS)}") from None


@dataclass(frozen=True)
class DecompositionWitness:
    kind: str
    element: int
    parts: tuple[int, ...]
    found: bool

    @property
    def roles(self) -> tuple[str, ...]:
        return ROLES[self.kind]

    def as_dict(self, R: FiniteRing) -> dict:
        d = {"kind": self.kind, "element": self.element, "element_label": R.label(self.element), "found": self.found}
        d["parts"] = {role: {"index": p, "label": R.label(p)} for role, p in zip(self.roles, self.parts)}
        return d


def _summand_set(R: FiniteRing, kind: str) -> Subset:
    return {"cdelta": delta_set, "cj": jacobson, "cn": nilpotents, "cu": units}[kind](R)


def _central_table(R: FiniteRing, kind: str) -> tuple[np.ndarray, np.ndarray]:
    """For a = c + r: (first hit index into C or -1, number of hits) per element."""

    def compute():
        C = center(R).indices
        S = _summand_set(R, kind).mask
        # r = a - c for every (a, c)
        hits = S[R.add[:, R.neg[C]]]
        first = np.where(hits.any(axis=1), np.argmax(hits, axis=1), -1)
        return first, hits.sum(axis=1)

    return R.cached(f"central_table:{kind}", compute)


def _clean_table(R: FiniteRing, strong: bool) -> np.ndarray:
    def compute():
        E = idempotents(R).indices
        U = units(R).mask
        u = R.add[:, R.neg[E]]  # u = a - e
        hits = U[u]
        if strong:
            hits &= R.mul[E[None, :], u] == R.mul[u, E[None, :]]
        return np.where(hits.any(axis=1), np.argmax(hits, axis=1), -1)

    return R.cached(f"clean_table:{strong}", compute)


def orthogonal_idempotent_pairs(R: FiniteRing) -> np.ndarray:
    """Pairs (e, f) of idempotents with ef = fe = 0, ascending lexicographically."""

    def compute():
        E = idempotents(R).indices
        ok = (R.mul[E[:, None], E[None, :]] == R.zero) & (R.mul[E[None, :], E[:, None]] == R.zero)
        i, j = np.nonzero(ok)
        return np.stack([E[i], E[j]], axis=1) if i.size else np.zeros((0, 2), dtype=np.int64)

    return R.cached("orthogonal_pairs", compute)


def _feebly_table(R: FiniteRing, strong: bool) -> np.ndarray:
    """Index into the orthogonal pairs of the first (e, f) with a - e + f in Delta, or -1."""

    def compute():
        pairs = orthogonal_idempotent_pairs(R)
        D = delta_set(R).mask
        n = R.order
        first = np.full(n, -1, dtype=np.int64)
        a = np.arange(n)[:, None]
        step = max(1, BLOCK // max(1, n))
        for start in range(0, len(pairs), step):
            e = pairs[start:start + step, 0][None, :]
            f = pairs[start:start + step, 1][None, :]
            d = R.add[R.add[a, R.neg[e]], f]
            hits = D[d]
            if strong:
                hits &= (R.mul[d, e] == R.mul[e, d]) | (R.mul[d, f] == R.mul[f, d])
            todo = (first < 0) & hits.any(axis=1)
            first[todo] = start + np.argmax(hits[todo], axis=1)
            if (first >= 0).all():
                break
        return first

    return R.cached(f"feebly_table:{strong}", compute)


def decompose_element(R: FiniteRing, a, kind: str) -> DecompositionWitness:
    """First decomposition of ``a`` in ascending scan order.

    cdelta/cj/cn/cu: a = c + r, c central, scanning c ascending.
    clean/strongly-clean: a = e + u, scanning idempotents e ascending.
    feebly kinds: a = d + e - f with ef = fe = 0, scanning (e, f) ascending.
    """
    kind = normalize_kind(kind)
    a = R.resolve(a)
    if kind in ("cdelta", "cj", "cn", "cu"):
        first, _ = _central_table(R, kind)
        if first[a] < 0:
            return DecompositionWitness(kind, a, (), False)
        c = int(center(R).indices[first[a]])
        return DecompositionWitness(kind, a, (c, int(R.sub(a, c))), True)
    if kind in ("clean", "strongly-clean"):
        first = _clean_table(R, kind == "strongly-clean")
        if first[a] < 0:
            return DecompositionWitness(kind, a, (), False)
        e = int(idempotents(R).indices[first[a]])
        return DecompositionWitness(kind, a, (e, int(R.sub(a, e))), True)
    first = _feebly_table(R, kind == "strongly-feebly-delta-clean")
    if first[a] < 0:
        return DecompositionWitness(kind, a, (), False)
    e, f = (int(x) for x in orthogonal_idempotent_pairs(R)[first[a]])
    d = int(R.add[R.sub(a, e), f])
    return DecompositionWitness(kind, a, (d, e, f), True)


def witness_replays(R: FiniteRing, w: DecompositionWitness) -> bool:
    """Re-check a found witness against the defining equation of its kind."""
    if not w.found:
        return False
    if w.kind in ("cdelta", "cj", "cn", "cu"):
        c, r = w.parts
        return bool(center(R).mask[c] and _summand_set(R, w.kind).mask[r] and R.add[c, r] == w.element)
    if w.kind in ("clean", "strongly-clean"):
        e, u = w.parts
        ok = idempotents(R).mask[e] and units(R).mask[u] and R.add[e, u] == w.element
        if w.kind == "strongly-clean":
            ok = ok and R.mul[e, u] == R.mul[u, e]
        return bool(ok)
    d, e, f = w.parts
    I = idempotents(R).mask
    ok = delta_set(R).mask[d] and I[e] and I[f] and R.mul[e, f] == R.zero and R.mul[f, e] == R.zero
    ok = ok and R.add[R.add[d, e], R.neg[f]] == w.element
    if w.kind == "strongly-feebly-delta-clean":
        ok = ok and (R.mul[d, e] == R.mul[e, d] or R.mul[d, f] == R.mul[f, d])
    return bool(ok)


def decomposable(R: FiniteRing, kind: str) -> np.ndarray:
    """Boolean mask of elements admitting a decomposition of ``kind``."""
    kind = normalize_kind(kind)
    if kind in ("cdelta", "cj", "cn", "cu"):
        return _central_table(R, kind)[0] >= 0
    if kind in ("clean", "strongly-clean"):
        return _clean_table(R, kind == "strongly-clean") >= 0
    return _feebly_table(R, kind == "strongly-feebly-delta-clean") >= 0


def cdelta_witness_counts(R: FiniteRing) -> np.ndarray:
    return _central_table(R, "cdelta")[1]


def is_cdelta(R: FiniteRing) -> bool:
    return bool(decomposable(R, "cdelta").all())


def first_failure(R: FiniteRing, kind: str) -> int | None:
    bad = np.flatnonzero(~decomposable(R, kind))
    return int(bad[0]) if bad.size else None


# ---------------------------------------------------------------------------
# ring classes


def exchange_mask(R: FiniteRing) -> np.ndarray:
    """a passes iff some idempotent e lies in aR with 1 - e in (1 - a)R."""
    right = principal_right(R)
    E = idempotents(R).indices
    om = R.add[R.one][R.neg]  # x -> 1 - x
    return (right[:, E] & right[om][:, om[E]]).any(axis=1)


def semipotent_witness(R: FiniteRing) -> int | None:
    """First a outside J such that Ra or aR holds no nonzero idempotent.

    A one-sided ideal L not inside J contains some a outside J and then Ra (or aR)
    sits inside L, so principal ideals generated by such a decide semipotency.
    """
    E = idempotents(R).indices
    E = E[E != R.zero]
    outside = ~jacobson(R).mask
    ok = principal_left(R)[:, E].any(axis=1) & principal_right(R)[:, E].any(axis=1)
    bad = np.flatnonzero(outside & ~ok)
    return int(bad[0]) if bad.size else None


def is_division_ring(R: FiniteRing) -> bool:
    if R.order < 2:
        return False
    u = units(R).mask.copy()
    u[R.zero] = True
    return bool(u.all())


def radical_quotient(R: FiniteRing) -> FiniteRing:
    from .constructors import quotient_ring

    return R.cached("radical_quotient", lambda: quotient_ring(R, jacobson(R)))


def is_local(R: FiniteRing) -> bool:
    return is_division_ring(radical_quotient(R))


def is_dedekind_finite(R: FiniteRing) -> bool:
    hit = R.mul == R.one
    return bool(np.all(hit <= hit.T))


PREDICATES = (
    "commutative", "cdelta", "cj", "cn", "cu", "uniquely_cdelta", "uj", "uu", "delta_u",
    "abelian", "reduced", "dedekind_finite", "clean", "strongly_clean", "exchange",
    "semipotent", "local", "two_primal", "feebly_delta_clean", "strongly_feebly_delta_clean",
)
COUNTS = ("units", "jacobson", "delta", "center", "nilpotents", "nil_star", "idempotents")


@dataclass(frozen=True)
class PropertyReport:
    commutative: bool
    cdelta: bool
    cj: bool
    cn: bool
    cu: bool
    uniquely_cdelta: bool
    uj: bool
    uu: bool
    delta_u: bool
    abelian: bool
    reduced: bool
    dedekind_finite: bool
    clean: bool
    strongly_clean: bool
    exchange: bool
    semipotent: bool
    local: bool
    two_primal: bool
    feebly_delta_clean: bool
    strongly_feebly_delta_clean: bool
    counts: dict

    def properties(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "counts"}

    def as_dict(self) -> dict:
        return asdict(self)


def subsets(R: FiniteRing) -> dict[str, Subset]:
    return {
        "units": units(R), "jacobson": jacobson(R), "delta": delta_set(R), "center": center(R),
        "nilpotents": nilpotents(R), "nil_star": nil_star(R), "idempotents": idempotents(R),
    }


def classify(R: FiniteRing) -> PropertyReport:
    def compute():
        U, J, D, C = units(R), jacobson(R), delta_set(R), center(R)
        N, Ns, I = nilpotents(R), nil_star(R), idempotents(R)
        one_plus = lambda S: translate(R, S, R.one)  # noqa: E731
        zero = Subset.from_indices(R, [R.zero])
        cd = bool(decomposable(R, "cdelta").all())
        uniquely = bool(np.all(cdelta_witness_counts(R) == 1))
        return PropertyReport(
            commutative=R.is_commutative(),
            cdelta=cd,
            cj=bool(decomposable(R, "cj").all()),
            cn=bool(decomposable(R, "cn").all()),
            cu=bool(decomposable(R, "cu").all()),
            uniquely_cdelta=uniquely,
            uj=U == one_plus(J),
            uu=U == one_plus(N),
            delta_u=U == one_plus(D),
            abelian=I <= C,
            reduced=N == zero,
            dedekind_finite=is_dedekind_finite(R),
            clean=bool(decomposable(R, "clean").all()),
            strongly_clean=bool(decomposable(R, "strongly-clean").all()),
            exchange=bool(exchange_mask(R).all()),
            semipotent=semipotent_witness(R) is None,
            local=is_local(R),
            two_primal=Ns == N,
            feebly_delta_clean=bool(decomposable(R, "feebly-delta-clean").all()),
            strongly_feebly_delta_clean=bool(decomposable(R, "strongly-feebly-delta-clean").all()),
            counts={k: len(S) for k, S in subsets(R).items()},
        )

    return R.cached("classify", compute)


# ---------------------------------------------------------------------------
# predicates over reports

_FIELD_ALIASES = {re.sub(r"[^a-z0-9]", "", p): p for p in PREDICATES}
_FIELD_ALIASES.update({"2primal": "two_primal", "deltau": "delta_u", "δu": "delta_u", "cδ": "cdelta", "uniquelycδ": "uniquely_cdelta"})

_TOKEN = re.compile(r"\s*(?:(?P<op>[!&|()~])|(?P<word>[A-Za-z0-9_\-Δδ]+))")


def _field(word: str, pos: int) -> str:
    key = re.sub(r"[^a-z0-9δ]", "", word.lower().replace("Δ", "δ"))
    if key in ("and", "or", "not"):
        raise PredicateParseError(f"use & | ! instead of {word!r} at position {pos}")
    try:
        return _FIELD_ALIASES[key]
    except KeyError:
        raise PredicateParseError(f"unknown field {word!r} at position {pos}") from None


def parse_predicate(text: str) -> Callable[[PropertyReport], bool]:
    """Boolean expression over report fields: ``!``, ``&``, ``|`` and parentheses.

    Field names are case- and punctuation-insensitive (``CDelta``, ``delta_u``,
    ``Dedekind-finite``).  ``!`` binds tightest, then ``&``, then ``|``.
    """
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise PredicateParseError(f"unexpected character {text[pos:].lstrip()[0]!r} at position {pos}")
        kind = "op" if m.group("op") else "word"
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else None

    def take(value=None):
        nonlocal i
        t = peek()
        if t is None:
            raise PredicateParseError("unexpected end of predicate")
        if value is not None and t[1] != value:
            raise PredicateParseError(f"expected {value!r} at position {t[2]}")
        i += 1
        return t

    def disj():
        left = conj()
        while peek() and peek()[1] == "|":
            take()
            right = conj()
            left = (lambda l, r: lambda rep: l(rep) or r(rep))(left, right)
        return left

    def conj():
        left = unary()
        while peek() and peek()[1] == "&":
            take()
            right = unary()
            left = (lambda l, r: lambda rep: l(rep) and r(rep))(left, right)
        return left

    def unary():
        t = peek()
        if t and t[1] in ("!", "~"):
            take()
            inner = unary()
            return lambda rep: not inner(rep)
        if t and t[1] == "(":
            take()
            inner = disj()
            take(")")
            return inner
        kind, word, p = take()
        if kind != "word":
            raise PredicateParseError(f"unexpected {word!r} at position {p}")
        name = _field(word, p)
        return lambda rep: bool(rep[name] if isinstance(rep, dict) else getattr(rep, name))

    if not tokens:
        raise PredicateParseError("empty predicate")
    result = disj()
    if peek() is not None:
        raise PredicateParseError(f"unexpected {peek()[1]!r} at position {peek()[2]}")
    return result


def search(
    corpus: Iterable[tuple[str, FiniteRing | Callable[[], FiniteRing]]], predicate: str
) -> Iterator[tuple[str, PropertyReport]]:
    """Yield (name, report) for corpus rings whose report satisfies ``predicate``."""
    test = parse_predicate(predicate)
    for name, ring in corpus:
        R = ring if isinstance(ring, FiniteRing) else ring()
        report = classify(R)
        if test(report):
            yield name, report
