"""Finite unital rings as Cayley tables.

A :class:`FiniteRing` stores its addition and multiplication as ``order x order``
integer tables over the element indices ``0 .. order-1``.  Every ring is checked
against the ring axioms when it is built, so that every exhaustive search done
later can trust the tables.

Rings built from a base ring carry ``coords``: one hashable coordinate object per
element (an ``int`` residue for ``Z n``, nested tuples for matrices and tuples).
Coordinates exist for rendering and for element literals only.
"""

from __future__ import annotations

import contextlib
import itertools
import re
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    AxiomViolation,
    InvalidParameter,
    MalformedTable,
    NonCommutativeBase,
    NonMonicModulus,
    NotAHomomorphism,
    NotUnital,
    OrderCapExceeded,
    RingMismatch,
)

DEFAULT_ORDER_CAP = 65536

# Rings up to this order get the literal n^3 scan of every law; larger rings use
# the generator-reduced procedure in _verify_reduced, which decides the same laws.
FULL_AXIOM_SCAN_LIMIT = 128

_order_cap = DEFAULT_ORDER_CAP
_tags = itertools.count(1)


def order_cap() -> int:
    return _order_cap


def set_order_cap(cap: int) -> None:
    global _order_cap
    if cap < 1:
        raise InvalidParameter("order cap must be positive")
    _order_cap = int(cap)


@contextlib.contextmanager
def order_cap_override(cap: int):
    previous = _order_cap
    set_order_cap(cap)
    try:
        yield
    finally:
        set_order_cap(previous)


def ensure_within_cap(order: int, cap: int | None = None) -> None:
    limit = _order_cap if cap is None else cap
    if order > limit:
        raise OrderCapExceeded(order, limit)


# ---------------------------------------------------------------------------
# axiom verification


def _first(mask: np.ndarray) -> tuple[int, ...]:
    return tuple(int(v) for v in np.argwhere(mask)[0])


def _check_tables(add: np.ndarray, mul: np.ndarray, zero: int, one: int) -> None:
    n = add.shape[0]
    if add.ndim != 2 or add.shape != (n, n) or mul.shape != (n, n):
        raise MalformedTable("tables must be square and of equal size")
    if n == 0:
        raise MalformedTable("a ring has at least one element")
    for name, t in (("add", add), ("mul", mul)):
        if t.min() < 0 or t.max() >= n:
            raise MalformedTable(f"{name} table has entries outside 0..{n - 1}")
    if not (0 <= zero < n and 0 <= one < n):
        raise MalformedTable("zero/one index out of range")


def _additive_generators(add: np.ndarray, zero: int = 0) -> tuple[list[int], np.ndarray, np.ndarray]:
    """Greedy generating set of (R, +) with a spanning forest.

    Returns ``(gens, order, parent)``: ``order`` lists every element, zero first,
    and for each nonzero x, ``parent[x] = (y, g)`` with ``x = y + g``, ``g`` a
    generator and ``y`` earlier in ``order``.
    """
    n = add.shape[0]
    reached = np.zeros(n, dtype=bool)
    reached[zero] = True
    parent = np.full((n, 2), -1, dtype=np.int64)
    seq = [np.array([zero], dtype=np.int64)]
    gens: list[int] = []
    for a in range(n):
        if reached[a]:
            continue
        gens.append(a)
        reached[a] = True
        parent[a] = (zero, a)
        seq.append(np.array([a], dtype=np.int64))
        frontier = np.flatnonzero(reached)
        g = np.array(gens, dtype=np.int64)
        while frontier.size:
            nxt = add[frontier[:, None], g[None, :]]
            src = np.broadcast_to(frontier[:, None], nxt.shape).ravel()
            via = np.broadcast_to(g[None, :], nxt.shape).ravel()
            nxt = nxt.ravel()
            fresh = ~reached[nxt]
            nxt, src, via = nxt[fresh], src[fresh], via[fresh]
            nxt, first = np.unique(nxt, return_index=True)
            reached[nxt] = True
            parent[nxt, 0] = src[first]
            parent[nxt, 1] = via[first]
            seq.append(nxt)
            frontier = nxt
    return gens, np.concatenate(seq), parent


def _verify_full(add, mul, neg, zero, one) -> None:
    n = add.shape[0]
    r = np.arange(n)
    if np.any(add[zero] != r):
        raise AxiomViolation("additive identity", (zero, int(np.flatnonzero(add[zero] != r)[0])))
    if np.any(add != add.T):
        raise AxiomViolation("additive commutativity", _first(add != add.T))
    bad = add[r, neg] != zero
    if bad.any():
        raise AxiomViolation("additive inverse", (int(np.flatnonzero(bad)[0]),))
    lhs = add[add[:, :, None], r[None, None, :]]
    rhs = add[r[:, None, None], add[None, :, :]]
    if np.any(lhs != rhs):
        raise AxiomViolation("additive associativity", _first(lhs != rhs))
    # a(b+c) = ab + ac
    lhs = mul[r[:, None, None], add[None, :, :]]
    rhs = add[mul[:, :, None], mul[:, None, :]]
    if np.any(lhs != rhs):
        raise AxiomViolation("left distributivity", _first(lhs != rhs))
    # (a+b)c = ac + bc
    lhs = mul[add[:, :, None], r[None, None, :]]
    rhs = add[mul[:, None, :], mul[None, :, :]]
    if np.any(lhs != rhs):
        raise AxiomViolation("right distributivity", _first(lhs != rhs))
    lhs = mul[mul[:, :, None], r[None, None, :]]
    rhs = mul[r[:, None, None], mul[None, :, :]]
    if np.any(lhs != rhs):
        raise AxiomViolation("multiplicative associativity", _first(lhs != rhs))
    for name, bad in (("left identity", mul[one] != r), ("right identity", mul[:, one] != r)):
        if bad.any():
            raise AxiomViolation(name, (one, int(np.flatnonzero(bad)[0])))


def _verify_reduced(add, mul, neg, zero, one) -> None:
    """Decide the ring axioms in O(|G| n^2) additions and O(n^2 + n |G|^2)
    multiplications, where G generates (R, +).

    * (x+g)+y = x+(g+y) for generators g implies associativity of + (Light's test:
      the elements satisfying it form a submagma, and G generates).
    * Each nonzero x is written x = y + g along a spanning forest.  If
      xz = yz + gz for every such edge and every z, and z -> hz is additive for
      each generator h (checked on the generators), then x -> xz is a sum of
      additive maps, so left multiplication is additive; symmetrically on the right.
    * With both distributive laws, (ab)c and a(bc) are additive in each argument, so
      agreement on generator triples gives associativity.
    """
    n = add.shape[0]
    r = np.arange(n)
    if np.any(add[zero] != r):
        raise AxiomViolation("additive identity", (zero, int(np.flatnonzero(add[zero] != r)[0])))
    if np.any(add != add.T):
        raise AxiomViolation("additive commutativity", _first(add != add.T))
    bad = add[r, neg] != zero
    if bad.any():
        raise AxiomViolation("additive inverse", (int(np.flatnonzero(bad)[0]),))
    gens, _, parent = _additive_generators(add, zero)
    for g in gens:
        lhs = np.take(add, add[:, g], axis=0)
        rhs = np.take(add, add[g], axis=1)
        if np.any(lhs != rhs):
            x, y = _first(lhs != rhs)
            raise AxiomViolation("additive associativity", (x, g, y))
    if np.any(mul[:, zero] != zero):
        raise AxiomViolation("left distributivity", (int(np.flatnonzero(mul[:, zero] != zero)[0]), zero, zero))
    if np.any(mul[zero, :] != zero):
        raise AxiomViolation("right distributivity", (zero, zero, int(np.flatnonzero(mul[zero] != zero)[0])))
    g = np.array(gens, dtype=np.int64)
    # z -> hz and z -> zh are additive for generators h: h(x+g) = hx + hg
    for h in gens:
        lhs = mul[h][add[:, g]]
        rhs = add[mul[h][:, None], mul[h][g][None, :]]
        if np.any(lhs != rhs):
            x, k = _first(lhs != rhs)
            raise AxiomViolation("left distributivity", (h, x, gens[k]))
        lhs = mul[:, h][add[:, g]]
        rhs = add[mul[:, h][:, None], mul[g, h][None, :]]
        if np.any(lhs != rhs):
            x, k = _first(lhs != rhs)
            raise AxiomViolation("right distributivity", (x, gens[k], h))
    nz = np.flatnonzero(r != zero)
    y, gx = parent[nz, 0], parent[nz, 1]
    # (y+g)z = yz + gz along forest edges
    lhs = mul[nz]
    rhs = add[np.take(mul, y, axis=0), np.take(mul, gx, axis=0)]
    if np.any(lhs != rhs):
        i, z = _first(lhs != rhs)
        raise AxiomViolation("right distributivity", (int(y[i]), int(gx[i]), z))
    # z(y+g) = zy + zg
    lhs = mul[:, nz]
    rhs = add[np.take(mul, y, axis=1), np.take(mul, gx, axis=1)]
    if np.any(lhs != rhs):
        z, i = _first(lhs != rhs)
        raise AxiomViolation("left distributivity", (z, int(y[i]), int(gx[i])))
    lhs = mul[mul[g][:, g][:, :, None], g[None, None, :]]
    rhs = mul[g[:, None, None], mul[g][:, g][None, :, :]]
    if np.any(lhs != rhs):
        i, j, k = _first(lhs != rhs)
        raise AxiomViolation("multiplicative associativity", (gens[i], gens[j], gens[k]))
    for name, bad in (("left identity", mul[one] != r), ("right identity", mul[:, one] != r)):
        if bad.any():
            raise AxiomViolation(name, (one, int(np.flatnonzero(bad)[0])))


def verify_axioms(add: np.ndarray, mul: np.ndarray, zero: int, one: int, neg: np.ndarray | None = None) -> None:
    """Raise :class:`AxiomViolation` unless the tables form a unital ring."""
    add = np.asarray(add)
    mul = np.asarray(mul)
    _check_tables(add, mul, zero, one)
    if neg is None:
        neg = _negation(add, zero)
    if add.shape[0] <= FULL_AXIOM_SCAN_LIMIT:
        _verify_full(add, mul, neg, zero, one)
    else:
        _verify_reduced(add, mul, neg, zero, one)


def _negation(add: np.ndarray, zero: int) -> np.ndarray:
    hits = add == zero
    neg = np.argmax(hits, axis=1)
    missing = ~hits[np.arange(add.shape[0]), neg]
    if missing.any():
        raise AxiomViolation("additive inverse", (int(np.flatnonzero(missing)[0]),))
    return neg.astype(np.int32)


# ---------------------------------------------------------------------------
# rings, elements, subsets


def render_coord(c: Any) -> str:
    if isinstance(c, tuple):
        return "[" + ",".join(render_coord(x) for x in c) + "]"
    return str(c)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int32)
    a.flags.writeable = False
    return a


_UNIT_RE = re.compile(r"^e_?\{?(\d+),?(\d+)\}?$")


class FiniteRing:
    """An immutable finite unital ring given by Cayley tables."""

    def __init__(
        self,
        add,
        mul,
        zero: int,
        one: int,
        provenance: str = "table",
        *,
        coords: Sequence[Any] | None = None,
        meta: dict | None = None,
        verify: bool = True,
        cap: int | None = None,
    ):
        add = np.asarray(add)
        mul = np.asarray(mul)
        ensure_within_cap(int(add.shape[0]) if add.ndim else 0, cap)
        _check_tables(add, mul, int(zero), int(one))
        neg = _negation(add, int(zero))
        if verify:
            verify_axioms(add, mul, int(zero), int(one), neg)
        self.add = _freeze(add)
        self.mul = _freeze(mul)
        self.neg = _freeze(neg)
        self.zero = int(zero)
        self.one = int(one)
        self.provenance = provenance
        self.tag = next(_tags)
        self.meta = dict(meta or {})
        if coords is not None and len(coords) != self.order:
            raise InvalidParameter("one coordinate per element required")
        self.coords = list(coords) if coords is not None else None
        self._coord_index: dict | None = None
        self._cache: dict[str, Any] = {}
        self._lock = threading.RLock()

    # -- basics ------------------------------------------------------------
    @property
    def order(self) -> int:
        return int(self.add.shape[0])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteRing({self.provenance!r}, order={self.order})"

    def elements(self) -> range:
        return range(self.order)

    def sub(self, a, b):
        return self.add[a, self.neg[b]]

    def power(self, a: int, k: int) -> int:
        x = self.one
        for _ in range(k):
            x = int(self.mul[x, a])
        return x

    def label(self, i: int) -> str:
        if self.coords is None:
            return str(int(i))
        return render_coord(self.coords[int(i)])

    @property
    def element_labels(self) -> list[str]:
        return [self.label(i) for i in range(self.order)]

    def __call__(self, literal) -> "Element":
        return Element(self, self.resolve(literal))

    # -- cached computations ----------------------------------------------
    def cached(self, key: str, compute: Callable[[], Any]) -> Any:
        """Compute once per ring; concurrent readers wait for the single writer."""
        try:
            return self._cache[key]
        except KeyError:
            pass
        with self._lock:
            if key not in self._cache:
                self._cache[key] = compute()
            return self._cache[key]

    def is_commutative(self) -> bool:
        return self.commutativity_witness() is None

    def commutativity_witness(self) -> tuple[int, int] | None:
        def compute():
            bad = self.mul != self.mul.T
            return _first(bad) if bad.any() else None

        return self.cached("commutativity_witness", compute)

    def require_commutative(self) -> None:
        w = self.commutativity_witness()
        if w is not None:
            raise NonCommutativeBase(w)

    # -- literals ----------------------------------------------------------
    def index_of_coord(self, coord) -> int:
        if self.coords is None:
            raise KeyError(coord)
        if self._coord_index is None:
            self._coord_index = {c: i for i, c in enumerate(self.coords)}
        return self._coord_index[coord]

    def resolve(self, literal) -> int:
        """Map an element literal to its index.

        Accepts an :class:`Element` of this ring, a coordinate (ints and nested
        tuples/lists), the names ``0``, ``1``, ``I``, or a matrix unit ``eij``
        (1-based) for matrix-shaped rings.  A bare int that is not a coordinate
        is taken as an index.
        """
        if isinstance(literal, Element):
            if literal.ring is not self:
                raise RingMismatch("element belongs to a different ring")
            return literal.index
        if isinstance(literal, (np.integer,)):
            literal = int(literal)
        if isinstance(literal, list):
            literal = _tuplify(literal)
        if isinstance(literal, str):
            s = literal.strip()
            if s in ("0", "zero"):
                return self.zero
            if s in ("1", "I", "one"):
                return self.one
            m = _UNIT_RE.match(s)
            if m:
                return self._matrix_unit(int(m.group(1)), int(m.group(2)))
            raise InvalidParameter(f"unknown element literal {literal!r}")
        if self.coords is not None:
            try:
                return self.index_of_coord(literal)
            except (KeyError, TypeError):
                pass
        if isinstance(literal, int) and 0 <= literal < self.order:
            return literal
        raise InvalidParameter(f"{literal!r} is not an element of {self.provenance}")

    def _matrix_unit(self, i: int, j: int) -> int:
        n = self.meta.get("matrix_size")
        base = self.meta.get("base")
        if n is None or base is None or base.coords is None:
            raise InvalidParameter(f"matrix units need a matrix ring, not {self.provenance}")
        if not (1 <= i <= n and 1 <= j <= n):
            raise InvalidParameter(f"e{i}{j} out of range for {n}x{n} matrices")
        z, o = base.coords[base.zero], base.coords[base.one]
        m = tuple(tuple(o if (r, c) == (i - 1, j - 1) else z for c in range(n)) for r in range(n))
        try:
            return self.index_of_coord(m)
        except KeyError:
            raise InvalidParameter(f"e{i}{j} is not an element of {self.provenance}") from None


def _tuplify(x):
    if isinstance(x, (list, tuple)):
        return tuple(_tuplify(v) for v in x)
    return x


class Element:
    """An element of a specific ring; arithmetic across rings is rejected."""

    __slots__ = ("ring", "index")

    def __init__(self, ring: FiniteRing, index: int):
        index = int(index)
        if not 0 <= index < ring.order:
            raise InvalidParameter(f"index {index} out of range for order {ring.order}")
        self.ring = ring
        self.index = index

    def _other(self, other) -> int:
        if isinstance(other, Element):
            if other.ring is not self.ring:
                raise RingMismatch("operands belong to different rings")
            return other.index
        return self.ring.resolve(other)

    def __add__(self, other):
        return Element(self.ring, self.ring.add[self.index, self._other(other)])

    def __sub__(self, other):
        return Element(self.ring, self.ring.sub(self.index, self._other(other)))

    def __mul__(self, other):
        return Element(self.ring, self.ring.mul[self.index, self._other(other)])

    def __rmul__(self, other):
        return Element(self.ring, self.ring.mul[self._other(other), self.index])

    def __neg__(self):
        return Element(self.ring, self.ring.neg[self.index])

    def __pow__(self, k: int):
        return Element(self.ring, self.ring.power(self.index, k))

    def __eq__(self, other):
        return isinstance(other, Element) and other.ring is self.ring and other.index == self.index

    def __hash__(self):
        return hash((self.ring.tag, self.index))

    def __int__(self):
        return self.index

    __index__ = __int__

    def __repr__(self):
        return f"<{self.ring.label(self.index)} in {self.ring.provenance}>"


class Subset:
    """A bitset over the element indices of one ring."""

    __slots__ = ("ring", "mask")

    def __init__(self, ring: FiniteRing, mask):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (ring.order,):
            raise InvalidParameter("subset mask length must equal the ring order")
        mask = mask.copy()
        mask.flags.writeable = False
        self.ring = ring
        self.mask = mask

    @classmethod
    def from_indices(cls, ring: FiniteRing, indices: Iterable[int]) -> "Subset":
        mask = np.zeros(ring.order, dtype=bool)
        idx = np.fromiter((int(i) for i in indices), dtype=np.int64)
        mask[idx] = True
        return cls(ring, mask)

    @classmethod
    def full(cls, ring: FiniteRing) -> "Subset":
        return cls(ring, np.ones(ring.order, dtype=bool))

    @classmethod
    def empty(cls, ring: FiniteRing) -> "Subset":
        return cls(ring, np.zeros(ring.order, dtype=bool))

    def _check(self, other: "Subset") -> None:
        if not isinstance(other, Subset):
            raise TypeError("expected a Subset")
        if other.ring is not self.ring:
            raise RingMismatch("subsets of different rings")

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def bits(self) -> int:
        packed = np.packbits(self.mask, bitorder="little").tobytes()
        return int.from_bytes(packed, "little")

    def __len__(self):
        return int(self.mask.sum())

    def __iter__(self) -> Iterator[int]:
        return (int(i) for i in self.indices)

    def __contains__(self, item) -> bool:
        if isinstance(item, Element):
            if item.ring is not self.ring:
                raise RingMismatch("element of a different ring")
            item = item.index
        return bool(self.mask[int(item)])

    def __or__(self, other):
        self._check(other)
        return Subset(self.ring, self.mask | other.mask)

    def __and__(self, other):
        self._check(other)
        return Subset(self.ring, self.mask & other.mask)

    def __sub__(self, other):
        self._check(other)
        return Subset(self.ring, self.mask & ~other.mask)

    def __xor__(self, other):
        self._check(other)
        return Subset(self.ring, self.mask ^ other.mask)

    def __invert__(self):
        return Subset(self.ring, ~self.mask)

    def __le__(self, other):
        self._check(other)
        return not np.any(self.mask & ~other.mask)

    def __ge__(self, other):
        return other <= self

    def __eq__(self, other):
        if not isinstance(other, Subset):
            return NotImplemented
        self._check(other)
        return bool(np.array_equal(self.mask, other.mask))

    def __hash__(self):
        return hash((self.ring.tag, self.mask.tobytes()))

    def __repr__(self):
        shown = ", ".join(self.ring.label(i) for i in self.indices[:16])
        more = ", ..." if len(self) > 16 else ""
        return f"Subset({{{shown}{more}}}, ring={self.ring.provenance!r})"


# ---------------------------------------------------------------------------
# ring maps


@dataclass
class RingMap:
    source: FiniteRing
    target: FiniteRing
    image: np.ndarray
    kind: str = "isomorphism-candidate"
    name: str = field(default="")

    def __post_init__(self):
        self.image = np.asarray(self.image, dtype=np.int64)
        if self.image.shape != (self.source.order,):
            raise InvalidParameter("image must list one target index per source element")
        if self.image.size and (self.image.min() < 0 or self.image.max() >= self.target.order):
            raise InvalidParameter("image index out of range for the target ring")

    def __call__(self, a: int) -> int:
        return int(self.image[int(a)])

    def power(self, k: int) -> "RingMap":
        if self.source is not self.target:
            raise RingMismatch("only endomorphisms have powers")
        img = np.arange(self.source.order)
        for _ in range(k):
            img = self.image[img]
        return RingMap(self.source, self.target, img, self.kind)

    def is_identity(self) -> bool:
        return self.source is self.target and bool(np.all(self.image == np.arange(self.source.order)))


def homomorphism_violation(f: RingMap) -> tuple[str, tuple[int, ...]] | None:
    """First law a map breaks, scanning unit, addition, multiplication in row-major order."""
    S, T, img = f.source, f.target, f.image
    if img[S.one] != T.one:
        return "one", (S.one,)
    if img[S.zero] != T.zero:
        return "zero", (S.zero,)
    bad = img[S.add] != T.add[img[:, None], img[None, :]]
    if bad.any():
        return "addition", _first(bad)
    bad = img[S.mul] != T.mul[img[:, None], img[None, :]]
    if bad.any():
        return "multiplication", _first(bad)
    return None


def endomorphism_of(R: FiniteRing, image: Sequence[int], name: str = "") -> RingMap:
    image = np.asarray(image, dtype=np.int64)
    if image.shape != (R.order,):
        raise InvalidParameter("image must have one entry per element")
    f = RingMap(R, R, image, "endomorphism", name)
    bad = homomorphism_violation(f)
    if bad is not None:
        law, w = bad
        if law == "one":
            raise NotUnital(f"image of one is {R.label(int(image[R.one]))}, not one")
        raise NotAHomomorphism(law, w if len(w) == 2 else (w[0], w[0]))
    return f


def check_isomorphism(f: RingMap) -> bool:
    if f.source.order != f.target.order:
        return False
    if np.unique(f.image).size != f.source.order:
        return False
    return homomorphism_violation(f) is None


def map_by_coords(source: FiniteRing, target: FiniteRing, fn: Callable[[Any], Any], kind="isomorphism-candidate") -> RingMap:
    """Build a map from a rule on coordinates (``fn`` returns target coordinates)."""
    img = [target.index_of_coord(fn(c)) for c in source.coords]
    return RingMap(source, target, np.array(img, dtype=np.int64), kind)


def identity_map(R: FiniteRing) -> RingMap:
    return RingMap(R, R, np.arange(R.order), "endomorphism", "id")


# ---------------------------------------------------------------------------
# coordinate rings: elements are fixed-length vectors over a base ring


def _vector_keys(vectors, q: int) -> np.ndarray:
    """Mixed-radix keys of vectors; ``vectors`` is an array with the coordinate
    axis last, or a list of broadcastable per-coordinate arrays."""
    if isinstance(vectors, list):
        k = len(vectors)
        if q ** k < 2**62:
            shape = np.broadcast_shapes(*(np.shape(c) for c in vectors))
            key = np.zeros(shape, dtype=np.int64)
            for c in vectors:
                key *= q
                key += c
            return key
        vectors = np.stack(np.broadcast_arrays(*vectors), axis=-1)
    k = vectors.shape[-1]
    if q ** k < 2**62:
        w = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
        return vectors.astype(np.int64) @ w
    flat = np.ascontiguousarray(vectors.reshape(-1, k).astype(np.int64))
    return flat.view(np.dtype((np.void, 8 * k))).reshape(vectors.shape[:-1])


class _Lookup:
    def __init__(self, keys: np.ndarray):
        self.perm = np.argsort(keys, kind="stable")
        self.sorted = keys[self.perm]

    def __call__(self, keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        pos = np.searchsorted(self.sorted, keys)
        pos = np.minimum(pos, self.sorted.size - 1)
        found = self.sorted[pos] == keys
        return self.perm[pos], found


def coordinate_ring(
    base: FiniteRing,
    vectors: np.ndarray,
    product: Callable[[np.ndarray, np.ndarray], np.ndarray],
    provenance: str,
    *,
    coord: Callable[[tuple], Any] | None = None,
    meta: dict | None = None,
    dedupe: bool = False,
    cap: int | None = None,
    on_missing: Callable[[str, tuple[int, int]], Exception] | None = None,
) -> FiniteRing:
    """Materialize a ring whose elements are rows of ``vectors`` over ``base``.

    Addition is componentwise in ``base``; ``product(X, Y)`` maps broadcast
    arrays of base indices with trailing length ``k`` to their product vectors.
    The carrier must contain the zero and identity vectors and be closed under
    both operations; otherwise ``on_missing(reason, witness)`` is raised.
    """
    vectors = np.asarray(vectors, dtype=np.int64)
    q = base.order
    keys = _vector_keys(vectors, q)
    if dedupe:
        _, first = np.unique(keys, return_index=True)
        keep = np.sort(first)
        vectors, keys = vectors[keep], keys[keep]
    n, k = vectors.shape
    ensure_within_cap(n, cap)
    lookup = _Lookup(keys)

    def missing(reason, witness):
        if on_missing is not None:
            return on_missing(reason, witness)
        return AxiomViolation(f"closure under {reason}", witness)

    zero_vec = np.full(k, base.zero)
    zi, ok = lookup(_vector_keys(zero_vec[None, :], q))
    if not ok[0]:
        raise missing("zero", ())

    add = np.empty((n, n), dtype=np.int32)
    mul = np.empty((n, n), dtype=np.int32)
    block = max(1, 4_000_000 // max(1, n * k))
    badd = base.add
    for start in range(0, n, block):
        X = vectors[start:start + block, None, :]
        Y = vectors[None, :, :]
        for table, res, reason in ((add, badd[X, Y], "addition"), (mul, product(X, Y), "multiplication")):
            idx, found = lookup(_vector_keys(res, q))
            if not found.all():
                i, j = _first(~found)
                raise missing(reason, (start + i, j))
            table[start:start + block] = idx
    one_vec = _identity_vector(vectors, mul)
    if one_vec is None:
        raise missing("identity", ())
    coords = None
    if coord is not None:
        coords = [coord(tuple(int(v) for v in row)) for row in vectors]
    m = {"base": base, "vectors": vectors}
    m.update(meta or {})
    return FiniteRing(add, mul, int(zi[0]), one_vec, provenance, coords=coords, meta=m, cap=cap)


def _identity_vector(vectors: np.ndarray, mul: np.ndarray) -> int | None:
    r = np.arange(mul.shape[0])
    hits = np.flatnonzero(np.all(mul == r[None, :], axis=1) & np.all(mul.T == r[None, :], axis=1))
    return int(hits[0]) if hits.size else None


def all_vectors(q: int, k: int) -> np.ndarray:
    """All length-k vectors over 0..q-1, first coordinate most significant."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((q,) * k).reshape(k, -1).T
    return grids.astype(np.int64)


# ---------------------------------------------------------------------------
# foundational constructors


def zn(n: int) -> FiniteRing:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidParameter(f"Z n needs n >= 1, got {n!r}")
    n = int(n)
    ensure_within_cap(n)
    r = np.arange(n)
    return FiniteRing(
        (r[:, None] + r[None, :]) % n,
        (r[:, None] * r[None, :]) % n,
        0,
        1 % n,
        f"Z {n}",
        coords=list(range(n)),
        meta={"modulus": n},
    )


def table_ring(add_table, mul_table, zero: int, one: int, provenance: str = "table") -> FiniteRing:
    add = _as_table(add_table, "add")
    mul = _as_table(mul_table, "mul")
    if add.shape != mul.shape:
        raise MalformedTable("add and mul tables differ in size")
    return FiniteRing(add, mul, zero, one, provenance)


def _as_table(t, name: str) -> np.ndarray:
    if isinstance(t, np.ndarray):
        arr = t
    else:
        rows = list(t)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise MalformedTable(f"{name} table is ragged")
        arr = np.array(rows, dtype=np.int64).reshape(n, n)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise MalformedTable(f"{name} table is not square")
    n = arr.shape[0]
    if n and (arr.min() < 0 or arr.max() >= n):
        raise MalformedTable(f"{name} table has entries outside 0..{n - 1}")
    return arr


def _wrap(provenance: str) -> str:
    depth = 0
    for ch in provenance:
        depth += ch == "("
        depth -= ch == ")"
        if ch == "*" and depth == 0:
            return f"({provenance})"
    return provenance


def direct_product(factors: Sequence[FiniteRing]) -> FiniteRing:
    """Componentwise product; the first factor is the most significant digit."""
    factors = list(factors)
    if not factors:
        raise InvalidParameter("direct product of no factors")
    orders = [R.order for R in factors]
    total = int(np.prod(orders, dtype=object))
    ensure_within_cap(total)
    idx = np.indices(orders).reshape(len(orders), -1).T
    weights = np.array([int(np.prod(orders[i + 1:], dtype=object)) for i in range(len(orders))], dtype=np.int64)
    add = np.zeros((total, total), dtype=np.int64)
    mul = np.zeros((total, total), dtype=np.int64)
    for f, R in enumerate(factors):
        d = idx[:, f]
        add += R.add[d[:, None], d[None, :]].astype(np.int64) * weights[f]
        mul += R.mul[d[:, None], d[None, :]].astype(np.int64) * weights[f]
    zero = int(sum(R.zero * w for R, w in zip(factors, weights)))
    one = int(sum(R.one * w for R, w in zip(factors, weights)))
    coords = None
    if all(R.coords is not None for R in factors):
        coords = [tuple(R.coords[int(i)] for R, i in zip(factors, row)) for row in idx]
    prov = " * ".join(_wrap(R.provenance) for R in factors)
    return FiniteRing(add, mul, zero, one, prov, coords=coords, meta={"factors": factors})


def encode_tuple(orders: Sequence[int], digits: Sequence[int]) -> int:
    """Mixed-radix index of a digit tuple (first digit most significant)."""
    x = 0
    for q, d in zip(orders, digits):
        if not 0 <= d < q:
            raise InvalidParameter(f"digit {d} out of range for radix {q}")
        x = x * q + int(d)
    return x


def decode_index(orders: Sequence[int], index: int) -> tuple[int, ...]:
    out = []
    for q in reversed(orders):
        index, d = divmod(int(index), q)
        out.append(d)
    return tuple(reversed(out))


def poly_quotient(R: FiniteRing, modulus: Sequence, provenance: str | None = None) -> FiniteRing:
    """R[x]/<f> for commutative R and monic f (coefficients listed low to high).

    Elements are coefficient tuples (a0, ..., a_{d-1}); a0 is the most significant
    index digit.
    """
    R.require_commutative()
    f = [R.resolve(c) for c in modulus]
    d = len(f) - 1
    if d < 1:
        raise InvalidParameter("modulus must have degree at least 1")
    if f[-1] != R.one:
        raise NonMonicModulus("leading coefficient of the modulus must be one")
    ensure_within_cap(R.order ** d)
    neg_f = np.array([R.neg[c] for c in f[:-1]], dtype=np.int64)
    add, mul = R.add, R.mul

    def product(X, Y):
        shape = np.broadcast_shapes(X.shape, Y.shape)[:-1]
        acc = [np.full(shape, R.zero, dtype=np.int64) for _ in range(2 * d - 1)]
        for i in range(d):
            for j in range(d):
                acc[i + j] = add[acc[i + j], mul[X[..., i], Y[..., j]]]
        for deg in range(2 * d - 2, d - 1, -1):
            c = acc[deg]
            for i in range(d):
                acc[deg - d + i] = add[acc[deg - d + i], mul[c, neg_f[i]]]
        return np.stack(acc[:d], axis=-1)

    base_coord = R.coords if R.coords is not None else list(range(R.order))
    prov = provenance or f"PolyQuot({R.provenance}, [{','.join(render_coord(base_coord[c]) for c in f)}])"
    return coordinate_ring(
        R,
        all_vectors(R.order, d),
        product,
        prov,
        coord=lambda v: tuple(base_coord[i] for i in v),
        meta={"modulus": tuple(f), "degree": d, "kind": "polyquot"},
    )
