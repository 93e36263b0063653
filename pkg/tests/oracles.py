"""Reference implementations by plain definition, in pure Python.

Nothing here imports numpy or the package's analysis code.  A ring is a
``Table`` built either from explicit element lists with Python operations (for
checking constructors) or from a package ring's tables (for checking searches).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence


@dataclass
class Table:
    elements: list
    add: list  # add[i][j]
    mul: list
    zero: int
    one: int

    @property
    def n(self) -> int:
        return len(self.elements)

    def neg(self, a: int) -> int:
        return next(b for b in range(self.n) if self.add[a][b] == self.zero)

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg(b)]


def from_operations(elements: Sequence[Hashable], add: Callable, mul: Callable, zero, one) -> Table:
    elements = list(elements)
    pos = {e: i for i, e in enumerate(elements)}
    A = [[pos[add(x, y)] for y in elements] for x in elements]
    M = [[pos[mul(x, y)] for y in elements] for x in elements]
    return Table(elements, A, M, pos[zero], pos[one])


def from_ring(R) -> Table:
    """Read a package ring's tables; elements are its coordinates when present."""
    elements = list(R.coords) if R.coords is not None else list(range(R.order))
    return Table(elements, R.add.tolist(), R.mul.tolist(), int(R.zero), int(R.one))


# -- element rings --------------------------------------------------------


def zn_ops(n: int):
    return (lambda a, b: (a + b) % n), (lambda a, b: (a * b) % n)


def zn_table(n: int) -> Table:
    add, mul = zn_ops(n)
    return from_operations(range(n), add, mul, 0, 1 % n)


def matrix_table(n: int, q: int, keep: Callable = lambda m: True) -> Table:
    """n x n matrices over Z q (entries as nested tuples), optionally a subset."""
    entries = [e for e in itertools.product(range(q), repeat=n * n)]
    mats = [tuple(tuple(e[i * n:(i + 1) * n]) for i in range(n)) for e in entries]
    mats = [m for m in mats if keep(m)]

    def add(x, y):
        return tuple(tuple((x[i][j] + y[i][j]) % q for j in range(n)) for i in range(n))

    def mul(x, y):
        return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(n)) % q for j in range(n)) for i in range(n))

    zero = tuple(tuple(0 for _ in range(n)) for _ in range(n))
    one = tuple(tuple(1 % q if i == j else 0 for j in range(n)) for i in range(n))
    return from_operations(mats, add, mul, zero, one)


def upper(m) -> bool:
    return all(m[i][j] == 0 for i in range(len(m)) for j in range(i))


def gf4_ops():
    """GF(4) as pairs (a0, a1) = a0 + a1 x with x^2 = x + 1."""

    def add(a, b):
        return ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)

    def mul(a, b):
        c0 = a[0] * b[0]
        c1 = a[0] * b[1] + a[1] * b[0]
        c2 = a[1] * b[1]
        return ((c0 + c2) % 2, (c1 + c2) % 2)

    elems = [(0, 0), (0, 1), (1, 0), (1, 1)]
    return elems, add, mul


def skew_t2_table(elems, add, mul, alpha) -> Table:
    """T_2(R, alpha) on pairs with (a0,a1)(b0,b1) = (a0 b0, a0 b1 + a1 alpha(b0))."""
    pairs = [(x, y) for x in elems for y in elems]
    zero = next(e for e in elems if all(add(e, f) == f for f in elems))
    one = next(e for e in elems if all(mul(e, f) == f for f in elems))
    return from_operations(
        pairs,
        lambda p, r: (add(p[0], r[0]), add(p[1], r[1])),
        lambda p, r: (mul(p[0], r[0]), add(mul(p[0], r[1]), mul(p[1], alpha(r[0])))),
        (zero, zero),
        (one, zero),
    )


def k_table(s: int, q: int) -> Table:
    """K_s(Z q) on 2 x 2 arrays ((a, x), (y, b)) with the s-twisted product."""

    def add(u, v):
        return tuple(tuple((i + j) % q for i, j in zip(r, t)) for r, t in zip(u, v))

    def mul(u, v):
        (a1, x1), (y1, b1) = u
        (a2, x2), (y2, b2) = v
        return (
            ((a1 * a2 + s * x1 * y2) % q, (a1 * x2 + x1 * b2) % q),
            ((y1 * a2 + b1 * y2) % q, (s * y1 * x2 + b1 * b2) % q),
        )

    elems = [((a, x), (y, b)) for a, x, y, b in itertools.product(range(q), repeat=4)]
    return from_operations(elems, add, mul, ((0, 0), (0, 0)), ((1 % q, 0), (0, 1 % q)))


def trivial_table(q: int) -> Table:
    return from_operations(
        itertools.product(range(q), repeat=2),
        lambda u, v: ((u[0] + v[0]) % q, (u[1] + v[1]) % q),
        lambda u, v: ((u[0] * v[0]) % q, (u[0] * v[1] + u[1] * v[0]) % q),
        (0, 0),
        (1 % q, 0),
    )


# -- subsets ---------------------------------------------------------------


def units(T: Table) -> set[int]:
    return {a for a in range(T.n) if any(T.mul[a][b] == T.one and T.mul[b][a] == T.one for b in range(T.n))}


def jacobson(T: Table) -> set[int]:
    U = units(T)
    return {a for a in range(T.n) if all(T.sub(T.one, T.mul[r][a]) in U for r in range(T.n))}


def delta(T: Table) -> set[int]:
    U = units(T)
    return {a for a in range(T.n) if all(T.sub(T.one, T.mul[u][a]) in U for u in U)}


def center(T: Table) -> set[int]:
    return {c for c in range(T.n) if all(T.mul[c][x] == T.mul[x][c] for x in range(T.n))}


def nilpotents(T: Table) -> set[int]:
    out = set()
    for a in range(T.n):
        x = a
        for _ in range(T.n + 1):
            if x == T.zero:
                out.add(a)
                break
            x = T.mul[x][a]
    return out


def idempotents(T: Table) -> set[int]:
    return {e for e in range(T.n) if T.mul[e][e] == e}


def strongly_nilpotent(T: Table) -> set[int]:
    """a such that every sequence a_0 = a, a_{k+1} in a_k R a_k reaches 0.

    Computed as the complement of the set of elements from which a nonzero cycle
    is reachable in the graph x -> x r x.
    """
    succ = {x: {T.mul[T.mul[x][r]][x] for r in range(T.n)} - {T.zero} for x in range(T.n) if x != T.zero}
    # iteratively remove nodes with no outgoing edge left: those are safe
    alive = set(succ)
    changed = True
    while changed:
        changed = False
        for x in list(alive):
            if not (succ[x] & alive):
                alive.discard(x)
                changed = True
    return set(range(T.n)) - alive


def decomposable(T: Table, a: int, summands: set[int]) -> bool:
    return any(T.sub(a, c) in summands for c in center(T))


def is_c_of(T: Table, summands: set[int]) -> bool:
    C = center(T)
    return all(any(T.sub(a, c) in summands for c in C) for a in range(T.n))


def is_cdelta(T: Table) -> bool:
    return is_c_of(T, delta(T))


def is_cj(T: Table) -> bool:
    return is_c_of(T, jacobson(T))


def is_cn(T: Table) -> bool:
    return is_c_of(T, nilpotents(T))


def is_cu(T: Table) -> bool:
    return is_c_of(T, units(T))


def cdelta_count(T: Table, a: int) -> int:
    D = delta(T)
    return sum(1 for c in center(T) if T.sub(a, c) in D)


def is_commutative(T: Table) -> bool:
    return all(T.mul[a][b] == T.mul[b][a] for a in range(T.n) for b in range(T.n))


def is_clean(T: Table) -> bool:
    U, E = units(T), idempotents(T)
    return all(any(T.sub(a, e) in U for e in E) for a in range(T.n))


def is_ideal(T: Table, S: set[int]) -> bool:
    if T.zero not in S:
        return False
    for a in S:
        if T.neg(a) not in S:
            return False
        for b in S:
            if T.add[a][b] not in S:
                return False
        for r in range(T.n):
            if T.mul[r][a] not in S or T.mul[a][r] not in S:
                return False
    return True


def homomorphism(S: Table, T: Table, image: Sequence[int]) -> bool:
    if image[S.one] != T.one:
        return False
    for a in range(S.n):
        for b in range(S.n):
            if image[S.add[a][b]] != T.add[image[a]][image[b]]:
                return False
            if image[S.mul[a][b]] != T.mul[image[a]][image[b]]:
                return False
    return True


def isomorphic_by(S: Table, T: Table, image: Sequence[int]) -> bool:
    return S.n == T.n and len(set(image)) == S.n and homomorphism(S, T, image)


def same_tables_by_coords(T: Table, R) -> bool:
    """The package ring R realizes the oracle table T, matching elements by coordinates."""
    if R.order != T.n or R.coords is None:
        return False
    pos = {c: i for i, c in enumerate(R.coords)}
    if set(pos) != set(T.elements):
        return False
    m = [pos[e] for e in T.elements]
    for i in range(T.n):
        for j in range(T.n):
            if R.add[m[i], m[j]] != m[T.add[i][j]] or R.mul[m[i], m[j]] != m[T.mul[i][j]]:
                return False
    return R.zero == m[T.zero] and R.one == m[T.one]


def corner(T: Table, e: int) -> Table:
    """eTe as a table of its own, with e as identity."""
    elems = sorted({T.mul[T.mul[e][r]][e] for r in range(T.n)})
    pos = {x: i for i, x in enumerate(elems)}
    A = [[pos[T.add[x][y]] for y in elems] for x in elems]
    M = [[pos[T.mul[x][y]] for y in elems] for x in elems]
    return Table(elems, A, M, pos[T.zero], pos[e])
