"""Ring expression language.

    expr    := term ("*" term)*
    term    := "Z" n | "GF" "(" p "," k ")" | "PolyQuot" "(" expr "," "[" elem,* "]" ")"
             | ("M" | "T" | "Dn" | "Vn" | "Sn" | "Un" | "DnK") "(" n "," expr ")"
             | ("Snm" | "Tnm") "(" n "," m "," expr ")" | "VnK" "(" n "," k "," expr ")"
             | "TSkew" "(" n "," expr "," endo ")" | "K" "(" elem "," expr ")"
             | ("Triv" | "DT") "(" expr ")" | ("L" | "H") "(" elem "," elem "," expr ")"
             | "Quot" "(" expr "," "{" elem,* "}" ")" | "SubringGen" "(" expr "," "{" elem,* "}" ")"
             | "Corner" "(" expr "," elem ")" | "GroupRing" "(" expr "," group ")"
             | "(" expr ")"
    elem    := integer | "-" integer | name | "[" elem,* "]"
    endo    := "id" | "frob" | "[" integer,* "]" | quoted path to a JSON list of images

Element literals are resolved in the ring they refer to (the base ring for K, L,
H and PolyQuot coefficients; the ring itself for Corner, Quot, SubringGen).
Quot takes ideal generators.  ``Z 2 * Z 3 * Z 5`` is one three-factor product,
while ``(Z 2 * Z 3) * Z 5`` nests.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any

from . import constructors as cons
from .errors import CDeltaError, ExpressionSyntaxError
from .ring import Element, FiniteRing, direct_product, endomorphism_of, identity_map, poly_quotient, zn


@dataclass(frozen=True)
class Node:
    kind: str
    args: tuple

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Endo:
    """Endomorphism spec: ``id``, ``frob``, an explicit image list, or a file path."""

    name: str | None = None
    image: tuple[int, ...] | None = None
    path: str | None = None


# signature letters: n = integer, e = expression, x = element literal,
# s = element set {..}, l = element list [..], g = group name, a = endomorphism
SIGNATURES = {
    "GF": "nn", "PolyQuot": "el",
    "M": "ne", "T": "ne", "Dn": "ne", "Vn": "ne", "Sn": "ne", "Un": "ne", "DnK": "ne",
    "Snm": "nne", "Tnm": "nne", "VnK": "nne",
    "TSkew": "nea", "K": "xe", "Triv": "e", "DT": "e", "L": "xxe", "H": "xxe",
    "Quot": "es", "SubringGen": "es", "Corner": "ex", "GroupRing": "eg",
}

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<str>\"[^\"]*\")|(?P<punct>[()\[\]{},*\-])"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for i, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line, line_start = line + 1, i + 1
        else:
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ExpressionSyntaxError(message, tok.line, tok.col)

    def take(self, text: str | None = None, kind: str | None = None) -> _Tok:
        tok = self.peek()
        if (text is not None and tok.text != text) or (kind is not None and tok.kind != kind):
            want = repr(text) if text is not None else {"num": "an integer", "name": "a name"}.get(kind, kind)
            got = repr(tok.text) if tok.kind != "eof" else "end of input"
            self.fail(f"expected {want}, found {got}")
        self.i += 1
        return tok

    def integer(self) -> int:
        return int(self.take(kind="num").text)

    def expr(self) -> Node:
        terms = [self.term()]
        while self.peek().text == "*":
            self.take("*")
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Node("Prod", tuple(terms))

    def term(self) -> Node:
        tok = self.peek()
        if tok.text == "(":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner
        if tok.kind != "name":
            self.fail("expected a ring expression")
        self.take()
        name = tok.text
        if name == "Z" or re.fullmatch(r"Z\d+", name):
            if name != "Z":
                return Node("Z", (int(name[1:]),))
            if self.peek().text == "(":
                self.take("(")
                n = self.integer()
                self.take(")")
                return Node("Z", (n,))
            return Node("Z", (self.integer(),))
        sig = SIGNATURES.get(name)
        if sig is None:
            self.fail(f"unknown constructor {name!r}", tok)
        self.take("(")
        args = []
        for k, letter in enumerate(sig):
            if k:
                self.take(",")
            args.append(self.argument(letter))
        self.take(")")
        return Node(name, tuple(args))

    def argument(self, letter: str) -> Any:
        if letter == "n":
            return self.integer()
        if letter == "e":
            return self.expr()
        if letter == "x":
            return self.element()
        if letter == "s":
            return tuple(self.sequence("{", "}"))
        if letter == "l":
            return tuple(self.sequence("[", "]"))
        if letter == "g":
            tok = self.take(kind="name")
            if tok.text not in cons.BUILTIN_GROUPS:
                self.fail(f"unknown group {tok.text!r}; known: {', '.join(cons.BUILTIN_GROUPS)}", tok)
            return tok.text
        if letter == "a":
            return self.endo()
        raise AssertionError(letter)

    def sequence(self, open_: str, close: str) -> list:
        self.take(open_)
        out = []
        if self.peek().text != close:
            out.append(self.element())
            while self.peek().text == ",":
                self.take(",")
                out.append(self.element())
        self.take(close)
        return out

    def element(self) -> Any:
        tok = self.peek()
        if tok.text == "[":
            return tuple(self.sequence("[", "]"))
        if tok.text == "-":
            self.take("-")
            return -self.integer()
        if tok.kind == "num":
            return self.integer()
        if tok.kind == "name":
            return self.take().text
        self.fail("expected an element literal")

    def endo(self) -> Endo:
        tok = self.peek()
        if tok.text == "[":
            image = self.sequence("[", "]")
            if not all(isinstance(v, int) for v in image):
                self.fail("explicit endomorphism images must be element indices", tok)
            return Endo(image=tuple(image))
        if tok.kind == "str":
            return Endo(path=self.take().text[1:-1])
        name = self.take(kind="name").text
        if name not in ("id", "frob"):
            self.fail(f"unknown endomorphism {name!r}; use id, frob, [images] or \"file\"", tok)
        return Endo(name=name)


def parse_expression(text: str) -> Node:
    p = _Parser(text)
    node = p.expr()
    if p.peek().kind != "eof":
        p.fail(f"unexpected {p.peek().text!r} after expression")
    return node


def parse_element(text: str) -> Any:
    """Parse a standalone element literal such as ``[[4,0],[0,0]]`` or ``e11``."""
    p = _Parser(text)
    value = p.element()
    if p.peek().kind != "eof":
        p.fail(f"unexpected {p.peek().text!r} after element literal")
    return value


def _elem_text(x: Any) -> str:
    if isinstance(x, tuple):
        return "[" + ",".join(_elem_text(v) for v in x) + "]"
    return str(x)


def _arg_text(letter: str, value: Any) -> str:
    if letter == "e":
        return to_text(value)
    if letter == "x":
        return _elem_text(value)
    if letter == "s":
        return "{" + ", ".join(_elem_text(v) for v in value) + "}"
    if letter == "l":
        return "[" + ",".join(_elem_text(v) for v in value) + "]"
    if letter == "a":
        if value.name:
            return value.name
        if value.image is not None:
            return "[" + ",".join(map(str, value.image)) + "]"
        return json.dumps(value.path)
    return str(value)


def to_text(node: Node) -> str:
    """Canonical printed form; parse_expression(to_text(n)) == n."""
    if node.kind == "Z":
        return f"Z {node.args[0]}"
    if node.kind == "Prod":
        return " * ".join(f"({to_text(c)})" if c.kind == "Prod" else to_text(c) for c in node.args)
    sig = SIGNATURES[node.kind]
    return f"{node.kind}(" + ", ".join(_arg_text(l, v) for l, v in zip(sig, node.args)) + ")"


def normalize(text: str) -> str:
    return to_text(parse_expression(text))


def resolve_element(R: FiniteRing, x: Any) -> int:
    """Element literal to index.

    Integers and bracketed tuples are coordinates first.  An integer that is not
    a coordinate means zero/one for 0/1 and an element index otherwise; a
    negative integer is the additive inverse of its absolute value.
    """
    if isinstance(x, int) and x < 0:
        return int(R.neg[resolve_element(R, -x)])
    if isinstance(x, int) and x in (0, 1) and R.coords is not None:
        try:
            return R.index_of_coord(x)
        except (KeyError, TypeError):
            return R.zero if x == 0 else R.one
    return R.resolve(x)


def _endomorphism(R: FiniteRing, spec: Endo):
    if spec.name == "id":
        return identity_map(R)
    if spec.name == "frob":
        return cons.frobenius(R)
    image = spec.image
    if spec.path is not None:
        with open(spec.path, encoding="utf-8") as fh:
            image = json.load(fh)
    return endomorphism_of(R, list(image), name=_arg_text("a", spec))


def build_node(node: Node) -> FiniteRing:
    k, a = node.kind, node.args
    if k == "Z":
        R = zn(a[0])
    elif k == "Prod":
        R = direct_product([build_node(c) for c in a])
    elif k == "GF":
        R = cons.gf(a[0], a[1])
    elif k == "PolyQuot":
        base = build_node(a[0])
        R = poly_quotient(base, [Element(base, resolve_element(base, c)) for c in a[1]])
    elif k == "M":
        R = cons.matrix_ring(a[0], build_node(a[1]))
    elif k == "T":
        R = cons.triangular_ring(a[0], build_node(a[1]))
    elif k in ("Dn", "Vn", "Sn", "Un", "DnK"):
        R = cons.family(k, build_node(a[1]), a[0])
    elif k in ("Snm", "Tnm"):
        R = cons.family(k, build_node(a[2]), a[0], m=a[1])
    elif k == "VnK":
        R = cons.family(k, build_node(a[2]), a[0], k=a[1])
    elif k == "TSkew":
        base = build_node(a[1])
        R = cons.skew_triangular(a[0], base, _endomorphism(base, a[2]), endo_name=_arg_text("a", a[2]))
    elif k == "K":
        base = build_node(a[1])
        R = cons.generalized_matrix(resolve_element(base, a[0]), base)
    elif k == "Triv":
        R = cons.trivial_extension(build_node(a[0]))
    elif k == "DT":
        R = cons.dt_ring(build_node(a[0]))
    elif k in ("L", "H"):
        base = build_node(a[2])
        params = cons.CentralParams(resolve_element(base, a[0]), resolve_element(base, a[1]))
        R = (cons.lst_ring if k == "L" else cons.hst_ring)(params, base)
    elif k == "Quot":
        parent = build_node(a[0])
        gens = [resolve_element(parent, x) for x in a[1]]
        R = cons.quotient_ring(parent, cons.ideal_generated(parent, gens))
    elif k == "SubringGen":
        parent = build_node(a[0])
        R = cons.subring_generated(parent, [resolve_element(parent, x) for x in a[1]])
    elif k == "Corner":
        parent = build_node(a[0])
        R = cons.corner_ring(parent, resolve_element(parent, a[1]))
    elif k == "GroupRing":
        R = cons.group_ring(build_node(a[0]), cons.builtin_group(a[1]))
    else:  # pragma: no cover - parser only emits known kinds
        raise CDeltaError(f"unknown node {k}")
    R.provenance = to_text(node)
    return R


def build(text: str | Node) -> FiniteRing:
    """Parse (if needed) and construct a ring; provenance is the canonical text."""
    node = parse_expression(text) if isinstance(text, str) else text
    return build_node(node)
