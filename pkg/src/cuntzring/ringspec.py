"""Parser for ring constructor expressions.

    expr  := NAME '(' arg (',' arg)* ')' | IDENT
    arg   := INT | expr | '{' item (',' item)* '}'

Constructors: zmod(n), gf(p), matrix(k,R), upper(k,R), product(R,S),
quotient(R,{gens}), subring_nonunital(R,{gens}), dorroh(R), zero_mult(n).
A bare identifier refers to a previously named ring in ``env``.
Set items are element indices or printed labels such as ``[[0,1],[0,0]]``.
"""
from __future__ import annotations

from . import rings
from .errors import SizeLimitExceeded, SpecParseError, UnknownConstructor
from .rings import FiniteRing

CONSTRUCTORS = ("zmod", "gf", "matrix", "upper", "product", "quotient",
                "subring_nonunital", "dorroh", "zero_mult")

_cache: dict[str, FiniteRing] = {}


class _Parser:
    def __init__(self, text: str, env):
        self.text = text
        self.pos = 0
        self.env = env or {}

    def error(self, msg):
        raise SpecParseError(f"{msg} at offset {self.pos} in {self.text!r}")

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def word(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] in "_-."):
            self.pos += 1
        if start == self.pos:
            self.error("expected a name or number")
        return self.text[start:self.pos]

    def integer(self):
        w = self.word()
        if not w.isdigit():
            self.error(f"expected an integer, got {w!r}")
        return int(w)

    def set_items(self):
        # raw item texts, split on top-level commas
        self.expect("{")
        items, depth, start = [], 0, self.pos
        while True:
            if self.pos >= len(self.text):
                self.error("unterminated set")
            ch = self.text[self.pos]
            if ch in "[(":
                depth += 1
            elif ch in "])":
                depth -= 1
            elif (ch == "," or ch == "}") and depth == 0:
                item = self.text[start:self.pos].strip()
                if item:
                    items.append(item)
                self.pos += 1
                if ch == "}":
                    return items
                start = self.pos
                continue
            self.pos += 1

    def expr(self) -> FiniteRing:
        name = self.word()
        if self.peek() != "(":
            if name in self.env:
                return self.env[name]
            if name in CONSTRUCTORS:
                self.error(f"{name} needs arguments")
            raise UnknownConstructor(f"unknown ring or constructor {name!r}")
        if name not in CONSTRUCTORS:
            raise UnknownConstructor(f"unknown constructor {name!r}")
        self.expect("(")
        if name in ("zmod", "gf", "zero_mult"):
            n = self.integer()
            self.expect(")")
            try:
                return getattr(rings, name)(n)
            except ValueError as e:
                self.error(str(e))
        if name in ("matrix", "upper"):
            k = self.integer()
            self.expect(",")
            R = self.expr()
            self.expect(")")
            return getattr(rings, name)(k, R)
        if name == "product":
            R = self.expr()
            self.expect(",")
            S = self.expr()
            self.expect(")")
            return rings.product(R, S)
        if name == "dorroh":
            R = self.expr()
            self.expect(")")
            return rings.unitalize(R)[0]
        # quotient / subring_nonunital
        R = self.expr()
        self.expect(",")
        items = self.set_items()
        self.expect(")")
        try:
            gens = [R.index_of(int(t)) if t.isdigit() else R.index_of(t) for t in items]
        except ValueError as e:
            self.error(str(e))
        if name == "subring_nonunital":
            return rings.subring_nonunital(R, gens, gens_text=",".join(items))
        ideal = rings.ideal_closure(R, gens)
        return rings.quotient_ring(R, ideal)[0]


def build_ring(spec: str, env: dict | None = None, validate: bool = True) -> FiniteRing:
    """Build (and validate) a ring from a constructor expression."""
    if not isinstance(spec, str) or not spec.strip():
        raise SpecParseError("empty ring expression")
    key = "".join(spec.split())
    if not env and key in _cache:
        return _cache[key]
    p = _Parser(spec, env)
    try:
        R = p.expr()
    except RecursionError:
        raise SpecParseError("expression nested too deeply") from None
    if p.peek():
        p.error("trailing characters")
    if validate:
        rings.validated(R)
    if not env:
        _cache[key] = R
    return R


__all__ = ["build_ring", "CONSTRUCTORS", "SizeLimitExceeded"]
