"""A small expression language over one ore instance.

::

    expr  := term ("*" term)*                 group product
    term  := atom ("^-")*                      inverse
    atom  := literal | "id" | "(" expr ")" | name "(" args ")"

Functions: ``meet``, ``join``, ``median``, ``dist``, ``gromov`` (basepoint
optional), ``admissible``, ``reduce``, ``len``, ``leq``, ``axis(f, label)``
and ``flat(f, x1|x2|...)``.  Literals are segment lists ``[...]``, product
tuples ``([...] | [...])`` or, for the word ore, generator names.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

from .geometry import gromov_product
from .labels import system_from_config as label_system_from_config
from .labels import LabelError
from .lambda_values import HalfValue, format_value
from .ore import OreError, OreInstance
from .products import (
    ProductElement,
    flat_stabilizer_check,
    parse_product,
    product_ops,
    system_from_config as product_system_from_config,
)
from .reduction import reduce as reduce_segment
from .segments import (
    SegmentElement,
    axis_stabilizer_check,
    parse_segment,
    segment_ops,
    split_top_level,
)
from .words import word_ops


class ExprError(ValueError):
    """A parse error at a character position."""

    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position

    def caret(self, text: str) -> str:
        return f"{text}\n{' ' * self.position}^ {self}"


DEFAULT_CONFIG = {"kind": "coset", "lambda": "Q", "H": ["1"]}


@dataclass
class Session:
    """An ore together with what is needed to parse its literals."""

    ore: OreInstance
    kind: str  # "segment", "product" or "word"
    system: Any = None
    generators: tuple = ()

    @classmethod
    def from_config(cls, config: dict | None) -> "Session":
        config = dict(config or DEFAULT_CONFIG)
        kind = config.get("kind")
        if kind == "word":
            gens = tuple(config.get("generators", ["a", "b"]))
            return cls(word_ops(gens), "word", generators=gens)
        if kind == "product" or "factors" in config:
            system = product_system_from_config(config)
            return cls(product_ops(system), "product", system)
        system = label_system_from_config(config)
        return cls(segment_ops(system), "segment", system)


_ELEMENT_TYPES = (SegmentElement, ProductElement, tuple)


def format_result(session: Session, value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, _ELEMENT_TYPES):
        return session.ore.format(value)
    if isinstance(value, HalfValue):
        return str(value)
    return format_value(value)


class _Parser:
    def __init__(self, text: str, session: Session):
        self.text = text
        self.pos = 0
        self.s = session
        self.ore = session.ore

    # -- lexing helpers
    def _ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self, token: str) -> bool:
        self._ws()
        return self.text.startswith(token, self.pos)

    def _expect(self, token: str) -> None:
        if not self._peek(token):
            raise ExprError(f"expected {token!r}", self.pos)
        self.pos += len(token)

    def _matching(self, start: int, open_ch: str, close_ch: str) -> int:
        depth = 0
        for i in range(start, len(self.text)):
            ch = self.text[i]
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
                if depth == 0:
                    if ch != close_ch:
                        raise ExprError(f"mismatched {ch!r}", i)
                    return i
        raise ExprError(f"unclosed {open_ch!r}", start)

    def _name(self) -> str:
        self._ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            raise ExprError("expected a name or literal", start)
        return self.text[start:self.pos]

    def _raw_arg(self) -> tuple:
        """Text of the next argument up to a top-level ',' or ')'."""
        self._ws()
        start, depth = self.pos, 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in "([":
                depth += 1
            elif ch in ")]":
                if depth == 0:
                    break
                depth -= 1
            elif ch == "," and depth == 0:
                break
            self.pos += 1
        return self.text[start:self.pos].strip(), start

    # -- grammar
    def parse(self):
        value = self.expr()
        self._ws()
        if self.pos != len(self.text):
            raise ExprError("unexpected trailing input", self.pos)
        return value

    def expr(self):
        left = self.term()
        while self._peek("*"):
            at = self.pos
            self.pos += 1
            right = self.term()
            left = self.ore.star(self._elem(left, at), self._elem(right, at))
        return left

    def term(self):
        value = self.atom()
        while self._peek("^-"):
            at = self.pos
            self.pos += 2
            value = self.ore.invert(self._elem(value, at))
        return value

    def atom(self):
        self._ws()
        if self.pos >= len(self.text):
            raise ExprError("unexpected end of input", self.pos)
        ch = self.text[self.pos]
        start = self.pos
        if ch == "[":
            end = self._matching(start, "[", "]")
            self.pos = end + 1
            return self._literal(self.text[start:end + 1], start)
        if ch == "(":
            end = self._matching(start, "(", ")")
            inner = self.text[start + 1:end]
            if self.s.kind == "product" and _has_top_level(inner, "|"):
                self.pos = end + 1
                return self._literal(self.text[start:end + 1], start)
            self.pos += 1
            value = self.expr()
            self._expect(")")
            return value
        name = self._name()
        if self._peek("("):
            return self._call(name, start)
        if name == "id":
            return self.ore.identity
        if self.s.kind == "word" and name in self.s.generators:
            return ((name, 1),)
        raise ExprError(f"unknown name {name!r}", start)

    def _literal(self, text: str, at: int):
        try:
            if self.s.kind == "segment":
                return parse_segment(text, self.s.system)
            if self.s.kind == "product":
                return parse_product(text, self.s.system)
        except ValueError as exc:
            raise ExprError(str(exc), at) from None
        raise ExprError("bracketed literals need a segment or product instance", at)

    def _call(self, name: str, at: int):
        self._expect("(")
        ore = self.ore
        if name in ("axis", "flat"):
            f = self.expr()
            self._expect(",")
            raw, raw_at = self._raw_arg()
            self._expect(")")
            return self._status(name, self._elem(f, at), raw, raw_at)
        args = []
        if not self._peek(")"):
            args.append(self.expr())
            while self._peek(","):
                self.pos += 1
                args.append(self.expr())
        self._expect(")")
        arity = {"meet": 2, "join": 2, "median": 3, "dist": 2, "gromov": (2, 3),
                 "admissible": 1, "reduce": 1, "len": 1, "leq": 2, "inv": 1}
        if name not in arity:
            raise ExprError(f"unknown function {name!r}", at)
        want = arity[name]
        if (len(args) not in want) if isinstance(want, tuple) else len(args) != want:
            raise ExprError(f"{name} takes {want} arguments, got {len(args)}", at)
        els = [self._elem(a, at) for a in args]

        def run():
            if name == "meet":
                return ore.meet(*els)
            if name == "join":
                out = ore.join(*els)
                if out is None:
                    raise OreError("no join: the elements have no common upper bound")
                return out
            if name == "median":
                return ore.median(*els)
            if name == "dist":
                return ore.distance(*els)
            if name == "gromov":
                ore.require_admissible(*els)
                return gromov_product(ore, *els)
            if name == "admissible":
                return ore.is_admissible(els[0])
            if name == "reduce":
                if self.s.kind == "segment":
                    return reduce_segment(els[0])
                if ore.is_admissible(els[0]):
                    return els[0]
                raise OreError("reduction is only defined for segment elements")
            if name == "len":
                return ore.length(els[0])
            if name == "leq":
                return ore.leq(*els)
            return ore.invert(els[0])

        return run()

    def _status(self, name: str, f, raw: str, raw_at: int):
        system = self.s.system
        try:
            if name == "axis":
                if self.s.kind != "segment":
                    raise ExprError("axis needs a segment instance", raw_at)
                return axis_stabilizer_check(f, system.parse_label(raw))
            if self.s.kind != "product":
                raise ExprError("flat needs a product instance", raw_at)
            parts = [p.strip() for p in split_top_level(raw, "|")]
            if len(parts) != system.size:
                raise ExprError(f"flat needs {system.size} labels", raw_at)
            labels = [fs.parse_label(p) for fs, p in zip(system.factors, parts)]
            return flat_stabilizer_check(f, labels)
        except LabelError as exc:
            raise ExprError(str(exc), raw_at) from None

    def _elem(self, value, at: int):
        if isinstance(value, _ELEMENT_TYPES):
            return value
        raise ExprError("expected a group element here", at)


def _has_top_level(text: str, sep: str) -> bool:
    return len(split_top_level(text, sep)) > 1


def evaluate(text: str, session: Session):
    """Evaluate ``text``; parse errors raise :class:`ExprError`, domain errors pass through."""
    return _Parser(text, session).parse()


def evaluate_to_text(text: str, session: Session) -> str:
    return format_result(session, evaluate(text, session))
