"""Label systems: sets acted on by an ordered group together with a star.

Segment elements are piecewise constant maps into a label system.  Two
kinds ship here:

* :class:`CosetSystem`: cosets ``Λ/H`` with a primed copy (or, with
  ``primed=False``, a single copy whose star is negation).  The ordered
  group acts by translation and ``(y+H)* = (−y+H)'``.
* :class:`AtomSystem`: finitely many names and their starred twins with
  the trivial action.

Both use the anti twist ``(λ·x)* = (−λ)·x*``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Sequence

from .lambda_values import (
    QQ,
    LambdaGroup,
    LambdaValue,
    format_value,
    parse_value,
)
from .lattice import SubgroupLattice


class LabelError(ValueError):
    pass


@dataclass(frozen=True)
class CosetLabel:
    """A coset ``rep + H`` (``primed`` marks the starred copy)."""

    rep: tuple
    primed: bool = False


@dataclass(frozen=True)
class AtomLabel:
    name: str
    starred: bool = False


class LabelSystem:
    """Interface shared by all label systems."""

    lam: LambdaGroup
    twist: str = "anti"

    def star(self, label):
        raise NotImplementedError

    def act(self, value: LambdaValue, label):
        raise NotImplementedError

    def stab_contains(self, label, value: LambdaValue) -> bool:
        raise NotImplementedError

    def reflection_centers(self, label, lo: LambdaValue, hi: LambdaValue) -> list:
        """All ``t`` strictly between ``lo`` and ``hi`` with ``x* = 2t·x``."""
        raise NotImplementedError

    def reflection_shift_exists(self, label, lo: LambdaValue, hi: LambdaValue) -> bool:
        return bool(self.reflection_centers(label, lo, hi))

    def on_star_copy(self, label) -> bool:
        raise NotImplementedError

    def same_orbit_as_star(self, label) -> bool:
        """Whether ``x*`` lies in the orbit of ``x``."""
        raise NotImplementedError

    def parse_label(self, text: str):
        raise NotImplementedError

    def format_label(self, label) -> str:
        raise NotImplementedError

    def check_label(self, label):
        raise NotImplementedError

    def random_label(self, rng):
        raise NotImplementedError

    def alternative_label(self, label):
        """A label on the same copy as ``label`` but different from it."""
        raise NotImplementedError


_COSET = re.compile(r"^(?P<rep>.+?)\s*\+\s*H$")


class CosetSystem(LabelSystem):
    """Cosets of a finitely generated subgroup ``H`` of the ordered group."""

    def __init__(self, lam: LambdaGroup, H: Sequence = (), primed: bool = True,
                 twist: str = "anti"):
        if twist != "anti":
            raise LabelError("segment label systems use the anti twist")
        self.lam = lam
        self.twist = twist
        self.primed = primed
        self.H = tuple(lam.coerce(h) for h in H)
        self.lattice = SubgroupLattice([lam.components(h) for h in self.H], lam.dim)
        if not primed:
            if lam.dim != 1:
                raise LabelError("single-copy coset systems are supported over Z and Q only")
            if self.lattice.rank > 1:
                raise LabelError("internal: H in Z or Q must be cyclic")
        self._key = ("coset", lam.name, tuple(tuple(r) for r in self.lattice.rows),
                     self.lattice.scale, primed)

    # identity of a system is its canonical lattice, not its generator list
    def __eq__(self, other) -> bool:
        return isinstance(other, CosetSystem) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        gens = ", ".join(format_value(h) for h in self.H)
        copies = "" if self.primed else ", single copy"
        return f"CosetSystem({self.lam}, H=<{gens}>{copies})"

    def describe(self) -> dict:
        return {"kind": "coset", "lambda": self.lam.name,
                "H": [format_value(h) for h in self.H], "primed": self.primed,
                "twist": self.twist}

    def _reduce(self, value: LambdaValue) -> tuple:
        comps = self.lam.components(value)
        red = self.lattice.reduce(comps)
        if not self.lam.divisible:
            red = tuple(int(c) for c in red)
        return red

    def label(self, value, primed: bool = False) -> CosetLabel:
        if primed and not self.primed:
            raise LabelError("this coset system has no primed copy")
        return CosetLabel(self._reduce(self.lam.coerce(value)), primed)

    def value_of(self, label: CosetLabel) -> LambdaValue:
        return self.lam.from_components(label.rep)

    def check_label(self, label) -> CosetLabel:
        if not isinstance(label, CosetLabel):
            raise LabelError(f"{label!r} is not a coset label")
        if label.primed and not self.primed:
            raise LabelError(f"{label!r} is primed but the system has one copy")
        if self._reduce(self.value_of(label)) != label.rep:
            raise LabelError(f"{label!r} is not in canonical form for {self!r}")
        return label

    def star(self, label: CosetLabel) -> CosetLabel:
        neg = self._reduce(-self.value_of(label))
        return CosetLabel(neg, (not label.primed) if self.primed else False)

    def act(self, value: LambdaValue, label: CosetLabel) -> CosetLabel:
        return CosetLabel(self._reduce(self.value_of(label) + value), label.primed)

    def stab_contains(self, label, value: LambdaValue) -> bool:
        return self.lattice.contains(self.lam.components(value))

    def on_star_copy(self, label: CosetLabel) -> bool:
        return label.primed

    def same_orbit_as_star(self, label) -> bool:
        return not self.primed

    def reflection_centers(self, label, lo, hi) -> list:
        if self.primed:
            return []
        # x* = 2t·x  ⟺  -y ≡ y + 2t (mod H)  ⟺  2(t + y) ∈ H
        y = self.value_of(label)
        if not self.H or all(h == 0 for h in self.H):
            candidates = [-y]
            step = None
        else:
            h = abs(Fraction(self.lattice.rows[0][0], self.lattice.scale))
            step = h / 2
            candidates = None
        out = []
        if step is None:
            t = candidates[0]
            if lo < t < hi and (self.lam.divisible or Fraction(t).denominator == 1):
                out.append(t)
            return out
        # t ∈ -y + step·Z, strictly inside (lo, hi)
        k = floor((Fraction(lo) + y) / step) + 1
        while True:
            t = -y + k * step
            if t >= hi:
                break
            if Fraction(t).denominator == 1 or self.lam.divisible:
                out.append(self.lam.coerce(t))
            k += 1
        return out

    def parse_label(self, text: str) -> CosetLabel:
        text = text.strip()
        primed = False
        if text.endswith("'"):
            inner = text[:-1].strip()
            if not (inner.startswith("(") and inner.endswith(")")):
                raise LabelError(f"primed label must be parenthesised: {text!r}")
            text, primed = inner[1:-1].strip(), True
        m = _COSET.match(text)
        if not m:
            raise LabelError(f"not a coset label: {text!r}")
        return self.label(parse_value(m.group("rep")), primed)

    def format_label(self, label: CosetLabel) -> str:
        body = f"{format_value(self.value_of(label))}+H"
        return f"({body})'" if label.primed else body

    def random_label(self, rng, denominators=(1, 2, 3, 4, 6), span: int = 2) -> CosetLabel:
        def scalar():
            if self.lam.divisible:
                d = rng.choice(denominators)
                return Fraction(rng.randint(-span * d, span * d), d)
            return rng.randint(-span, span)

        value = self.lam.from_components([scalar() for _ in range(self.lam.dim)])
        return self.label(value, self.primed and rng.random() < 0.5)

    def alternative_label(self, label: CosetLabel) -> CosetLabel:
        for shift in self._small_values():
            other = self.act(shift, label)
            if other != label:
                return other
        raise LabelError(f"no alternative label on the copy of {self.format_label(label)}")

    def _small_values(self):
        one = self.lam.from_components((1,) + (0,) * (self.lam.dim - 1))
        yield one
        if self.lam.dim == 2:
            yield self.lam.from_components((0, 1))
        if self.lam.divisible:
            for d in range(2, 64):
                yield self.lam.from_components((Fraction(1, d),) + (0,) * (self.lam.dim - 1))


_ATOM = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(\*?)$")


class AtomSystem(LabelSystem):
    """Named labels with starred twins and the trivial action.

    With ``k`` names there are ``2k`` labels, so the tree of constant
    directions at the identity has valence ``2k``.
    """

    def __init__(self, names: Sequence[str], lam: LambdaGroup = QQ, twist: str = "anti"):
        names = tuple(names)
        if not names:
            raise LabelError("an atom system needs at least one name")
        if len(set(names)) != len(names):
            raise LabelError("duplicate atom names")
        for n in names:
            if not _ATOM.match(n) or n.endswith("*"):
                raise LabelError(f"bad atom name {n!r}")
        if twist != "anti":
            raise LabelError("segment label systems use the anti twist")
        self.names = names
        self.lam = lam
        self.twist = twist
        self._key = ("atoms", lam.name, names)

    @classmethod
    def with_valence(cls, kappa: int, lam: LambdaGroup = QQ) -> "AtomSystem":
        if kappa < 2 or kappa % 2:
            raise LabelError("valence must be a positive even number")
        return cls([f"x{i}" for i in range(1, kappa // 2 + 1)], lam)

    @property
    def valence(self) -> int:
        return 2 * len(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, AtomSystem) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"AtomSystem({list(self.names)}, {self.lam})"

    def describe(self) -> dict:
        return {"kind": "atoms", "lambda": self.lam.name, "names": list(self.names),
                "twist": self.twist}

    def all_labels(self) -> list:
        return [AtomLabel(n, s) for n in self.names for s in (False, True)]

    def check_label(self, label) -> AtomLabel:
        if not isinstance(label, AtomLabel) or label.name not in self.names:
            raise LabelError(f"{label!r} is not a label of {self!r}")
        return label

    def star(self, label: AtomLabel) -> AtomLabel:
        return AtomLabel(label.name, not label.starred)

    def act(self, value, label: AtomLabel) -> AtomLabel:
        return label

    def stab_contains(self, label, value) -> bool:
        return True

    def on_star_copy(self, label: AtomLabel) -> bool:
        return label.starred

    def same_orbit_as_star(self, label) -> bool:
        return False

    def reflection_centers(self, label, lo, hi) -> list:
        return []

    def parse_label(self, text: str) -> AtomLabel:
        m = _ATOM.match(text.strip())
        if not m or m.group(1) not in self.names:
            raise LabelError(f"unknown atom {text!r}")
        return AtomLabel(m.group(1), bool(m.group(2)))

    def format_label(self, label: AtomLabel) -> str:
        return label.name + ("*" if label.starred else "")

    def random_label(self, rng) -> AtomLabel:
        return AtomLabel(rng.choice(self.names), rng.random() < 0.5)

    def alternative_label(self, label: AtomLabel) -> AtomLabel:
        for n in self.names:
            if n != label.name:
                return AtomLabel(n, label.starred)
        raise LabelError(f"no alternative label on the copy of {self.format_label(label)}")


def system_from_config(config: dict) -> LabelSystem:
    """Build a label system from its JSON description."""
    kind = config.get("kind")
    twist = config.get("twist", "anti")
    lam = LambdaGroup(config.get("lambda", "Q"))
    if kind == "coset":
        H = [lam.parse(str(h)) for h in config.get("H", [])]
        return CosetSystem(lam, H, primed=config.get("primed", True), twist=twist)
    if kind == "atoms":
        if "names" in config:
            return AtomSystem(config["names"], lam, twist=twist)
        return AtomSystem.with_valence(int(config["valence"]), lam)
    raise LabelError(f"unknown label system kind {kind!r}")
