"""Product ores: tuples of piecewise constant maps over finitely many factors.

Factor ``n`` carries labels ``X_n ⊔ X_n*`` where ``X_n = Q/H_n``.  A
vector ``r`` of the additive group ``Q^N`` moves factor-``n`` labels by
``(M·r)_n`` for a fixed rational action matrix ``M``; the star swaps the
two copies and commutes with every shift.  Concatenation shifts the labels
of the right factor by the signed outline ``τ(f)`` of the left one.
"""

from __future__ import annotations

import enum
import re
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .labels import CosetLabel, LabelError
from .lambda_values import QQ, format_value, parse_value
from .lattice import SubgroupLattice
from .ore import InadmissibleError, OreInstance
from .segments import (
    SegmentElement,
    split_top_level,
    canonicalize,
    format_segment,
    seg_meet,
)


class ProductError(ValueError):
    pass


_COSET = re.compile(r"^(?P<rep>.+?)\s*\+\s*H$")


class FactorSystem:
    """Labels ``Q/H ⊔ (Q/H)*`` of one factor, star commuting with shifts."""

    twist = "commuting"

    def __init__(self, H: Sequence = ()):
        self.lam = QQ
        self.H = tuple(Fraction(h) for h in H)
        self.lattice = SubgroupLattice([(h,) for h in self.H], 1)
        self._key = ("factor", tuple(tuple(r) for r in self.lattice.rows), self.lattice.scale)

    def __eq__(self, other) -> bool:
        return isinstance(other, FactorSystem) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"FactorSystem(H=<{', '.join(map(str, self.H))}>)"

    def label(self, value, starred: bool = False) -> CosetLabel:
        return CosetLabel(self.lattice.reduce((Fraction(value),)), starred)

    def value_of(self, label: CosetLabel) -> Fraction:
        return label.rep[0]

    def check_label(self, label) -> CosetLabel:
        if not isinstance(label, CosetLabel) or self.label(label.rep[0], label.primed) != label:
            raise LabelError(f"{label!r} is not a canonical label of {self!r}")
        return label

    def star(self, label: CosetLabel) -> CosetLabel:
        return CosetLabel(label.rep, not label.primed)

    def act(self, value: Fraction, label: CosetLabel) -> CosetLabel:
        if value == 0:
            return label
        return CosetLabel(self.lattice.reduce((label.rep[0] + value,)), label.primed)

    def stab_contains(self, value: Fraction) -> bool:
        return self.lattice.contains((value,))

    def on_star_copy(self, label: CosetLabel) -> bool:
        return label.primed

    def reflection_centers(self, label, lo, hi) -> list:
        return []

    def parse_label(self, text: str) -> CosetLabel:
        text = text.strip()
        starred = False
        if text.endswith("'"):
            inner = text[:-1].strip()
            if not (inner.startswith("(") and inner.endswith(")")):
                raise LabelError(f"starred label must be parenthesised: {text!r}")
            text, starred = inner[1:-1].strip(), True
        m = _COSET.match(text)
        if not m:
            raise LabelError(f"not a coset label: {text!r}")
        return self.label(Fraction(parse_value(m.group("rep"))), starred)

    def format_label(self, label: CosetLabel) -> str:
        body = f"{format_value(label.rep[0])}+H"
        return f"({body})'" if label.primed else body

    def random_label(self, rng, denominators=(1, 2, 3), span: int = 2) -> CosetLabel:
        d = rng.choice(denominators)
        return self.label(Fraction(rng.randint(-span * d, span * d), d), rng.random() < 0.5)

    def nontrivial_shift(self) -> Fraction:
        """A small positive value outside ``H``."""
        for d in range(1, 1000):
            c = Fraction(1, d)
            if not self.stab_contains(c):
                return c
        raise LabelError(f"no small shift outside H for {self!r}")


class ProductSystem:
    """Factors plus the action matrix through which shifts are applied."""

    def __init__(self, factors: Sequence[FactorSystem], matrix: Optional[Sequence[Sequence]] = None):
        self.factors = tuple(factors)
        n = len(self.factors)
        if not 2 <= n <= 8:
            raise ProductError("a product needs between 2 and 8 factors")
        if matrix is None:
            matrix = [[int(i == j) for j in range(n)] for i in range(n)]
        self.matrix = tuple(tuple(Fraction(c) for c in row) for row in matrix)
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise ProductError(f"action matrix must be {n}x{n}")
        self._key = (self.factors, self.matrix)

    @property
    def size(self) -> int:
        return len(self.factors)

    def __eq__(self, other) -> bool:
        return isinstance(other, ProductSystem) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        rows = [[str(c) for c in r] for r in self.matrix]
        return f"ProductSystem({list(self.factors)}, M={rows})"

    def describe(self) -> dict:
        return {"kind": "product",
                "factors": [{"H": [str(h) for h in f.H]} for f in self.factors],
                "action_matrix": [[str(c) for c in r] for r in self.matrix]}

    def shifts(self, r: Sequence[Fraction]) -> tuple:
        """Per-factor label shift ``(M·r)_n`` for a vector ``r``."""
        out = []
        for row in self.matrix:
            total = 0
            for m, x in zip(row, r):
                if m and x:
                    total = total + m * x
            out.append(Fraction(total))
        return tuple(out)

    def stab_contains(self, n: int, r: Sequence[Fraction]) -> bool:
        """Whether ``r`` fixes the labels of factor ``n`` (``(M·r)_n ∈ H_n``)."""
        return self.factors[n].stab_contains(self.shifts(r)[n])


class ProductElement:
    """A tuple of factor elements with cached outline and signed outline."""

    __slots__ = ("factors", "system", "_tau", "_hash")

    def __init__(self, factors: tuple, system: ProductSystem):
        self.factors = factors
        self.system = system
        self._tau = None
        self._hash = None

    @property
    def outline(self) -> tuple:
        return tuple(f.length for f in self.factors)

    @property
    def tau(self) -> tuple:
        if self._tau is None:
            self._tau = tuple(_signed_length(f) for f in self.factors)
        return self._tau

    @property
    def length(self) -> Fraction:
        total = 0
        for f in self.factors:
            total = total + f.length
        return Fraction(total)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProductElement):
            return NotImplemented
        return all(a.blocks == b.blocks for a, b in zip(self.factors, other.factors)) and (
            self.system is other.system or self.system == other.system)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(f.blocks for f in self.factors))
        return self._hash

    def __repr__(self) -> str:
        return f"ProductElement({format_product(self)})"

    def __str__(self) -> str:
        return format_product(self)


def _signed_length(f: SegmentElement) -> Fraction:
    total = 0
    for l, x in f.blocks:
        total = total - l if x.primed else total + l
    return Fraction(total)


def signed_length(f: SegmentElement) -> Fraction:
    """``ℓ⁺ - ℓ⁻`` of one factor."""
    return _signed_length(f)


def plus_minus_lengths(f: SegmentElement) -> tuple:
    plus = sum((l for l, x in f.blocks if not x.primed), Fraction(0))
    minus = sum((l for l, x in f.blocks if x.primed), Fraction(0))
    return plus, minus


def _shift_factor(f: SegmentElement, s: Fraction, star: bool = False, reverse: bool = False) -> tuple:
    S = f.system
    blocks = reversed(f.blocks) if reverse else f.blocks
    out = []
    for l, x in blocks:
        if star:
            x = S.star(x)
        out.append((l, S.act(s, x)))
    return tuple(out)


def _check_same(f: ProductElement, g: ProductElement) -> None:
    if f.system is not g.system and f.system != g.system:
        raise ProductError("product systems differ")


def prod_concat(f: ProductElement, g: ProductElement) -> ProductElement:
    _check_same(f, g)
    shifts = f.system.shifts(f.tau)
    out = []
    for fn, gn, s in zip(f.factors, g.factors, shifts):
        if not gn.blocks:
            out.append(fn)
            continue
        moved = _shift_factor(gn, s)
        blocks = fn.blocks
        if blocks and blocks[-1][1] == moved[0][1]:
            blocks = blocks[:-1] + ((blocks[-1][0] + moved[0][0], moved[0][1]),)
            moved = moved[1:]
        out.append(SegmentElement(blocks + moved, fn.system, fn.length + gn.length))
    return ProductElement(tuple(out), f.system)


def prod_invert(f: ProductElement) -> ProductElement:
    shifts = f.system.shifts(tuple(-t for t in f.tau))
    out = tuple(SegmentElement(_shift_factor(fn, s, star=True, reverse=True), fn.system, fn.length)
                for fn, s in zip(f.factors, shifts))
    return ProductElement(out, f.system)


def prod_meet(f: ProductElement, g: ProductElement) -> ProductElement:
    _check_same(f, g)
    return ProductElement(tuple(seg_meet(a, b) for a, b in zip(f.factors, g.factors)), f.system)


def prod_strip_prefix(y: ProductElement, x: ProductElement) -> ProductElement:
    """The ``z`` with ``y = x □ z`` (assuming ``x ⪯ y``)."""
    shifts = y.system.shifts(tuple(-t for t in x.tau))
    out = []
    for yn, xn, s in zip(y.factors, x.factors, shifts):
        cut = xn.length
        pos = Fraction(0)
        blocks = []
        for l, lab in yn.blocks:
            end = pos + l
            if end > cut:
                blocks.append((end - max(pos, cut), yn.system.act(s, lab)))
            pos = end
        out.append(SegmentElement(tuple(blocks), yn.system, yn.length - cut))
    return ProductElement(tuple(out), y.system)


def _upper_bound(f: ProductElement, g: ProductElement) -> Optional[ProductElement]:
    out = []
    for a, b in zip(f.factors, g.factors):
        m = seg_meet(a, b)
        if m == a:
            out.append(b)
        elif m == b:
            out.append(a)
        else:
            return None
    return ProductElement(tuple(out), f.system)


def factor_is_admissible(f: SegmentElement) -> bool:
    """No breakpoint with ``f(t+ε) = f*(t-ε)`` for small ``ε``."""
    S = f.system
    blocks = f.blocks
    for i in range(len(blocks) - 1):
        if S.star(blocks[i][1]) == blocks[i + 1][1]:
            return False
    return True


def prod_is_admissible(f: ProductElement) -> bool:
    return all(factor_is_admissible(fn) for fn in f.factors)


def product_ops(system: ProductSystem) -> OreInstance:
    identity = ProductElement(tuple(SegmentElement((), fs) for fs in system.factors), system)
    return OreInstance(
        name=f"product[N={system.size}]",
        identity=identity,
        meet=prod_meet,
        concat=prod_concat,
        invert=prod_invert,
        is_admissible=prod_is_admissible,
        length=lambda f: f.length,
        strip_prefix=prod_strip_prefix,
        upper_bound=_upper_bound,
        format=format_product,
    )


# ---------------------------------------------------------------------------
# construction helpers


def identity_of(system: ProductSystem) -> ProductElement:
    return ProductElement(tuple(SegmentElement((), fs) for fs in system.factors), system)


def supported_on(system: ProductSystem, i: int, f: SegmentElement) -> ProductElement:
    """The product element equal to ``f`` in factor ``i`` and trivial elsewhere."""
    if f.system != system.factors[i]:
        raise ProductError(f"element does not use the labels of factor {i}")
    factors = [SegmentElement((), fs) for fs in system.factors]
    factors[i] = f
    return ProductElement(tuple(factors), system)


def factor_element(system: ProductSystem, i: int, blocks: Iterable) -> SegmentElement:
    fs = system.factors[i]
    return canonicalize(((Fraction(l), fs.check_label(x)) for l, x in blocks), fs)


def make_element(system: ProductSystem, factor_blocks: Sequence[Iterable]) -> ProductElement:
    if len(factor_blocks) != system.size:
        raise ProductError(f"expected {system.size} factors")
    return ProductElement(tuple(factor_element(system, i, b) for i, b in enumerate(factor_blocks)),
                          system)


def shift_element(f: ProductElement, r: Sequence[Fraction]) -> ProductElement:
    """``r·f``: every factor's labels moved by ``(M·r)_n``."""
    shifts = f.system.shifts(r)
    return ProductElement(tuple(SegmentElement(_shift_factor(fn, s), fn.system, fn.length)
                                for fn, s in zip(f.factors, shifts)), f.system)


def irreducible_instance() -> ProductSystem:
    """Two factors labelled by Q with the crossed action ``(r1, r2)·x1 = r2 + x1``."""
    return ProductSystem([FactorSystem(), FactorSystem()], [[0, 1], [1, 0]])


# ---------------------------------------------------------------------------
# standard flats


class FlatStatus(enum.Enum):
    IN_FLAT_STABILIZING = "InFlatStabilizing"
    IN_FLAT_NOT_STABILIZING = "InFlatNotStabilizing"
    OFF_FLAT = "OffFlat"


def in_flat(f: ProductElement, xs: Sequence[CosetLabel]) -> bool:
    for fn, x in zip(f.factors, xs):
        if not fn.blocks:
            continue
        if len(fn.blocks) != 1 or fn.blocks[0][1] not in (x, fn.system.star(x)):
            return False
    return True


def flat_stabilizer_check(f: ProductElement, xs: Sequence[CosetLabel]) -> FlatStatus:
    system = f.system
    if len(xs) != system.size:
        raise ProductError(f"need one label per factor ({system.size})")
    for fs, x in zip(system.factors, xs):
        fs.check_label(x)
    if not in_flat(f, xs):
        return FlatStatus.OFF_FLAT
    if all(system.stab_contains(n, f.tau) for n in range(system.size)):
        return FlatStatus.IN_FLAT_STABILIZING
    return FlatStatus.IN_FLAT_NOT_STABILIZING


# ---------------------------------------------------------------------------
# the zero signed length kernel


def zero_signed_extension(system: ProductSystem, i: int, f: SegmentElement) -> ProductElement:
    """An admissible ``g ⪰ f`` in factor ``i`` with signed length zero.

    ``f'`` is ``f`` with every label moved along its own copy by a fixed
    amount outside ``H_i``; then ``g = f □ f'⁻¹``.
    """
    F = supported_on(system, i, f)
    if not prod_is_admissible(F):
        raise InadmissibleError(f"{format_segment(f)} is not admissible")
    if not f.blocks:
        return F
    c = system.factors[i].nontrivial_shift()
    fs = f.system
    f_alt = SegmentElement(tuple((l, fs.act(c, x)) for l, x in f.blocks), fs, f.length)
    F_alt = supported_on(system, i, f_alt)
    return prod_concat(F, prod_invert(F_alt))


def factor_distance(ore: OreInstance, f: ProductElement, g: ProductElement, i: int) -> Fraction:
    """``d_i(f, g) = ℓ_i(f⁻¹ ⋆ g)``."""
    return ore.star(ore.invert(f), g).outline[i]


def factor_distance_lower_bound_check(ore: OreInstance, f: ProductElement, h: ProductElement,
                                      i: int) -> bool:
    """Check ``d_i(f, h) ≥ ℓ(f)`` for constant ``f`` in ``X_i`` and ``τ(h)_i = 0``."""
    fi = f.factors[i]
    if any(fn.blocks for n, fn in enumerate(f.factors) if n != i):
        raise ProductError("f must be supported on factor i")
    if len(fi.blocks) > 1 or (fi.blocks and fi.blocks[0][1].primed):
        raise ProductError("f must be constant with image in X_i")
    if h.tau[i] != 0:
        raise ProductError("h must have zero signed length on factor i")
    return factor_distance(ore, f, h, i) >= f.length


# ---------------------------------------------------------------------------
# text form


def parse_product(text: str, system: ProductSystem) -> ProductElement:
    """Parse ``([...] | [...] | ...)``; ``id`` is the identity."""
    text = text.strip()
    if text == "id":
        return identity_of(system)
    if not (text.startswith("(") and text.endswith(")")):
        raise ProductError(f"product literal must be parenthesised: {text!r}")
    parts = split_top_level(text[1:-1], "|")
    if len(parts) != system.size:
        raise ProductError(f"expected {system.size} factors, got {len(parts)}")
    factors = []
    for fs, part in zip(system.factors, parts):
        part = part.strip()
        if part in ("id", "[]"):
            factors.append(SegmentElement((), fs))
            continue
        if not (part.startswith("[") and part.endswith("]")):
            raise ProductError(f"factor literal must be bracketed: {part!r}")
        blocks = []
        body = part[1:-1].strip()
        for piece in split_top_level(body, ","):
            bits = split_top_level(piece, ":")
            if len(bits) < 2:
                raise ProductError(f"block needs length:label, got {piece.strip()!r}")
            blocks.append((Fraction(parse_value(bits[0])), fs.parse_label(":".join(bits[1:]))))
        factors.append(canonicalize(blocks, fs))
    return ProductElement(tuple(factors), system)


def format_product(f: ProductElement) -> str:
    if all(not fn.blocks for fn in f.factors):
        return "id"
    return "(" + " | ".join(format_segment(fn) for fn in f.factors) + ")"


def system_from_config(config: dict) -> ProductSystem:
    factors = [FactorSystem([Fraction(str(h)) for h in entry.get("H", [])])
               for entry in config["factors"]]
    matrix = config.get("action_matrix")
    if matrix is not None:
        matrix = [[Fraction(str(c)) for c in row] for row in matrix]
    return ProductSystem(factors, matrix)
