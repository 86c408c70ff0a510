"""BMW presentations, their square tables, and the subdivision tower.

A presentation has generators ``A ⊔ X`` and one positive square relator
``a x a'⁻¹ x'⁻¹`` per pair.  Every relator yields four rewriting squares
``α ξ = ξ' α'``; when these cover each of the ``4mn`` oriented pairs
exactly once, every element has a unique normal form ``(A-word)(X-word)``
and the Cayley graph is a product of two trees.

Subdivision replaces ``A`` by the points of the complete directed graph on
``A`` at distance a multiple of ``1/n`` from a vertex (likewise for ``X``)
and builds relators from cycle-subdivided σ-permutations.  An edge point is
named ``tail@e(tail,head)+k/n`` with the fraction reduced, so a point keeps
its name at every level ``m`` divisible by ``n``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

Letter = tuple  # (name, +1 or -1)
Word = tuple


class BmwError(ValueError):
    pass


class BmwSyntaxError(BmwError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class InvalidPresentationError(BmwError):
    pass


_SIMPLE = r"[A-Za-z_][A-Za-z0-9_]*"
_NAME = re.compile(rf"{_SIMPLE}(?:@e\({_SIMPLE},{_SIMPLE}\)\+\d+/\d+)?$")


def inv(letter: Letter) -> Letter:
    return (letter[0], -letter[1])


def invert_word(w: Word) -> Word:
    return tuple(inv(x) for x in reversed(w))


def format_letter(letter: Letter) -> str:
    return letter[0] if letter[1] == 1 else f"{letter[0]}^-"


def format_word(w: Word) -> str:
    return " ".join(format_letter(x) for x in w) if w else "id"


def parse_word(text: str) -> Word:
    """Parse ``a x^- b``; ``id`` or an empty string is the empty word."""
    text = text.strip()
    if text in ("", "id"):
        return ()
    out = []
    for tok in text.split():
        sign = 1
        if tok.endswith("^-"):
            tok, sign = tok[:-2], -1
        if not _NAME.match(tok):
            raise BmwError(f"bad generator {tok!r}")
        out.append((tok, sign))
    return tuple(out)


def free_reduce(w: Iterable[Letter]) -> Word:
    stack: list = []
    for x in w:
        if stack and stack[-1] == inv(x):
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


@dataclass(frozen=True)
class BmwPresentation:
    """Generators and square relators, each stored as ``(a, x, a'⁻¹, x'⁻¹)``."""

    A: tuple
    X: tuple
    relators: tuple
    edge_length: Fraction = Fraction(1)
    _sides: dict = field(init=False, repr=False, compare=False, hash=False)
    _cache: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        sides = {a: "A" for a in self.A}
        sides.update({x: "X" for x in self.X})
        object.__setattr__(self, "_sides", sides)
        object.__setattr__(self, "_cache", {})

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.X)

    def side(self, name: str) -> str:
        try:
            return self._sides[name]
        except KeyError:
            raise BmwError(f"unknown generator {name!r}") from None

    def letters(self) -> list:
        """All generators and inverses, A-side first."""
        return [(g, s) for g in self.A for s in (1, -1)] + [(g, s) for g in self.X for s in (1, -1)]

    def text(self) -> str:
        rels = ", ".join(format_word(r) for r in self.relators)
        return f"bmw{{A={','.join(self.A)};X={','.join(self.X)};R={rels};}}"


# ---------------------------------------------------------------------------
# parsing


def _split_names(body: str, offset: int) -> list:
    names, depth, cur, start = [], 0, [], offset
    for i, ch in enumerate(body + ","):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            name = "".join(cur).strip()
            if not _NAME.match(name):
                raise BmwSyntaxError(f"bad generator name {name!r}", start)
            names.append(name)
            cur, start = [], offset + i + 1
        else:
            cur.append(ch)
    return names


def _canonical_relator(word: Word, A: frozenset, X: frozenset, pos: int) -> Word:
    if len(word) != 4:
        raise BmwSyntaxError(f"relator {format_word(word)!r} must have four letters", pos)
    sides = []
    for name, _ in word:
        if name in A:
            sides.append("A")
        elif name in X:
            sides.append("X")
        else:
            raise BmwSyntaxError(f"unknown generator {name!r} in relator", pos)
    if sides[0] != sides[2] or sides[1] != sides[3] or sides[0] == sides[1]:
        raise BmwSyntaxError(f"relator {format_word(word)!r} must alternate between A and X", pos)
    if [s for _, s in word] != [1, 1, -1, -1]:
        raise BmwSyntaxError(f"relator {format_word(word)!r} is not of the form p q r^- s^-", pos)
    if sides[0] == "X":
        # x a x'^- a'^- and its inverse a' x' a^- x^- are the same relation
        word = invert_word(word)
    return word


_PRESENTATION = re.compile(r"^\s*bmw\s*\{(?P<body>.*)\}\s*$", re.S)


def parse_presentation(text: str) -> BmwPresentation:
    """Parse ``bmw{A=a,b;X=x,y;R=a x a^- y^-, ...;}``."""
    m = _PRESENTATION.match(text)
    if not m:
        raise BmwSyntaxError("expected bmw{...}", 0)
    body, base = m.group("body"), m.start("body")
    sections: dict = {}
    pos = 0
    for chunk in body.split(";"):
        here = base + pos
        pos += len(chunk) + 1
        if not chunk.strip():
            continue
        key, eq, value = chunk.partition("=")
        key = key.strip()
        if not eq or key not in ("A", "X", "R"):
            raise BmwSyntaxError(f"expected A=, X= or R=, got {chunk.strip()!r}", here)
        if key in sections:
            raise BmwSyntaxError(f"section {key} given twice", here)
        sections[key] = (value, here + len(chunk) - len(chunk.lstrip()) + len(key) + 1)
    for key in ("A", "X", "R"):
        if key not in sections:
            raise BmwSyntaxError(f"missing section {key}", base + len(body))
    A = _split_names(*sections["A"])
    X = _split_names(*sections["X"])
    names = A + X
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise BmwSyntaxError(f"duplicate generator name {dup!r}", sections["A"][1])
    a_set, x_set = frozenset(A), frozenset(X)
    rel_text, rel_pos = sections["R"]
    relators = []
    offset = 0
    for piece in _split_names_raw(rel_text):
        where = rel_pos + offset
        offset += len(piece) + 1
        if not piece.strip():
            raise BmwSyntaxError("empty relator", where)
        try:
            word = parse_word(piece)
        except BmwError as exc:
            raise BmwSyntaxError(str(exc), where) from None
        relators.append(_canonical_relator(word, a_set, x_set, where))
    return BmwPresentation(tuple(A), tuple(X), tuple(relators))


def _split_names_raw(text: str) -> list:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


PRESETS = {
    "z2": "bmw{A=a;X=x;R=a x a^- x^-;}",
    "f2xf2": "bmw{A=a,b;X=x,y;R=a x a^- x^-, a y a^- y^-, b x b^- x^-, b y b^- y^-;}",
    "swap": "bmw{A=a,b;X=x,y;R=a x a^- y^-, a y a^- x^-, b x b^- x^-, b y b^- y^-;}",
}


def preset(name: str) -> BmwPresentation:
    if name not in PRESETS:
        raise BmwError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return parse_presentation(PRESETS[name])


# ---------------------------------------------------------------------------
# validation and the square table


def relator_squares(rel: Word) -> list:
    """The four squares ``((α, ξ), (ξ', α'))`` with ``αξ = ξ'α'`` from one relator."""
    a, x, a2i, x2i = rel
    a2, x2 = inv(a2i), inv(x2i)
    # a x = x2 a2, read in all four orientations of the square
    return [
        ((a, x), (x2, a2)),
        ((inv(a2), inv(x2)), (inv(x), inv(a))),
        ((inv(a), x2), (x, inv(a2))),
        ((a2, inv(x)), (inv(x2), a)),
    ]


@dataclass
class ValidationReport:
    valid: bool
    problems: list = field(default_factory=list)
    table: Optional[dict] = None

    def as_dict(self) -> dict:
        out = {"valid": self.valid, "problems": list(self.problems)}
        if self.table is not None:
            out["table"] = {f"{format_letter(k[0])} {format_letter(k[1])}":
                            f"{format_letter(v[0])} {format_letter(v[1])}"
                            for k, v in sorted(self.table.items())}
        return out


def validate(p: BmwPresentation) -> ValidationReport:
    """Check positivity, the relator count and the uniqueness of completions."""
    problems = []
    a_set, x_set = frozenset(p.A), frozenset(p.X)
    if a_set & x_set:
        problems.append(f"A and X share {sorted(a_set & x_set)}")
    for rel in p.relators:
        try:
            _canonical_relator(rel, a_set, x_set, 0)
        except BmwSyntaxError as exc:
            problems.append(str(exc).rsplit(" at position", 1)[0])
    if problems:
        return ValidationReport(False, problems)
    if len(p.relators) != p.m * p.n:
        problems.append(f"expected {p.m * p.n} relators, found {len(p.relators)}")
    table: dict = {}
    values: dict = {}
    for rel in p.relators:
        for key, val in relator_squares(rel):
            if key in table and table[key] != val:
                problems.append(f"pair {format_letter(key[0])} {format_letter(key[1])} "
                                f"has two completions")
            elif key in table:
                problems.append(f"pair {format_letter(key[0])} {format_letter(key[1])} "
                                f"is completed twice by the same square")
            table[key] = val
            if val in values and values[val] != key:
                problems.append(f"product {format_letter(val[0])} {format_letter(val[1])} "
                                f"is reached from two pairs")
            values[val] = key
    for alpha in [(g, s) for g in p.A for s in (1, -1)]:
        for xi in [(g, s) for g in p.X for s in (1, -1)]:
            if (alpha, xi) not in table:
                problems.append(f"pair {format_letter(alpha)} {format_letter(xi)} has no completion")
    if problems:
        return ValidationReport(False, problems)
    return ValidationReport(True, [], table)


def square_table(p: BmwPresentation) -> dict:
    """``(α, ξ) -> (ξ', α')`` with ``αξ = ξ'α'``; raises if ``p`` is invalid."""
    if "table" not in p._cache:
        report = validate(p)
        if not report.valid:
            raise InvalidPresentationError("; ".join(report.problems))
        p._cache["table"] = report.table
    return p._cache["table"]


def _swap_table(p: BmwPresentation) -> dict:
    """``(ξ, α) -> (α', ξ')`` with ``ξα = α'ξ'``: moves an A-letter left."""
    if "swap" not in p._cache:
        p._cache["swap"] = {v: k for k, v in square_table(p).items()}
    return p._cache["swap"]


def sigma_perms(p: BmwPresentation) -> tuple:
    """``σ_a`` on ``X`` for each ``a`` and ``σ_x`` on ``A`` for each ``x``."""
    square_table(p)
    sigma_a = {a: {} for a in p.A}
    sigma_x = {x: {} for x in p.X}
    for a, x, a2i, x2i in p.relators:
        sigma_a[a[0]][x[0]] = x2i[0]
        sigma_x[x2i[0]][a2i[0]] = a[0]
    return sigma_a, sigma_x


# ---------------------------------------------------------------------------
# normal forms and distances


@dataclass(frozen=True)
class BmwNormalForm:
    a_word: Word
    x_word: Word

    @property
    def word(self) -> Word:
        return self.a_word + self.x_word

    @property
    def steps(self) -> int:
        return len(self.a_word) + len(self.x_word)

    def sort_key(self) -> tuple:
        return (format_word(self.a_word), format_word(self.x_word))

    def __str__(self) -> str:
        return f"({format_word(self.a_word)} | {format_word(self.x_word)})"


IDENTITY = BmwNormalForm((), ())


def multiply_letter(p: BmwPresentation, nf: BmwNormalForm, letter: Letter) -> BmwNormalForm:
    """Normal form of ``nf · letter``."""
    side = p.side(letter[0])
    if side == "X":
        x = nf.x_word
        if x and x[-1] == inv(letter):
            return BmwNormalForm(nf.a_word, x[:-1])
        return BmwNormalForm(nf.a_word, x + (letter,))
    swap = _swap_table(p)
    alpha = letter
    moved = []
    for xi in reversed(nf.x_word):
        alpha, xi2 = swap[(xi, alpha)]
        moved.append(xi2)
    a = nf.a_word
    a = a[:-1] if a and a[-1] == inv(alpha) else a + (alpha,)
    return BmwNormalForm(a, tuple(reversed(moved)))


def normal_form(p: BmwPresentation, word: Sequence[Letter]) -> BmwNormalForm:
    nf = IDENTITY
    for letter in word:
        nf = multiply_letter(p, nf, letter)
    return nf


def word_length(p: BmwPresentation, word: Sequence[Letter]) -> Fraction:
    return normal_form(p, word).steps * p.edge_length


def bmw_distance(p: BmwPresentation, g: Sequence[Letter], h: Sequence[Letter]) -> Fraction:
    return word_length(p, invert_word(tuple(g)) + tuple(h))


# ---------------------------------------------------------------------------
# balls


MAX_BALL_STEPS = 6


@dataclass
class BmwBall:
    presentation: BmwPresentation
    steps: int
    vertices: list  # normal forms in lexicographic order
    distance: dict  # normal form -> BFS step count
    edges: list  # (normal form, letter, normal form), positive letters only

    def degree(self, v: BmwNormalForm) -> int:
        return sum(1 for a, _, b in self.edges if a == v) + sum(1 for a, _, b in self.edges if b == v)


def ball(p: BmwPresentation, radius, *, max_steps: int = MAX_BALL_STEPS) -> BmwBall:
    """All elements within ``radius`` of the identity, by breadth-first search."""
    steps = Fraction(radius) / p.edge_length
    if steps.denominator != 1 or steps < 0:
        raise BmwError(f"radius must be a non-negative multiple of {p.edge_length}")
    steps = int(steps)
    if steps > max_steps:
        raise BmwError(f"radius of {steps} edge steps exceeds the cap of {max_steps}")
    letters = p.letters()
    dist = {IDENTITY: 0}
    queue = deque([IDENTITY])
    while queue:
        v = queue.popleft()
        if dist[v] == steps:
            continue
        for letter in letters:
            w = multiply_letter(p, v, letter)
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    edges = []
    for v in dist:
        for letter in letters:
            if letter[1] != 1:
                continue
            w = multiply_letter(p, v, letter)
            if w in dist:
                edges.append((v, letter, w))
    vertices = sorted(dist, key=BmwNormalForm.sort_key)
    edges.sort(key=lambda e: (e[0].sort_key(), e[1], e[2].sort_key()))
    return BmwBall(p, steps, vertices, dist, edges)


def sphere_sizes(degree: int, steps: int) -> list:
    """Sphere sizes in a regular tree: 1, d, d(d-1), ..."""
    return [1] + [degree * (degree - 1) ** (i - 1) for i in range(1, steps + 1)]


def product_ball_size(m: int, n: int, steps: int) -> int:
    """Size of an ℓ¹ ball in the product of the ``2m``- and ``2n``-regular trees."""
    sa, sx = sphere_sizes(2 * m, steps), sphere_sizes(2 * n, steps)
    return sum(sa[i] * sx[j] for i in range(steps + 1) for j in range(steps + 1 - i))


def ball_to_dot(b: BmwBall) -> str:
    index = {v: i for i, v in enumerate(b.vertices)}
    lines = ["graph bmw_ball {"]
    for v in b.vertices:
        lines.append(f'  v{index[v]} [label="{v}"];')
    for u, letter, w in b.edges:
        lines.append(f'  v{index[u]} -- v{index[w]} [label="{format_letter(letter)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subdivision


@dataclass(frozen=True, order=True)
class SubdividedPoint:
    """A vertex (``head`` is None) or a point at ``offset`` along ``e(tail, head)``."""

    tail: str
    head: Optional[str] = None
    offset: Fraction = Fraction(0)

    @property
    def is_vertex(self) -> bool:
        return self.head is None

    @property
    def home(self) -> str:
        """The vertex whose σ drives this point: itself, or the edge's head."""
        return self.tail if self.head is None else self.head

    @property
    def name(self) -> str:
        if self.head is None:
            return self.tail
        return f"{self.tail}@e({self.tail},{self.head})+{self.offset.numerator}/{self.offset.denominator}"


def point_on(tail: str, head: str, offset: Fraction) -> SubdividedPoint:
    offset = Fraction(offset)
    if offset == 0:
        return SubdividedPoint(tail)
    if not 0 < offset < 1 or tail == head:
        raise BmwError("edge points need distinct ends and an offset in (0, 1)")
    return SubdividedPoint(tail, head, offset)


_POINT = re.compile(rf"^(?P<t>{_SIMPLE})@e\((?P<t2>{_SIMPLE}),(?P<h>{_SIMPLE})\)\+(?P<k>\d+)/(?P<d>\d+)$")


def parse_point(name: str) -> SubdividedPoint:
    m = _POINT.match(name)
    if m is None:
        if not re.match(rf"^{_SIMPLE}$", name):
            raise BmwError(f"bad point name {name!r}")
        return SubdividedPoint(name)
    if m.group("t") != m.group("t2"):
        raise BmwError(f"point name {name!r} has mismatched tails")
    return point_on(m.group("t"), m.group("h"), Fraction(int(m.group("k")), int(m.group("d"))))


def subdivided_points(vertices: Sequence[str], n: int) -> list:
    out = [SubdividedPoint(v) for v in vertices]
    for t in vertices:
        for h in vertices:
            if t != h:
                out.extend(SubdividedPoint(t, h, Fraction(k, n)) for k in range(1, n))
    return out


def cycles_of(perm: dict, order: Sequence[str]) -> list:
    seen, out = set(), []
    for v in order:
        if v in seen:
            continue
        cyc = [v]
        seen.add(v)
        w = perm[v]
        while w != v:
            cyc.append(w)
            seen.add(w)
            w = perm[w]
        out.append(tuple(cyc))
    return out


def cycle_subdivide(perm: dict, vertices: Sequence[str], n: int) -> dict:
    """The permutation of subdivided points whose cycles are the subdivided cycles of ``perm``.

    A cycle ``(v0, ..., v_{k-1})`` with ``k ≥ 2`` becomes the ``nk``-cycle
    visiting, in order, the points at offsets ``0, 1/n, ..., (n-1)/n`` along
    ``e(v0, v1)``, then along ``e(v1, v2)``, and so on.  Every other point is
    fixed.
    """
    if n < 1:
        raise BmwError("subdivision level must be at least 1")
    out = {pt: pt for pt in subdivided_points(vertices, n)}
    for cyc in cycles_of(perm, vertices):
        k = len(cyc)
        if k < 2:
            continue
        seq = [point_on(cyc[i], cyc[(i + 1) % k], Fraction(j, n)) for i in range(k) for j in range(n)]
        for i, pt in enumerate(seq):
            out[pt] = seq[(i + 1) % len(seq)]
    return out


def invert_perm(perm: dict) -> dict:
    return {v: k for k, v in perm.items()}


MAX_SUBDIVISION = 4
MAX_SUBDIVIDED_ALPHABET = 4


@lru_cache(maxsize=64)
def subdivide(p: BmwPresentation, n: int) -> BmwPresentation:
    """The presentation of ``G_n`` over the level-``n`` points of both label graphs."""
    if n < 1 or n > MAX_SUBDIVISION:
        raise BmwError(f"subdivision level must be between 1 and {MAX_SUBDIVISION}")
    if p.m > MAX_SUBDIVIDED_ALPHABET or p.n > MAX_SUBDIVIDED_ALPHABET:
        raise BmwError(f"subdivision supports at most {MAX_SUBDIVIDED_ALPHABET} generators per side")
    if p.edge_length != 1:
        raise BmwError("only a base presentation can be subdivided")
    sigma_a, sigma_x = sigma_perms(p)
    ya, yx = subdivided_points(p.A, n), subdivided_points(p.X, n)
    phi_inv_a = {a: invert_perm(cycle_subdivide(sigma_a[a], p.X, n)) for a in p.A}
    phi_inv_x = {x: invert_perm(cycle_subdivide(sigma_x[x], p.A, n)) for x in p.X}
    relators = []
    for y_a in ya:
        for y_x in yx:
            x1 = phi_inv_a[y_a.home][y_x]
            a2 = phi_inv_x[y_x.home][y_a]
            relators.append(((y_a.name, 1), (x1.name, 1), (a2.name, -1), (y_x.name, -1)))
    return BmwPresentation(tuple(pt.name for pt in ya), tuple(pt.name for pt in yx),
                           tuple(relators), Fraction(1, n))


def embed(word: Sequence[Letter], n: int, m: int) -> Word:
    """``ψ_{n,m}``: replace every generator by its ``m/n``-th power."""
    if n < 1 or m % n:
        raise BmwError(f"{n} does not divide {m}")
    k = m // n
    return tuple(letter for letter in word for _ in range(k))
