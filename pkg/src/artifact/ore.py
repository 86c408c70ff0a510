"""Generic ore operations derived from a small set of instance primitives.

An :class:`OreInstance` supplies the identity, meet, concatenation,
involution, admissibility, length, prefix removal and an upper-bound
witness.  Everything else (joins, orthogonality, parallel transport, faces,
the group product, medians, the metric, intervals and rank) is computed here
in the same way for every instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .lambda_values import LambdaValue, compare

Element = Any


class OreError(ValueError):
    """Base class for precondition failures in ore operations."""


class NotAFaceError(OreError):
    pass


class NotOrthogonalError(OreError):
    pass


class InadmissibleError(OreError):
    pass


class FamilyTooLargeError(OreError):
    pass


@dataclass(frozen=True)
class OreInstance:
    """Capability record for one ore.

    ``strip_prefix(y, x)`` must return ``z`` with ``y = x □ z`` when
    ``x ⪯ y`` (it may assume that precondition).  ``upper_bound(f, g)``
    returns some common upper bound of ``f`` and ``g`` or None when there is
    none; joins are then built from it by meets of inverted tails.
    """

    name: str
    identity: Element
    meet: Callable[[Element, Element], Element]
    concat: Callable[[Element, Element], Element]
    invert: Callable[[Element], Element]
    is_admissible: Callable[[Element], bool]
    length: Callable[[Element], LambdaValue]
    strip_prefix: Callable[[Element, Element], Element]
    upper_bound: Callable[[Element, Element], Optional[Element]]
    format: Callable[[Element], str] = field(default=str)

    # -- order ------------------------------------------------------------

    def leq(self, f: Element, g: Element) -> bool:
        return self.meet(f, g) == f

    def meet_all(self, *elements: Element) -> Element:
        out = elements[0]
        for e in elements[1:]:
            out = self.meet(out, e)
        return out

    def join(self, f: Element, g: Element) -> Optional[Element]:
        """Least upper bound of ``f`` and ``g``, or None if unbounded.

        With a witness ``z`` above both, put ``a = z∹f``, ``b = z∹g`` and
        ``c = a⁻¹ ∧ b⁻¹``.  Then ``z = f □ (a⁻¹∹c)⁻¹ □ c⁻¹`` and the join is
        ``f □ (a⁻¹∹c)⁻¹``.
        """
        z = self.upper_bound(f, g)
        if z is None:
            return None
        a = self.strip_prefix(z, f)
        b = self.strip_prefix(z, g)
        a_inv = self.invert(a)
        c = self.meet(a_inv, self.invert(b))
        return self.concat(f, self.invert(self.strip_prefix(a_inv, c)))

    def join_all(self, *elements: Element) -> Optional[Element]:
        out = elements[0]
        for e in elements[1:]:
            out = self.join(out, e)
            if out is None:
                return None
        return out

    def is_orthogonal(self, f: Element, g: Element) -> bool:
        return self.meet(f, g) == self.identity and self.join(f, g) is not None

    # -- faces and transport ------------------------------------------------

    def face_left(self, y: Element, x: Element) -> Element:
        """``y ∹ x``: the ``z`` with ``y = x □ z``."""
        if not self.leq(x, y):
            raise NotAFaceError(f"{self.format(x)} is not a prefix of {self.format(y)}")
        return self.strip_prefix(y, x)

    def face_right(self, y: Element, z: Element) -> Element:
        """``y ∸ z``: the ``x`` with ``y = x □ z``."""
        y_inv, z_inv = self.invert(y), self.invert(z)
        if not self.leq(z_inv, y_inv):
            raise NotAFaceError(f"{self.format(z)} is not a suffix of {self.format(y)}")
        return self.invert(self.strip_prefix(y_inv, z_inv))

    def transport(self, y: Element, x: Element) -> Element:
        """Parallel transport: the ``x'`` with ``y ∨ x = y □ x'``."""
        if self.meet(y, x) != self.identity:
            raise NotOrthogonalError("transport needs orthogonal inputs (meet is not id)")
        j = self.join(y, x)
        if j is None:
            raise NotOrthogonalError("transport needs orthogonal inputs (no join)")
        return self.strip_prefix(j, y)

    # -- the extracted group ------------------------------------------------

    def require_admissible(self, *elements: Element) -> None:
        for e in elements:
            if not self.is_admissible(e):
                raise InadmissibleError(f"{self.format(e)} is not admissible")

    def star(self, f: Element, g: Element) -> Element:
        """Group product ``(f ∸ h⁻¹) □ (g ∹ h)`` with ``h = f⁻¹ ∧ g``."""
        self.require_admissible(f, g)
        return self._star(f, g)

    def _star(self, f: Element, g: Element) -> Element:
        h = self.meet(self.invert(f), g)
        return self.concat(self.face_right(f, self.invert(h)), self.strip_prefix(g, h))

    def star_all(self, *elements: Element) -> Element:
        out = self.identity
        for e in elements:
            out = self.star(out, e)
        return out

    def power(self, f: Element, k: int) -> Element:
        base = f if k >= 0 else self.invert(f)
        out = self.identity
        for _ in range(abs(k)):
            out = self.star(out, base)
        return out

    def median(self, a: Element, b: Element, c: Element) -> Element:
        self.require_admissible(a, b, c)
        m = self.join_all(self.meet(a, b), self.meet(b, c), self.meet(a, c))
        if m is None:
            raise OreError("pairwise meets have no common upper bound")
        return m

    def distance(self, f: Element, g: Element) -> LambdaValue:
        self.require_admissible(f, g)
        return self.length(self._star(self.invert(f), g))

    def in_interval(self, c: Element, a: Element, b: Element) -> bool:
        self.require_admissible(a, b, c)
        c_inv = self.invert(c)
        return self.meet(self._star(c_inv, a), self._star(c_inv, b)) == self.identity

    def rank_of_family(self, family: Sequence[Element], limit: int = 16) -> int:
        """Size of the largest pairwise orthogonal subfamily (exhaustive)."""
        family = list(dict.fromkeys(family))
        if len(family) > limit:
            raise FamilyTooLargeError(f"family has {len(family)} elements, limit is {limit}")
        if any(f == self.identity for f in family):
            raise OreError("rank families must not contain the identity")
        n = len(family)
        orth = [[i != j and self.is_orthogonal(family[i], family[j]) for j in range(n)] for i in range(n)]
        best = 0
        for mask in range(1, 1 << n):
            members = [i for i in range(n) if mask >> i & 1]
            if len(members) <= best:
                continue
            if all(orth[i][j] for i, j in itertools.combinations(members, 2)):
                best = len(members)
        return best


# ---------------------------------------------------------------------------
# Axiom checking


@dataclass
class AxiomReport:
    """Pass/fail record per axiom with a few counterexamples each."""

    instance: str
    checked: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)
    max_examples: int = 5

    def tick(self, axiom: str, ok: bool, detail: Callable[[], str]) -> None:
        self.checked[axiom] = self.checked.get(axiom, 0) + 1
        self.failures.setdefault(axiom, [])
        if not ok and len(self.failures[axiom]) < self.max_examples:
            self.failures[axiom].append(detail())
        elif not ok:
            self.failures[axiom].append(None)

    @property
    def passed(self) -> bool:
        return not any(self.failures.values())

    def failed_axioms(self) -> list[str]:
        return sorted(k for k, v in self.failures.items() if v)

    def as_dict(self) -> dict:
        return {
            "instance": self.instance,
            "passed": self.passed,
            "axioms": {
                k: {"checked": self.checked[k], "failures": len(self.failures[k]),
                    "examples": [e for e in self.failures[k] if e is not None]}
                for k in sorted(self.checked)
            },
        }


def check_ore_axioms(
    ore: OreInstance,
    samples: Sequence[Element],
    *,
    max_pairs: Optional[int] = None,
    max_triples: int = 2000,
    rng=None,
) -> AxiomReport:
    """Evaluate O1 to O6 and the cube identities over tuples of ``samples``.

    Pairs are exhaustive unless ``max_pairs`` is set; triples and quadruples
    are drawn with ``rng`` (a ``random.Random``) when there are too many.
    Failures are recorded in the report, never raised.
    """
    import random

    rng = rng or random.Random(0)
    fmt = ore.format
    idt = ore.identity
    samples = list(samples)
    admissible = [s for s in samples if ore.is_admissible(s)]
    report = AxiomReport(ore.name)

    pairs = [(f, g) for f in samples for g in samples]
    if max_pairs is not None and len(pairs) > max_pairs:
        pairs = rng.sample(pairs, max_pairs)

    def triples(pool, k=max_triples):
        if not pool:
            return []
        return [tuple(rng.choice(pool) for _ in range(3)) for _ in range(k)]

    # O1: meet semilattice with bottom
    for f in samples:
        report.tick("O1", ore.leq(idt, f) and ore.leq(f, f) and ore.meet(f, f) == f,
                    lambda: f"id/reflexivity fails at {fmt(f)}")
    for f, g in pairs:
        m = ore.meet(f, g)
        ok = ore.leq(m, f) and ore.leq(m, g) and m == ore.meet(g, f)
        if ore.leq(f, g) and ore.leq(g, f):
            ok = ok and f == g
        report.tick("O1", ok, lambda: f"meet of {fmt(f)}, {fmt(g)} is not a symmetric lower bound")
    for f, g, h in triples(samples):
        ok = True
        if ore.leq(h, f) and ore.leq(h, g):
            ok = ore.leq(h, ore.meet(f, g))
        if ore.leq(f, g) and ore.leq(g, h):
            ok = ok and ore.leq(f, h)
        report.tick("O1", ok, lambda: f"glb/transitivity fails at {fmt(f)}, {fmt(g)}, {fmt(h)}")

    # O2: cancellative monoid with involution
    for f in samples:
        ok = (ore.concat(f, idt) == f and ore.concat(idt, f) == f
              and ore.invert(ore.invert(f)) == f)
        report.tick("O2", ok, lambda: f"identity or involution fails at {fmt(f)}")
    for f, g in pairs:
        fg = ore.concat(f, g)
        ok = (ore.invert(fg) == ore.concat(ore.invert(g), ore.invert(f))
              and ore.strip_prefix(fg, f) == g and ore.face_right(fg, g) == f
              and compare(ore.length(fg), ore.length(f) + ore.length(g)) == 0)
        report.tick("O2", ok, lambda: f"anti-homomorphism or cancellation fails at {fmt(f)}, {fmt(g)}")
    for f, g, h in triples(samples):
        ok = ore.concat(ore.concat(f, g), h) == ore.concat(f, ore.concat(g, h))
        report.tick("O2", ok, lambda: f"associativity fails at {fmt(f)}, {fmt(g)}, {fmt(h)}")

    # O3: prefix order agrees with divisibility
    for f, g in pairs:
        ok = ore.leq(f, ore.concat(f, g))
        if ok and ore.leq(f, g):
            ok = ore.concat(f, ore.strip_prefix(g, f)) == g
        report.tick("O3", ok, lambda: f"prefix/divisibility mismatch at {fmt(f)}, {fmt(g)}")

    # O4: median semilattice on admissible elements
    for a, b, c in triples(admissible):
        x = rng.choice(admissible)
        left = ore.join_all(ore.meet_all(x, a, b), ore.meet_all(x, b, c), ore.meet_all(x, a, c))
        m = ore.join_all(ore.meet(a, b), ore.meet(b, c), ore.meet(a, c))
        ok = m is not None and left is not None and left == ore.meet(x, m)
        report.tick("O4", ok, lambda: f"distributivity fails at x={fmt(x)}, {fmt(a)}, {fmt(b)}, {fmt(c)}")

    # O5 and O6 on orthogonal pairs
    for x, y in pairs:
        if not ore.is_orthogonal(x, y):
            continue
        j = ore.join(x, y)
        y_t = ore.strip_prefix(j, x)
        x_t = ore.strip_prefix(j, y)
        if ore.is_admissible(x) and ore.is_admissible(y_t):
            report.tick("O5", ore.is_admissible(y), lambda: f"O5 fails at {fmt(x)}, {fmt(y)}")
        if not (ore.is_admissible(x) and ore.is_admissible(y)):
            continue
        ok = ore.is_admissible(x_t) and ore.is_admissible(y_t)
        x_inv, y_inv = ore.invert(x), ore.invert(y)
        ok = ok and ore.is_orthogonal(x_inv, y_t) and ore.is_orthogonal(y_inv, x_t)
        if ok:
            lhs = ore.join(x_inv, y_t)
            ok = (lhs == ore.concat(x_inv, y) == ore.concat(y_t, ore.invert(x_t))
                  and ore.transport(x_inv, y_t) == y)
        report.tick("O6", ok, lambda: f"O6 fails at {fmt(x)}, {fmt(y)}")

    # cube identities on pairwise orthogonal admissible triples
    cube_candidates = [(a, b) for a, b in pairs
                       if a != idt and b != idt and ore.is_admissible(a) and ore.is_admissible(b)
                       and ore.is_orthogonal(a, b)]
    if cube_candidates:
        for _ in range(min(max_triples, 20 * len(cube_candidates))):
            a, b = rng.choice(cube_candidates)
            c = rng.choice(admissible)
            if c in (idt, a, b) or not (ore.is_orthogonal(a, c) and ore.is_orthogonal(b, c)):
                continue
            report.tick("cube", cube_identities_hold(ore, a, b, c),
                        lambda: f"cube identity fails at {fmt(a)}, {fmt(b)}, {fmt(c)}")
    return report


def cube_identities_hold(ore: OreInstance, a: Element, b: Element, c: Element) -> bool:
    """The three transport equalities for a pairwise orthogonal triple."""
    T = ore.transport
    try:
        return (
            T(T(c, b), T(c, a)) == T(T(b, c), T(b, a))
            and T(T(a, b), T(a, c)) == T(T(b, a), T(b, c))
            and T(T(c, a), T(c, b)) == T(T(a, c), T(a, b))
        )
    except NotOrthogonalError:
        return False
