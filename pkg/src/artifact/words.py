"""The word ore: all words over A ∪ A⁻¹ under concatenation and prefix order.

Its extracted group is the free group on A.  The stack-based
:func:`free_reduce_oracle` never touches the ore machinery and is used to
cross-check the group product.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional, Sequence

from .ore import OreInstance

Letter = tuple  # (generator name, +1 or -1)
Word = tuple  # tuple of letters

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def letter(name: str, sign: int = 1) -> Letter:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    return (name, sign)


def inverse_letter(x: Letter) -> Letter:
    return (x[0], -x[1])


def parse_word(text: str) -> Word:
    """Parse ``a.b^-.c``; ``id`` or an empty string is the empty word."""
    text = text.strip()
    if text in ("", "id", "ε"):
        return ()
    out = []
    for raw in text.split("."):
        raw = raw.strip()
        sign = 1
        if raw.endswith("^-"):
            raw, sign = raw[:-2], -1
        if not _NAME.match(raw):
            raise ValueError(f"bad generator {raw!r} in word {text!r}")
        out.append((raw, sign))
    return tuple(out)


def format_word(w: Word) -> str:
    if not w:
        return "id"
    return ".".join(name if sign == 1 else f"{name}^-" for name, sign in w)


def invert_word(w: Word) -> Word:
    return tuple(inverse_letter(x) for x in reversed(w))


def common_prefix(u: Word, v: Word) -> Word:
    n = 0
    for x, y in zip(u, v):
        if x != y:
            break
        n += 1
    return u[:n]


def is_freely_reduced(w: Word) -> bool:
    return all(w[i + 1] != inverse_letter(w[i]) for i in range(len(w) - 1))


def free_reduce_oracle(w: Iterable[Letter]) -> Word:
    """Freely reduce by cancelling adjacent inverse pairs with a stack."""
    stack: list[Letter] = []
    for x in w:
        if stack and stack[-1] == inverse_letter(x):
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def _strip_prefix(y: Word, x: Word) -> Word:
    return y[len(x):]


def _upper_bound(u: Word, v: Word) -> Optional[Word]:
    # Any common upper bound has both words as prefixes, so they are
    # comparable and the longer one bounds both.
    if v[: len(u)] == u:
        return v
    if u[: len(v)] == v:
        return u
    return None


def word_ops(generators: Sequence[str]) -> OreInstance:
    """The word ore over the given generator names."""
    gens = tuple(generators)
    if not gens:
        raise ValueError("the word ore needs at least one generator")
    for g in gens:
        if not _NAME.match(g):
            raise ValueError(f"bad generator name {g!r}")
    return OreInstance(
        name=f"word[{','.join(gens)}]",
        identity=(),
        meet=common_prefix,
        concat=lambda u, v: u + v,
        invert=invert_word,
        is_admissible=is_freely_reduced,
        length=len,
        strip_prefix=_strip_prefix,
        upper_bound=_upper_bound,
        format=format_word,
    )
