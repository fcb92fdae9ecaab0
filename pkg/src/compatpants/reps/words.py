"""Free-group words over the standard surface generators.

Letters are nonzero integers: ``a_i`` is ``2i-1``, ``b_i`` is ``2i`` and a
negative letter denotes the inverse generator.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

Letters = tuple[int, ...]


def a(i: int) -> int:
    return 2 * i - 1


def b(i: int) -> int:
    return 2 * i


def reduce_letters(w: Iterable[int]) -> Letters:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse_letters(w: Sequence[int]) -> Letters:
    return tuple(-x for x in reversed(w))


def cyclic_reduce(w: Sequence[int]) -> Letters:
    w = reduce_letters(w)
    lo, hi = 0, len(w)
    while hi - lo > 1 and w[lo] == -w[hi - 1]:
        lo += 1
        hi -= 1
    return w[lo:hi]


def are_conjugate(u: Sequence[int], v: Sequence[int]) -> bool:
    """Conjugacy in the free group: cyclic reductions agree up to rotation."""
    u, v = cyclic_reduce(u), cyclic_reduce(v)
    if len(u) != len(v):
        return False
    if not u:
        return True
    doubled = u + u
    return any(doubled[i:i + len(u)] == v for i in range(len(u)))


def substitute(w: Sequence[int], images: Mapping[int, Sequence[int]]) -> Letters:
    """Apply the endomorphism ``x -> images[x]`` to a word."""
    out: list[int] = []
    for x in w:
        out.extend(images[x] if x > 0 else inverse_letters(images[-x]))
    return reduce_letters(out)


def commutator_letters(u: Sequence[int], v: Sequence[int]) -> Letters:
    return reduce_letters(tuple(u) + tuple(v) + inverse_letters(u) + inverse_letters(v))


def relator_letters(g: int) -> Letters:
    out: Letters = ()
    for i in range(1, g + 1):
        out = reduce_letters(out + commutator_letters((a(i),), (b(i),)))
    return out


def abelianize(w: Sequence[int], g: int) -> tuple[int, ...]:
    v = [0] * (2 * g)
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


def dehn_reduce(w: Sequence[int], g: int) -> Letters:
    """Shorten ``w`` with Dehn's algorithm for the genus ``g`` surface group.

    The standard relator satisfies small cancellation C'(1/6) once ``g >= 2``,
    so the result is empty exactly when ``w`` is trivial in the group.
    """
    if g < 2:
        raise ValueError("Dehn's algorithm needs genus at least 2")
    r = relator_letters(g)
    n = len(r)
    rotations = []
    for base in (r, inverse_letters(r)):
        rotations += [base[i:] + base[:i] for i in range(n)]
    half = n // 2
    w = reduce_letters(w)
    changed = True
    while changed:
        changed = False
        for rot in rotations:
            for length in range(n, half, -1):
                piece = rot[:length]
                for i in range(len(w) - length + 1):
                    if w[i:i + length] == piece:
                        w = reduce_letters(w[:i] + inverse_letters(rot[length:]) + w[i + length:])
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return w


def is_trivial(w: Sequence[int], g: int) -> bool:
    """Word problem in the surface group of genus ``g >= 2``."""
    return not dehn_reduce(w, g)


_TOKEN = re.compile(r"([ab])(\d+)(\^-1|')?")


def _letter_name(x: int) -> str:
    i = (abs(x) + 1) // 2
    base = ("a" if abs(x) % 2 == 1 else "b") + str(i)
    return base if x > 0 else base + "^-1"


@dataclass(frozen=True)
class Word:
    """A freely reduced word in ``a_1, b_1, ..., a_g, b_g``."""

    letters: Letters = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", reduce_letters(self.letters))

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse strings such as ``"a1 b1 a1^-1"`` or ``"a1*b2'"``."""
        cleaned = text.replace("*", " ").strip()
        if cleaned in ("", "1"):
            return cls(())
        letters = []
        pos = 0
        compact = cleaned.replace(" ", "")
        while pos < len(compact):
            m = _TOKEN.match(compact, pos)
            if not m:
                raise ValueError(f"cannot parse word {text!r} at {compact[pos:]!r}")
            idx = int(m.group(2))
            if idx < 1:
                raise ValueError(f"generator index must be positive in {text!r}")
            x = a(idx) if m.group(1) == "a" else b(idx)
            letters.append(-x if m.group(3) else x)
            pos = m.end()
        return cls(tuple(letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(inverse_letters(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def genus_needed(self) -> int:
        return max(((abs(x) + 1) // 2 for x in self.letters), default=0)

    def __str__(self) -> str:
        return " ".join(_letter_name(x) for x in self.letters) or "1"


def commutator(u: Word, v: Word) -> Word:
    return Word(commutator_letters(u.letters, v.letters))


def relator(g: int) -> Word:
    return Word(relator_letters(g))
