"""Reduced words in free groups F_m.

A word is a tuple of nonzero ints: ``i`` stands for the generator f_i and
``-i`` for its inverse.  The empty tuple is the identity.  Every public
function returns reduced words.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

Word = Tuple[int, ...]

IDENTITY: Word = ()


def reduce_word(letters: Iterable[int]) -> Word:
    out: list[int] = []
    for a in letters:
        if a == 0:
            raise ValueError("0 is not a generator index")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def is_reduced(u: Sequence[int]) -> bool:
    return all(a != 0 for a in u) and all(u[k] != -u[k + 1] for k in range(len(u) - 1))


def multiply(*words: Word) -> Word:
    out: list[int] = []
    for w in words:
        for a in w:
            if out and out[-1] == -a:
                out.pop()
            else:
                out.append(a)
    return tuple(out)


def invert(u: Word) -> Word:
    return tuple(-a for a in reversed(u))


def power(u: Word, k: int) -> Word:
    if k < 0:
        u, k = invert(u), -k
    return multiply(*([u] * k))


def generator(i: int) -> Word:
    return (i,)


def rank(*words: Word) -> int:
    """Smallest m such that every word lives in F_m (at least 1)."""
    return max((abs(a) for w in words for a in w), default=1)


def letter_key(a: int) -> Tuple[int, int]:
    # f1 < f1^-1 < f2 < f2^-1 < ...
    return (abs(a), 0 if a > 0 else 1)


def word_key(u: Word):
    """Length-then-lex sort key."""
    return (len(u), tuple(letter_key(a) for a in u))


def letters(m: int) -> list[int]:
    return sorted([i for i in range(1, m + 1)] + [-i for i in range(1, m + 1)], key=letter_key)


def cyclically_reduce(u: Word) -> Tuple[Word, Word]:
    """Split ``u`` as conjugator * core * conjugator^-1 with a cyclically reduced core."""
    i, j = 0, len(u) - 1
    while i < j and u[i] == -u[j]:
        i += 1
        j -= 1
    return u[:i], u[i:j + 1]


def is_proper_power(u: Word) -> Optional[Tuple[Word, int]]:
    """Return ``(root, k)`` with ``u == root**k``, k >= 2 and root primitive, else None."""
    conj, core = cyclically_reduce(u)
    n = len(core)
    if n == 0:
        return None
    for d in range(1, n // 2 + 1):
        if n % d == 0 and core[:d] * (n // d) == core:
            root = multiply(conj, core[:d], invert(conj))
            return root, n // d
    return None


def commute(u: Word, v: Word) -> bool:
    return multiply(u, v) == multiply(v, u)


def ball(m: int, radius: int) -> list[Word]:
    """All reduced words of length <= radius over m generators, length-lex ordered."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    alphabet = letters(m)
    out: list[Word] = [IDENTITY]
    level: list[Word] = [IDENTITY]
    for _ in range(radius):
        # appending in alphabet order to a lex-sorted level keeps lex order
        level = [w + (a,) for w in level for a in alphabet if not (w and w[-1] == -a)]
        out.extend(level)
    return out


def ball_size(m: int, radius: int) -> int:
    return 1 + sum(2 * m * (2 * m - 1) ** (ell - 1) for ell in range(1, radius + 1))


@dataclass(frozen=True)
class CosetSpace:
    """Left cosets g<w> of the cyclic subgroup generated by a non-proper-power w."""

    m: int
    w: Word

    def __post_init__(self):
        if not is_reduced(self.w):
            raise ValueError(f"subgroup generator {self.w} is not reduced")
        if any(abs(a) > self.m for a in self.w):
            raise ValueError(f"subgroup generator {self.w} is not a word over {self.m} generators")
        pp = is_proper_power(self.w)
        if pp is not None:
            raise ValueError(f"subgroup generator {self.w} is a proper power ({pp[1]}th power of {pp[0]})")

    @property
    def trivial(self) -> bool:
        return self.w == IDENTITY


def coset_rep(space: CosetSpace, g: Word) -> Word:
    """Canonical representative of g<w>: shortest element, length-lex tiebreak."""
    if space.trivial:
        return g
    _, core = cyclically_reduce(space.w)
    # |g w^k| >= |k| |core| - 2|g|, so longer candidates cannot beat g itself
    bound = 2 * len(g) // len(core) + 1
    best = g
    for k in range(-bound, bound + 1):
        cand = multiply(g, power(space.w, k))
        if word_key(cand) < word_key(best):
            best = cand
    return best


def coset_action(space: CosetSpace, g: Word, c: Word) -> Word:
    return coset_rep(space, multiply(g, c))


def is_canonical(space: CosetSpace, c: Word) -> bool:
    return coset_rep(space, c) == c
