"""Finite families in free groups: verification, bounded search, and the
combinatorial shape predicates (connected, lines, prime, strongly prime)."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache, reduce
from itertools import product
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from . import kernels
from .errors import ArityMismatch, BudgetExceeded, EmptyFamily, NonCanonicalElement, PreconditionFailed
from .systems import CongruenceSystem, Statement
from .words import (
    IDENTITY,
    CosetSpace,
    Word,
    ball,
    coset_action,
    invert,
    is_canonical,
    letters,
    multiply,
    rank,
    word_key,
)


def sort_words(ws: Iterable[Word]) -> list[Word]:
    return sorted(ws, key=word_key)


@dataclass(frozen=True)
class FiniteFamily:
    """r pairwise-disjoint finite sets of words (or canonical coset representatives)."""

    sets: tuple[frozenset[Word], ...]
    m: int = 1
    coset: Optional[CosetSpace] = None

    def __post_init__(self):
        sets = tuple(frozenset(tuple(w) for w in s) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        seen: set[Word] = set()
        for s in sets:
            if seen & s:
                raise ValueError(f"sets are not pairwise disjoint: {sort_words(seen & s)}")
            seen |= s
        if self.coset is not None and self.coset.m != self.m:
            object.__setattr__(self, "m", self.coset.m)

    @classmethod
    def of(cls, *sets: Iterable[Word], m: Optional[int] = None, coset: Optional[CosetSpace] = None):
        sets_t = tuple(frozenset(tuple(w) for w in s) for s in sets)
        if m is None:
            m = coset.m if coset else rank(*[w for s in sets_t for w in s])
        return cls(sets_t, m, coset)

    @property
    def r(self) -> int:
        return len(self.sets)

    def union(self, indices: Optional[Iterable[int]] = None) -> frozenset[Word]:
        idx = range(1, self.r + 1) if indices is None else indices
        return frozenset().union(*(self.sets[k - 1] for k in idx))

    def is_empty(self) -> bool:
        return not any(self.sets)

    def act(self, g: Word, x: Word) -> Word:
        if self.coset is None:
            return multiply(g, x)
        return coset_action(self.coset, g, x)

    def as_lists(self) -> list[list[Word]]:
        return [sort_words(s) for s in self.sets]


@dataclass(frozen=True)
class WitnessAssignment:
    words: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(tuple(w) for w in self.words))

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.words)

    def __getitem__(self, i: int) -> Word:
        return self.words[i]

    @property
    def max_length(self) -> int:
        return max((len(w) for w in self.words), default=0)


def _as_witness(wit) -> WitnessAssignment:
    return wit if isinstance(wit, WitnessAssignment) else WitnessAssignment(tuple(wit))


@dataclass
class Verification:
    ok: bool
    diagnostics: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _image(fam: FiniteFamily, g: Word, pts: Iterable[Word]) -> frozenset[Word]:
    return frozenset(fam.act(g, x) for x in pts)


def verify_family(fam: FiniteFamily, wit, sys: CongruenceSystem) -> Verification:
    wit = _as_witness(wit)
    if len(wit) != len(sys.statements):
        raise ArityMismatch(f"{len(wit)} witnesses for {len(sys.statements)} statements")
    if fam.r != sys.r:
        raise ArityMismatch(f"family has {fam.r} sets, system has r={sys.r}")
    if fam.coset is not None:
        for x in fam.union():
            if not is_canonical(fam.coset, x):
                raise NonCanonicalElement(f"{x} is not a canonical coset representative")
    diags = []
    ok = True
    for i, (st, g) in enumerate(zip(sys.statements, wit), start=1):
        img = _image(fam, g, fam.union(st.left))
        target = fam.union(st.right)
        good = img == target if st.is_congruence else img <= target
        if not good:
            ok = False
            missing = sort_words(target - img) if st.is_congruence else []
            extra = sort_words(img - target)
            diags.append(f"statement {i}: image has extra {extra}, misses {missing}")
        else:
            diags.append(f"statement {i}: ok")
    return Verification(ok, diags)


def normalize_family(fam: FiniteFamily) -> FiniteFamily:
    """Right-translate so that the length-lex smallest element becomes the identity."""
    if fam.coset is not None:
        raise ValueError("normalization applies to group-mode families only")
    pts = fam.union()
    if not pts:
        raise EmptyFamily("cannot normalize an empty family")
    h_inv = invert(min(pts, key=word_key))
    return FiniteFamily(tuple(frozenset(multiply(x, h_inv) for x in s) for s in fam.sets), fam.m)


def theoretical_bound(m: int, L: int, r: int) -> tuple[int, int]:
    """(N, (r+1)^N): minimal solutions use only words shorter than the second value."""
    n = sum((2 * m) ** k for k in range(L + 1))
    return n, (r + 1) ** n


# --- bounded search -------------------------------------------------------


@dataclass(frozen=True)
class Sat:
    family: FiniteFamily
    nodes: int = 0


@dataclass(frozen=True)
class UnsatWithin:
    radius: int
    complete: bool = False  # True only when the search ball reaches the theoretical bound
    nodes: int = 0


@lru_cache(maxsize=16)
def _ball_tables(m: int, radius: int):
    words = ball(m, radius)
    index = {w: k for k, w in enumerate(words)}
    left = {}
    for a in letters(m):
        arr = np.full(len(words), -1, np.int64)
        for k, w in enumerate(words):
            y = w[1:] if w and w[0] == -a else (a,) + w
            arr[k] = index.get(y, -1)
        left[a] = arr
    return words, index, left


@lru_cache(maxsize=4096)
def ball_action(m: int, radius: int, g: Word) -> np.ndarray:
    """Index of g.x for each x in the ball (or -1 when it leaves the ball).

    Exact for reduced g: lengths along the letter-by-letter product first
    shrink then grow, so no intermediate leaves the ball unless the result does.
    The returned array is shared and read-only.
    """
    words, _, left = _ball_tables(m, radius)
    res = np.arange(len(words), dtype=np.int64)
    for a in reversed(g):
        nxt = left[a][np.maximum(res, 0)]
        res = np.where(res >= 0, nxt, -1)
    res.setflags(write=False)
    return res


def _identity_dead_values(sys: CongruenceSystem, wit: WitnessAssignment) -> set[int]:
    """Values no point may take because an identity witness forbids them everywhere."""
    dead: set[int] = set()
    for st, g in zip(sys.statements, wit):
        if g == IDENTITY:
            dead |= (st.left ^ st.right) if st.is_congruence else (st.left - st.right)
    return dead


def _value_mask(indices: Iterable[int]) -> int:
    m = 0
    for k in indices:
        m |= 1 << k
    return m


def search_family(
    sys: CongruenceSystem,
    wit,
    radius: int,
    m: Optional[int] = None,
    max_nodes: int = 0,
) -> Sat | UnsatWithin:
    """Backtracking search for a nonempty family over Ball(radius + max witness length).

    The first solution in the fixed order (length-lex points, values ascending)
    is returned after verification.  Raises BudgetExceeded when ``max_nodes``
    (if positive) is exhausted.
    """
    wit = _as_witness(wit)
    if len(wit) != len(sys.statements):
        raise ArityMismatch(f"{len(wit)} witnesses for {len(sys.statements)} statements")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if m is None:
        m = rank(*wit.words)
    big = radius + wit.max_length
    if len(_identity_dead_values(sys, wit)) == sys.r:
        return UnsatWithin(radius, complete=True)
    words, _, _ = _ball_tables(m, big)
    s = len(sys.statements)
    n = len(words)
    img = np.empty((s, n), np.int64)
    pre = np.empty((s, n), np.int64)
    for i, g in enumerate(wit):
        img[i] = ball_action(m, big, tuple(g))
        pre[i] = ball_action(m, big, invert(g))
    lmask = np.array([_value_mask(st.left) for st in sys.statements], np.uint32)
    rmask = np.array([_value_mask(st.right) for st in sys.statements], np.uint32)
    kind = np.array([0 if st.is_congruence else 1 for st in sys.statements], np.int64)
    if s == 0:
        img = np.zeros((0, n), np.int64)
        pre = np.zeros((0, n), np.int64)
    status, assign, nodes = kernels.family_search(img, pre, lmask, rmask, kind, sys.r + 1, max_nodes)
    if status < 0:
        raise BudgetExceeded(f"search exceeded {max_nodes} nodes")
    if status == 0:
        _, bound = theoretical_bound(m, wit.max_length, sys.r)
        return UnsatWithin(radius, complete=big >= bound - 1, nodes=int(nodes))
    sets = [set() for _ in range(sys.r)]
    for k, v in enumerate(assign.tolist()):
        if v > 0:
            sets[v - 1].add(words[k])
    fam = FiniteFamily(tuple(frozenset(x) for x in sets), m)
    check = verify_family(fam, wit, sys)
    if not check or fam.is_empty():
        raise RuntimeError("search produced a family that does not verify: " + "; ".join(check.diagnostics))
    return Sat(fam, int(nodes))


def witness_tuples(m: int, max_len: int, count: int) -> Iterator[WitnessAssignment]:
    """All tuples of ``count`` words of length <= max_len, in length-lex product order."""
    for tup in product(ball(m, max_len), repeat=count):
        yield WitnessAssignment(tup)


# --- shape predicates -----------------------------------------------------


def _components(pts: frozenset[Word], step) -> list[list[Word]]:
    """Connected components of the graph p -- step(p) restricted to pts."""
    seen: set[Word] = set()
    out = []
    for p in sort_words(pts):
        if p in seen:
            continue
        comp = [p]
        seen.add(p)
        k = 0
        while k < len(comp):
            x = comp[k]
            k += 1
            for y in step(x):
                if y in pts and y not in seen:
                    seen.add(y)
                    comp.append(y)
        out.append(sort_words(comp))
    return out


def is_connected(P: Iterable[Word]) -> bool:
    pts = frozenset(tuple(p) for p in P)
    if len(pts) <= 1:
        return True
    m = rank(*pts)
    alphabet = letters(m)
    comps = _components(pts, lambda x: [multiply((a,), x) for a in alphabet])
    return len(comps) == 1


def lines_along(P: Iterable[Word], g: Word) -> list[list[Word]]:
    """Maximal runs {g^j p} inside P, each listed from its g^-1 end."""
    pts = frozenset(tuple(p) for p in P)
    g_inv = invert(g)
    out = []
    for p in sort_words(pts):
        if multiply(g_inv, p) in pts:
            continue
        run = [p]
        while True:
            nxt = multiply(g, run[-1])
            if nxt not in pts:
                break
            run.append(nxt)
        out.append(run)
    return out


def lines(P: Iterable[Word], i: int) -> list[list[Word]]:
    return lines_along(P, (i,))


def _gcd_one(runs: list[list[Word]]) -> bool:
    return reduce(gcd, (len(r) for r in runs), 0) == 1


def is_prime(P: Iterable[Word], m: Optional[int] = None) -> bool:
    pts = frozenset(tuple(p) for p in P)
    if not pts:
        return True
    if m is None:
        m = rank(*pts)
    return all(_gcd_one(lines(pts, i)) for i in range(1, m + 1))


def is_strongly_prime(P: Iterable[Word]) -> bool:
    pts = frozenset(tuple(p) for p in P)
    cands = {multiply(s, invert(t)) for s in pts for t in pts if s != t}
    return all(_gcd_one(lines_along(pts, g)) for g in cands)


def check_forced_shift(fam: FiniteFamily, rho: Word, sigma: Word) -> bool:
    """Given rho(A1) = A3 and sigma(A1 u A3) = A1 u A2, test sigma(A3) = A1 and sigma(A1) = A2."""
    if fam.r != 3:
        raise ArityMismatch("this check needs exactly three sets")
    a1, a2, a3 = fam.sets
    if _image(fam, rho, a1) != a3:
        raise PreconditionFailed("rho(A1) != A3")
    if _image(fam, sigma, a1 | a3) != a1 | a2:
        raise PreconditionFailed("sigma(A1 u A3) != A1 u A2")
    return _image(fam, sigma, a3) == a1 and _image(fam, sigma, a1) == a2


SHIFT_SYSTEM = CongruenceSystem(3, (Statement.cong({1}, {3}), Statement.cong({1, 3}, {1, 2})))


# --- cut-and-splice -------------------------------------------------------


def _ends_with(h: Word, v: Word) -> bool:
    return len(h) >= len(v) and h[len(h) - len(v):] == v


def splice(fam: FiniteFamily, v: Word, v_long: Word) -> FiniteFamily:
    """Replace everything ending in ``v`` by what the family holds ending in ``v_long``.

    ``v_long`` must end in ``v``; h' v lands in A'_j iff h' v_long is in A_j.
    """
    if not _ends_with(v_long, v):
        raise ValueError("the longer segment must end with the shorter one")
    shift = multiply(invert(v_long), v)
    new = []
    for s in fam.sets:
        keep = {h for h in s if not _ends_with(h, v)}
        moved = {multiply(a, shift) for a in s}
        keep |= {h for h in moved if _ends_with(h, v)}
        new.append(frozenset(keep))
    return FiniteFamily(tuple(new), fam.m)


def _profile(fam: FiniteFamily, v: Word, probes: list[Word]) -> tuple[int, ...]:
    where = {x: k + 1 for k, s in enumerate(fam.sets) for x in s}
    return tuple(where.get(multiply(z, v), 0) for z in probes)


@dataclass(frozen=True)
class SpliceFinding:
    v: Word
    v_long: Word
    family: FiniteFamily
    total_length: int


def total_length(fam: FiniteFamily) -> int:
    return sum(len(x) for x in fam.union())


def cut_and_splice_audit(fam: FiniteFamily, wit, sys: CongruenceSystem) -> list[SpliceFinding]:
    """Splices of matching suffix pairs that keep the congruences and shorten the family.

    An empty result means no single splice improves the family.
    """
    wit = _as_witness(wit)
    probes = ball(fam.m, wit.max_length)
    base = total_length(fam)
    found = []
    seen: set[tuple[Word, Word]] = set()
    for w in sort_words(fam.union()):
        suffixes = [w[len(w) - k:] if k else IDENTITY for k in range(len(w) + 1)]
        profiles = [_profile(fam, v, probes) for v in suffixes]
        for a in range(len(suffixes)):
            for b in range(a + 1, len(suffixes)):
                key = (suffixes[a], suffixes[b])
                if profiles[a] != profiles[b] or key in seen:
                    continue
                seen.add(key)
                new = splice(fam, *key)
                if new.is_empty():
                    continue
                t = total_length(new)
                if t < base and verify_family(new, wit, sys):
                    found.append(SpliceFinding(key[0], key[1], new, t))
    return found


def connected_sets(m: int, max_size: int) -> list[frozenset[Word]]:
    """Every connected set containing the identity with at most ``max_size`` elements.

    One representative per right-translation class of finite connected sets.
    """
    alphabet = letters(m)
    level = {frozenset([IDENTITY])}
    out = list(level)
    for _ in range(max_size - 1):
        nxt = set()
        for s in level:
            for x in s:
                for a in alphabet:
                    y = multiply((a,), x)
                    if y not in s:
                        nxt.add(s | {y})
        level = nxt
        out.extend(sorted(level, key=lambda s: [word_key(w) for w in sort_words(s)]))
    return out
