"""Reachable label sets P_j(g) for the generic random model on F x N.

Statement i is witnessed by generator f_i; generators beyond the statements
carry the trivial congruence A1 ~ A1.  Labels run over U = 1..r in partition
mode and 1..r+1 in family mode, where label r+1 means "in none of the sets".
Label sets are bitmasks with bit k-1 for label k.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import ImproperStatement, TooManyStatements
from .systems import (
    PARTITION,
    CongruenceSystem,
    Mode,
    Statement,
    congruence_closure,
    from_mask,
    is_proper,
    subcongruence_closure,
    to_mask,
)
from .words import IDENTITY, Word, ball, reduce_word

TRIVIAL = Statement.cong({1}, {1})


def universe_size(sys: CongruenceSystem, mode: Mode) -> int:
    return sys.r if mode == PARTITION else sys.r + 1


def default_rank(sys: CongruenceSystem) -> int:
    return max(2, len(sys.statements))


def _padded(sys: CongruenceSystem, m: int) -> list[Statement]:
    if len(sys.statements) > m:
        raise TooManyStatements(f"{len(sys.statements)} statements need at least that many generators, got m={m}")
    return list(sys.statements) + [TRIVIAL] * (m - len(sys.statements))


def _step(st: Statement, inverse: bool, prev: int, full: int) -> int:
    lm, rm = to_mask(st.left), to_mask(st.right)
    if st.is_congruence:
        if inverse:
            lm, rm = rm, lm
        if prev & ~lm == 0:
            return rm
        if prev & lm == 0:
            return full & ~rm
        return full
    if not inverse:
        return rm if prev & ~lm == 0 else full
    return full & ~lm if prev & rm == 0 else full


class ReachTable:
    """P_j(g) for every reduced g up to a given length, built bottom-up."""

    def __init__(self, sys: CongruenceSystem, depth: int, mode: Mode = PARTITION, m: Optional[int] = None):
        self.sys = sys
        self.mode = mode
        self.m = default_rank(sys) if m is None else m
        self.stmts = _padded(sys, self.m)
        self.u = universe_size(sys, mode)
        self.full = (1 << self.u) - 1
        self.depth = depth
        self.words = ball(self.m, depth)
        table: dict[Word, tuple[int, ...]] = {IDENTITY: tuple(1 << j for j in range(self.u))}
        for w in self.words[1:]:
            a, rest = w[0], table[w[1:]]
            st = self.stmts[abs(a) - 1]
            table[w] = tuple(_step(st, a < 0, p, self.full) for p in rest)
        self.table = table

    def masks(self, g: Word) -> tuple[int, ...]:
        g = reduce_word(g)
        if g in self.table:
            return self.table[g]
        rest = self.masks(g[1:])
        a = g[0]
        return tuple(_step(self.stmts[abs(a) - 1], a < 0, p, self.full) for p in rest)

    def sets(self, g: Word) -> list[frozenset[int]]:
        return [from_mask(p) for p in self.masks(g)]


def reach(sys: CongruenceSystem, g: Word, mode: Mode = PARTITION, m: Optional[int] = None) -> list[frozenset[int]]:
    """[P_1(g), ..., P_u(g)]."""
    g = reduce_word(g)
    return ReachTable(sys, 0, mode, _rank_for(sys, g) if m is None else m).sets(g)


def _subsets(mask: int) -> Iterable[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _witnessed(masks: tuple[int, ...], r: int, congruence: bool) -> set[tuple[int, int]]:
    sets_r = (1 << r) - 1
    u = len(masks)
    out = set()
    for lm in range(1 << r):
        need = 0
        avoid = 0
        for j in range(u):
            if (lm >> j) & 1:
                need |= masks[j]
            elif congruence:
                avoid |= masks[j]
        if need & ~sets_r or need & avoid:
            continue
        for extra in _subsets(sets_r & ~need & ~avoid):
            out.add((lm, need | extra))
    return out


def witnessed_congruences(
    sys: CongruenceSystem, g: Word, mode: Mode = PARTITION, table: Optional[ReachTable] = None
) -> set[tuple[frozenset[int], frozenset[int]]]:
    masks = (table or ReachTable(sys, 0, mode, _rank_for(sys, g))).masks(g)
    return {(from_mask(a), from_mask(b)) for a, b in _witnessed(masks, sys.r, True)}


def witnessed_subcongruences(
    sys: CongruenceSystem, g: Word, mode: Mode = PARTITION, table: Optional[ReachTable] = None
) -> set[tuple[frozenset[int], frozenset[int]]]:
    masks = (table or ReachTable(sys, 0, mode, _rank_for(sys, g))).masks(g)
    return {(from_mask(a), from_mask(b)) for a, b in _witnessed(masks, sys.r, False)}


def _rank_for(sys: CongruenceSystem, g: Word) -> int:
    return max([default_rank(sys)] + [abs(a) for a in g])


@dataclass(frozen=True)
class Completeness:
    ok: bool
    checked_elements: int
    counterexample: Optional[tuple[Word, str, frozenset[int], frozenset[int]]] = None

    def __bool__(self) -> bool:
        return self.ok


def require_proper(sys: CongruenceSystem) -> None:
    for i, st in enumerate(sys.statements, start=1):
        if not is_proper(st, sys.r):
            raise ImproperStatement(
                f"statement {i} is improper; an empty or full side (as in A1 ~ {{}}) "
                "forces consequences the deduction rules cannot reach"
            )


def completeness_check(sys: CongruenceSystem, depth: int, mode: Mode = PARTITION, m: Optional[int] = None) -> Completeness:
    """Every (sub)congruence witnessed by some |g| <= depth must be deducible."""
    require_proper(sys)
    comp = mode == PARTITION
    classes = congruence_closure(sys, use_complementation=comp)
    order = subcongruence_closure(sys, use_complementation=comp)
    reach_cache: dict[int, np.ndarray] = {}

    def below(a: int, b: int) -> bool:
        if a not in reach_cache:
            reach_cache[a] = order.reachable(a)
        return bool(reach_cache[a][b])

    table = ReachTable(sys, depth, mode, m)
    for g in table.words:
        masks = table.table[g]
        for a, b in _witnessed(masks, sys.r, True):
            if classes.label[a] != classes.label[b]:
                return Completeness(False, len(table.words), (g, "congruence", from_mask(a), from_mask(b)))
        for a, b in _witnessed(masks, sys.r, False):
            if not below(a, b):
                return Completeness(False, len(table.words), (g, "subcongruence", from_mask(a), from_mask(b)))
    return Completeness(True, len(table.words))


def designated_witnessing(sys: CongruenceSystem, mode: Mode = PARTITION) -> bool:
    """Generator f_i witnesses statement i."""
    table = ReachTable(sys, 1, mode)
    for i, st in enumerate(sys.statements, start=1):
        pair = (st.left, st.right)
        found = (witnessed_congruences if st.is_congruence else witnessed_subcongruences)(sys, (i,), mode, table)
        if pair not in found:
            return False
    return True


# --- randomized model -----------------------------------------------------


@dataclass
class SampleReport:
    words: list[Word]
    labels: np.ndarray  # labels[word index, fiber], values 1..u
    statements_hold: bool
    labels_within_reach: bool
    coverage: float  # fraction of (g, j, k in P_j(g)) pairs actually observed

    @property
    def ok(self) -> bool:
        return self.statements_hold and self.labels_within_reach


def _choice_table(st: Statement, inverse: bool, u: int) -> tuple[np.ndarray, np.ndarray]:
    """Row k' lists the labels allowed at rho.x when x has label k' (1-based, padded)."""
    full = (1 << u) - 1
    opts = np.zeros((u + 1, u), np.int64)
    counts = np.zeros(u + 1, np.int64)
    for k in range(1, u + 1):
        allowed = from_mask(_step(st, inverse, 1 << (k - 1), full))
        vals = sorted(allowed)
        opts[k, : len(vals)] = vals
        counts[k] = len(vals)
    return opts, counts


def sample_model(
    sys: CongruenceSystem,
    depth: int,
    fibers: int,
    seed: int,
    mode: Mode = PARTITION,
    m: Optional[int] = None,
) -> SampleReport:
    require_proper(sys)
    table = ReachTable(sys, depth, mode, m)
    u = table.u
    words = table.words
    index = {w: k for k, w in enumerate(words)}
    rng = np.random.default_rng(seed)
    labels = np.zeros((len(words), fibers), np.int64)
    labels[0] = rng.integers(1, u + 1, size=fibers)
    choices = {}
    for i, st in enumerate(table.stmts, start=1):
        choices[i] = _choice_table(st, False, u)
        choices[-i] = _choice_table(st, True, u)
    for k, w in enumerate(words[1:], start=1):
        parent = labels[index[w[1:]]]
        opts, counts = choices[w[0]]
        pick = (rng.random(fibers) * counts[parent]).astype(np.int64)
        labels[k] = opts[parent, pick]

    holds = True
    for i, st in enumerate(sys.statements, start=1):
        lm, rm = to_mask(st.left), to_mask(st.right)
        for k, w in enumerate(words):
            y = reduce_word((i,) + w)
            if y not in index:
                continue
            a = (lm >> (labels[k] - 1)) & 1
            b = (rm >> (labels[index[y]] - 1)) & 1
            if st.is_congruence and np.any(a != b):
                holds = False
            if not st.is_congruence and np.any(a > b):
                holds = False

    within = True
    seen_pairs = 0
    total_pairs = 0
    start = labels[0]
    for k, w in enumerate(words):
        masks = table.table[w]
        for j in range(1, u + 1):
            obs = labels[k][start == j]
            allowed = masks[j - 1]
            obs_mask = int(np.bitwise_or.reduce(np.left_shift(1, obs - 1))) if obs.size else 0
            if obs_mask & ~allowed:
                within = False
            seen_pairs += bin(obs_mask & allowed).count("1")
            total_pairs += bin(allowed).count("1")
    coverage = seen_pairs / total_pairs if total_pairs else 1.0
    return SampleReport(words, labels, holds, within, coverage)
