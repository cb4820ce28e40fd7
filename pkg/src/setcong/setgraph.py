"""The labeled set graph on nonempty proper subsets of a finite P in a free group.

Vertices are bitmasks over the length-lex ordering of P.  A label is a signed
generator; the edge from S under rho goes to
rho(S \\ E(rho)) together with E(rho^-1) when E(rho) lies inside S.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import kernels
from .errors import BudgetExceeded, LimitExceeded
from .words import Word, letters, multiply, rank, word_key

SETGRAPH_LIMIT = 12
PATH_BUDGET = 50_000_000


def _letter(rho) -> int:
    if isinstance(rho, int):
        return rho
    if len(rho) != 1:
        raise ValueError(f"{rho} is not a single signed generator")
    return rho[0]


def ends(P: Iterable[Word], rho) -> frozenset[Word]:
    pts = frozenset(tuple(p) for p in P)
    a = _letter(rho)
    return frozenset(p for p in pts if multiply((a,), p) not in pts)


@dataclass(frozen=True)
class SetGraph:
    base: tuple[Word, ...]
    labels: tuple[int, ...]
    src: np.ndarray = field(repr=False)
    dst: np.ndarray = field(repr=False)
    label: np.ndarray = field(repr=False)  # index into ``labels``
    good: np.ndarray = field(repr=False)

    @property
    def n_vertices(self) -> int:
        return (1 << len(self.base)) - 2

    @property
    def n_edges(self) -> int:
        return len(self.src)

    def subset(self, mask: int) -> frozenset[Word]:
        return frozenset(p for k, p in enumerate(self.base) if (mask >> k) & 1)

    def mask(self, S: Iterable[Word]) -> int:
        idx = {p: k for k, p in enumerate(self.base)}
        return sum(1 << idx[tuple(p)] for p in S)

    def edges(self) -> list[tuple[frozenset[Word], frozenset[Word], int, bool]]:
        return [
            (self.subset(s), self.subset(d), self.labels[l], bool(g))
            for s, d, l, g in zip(self.src.tolist(), self.dst.tolist(), self.label.tolist(), self.good.tolist())
        ]

    def edge_from(self, S: Iterable[Word], rho) -> tuple[frozenset[Word], bool] | None:
        s = self.mask(S)
        l = self.labels.index(_letter(rho))
        hit = np.nonzero((self.src == s) & (self.label == l))[0]
        if len(hit) == 0:
            return None
        e = hit[0]
        return self.subset(int(self.dst[e])), bool(self.good[e])


def build_setgraph(P: Iterable[Word], limit: int = SETGRAPH_LIMIT) -> SetGraph:
    base = tuple(sorted({tuple(p) for p in P}, key=word_key))
    n = len(base)
    if n == 0:
        raise ValueError("P must be nonempty")
    if n > limit:
        raise LimitExceeded(f"|P|={n} exceeds the set graph limit {limit}")
    idx = {p: k for k, p in enumerate(base)}
    labels = tuple(letters(rank(*base)))
    shift = np.full((len(labels), n), -1, np.int64)
    end_mask = np.zeros(len(labels), np.int64)
    for l, a in enumerate(labels):
        for k, p in enumerate(base):
            q = idx.get(multiply((a,), p), -1)
            shift[l, k] = q
            if q < 0:
                end_mask[l] |= 1 << k
    inv_pos = [labels.index(-a) for a in labels]
    ends_inv = end_mask[inv_pos]
    src, dst, lab, good = kernels.setgraph_edges(n, shift, end_mask, ends_inv)
    return SetGraph(base, labels, src, dst, lab, good)


def _csr(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(src, kind="stable")
    ptr = np.zeros(n + 1, np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=ptr[1:])
    return ptr, np.ascontiguousarray(dst[order])


def check_claim1(g: SetGraph) -> bool:
    """No bad edge lies on a cycle."""
    n = 1 << len(g.base)
    if g.n_edges == 0:
        return True
    ptr, dst = _csr(n, g.src, g.dst)
    comp, _ = kernels.scc_labels(n, 0, ptr, dst)
    bad = ~g.good
    return not bool(np.any(comp[g.src[bad]] == comp[g.dst[bad]]))


def undirected_good_edges(g: SetGraph) -> list[tuple[int, int]]:
    """Pairs of opposite good edges (S -rho-> S', S' -rho^-1-> S), one entry per pair."""
    present = set()
    for s, d, l, ok in zip(g.src.tolist(), g.dst.tolist(), g.label.tolist(), g.good.tolist()):
        if ok:
            present.add((s, d, g.labels[l]))
    out = []
    for s, d, a in sorted(present):
        if (d, s, -a) in present and (s, d, a) < (d, s, -a):
            out.append((s, d))
    return out


def check_claim2(g: SetGraph) -> bool:
    """The undirected graph of paired good edges is a forest (loops and multi-edges are cycles)."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, d in undirected_good_edges(g):
        rs, rd = find(s), find(d)
        if rs == rd:
            return False
        parent[rs] = rd
    return True


def check_claim3(g: SetGraph, length: int, budget: int = PATH_BUDGET) -> bool:
    """Every directed path with ``length`` edges has two consecutive mutually inverse labels."""
    if length <= 0:
        return True
    if g.n_edges == 0:
        return True
    nlab = len(g.labels)
    nv = 1 << len(g.base)
    inv = np.array([g.labels.index(-a) for a in g.labels], np.int64)
    # alive[e]: some non-backtracking path of the current length ends with edge e
    alive = np.ones(g.n_edges, bool)
    work = 0
    for _ in range(length - 1):
        work += g.n_edges
        if work > budget:
            raise BudgetExceeded(f"path enumeration exceeded {budget} steps")
        into = np.zeros((nv, nlab), bool)
        into[g.dst[alive], g.label[alive]] = True
        # continuing with label l is fine unless only the inverse of l arrives
        arrivals = into.sum(axis=1)
        blocked = into[g.src, inv[g.label]] & (arrivals[g.src] == 1)
        nxt = (arrivals[g.src] > 0) & ~blocked
        if not nxt.any():
            return True
        if np.array_equal(nxt, alive):
            return False
        alive = nxt
    return not alive.any()
