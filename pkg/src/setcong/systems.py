"""Congruence systems, their deduction closures and numeric feasibility.

Index sets are frozensets over ``1..r``; internally they are bitmasks with
bit ``k - 1`` standing for index ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Literal, Optional, Sequence

import numpy as np

from . import kernels
from .errors import ArityMismatch, LimitExceeded, NotNumericallyConsistent
from .lp import independent_rows, lp_max

CONGRUENCE = "congruence"
SUBCONGRUENCE = "subcongruence"
PARTITION = "partition"
FAMILY = "family"

Kind = Literal["congruence", "subcongruence"]
Mode = Literal["partition", "family"]

CLOSURE_LIMIT = 20


def to_mask(indices: Iterable[int]) -> int:
    m = 0
    for k in indices:
        m |= 1 << (k - 1)
    return m


def from_mask(mask: int) -> frozenset[int]:
    return frozenset(k + 1 for k in range(mask.bit_length()) if (mask >> k) & 1)


@dataclass(frozen=True)
class Statement:
    kind: Kind
    left: frozenset[int]
    right: frozenset[int]

    def __post_init__(self):
        if self.kind not in (CONGRUENCE, SUBCONGRUENCE):
            raise ValueError(f"unknown statement kind {self.kind!r}")
        object.__setattr__(self, "left", frozenset(self.left))
        object.__setattr__(self, "right", frozenset(self.right))

    @classmethod
    def cong(cls, left: Iterable[int], right: Iterable[int]) -> "Statement":
        return cls(CONGRUENCE, frozenset(left), frozenset(right))

    @classmethod
    def sub(cls, left: Iterable[int], right: Iterable[int]) -> "Statement":
        return cls(SUBCONGRUENCE, frozenset(left), frozenset(right))

    @property
    def is_congruence(self) -> bool:
        return self.kind == CONGRUENCE


@dataclass(frozen=True)
class CongruenceSystem:
    r: int
    statements: tuple[Statement, ...] = ()
    mode: Mode = PARTITION

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("a system needs at least one set variable")
        if self.mode not in (PARTITION, FAMILY):
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "statements", tuple(self.statements))
        for st in self.statements:
            for k in st.left | st.right:
                if not 1 <= k <= self.r:
                    raise ValueError(f"index {k} outside 1..{self.r}")

    @property
    def full(self) -> int:
        return (1 << self.r) - 1

    def congruences(self) -> list[Statement]:
        return [s for s in self.statements if s.is_congruence]

    def with_mode(self, mode: Mode) -> "CongruenceSystem":
        return CongruenceSystem(self.r, self.statements, mode)


def is_proper(stmt: Statement, r: int) -> bool:
    full = frozenset(range(1, r + 1))
    return all(side and side != full for side in (stmt.left, stmt.right))


def _check_limit(r: int, limit: int) -> None:
    if r > limit:
        raise LimitExceeded(f"r={r} exceeds the closure limit {limit}")


# --- congruence closure ---------------------------------------------------


@dataclass(frozen=True)
class CongruenceClasses:
    """Equivalence classes of index sets; ``label[mask]`` is a class id."""

    r: int
    label: np.ndarray = field(repr=False)

    def same(self, left: Iterable[int], right: Iterable[int]) -> bool:
        return bool(self.label[to_mask(left)] == self.label[to_mask(right)])

    def classes(self) -> list[frozenset[frozenset[int]]]:
        groups: dict[int, list[int]] = {}
        for mask, lab in enumerate(self.label.tolist()):
            groups.setdefault(lab, []).append(mask)
        return [frozenset(from_mask(m) for m in g) for g in groups.values()]


def congruence_closure(
    sys: CongruenceSystem, use_complementation: bool, limit: int = CLOSURE_LIMIT
) -> CongruenceClasses:
    _check_limit(sys.r, limit)
    full = sys.full
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for st in sys.congruences():
        lm, rm = to_mask(st.left), to_mask(st.right)
        union(lm, rm)
        if use_complementation:
            union(full ^ lm, full ^ rm)
    label = np.arange(full + 1, dtype=np.int64)
    for x in parent:
        label[x] = find(x)
    return CongruenceClasses(sys.r, label)


def is_weak(sys: CongruenceSystem, limit: int = CLOSURE_LIMIT) -> bool:
    cls = congruence_closure(sys, use_complementation=True, limit=limit)
    masks = np.arange(sys.full + 1)
    return not bool(np.any(cls.label[masks] == cls.label[sys.full ^ masks]))


# --- subcongruence closure ------------------------------------------------


@dataclass(frozen=True)
class Preorder:
    """The deduced preorder on index sets: covering inclusions plus statement edges."""

    r: int
    ptr: np.ndarray = field(repr=False)
    dst: np.ndarray = field(repr=False)
    component: np.ndarray = field(repr=False)

    def leq(self, left: Iterable[int], right: Iterable[int]) -> bool:
        lm, rm = to_mask(left), to_mask(right)
        if self.component[lm] == self.component[rm]:
            return True
        return bool(self.reachable(lm)[rm])

    def reachable(self, mask: int) -> np.ndarray:
        n = 1 << self.r
        return kernels.reachable_from(n, self.r, self.ptr, self.dst, mask)

    def strict_pair_in_component(self) -> Optional[tuple[frozenset[int], frozenset[int]]]:
        """A pair (L, R) with R strictly inside L and L below R, if any."""
        comp = self.component
        for v in range(1 << self.r):
            for k in range(self.r):
                if not (v >> k) & 1 and comp[v] == comp[v | (1 << k)]:
                    return from_mask(v | (1 << k)), from_mask(v)
        return None


def _csr(n: int, edges: list[tuple[int, int]]) -> tuple[np.ndarray, np.ndarray]:
    if not edges:
        return np.zeros(n + 1, np.int64), np.zeros(0, np.int64)
    arr = np.array(sorted(set(edges)), dtype=np.int64)
    counts = np.bincount(arr[:, 0], minlength=n)
    ptr = np.zeros(n + 1, np.int64)
    np.cumsum(counts, out=ptr[1:])
    return ptr, np.ascontiguousarray(arr[:, 1])


def subcongruence_closure(
    sys: CongruenceSystem, use_complementation: bool, limit: int = CLOSURE_LIMIT
) -> Preorder:
    _check_limit(sys.r, limit)
    full = sys.full
    edges: list[tuple[int, int]] = []
    for st in sys.statements:
        lm, rm = to_mask(st.left), to_mask(st.right)
        edges.append((lm, rm))
        if st.is_congruence:
            edges.append((rm, lm))
    if use_complementation:
        edges += [(full ^ b, full ^ a) for a, b in edges]
    n = full + 1
    ptr, dst = _csr(n, edges)
    comp, _ = kernels.scc_labels(n, sys.r, ptr, dst)
    return Preorder(sys.r, ptr, dst, comp)


def is_consistent(sys: CongruenceSystem, limit: int = CLOSURE_LIMIT) -> bool:
    pre = subcongruence_closure(sys, use_complementation=sys.mode == PARTITION, limit=limit)
    return pre.strict_pair_in_component() is None


# --- numeric consistency --------------------------------------------------


@dataclass(frozen=True)
class NumericWitness:
    mu: tuple[Fraction, ...]
    extended: bool = False  # subcongruences were imposed as inequalities


def numeric_witness_ok(sys: CongruenceSystem, mu: Sequence[Fraction]) -> bool:
    if len(mu) != sys.r or any(v <= 0 for v in mu):
        return False
    for st in sys.statements:
        a = sum((mu[k - 1] for k in st.left), Fraction(0))
        b = sum((mu[k - 1] for k in st.right), Fraction(0))
        if (a != b) if st.is_congruence else (a > b):
            return False
    return True


def numeric_consistency(sys: CongruenceSystem) -> Optional[NumericWitness]:
    """Strictly positive weights balancing every statement, or None when infeasible.

    Variables are (mu_1..mu_r, delta); maximize delta with mu_k >= delta and
    sum(mu) = 1.  The system is numerically consistent iff the optimum is > 0.
    """
    r = sys.r

    def row(st: Statement) -> list[int]:
        v = [0] * (r + 1)
        for k in st.left:
            v[k - 1] += 1
        for k in st.right:
            v[k - 1] -= 1
        return v

    # homogeneous equalities: any basis of their span is equivalent
    a_eq = independent_rows([row(st) for st in sys.statements if st.is_congruence])
    b_eq = [0] * len(a_eq)
    a_eq.append([1] * r + [0])
    b_eq.append(1)
    a_ub = [row(st) for st in sys.statements if not st.is_congruence]
    extended = bool(a_ub)
    for k in range(r):
        v = [0] * (r + 1)
        v[k] = -1
        v[r] = 1
        a_ub.append(v)
    b_ub = [0] * len(a_ub)
    c = [0] * r + [1]
    res = lp_max(c, a_ub, b_ub, a_eq, b_eq)
    if res.status != "optimal" or res.value <= 0:
        return None
    return NumericWitness(res.x[:r], extended)


def integerize(mu: Sequence[Fraction]) -> tuple[int, ...]:
    fr = [Fraction(v) for v in mu]
    den = reduce(lcm, (v.denominator for v in fr), 1)
    ints = [int(v * den) for v in fr]
    g = reduce(gcd, ints, 0) or 1
    return tuple(v // g for v in ints)


# --- reductions -----------------------------------------------------------


@dataclass(frozen=True)
class ReductionMap:
    """``pi[j - 1]`` is the image of index j in 1..s."""

    s: int
    pi: tuple[int, ...]

    def __post_init__(self):
        if len(self.pi) != self.s:
            raise ValueError("pi must list one image per index 1..s")

    def preimage(self, indices: Iterable[int]) -> frozenset[int]:
        idx = set(indices)
        return frozenset(j + 1 for j, k in enumerate(self.pi) if k in idx)

    def is_onto(self, r: int) -> bool:
        return set(self.pi) == set(range(1, r + 1))

    def pushforward(self, lam: Sequence[Fraction], r: int) -> tuple[Fraction, ...]:
        mu = [Fraction(0)] * r
        for j, k in enumerate(self.pi):
            mu[k - 1] += Fraction(lam[j])
        return tuple(mu)


def check_reduction(sys1: CongruenceSystem, sys2: CongruenceSystem, rmap: ReductionMap) -> bool:
    if rmap.s != sys2.r:
        raise ArityMismatch(f"map domain has size {rmap.s}, target system has r={sys2.r}")
    if any(not 1 <= k <= sys1.r for k in rmap.pi):
        raise ArityMismatch(f"map values must lie in 1..{sys1.r}")
    present = {frozenset((st.left, st.right)) for st in sys2.congruences()}
    for st in sys1.congruences():
        lp, rp = rmap.preimage(st.left), rmap.preimage(st.right)
        # an identity image holds by reflexivity
        if lp != rp and frozenset((lp, rp)) not in present:
            return False
    return True


def reduce_to_unc(sys: CongruenceSystem) -> tuple[ReductionMap, int]:
    wit = numeric_consistency(sys)
    if wit is None:
        raise NotNumericallyConsistent("no strictly positive weights balance the system")
    counts = integerize(wit.mu)
    pi = tuple(k + 1 for k, c in enumerate(counts) for _ in range(c))
    s = len(pi)
    return ReductionMap(s, pi), s


def _equal_size_pairs(n: int, sizes: Iterable[int]) -> list[Statement]:
    out = []
    for k in sizes:
        subsets = list(combinations(range(1, n + 1), k))
        for a, b in combinations(subsets, 2):
            out.append(Statement.cong(a, b))
    return out


def make_unc(s: int, limit: int = CLOSURE_LIMIT) -> CongruenceSystem:
    """All congruences between distinct equal-size proper unions of s sets."""
    _check_limit(s, limit)
    return CongruenceSystem(s, tuple(_equal_size_pairs(s, range(1, s))))


def make_cp(r: int, limit: int = CLOSURE_LIMIT) -> CongruenceSystem:
    """All congruences between distinct unions of two of the r sets."""
    _check_limit(r, limit)
    return CongruenceSystem(r, tuple(_equal_size_pairs(r, [2])))
