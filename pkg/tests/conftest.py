from __future__ import annotations

import random

import numpy as np

from hypothesis import strategies as st
from scipy.optimize import linprog

from setcong.systems import CongruenceSystem, Statement, to_mask
from setcong.words import reduce_word

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def random_system(
    rng: random.Random,
    max_r: int = 4,
    max_statements: int = 3,
    proper: bool = True,
    mixed: bool = True,
    mode: str = "partition",
) -> CongruenceSystem:
    r = rng.randint(2, max_r)
    full = list(range(1, r + 1))

    def side():
        lo, hi = (1, r - 1) if proper else (0, r)
        return frozenset(rng.sample(full, rng.randint(lo, hi)))

    stmts = []
    for _ in range(rng.randint(1, max_statements)):
        kind = "subcongruence" if mixed and rng.random() < 0.4 else "congruence"
        stmts.append(Statement(kind, side(), side()))
    return CongruenceSystem(r, tuple(stmts), mode)


def words(m: int = 2, max_size: int = 8):
    letter = st.integers(1, m).flatmap(lambda i: st.sampled_from([i, -i]))
    return st.lists(letter, max_size=max_size).map(reduce_word)


@st.composite
def systems(draw, max_r: int = 4, max_statements: int = 4, mixed: bool = True):
    r = draw(st.integers(1, max_r))
    side = st.frozensets(st.integers(1, r))
    kinds = ["congruence", "subcongruence"] if mixed else ["congruence"]
    stmts = draw(
        st.lists(st.builds(Statement, st.sampled_from(kinds), side, side), max_size=max_statements)
    )
    return CongruenceSystem(r, tuple(stmts), draw(st.sampled_from(["partition", "family"])))


def balanced_system(rng: random.Random) -> tuple[CongruenceSystem, list[int]]:
    """A random congruence system balanced by integer weights mu <= 5."""
    while True:
        r = rng.randint(2, 4)
        mu = [rng.randint(1, 5) for _ in range(r)]
        subsets = [frozenset(k + 1 for k in range(r) if (mask >> k) & 1) for mask in range(1, 1 << r)]
        weight = {a: sum(mu[k - 1] for k in a) for a in subsets}
        pairs = [(a, b) for a in subsets for b in subsets if a != b and weight[a] == weight[b]]
        if pairs:
            break
    stmts = tuple(Statement.cong(*rng.choice(pairs)) for _ in range(rng.randint(1, 4)))
    return CongruenceSystem(r, stmts), mu


def scipy_lp_max(c, a_ub=(), b_ub=(), a_eq=(), b_eq=()):
    """Floating-point oracle: (status, optimum) for max c.x under the same conventions as lp_max."""
    res = linprog(
        [-v for v in c],
        A_ub=[list(r) for r in a_ub] or None,
        b_ub=list(b_ub) or None,
        A_eq=[list(r) for r in a_eq] or None,
        b_eq=list(b_eq) or None,
        bounds=(0, None),
        method="highs",
    )
    status = {0: "optimal", 2: "infeasible", 3: "unbounded"}[res.status]
    return status, (-res.fun if status == "optimal" else None)


def fixpoint_closure(rel: np.ndarray, full: int, complement_rule) -> np.ndarray:
    """Fixpoint of transitivity plus an optional complement rule on a boolean relation."""
    n = full + 1
    idx = np.arange(n)
    while True:
        old = rel.copy()
        for k in range(n):
            rel |= rel[:, k:k + 1] & rel[k:k + 1, :]
        if complement_rule is not None:
            rel |= complement_rule(rel, idx, full)
        if (rel == old).all():
            return rel


def congruence_oracle(sys, comp):
    n = sys.full + 1
    rel = np.eye(n, dtype=bool)
    for st in sys.congruences():
        a, b = to_mask(st.left), to_mask(st.right)
        rel[a, b] = rel[b, a] = True
    rule = (lambda rl, idx, full: rl[np.ix_(full ^ idx, full ^ idx)]) if comp else None
    return fixpoint_closure(rel, sys.full, rule)


def preorder_oracle(sys, comp):
    n = sys.full + 1
    idx = np.arange(n)
    rel = (idx[:, None] & ~idx[None, :]) == 0  # inclusion
    for st in sys.statements:
        a, b = to_mask(st.left), to_mask(st.right)
        rel[a, b] = True
        if st.is_congruence:
            rel[b, a] = True
    rule = (lambda rl, ix, full: rl[np.ix_(full ^ ix, full ^ ix)].T) if comp else None
    return fixpoint_closure(rel, sys.full, rule)
