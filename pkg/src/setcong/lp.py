"""Exact two-phase simplex over ``Fraction`` with Bland's anti-cycling rule."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

Row = Sequence[Fraction | int]


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None


def _pivot(tab: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    piv = tab[row][col]
    tab[row] = [v / piv for v in tab[row]]
    prow = tab[row]
    for i, r in enumerate(tab):
        if i != row and r[col] != 0:
            f = r[col]
            tab[i] = [a - f * b for a, b in zip(r, prow)]
    basis[row] = col


def _run(tab, basis, obj, allowed) -> bool:
    """Maximize the objective row ``obj`` (last row holds reduced costs).

    Columns outside ``allowed`` never enter.  Returns False if unbounded.
    """
    m = len(basis)
    while True:
        col = next((j for j in allowed if tab[obj][j] < 0), None)
        if col is None:
            return True
        best = None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        _pivot(tab, basis, best[1], col)


def independent_rows(rows: Sequence[Row]) -> list[list[Fraction]]:
    """A row-echelon basis of the span of ``rows`` (exact)."""
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for r in rows:
        v = [Fraction(x) for x in r]
        for b, p in zip(basis, pivots):
            if v[p] != 0:
                f = v[p]
                v = [a - f * c for a, c in zip(v, b)]
        p = next((k for k, x in enumerate(v) if x != 0), None)
        if p is None:
            continue
        v = [x / v[p] for x in v]
        for i, b in enumerate(basis):
            if b[p] != 0:
                f = b[p]
                basis[i] = [a - f * c for a, c in zip(b, v)]
        basis.append(v)
        pivots.append(p)
    return basis


def lp_max(
    c: Row,
    a_ub: Sequence[Row] = (),
    b_ub: Row = (),
    a_eq: Sequence[Row] = (),
    b_eq: Row = (),
) -> LPResult:
    """Maximize c.x subject to a_ub x <= b_ub, a_eq x = b_eq, x >= 0."""
    n = len(c)
    rows: list[tuple[list[Fraction], Fraction, str]] = []
    for a, b in zip(a_ub, b_ub):
        rows.append(([Fraction(v) for v in a], Fraction(b), "le"))
    for a, b in zip(a_eq, b_eq):
        rows.append(([Fraction(v) for v in a], Fraction(b), "eq"))
    m = len(rows)

    # column layout: x (n) | slack/surplus (one per inequality) | artificial
    n_slack = sum(1 for _, _, k in rows if k == "le")
    need_art = []
    for a, b, k in rows:
        need_art.append(k == "eq" or b < 0)
    n_art = sum(need_art)
    width = n + n_slack + n_art
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    s_col = n
    a_col = n + n_slack
    for (a, b, k), art in zip(rows, need_art):
        row = a + [Fraction(0)] * (n_slack + n_art) + [b]
        if k == "le":
            row[s_col] = Fraction(1)
            slack = s_col
            s_col += 1
        else:
            slack = None
        if b < 0:
            row = [-v for v in row]
        if art:
            row[a_col] = Fraction(1)
            basis.append(a_col)
            a_col += 1
        else:
            basis.append(slack)
        tab.append(row)

    arts = set(range(n + n_slack, width))
    # phase 1: maximize -(sum of artificials)
    obj1 = [Fraction(0)] * (width + 1)
    for j in arts:
        obj1[j] = Fraction(1)
    for i in range(m):
        if basis[i] in arts:
            obj1 = [u - v for u, v in zip(obj1, tab[i])]
    tab.append(obj1)
    _run(tab, basis, m, range(width))
    if tab[m][-1] != 0:
        return LPResult("infeasible")
    tab.pop()

    # drive zero-level artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(basis):
        if basis[i] in arts:
            col = next((j for j in range(n + n_slack) if tab[i][j] != 0), None)
            if col is None:
                del tab[i]
                del basis[i]
                continue
            _pivot(tab, basis, i, col)
        i += 1
    m = len(basis)

    obj2 = [-Fraction(v) for v in c] + [Fraction(0)] * (width - n + 1)
    for i in range(m):
        f = obj2[basis[i]]
        if f != 0:
            obj2 = [u - f * v for u, v in zip(obj2, tab[i])]
    tab.append(obj2)
    if not _run(tab, basis, m, range(n + n_slack)):
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = tab[i][-1]
    return LPResult("optimal", tuple(x), tab[m][-1])
