"""Exact rational rotations of the sphere and point realizations of finite families.

No square roots anywhere: points are unnormalized rational vectors of a common
norm and separations are squared chordal distances relative to that norm.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Optional, Sequence

import numpy as np

from .errors import FallbacksExhausted, IdentityInput, PointCollision, PreconditionFailed
from .finite import FiniteFamily, _as_witness, sort_words, verify_family
from .systems import CongruenceSystem
from .words import Word, multiply, power, word_key

Vec = tuple[Fraction, Fraction, Fraction]

BASE_POINTS: tuple[tuple[int, int, int], ...] = (
    (3, 4, 12),
    (1, 2, 2),
    (2, 3, 6),
    (1, 4, 8),
    (4, 7, 4),
    (2, 6, 9),
    (6, 2, 3),
    (12, 4, 3),
)


@dataclass(frozen=True)
class RotMat:
    rows: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def of(cls, rows) -> "RotMat":
        return cls(tuple(tuple(Fraction(v) for v in r) for r in rows))

    @classmethod
    def identity(cls) -> "RotMat":
        return cls.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    def __matmul__(self, other):
        a = self.rows
        if isinstance(other, RotMat):
            b = other.rows
            return RotMat(tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3)))
        return tuple(sum(a[i][k] * Fraction(other[k]) for k in range(3)) for i in range(3))

    @property
    def T(self) -> "RotMat":
        return RotMat(tuple(tuple(self.rows[j][i] for j in range(3)) for i in range(3)))

    def det(self) -> Fraction:
        (a, b, c), (d, e, f), (g, h, i) = self.rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)

    def is_rotation(self) -> bool:
        return self.T @ self == RotMat.identity() and self.det() == 1


def standard_free_rotations() -> tuple[RotMat, RotMat]:
    """Rotations by the angle with cosine 3/5 about the z axis and the x axis."""
    c, s = Fraction(3, 5), Fraction(4, 5)
    sigma = RotMat.of([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    rho = RotMat.of([[1, 0, 0], [0, c, -s], [0, s, c]])
    return sigma, rho


def standard_generators(m: int) -> tuple[RotMat, ...]:
    """m rotations generating a free group: the standard pair, or conjugates rho^(sigma^k) for m >= 3."""
    sigma, rho = standard_free_rotations()
    if m <= 2:
        return (sigma, rho)[:m]
    return tuple(word_to_matrix(multiply(power((1,), k), (2,), power((-1,), k)), (sigma, rho)) for k in range(m))


def word_to_matrix(w: Word, gens: Sequence[RotMat]) -> RotMat:
    out = RotMat.identity()
    for a in w:
        if abs(a) > len(gens):
            raise ValueError(f"generator {abs(a)} not among {len(gens)} matrices")
        g = gens[abs(a) - 1]
        out = out @ (g if a > 0 else g.T)
    return out


def shortest_relation(max_len: int) -> Optional[Word]:
    """A nonempty reduced word of length <= max_len in the standard pair that is the identity, if any.

    Uses the integer matrices 5*sigma and 5*rho level by level.
    """
    sigma, rho = standard_free_rotations()
    base = {}
    for a, g in ((1, sigma), (2, rho)):
        mat = np.array([[int(5 * v) for v in r] for r in g.rows], np.int64)
        base[a], base[-a] = mat, mat.T.copy()
    eye = np.eye(3, dtype=np.int64)
    words = [()]
    mats = eye[None]
    for k in range(1, max_len + 1):
        new_words, new_mats = [], []
        for a in (1, -1, 2, -2):
            keep = [i for i, w in enumerate(words) if not (w and w[0] == -a)]
            new_words += [(a,) + words[i] for i in keep]
            new_mats.append(np.einsum("ij,njk->nik", base[a], mats[keep]))
        words, mats = new_words, np.concatenate(new_mats)
        hit = np.all(mats == 5**k * eye, axis=(1, 2))
        if hit.any():
            return words[int(np.argmax(hit))]
    return None


def fixed_axis(M: RotMat) -> tuple[int, int, int]:
    """Primitive integer vector spanning the fixed line, first nonzero coordinate positive."""
    A = [[M.rows[i][j] - (1 if i == j else 0) for j in range(3)] for i in range(3)]
    pivots = []
    row = 0
    for col in range(3):
        p = next((i for i in range(row, 3) if A[i][col] != 0), None)
        if p is None:
            continue
        A[row], A[p] = A[p], A[row]
        A[row] = [v / A[row][col] for v in A[row]]
        for i in range(3):
            if i != row and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(3) if c not in pivots]
    if not pivots:
        raise IdentityInput("the identity fixes every point")
    if len(free) != 1:
        raise ValueError("not a nontrivial rotation")
    f = free[0]
    v = [Fraction(0)] * 3
    v[f] = Fraction(1)
    for r, c in enumerate(pivots):
        v[c] = -A[r][f]
    den = reduce(lcm, (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, ints, 0)
    ints = [x // g for x in ints]
    if next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def _sq(v) -> Fraction:
    return sum(Fraction(x) * Fraction(x) for x in v)


def _dist_sq(p, q) -> Fraction:
    return sum((Fraction(a) - Fraction(b)) ** 2 for a, b in zip(p, q))


@dataclass(frozen=True)
class SphereRealization:
    base_point: Vec
    sets: tuple[tuple[Word, ...], ...]
    points: dict
    epsilon_sq: Optional[Fraction]
    gens: tuple[RotMat, ...]

    def set_points(self, indices) -> list[Vec]:
        return [self.points[x] for k in indices for x in self.sets[k - 1]]

    def to_json(self) -> dict:
        def vec(v):
            return [str(Fraction(x)) for x in v]

        return {
            "base_point": vec(self.base_point),
            "sets": [[{"element": list(x), "point": vec(self.points[x])} for x in s] for s in self.sets],
            "epsilon_sq": None if self.epsilon_sq is None else str(self.epsilon_sq),
        }


def realize(
    fam: FiniteFamily,
    wit,
    sys: CongruenceSystem,
    base_points: Sequence[Sequence[int]] = BASE_POINTS,
) -> SphereRealization:
    """Send each family element g to g.x0 for a base point x0 that separates all relevant elements."""
    wit = _as_witness(wit)
    check = verify_family(fam, wit, sys)
    if not check:
        raise PreconditionFailed("family does not satisfy the system: " + "; ".join(check.diagnostics))
    gens = standard_generators(fam.m)
    elems = fam.union()
    relevant = set(elems) | {fam.act(g, x) for g in wit for x in elems}
    if fam.coset is None:
        candidates = [tuple(Fraction(v) for v in p) for p in base_points]
    else:
        axis = tuple(Fraction(v) for v in fixed_axis(word_to_matrix(fam.coset.w, gens))) if fam.coset.w else None
        candidates = [axis, tuple(-v for v in axis)] if axis else [tuple(Fraction(v) for v in p) for p in base_points]
    failures = []
    for x0 in candidates:
        try:
            pts = _place(relevant, x0, gens)
        except PointCollision as exc:
            failures.append(str(exc))
            continue
        fam_pts = [pts[x] for x in sort_words(elems)]
        norm = _sq(x0)
        eps = None
        if len(fam_pts) >= 2:
            dmin = min(_dist_sq(p, q) for i, p in enumerate(fam_pts) for q in fam_pts[i + 1:])
            eps = dmin / norm / 5
        sets = tuple(tuple(sort_words(s)) for s in fam.sets)
        return SphereRealization(x0, sets, {x: pts[x] for x in elems}, eps, gens)
    raise FallbacksExhausted("no base point separates the family: " + "; ".join(failures))


def _place(elems, x0, gens) -> dict:
    seen: dict[Vec, Word] = {}
    out = {}
    for x in sorted(elems, key=word_key):
        p = word_to_matrix(x, gens) @ x0
        if p in seen:
            raise PointCollision(f"{seen[p]} and {x} land on the same point from base {x0}")
        seen[p] = x
        out[x] = p
    return out


def verify_realization(real: SphereRealization, wit, sys: CongruenceSystem) -> bool:
    wit = _as_witness(wit)
    pts = [tuple(p) for p in real.points.values()]
    if not pts:
        return True
    norm = _sq(real.base_point)
    if any(_sq(p) != norm for p in pts):
        return False
    if real.epsilon_sq is not None:
        for i, p in enumerate(pts):
            for q in pts[i + 1:]:
                if _dist_sq(p, q) <= 4 * real.epsilon_sq * norm:
                    return False
    elif len(pts) >= 2:
        return False
    for st, g in zip(sys.statements, wit):
        M = word_to_matrix(g, real.gens)
        img = Counter(M @ p for p in real.set_points(st.left))
        target = Counter(tuple(p) for p in real.set_points(st.right))
        if st.is_congruence and img != target:
            return False
        if not st.is_congruence and img - target:
            return False
    return True
