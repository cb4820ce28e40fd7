import dataclasses
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings

from conftest import words
from setcong.errors import FallbacksExhausted, IdentityInput, PreconditionFailed
from setcong.finite import SHIFT_SYSTEM, FiniteFamily, Sat, search_family
from setcong.sphere import (
    RotMat,
    fixed_axis,
    realize,
    shortest_relation,
    standard_free_rotations,
    standard_generators,
    verify_realization,
    word_to_matrix,
)
from setcong.systems import CongruenceSystem, Statement
from setcong.words import IDENTITY, CosetSpace, ball, multiply

SIGMA, RHO = standard_free_rotations()
Z_SYSTEM = CongruenceSystem(3, (Statement.cong({1}, {2}), Statement.cong({1}, {3}), Statement.cong({1, 2}, {1, 3})))
Z_FAMILY = FiniteFamily.of({(1, 1)}, {(1,)}, {(1, 1, 1)})
Z_WIT = ((-1,), (1,), (1,))
COSET_SYSTEM = CongruenceSystem(3, (Statement.cong({1}, {3}), Statement.cong({3}, {2}), Statement.cong({1, 3}, {1, 2})))
COSET_FAMILY = FiniteFamily.of({IDENTITY}, {(1, 2)}, {(2,)}, coset=CosetSpace(2, (1,)))
COSET_WIT = ((2,), (1,), (1,))


def _sym(M: RotMat) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in r] for r in M.rows])


def _sym_word(w):
    out = sympy.eye(3)
    gens = [_sym(SIGMA), _sym(RHO)]
    for a in w:
        g = gens[abs(a) - 1]
        out = out * (g if a > 0 else g.inv())
    return out


def test_standard_pair():
    for M in (SIGMA, RHO):
        assert M.T @ M == RotMat.identity() and M.det() == 1 and M.is_rotation()
    assert SIGMA @ (0, 0, 1) == (0, 0, 1)


def test_no_short_relation():
    assert shortest_relation(8) is None


def test_no_short_relation_exact_route():
    # independent exact route over the whole ball of radius 5
    eye = RotMat.identity()
    assert all(word_to_matrix(w, (SIGMA, RHO)) != eye for w in ball(2, 5)[1:])


def test_word_to_matrix_examples():
    assert word_to_matrix(IDENTITY, (SIGMA, RHO)) == RotMat.identity()
    assert word_to_matrix((1, -1), (SIGMA, RHO)) == RotMat.identity()
    sr = word_to_matrix((1, 2), (SIGMA, RHO))
    assert _sym(sr) == _sym(SIGMA) * _sym(RHO)
    assert all(v.denominator in (1, 5, 25) for r in sr.rows for v in r)
    with pytest.raises(ValueError):
        word_to_matrix((3,), (SIGMA, RHO))


@settings(max_examples=60, deadline=None)
@given(words(2, 6), words(2, 6))
def test_homomorphism_matches_sympy(u, v):
    gens = (SIGMA, RHO)
    M = word_to_matrix(multiply(u, v), gens)
    assert M == word_to_matrix(u, gens) @ word_to_matrix(v, gens)
    assert _sym(M) == _sym_word(u) * _sym_word(v)
    assert M.is_rotation()


def test_generators_for_larger_rank():
    gens = standard_generators(3)
    assert len(gens) == 3 and all(g.is_rotation() for g in gens)
    assert all(word_to_matrix(w, gens) != RotMat.identity() for w in ball(3, 3)[1:])


def test_fixed_axis_examples():
    assert fixed_axis(SIGMA) == (0, 0, 1)
    assert fixed_axis(RHO) == (1, 0, 0)
    M = word_to_matrix((1, 2), (SIGMA, RHO))
    assert fixed_axis(M) == (2, 1, 2)
    with pytest.raises(IdentityInput):
        fixed_axis(RotMat.identity())


def test_fixed_axis_random_words():
    rng = random.Random(3)
    pool = ball(2, 5)[1:]
    for w in rng.sample(pool, 50):
        M = word_to_matrix(w, (SIGMA, RHO))
        v = fixed_axis(M)
        assert M @ v == tuple(Fraction(x) for x in v) and any(v)
        # sympy nullspace of M - I is one-dimensional and parallel to v
        ns = (_sym(M) - sympy.eye(3)).nullspace()
        assert len(ns) == 1 and ns[0].cross(sympy.Matrix(v)) == sympy.zeros(3, 1)


def test_realize_z_example():
    real = realize(Z_FAMILY, Z_WIT, Z_SYSTEM)
    assert real.base_point == (3, 4, 12)
    assert real.epsilon_sq > 0
    assert verify_realization(real, Z_WIT, Z_SYSTEM)
    x0 = real.base_point
    assert real.points[(1,)] == SIGMA @ x0
    assert len(set(real.points.values())) == 3
    data = real.to_json()
    assert data["base_point"] == ["3", "4", "12"] and data["epsilon_sq"] == str(real.epsilon_sq)


def test_realize_coset_example():
    real = realize(COSET_FAMILY, COSET_WIT, COSET_SYSTEM)
    assert real.base_point == (0, 0, 1)
    assert real.points[IDENTITY] == (0, 0, 1)
    assert len(set(real.points.values())) == 3
    assert real.epsilon_sq > 0
    assert verify_realization(real, COSET_WIT, COSET_SYSTEM)


def test_realization_perturbation_fails():
    real = realize(Z_FAMILY, Z_WIT, Z_SYSTEM)
    p = real.points[(1,)]
    moved = dict(real.points)
    moved[(1,)] = (p[0] + 1, p[1], p[2])
    assert not verify_realization(dataclasses.replace(real, points=moved), Z_WIT, Z_SYSTEM)


def test_empty_family_realization():
    empty = FiniteFamily.of(set(), set(), set(), m=1)
    real = realize(empty, Z_WIT, Z_SYSTEM)
    assert real.points == {} and real.epsilon_sq is None
    assert verify_realization(real, Z_WIT, Z_SYSTEM)


def test_realize_rejects_bad_input():
    with pytest.raises(PreconditionFailed):
        realize(Z_FAMILY, ((1,), (1,), (1,)), Z_SYSTEM)
    with pytest.raises(FallbacksExhausted):
        # sigma fixes (0,0,1), so all powers of sigma land on one point
        realize(Z_FAMILY, Z_WIT, Z_SYSTEM, base_points=[(0, 0, 1)])


@settings(max_examples=30, deadline=None)
@given(words(2, 2), words(2, 2))
def test_realization_soundness_from_search(rho, sigma):
    res = search_family(SHIFT_SYSTEM, (rho, sigma), 2, m=2)
    if isinstance(res, Sat):
        real = realize(res.family, (rho, sigma), SHIFT_SYSTEM)
        assert verify_realization(real, (rho, sigma), SHIFT_SYSTEM)
