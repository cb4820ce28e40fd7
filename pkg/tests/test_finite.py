import random
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from conftest import words
from setcong.errors import ArityMismatch, BudgetExceeded, EmptyFamily, NonCanonicalElement, PreconditionFailed
from setcong.finite import (
    SHIFT_SYSTEM,
    FiniteFamily,
    Sat,
    UnsatWithin,
    WitnessAssignment,
    ball_action,
    check_forced_shift,
    connected_sets,
    cut_and_splice_audit,
    is_connected,
    is_prime,
    is_strongly_prime,
    lines,
    normalize_family,
    search_family,
    splice,
    theoretical_bound,
    total_length,
    verify_family,
    witness_tuples,
)
from setcong.systems import CongruenceSystem, Statement, make_cp
from setcong.words import IDENTITY, CosetSpace, ball, invert, multiply, power

F = (1,)
FI = (-1,)
Z_SYSTEM = CongruenceSystem(3, (Statement.cong({1}, {2}), Statement.cong({1}, {3}), Statement.cong({1, 2}, {1, 3})))
Z_FAMILY = FiniteFamily.of({(1, 1)}, {(1,)}, {(1, 1, 1)})
Z_WITNESS = WitnessAssignment(((-1,), (1,), (1,)))
FOUR_SET = CongruenceSystem(
    4,
    (
        Statement.cong({1}, {3}),
        Statement.cong({3}, {4}),
        Statement.cong({1, 2}, {1, 3}),
        Statement.cong({1, 3}, {1, 4}),
    ),
)


# --- oracles --------------------------------------------------------------


def _geodesic_connected(P):
    """Every vertex on the left-Cayley geodesic x -> a_n x -> ... -> y lies in P."""
    pts = set(P)
    for x in pts:
        for y in pts:
            w = multiply(y, invert(x))
            for k in range(len(w) + 1):
                if multiply(w[len(w) - k:], x) not in pts:
                    return False
    return True


def _prime_by_blocks(P, m):
    """Not prime iff some direction i and k >= 2 tile P by runs {f_i^j t : j < k}."""
    pts = frozenset(P)
    for i in range(1, m + 1):
        for k in range(2, len(pts) + 1):
            if len(pts) % k:
                continue
            for T in combinations(sorted(pts), len(pts) // k):
                blocks = [multiply(power((i,), j), t) for t in T for j in range(k)]
                if len(set(blocks)) == len(pts) and set(blocks) == pts:
                    return False
    return True


def _strongly_prime_wide(P, radius):
    pts = frozenset(P)
    for g in ball(2, radius)[1:]:
        runs = []
        for p in pts:
            if multiply(invert(g), p) in pts:
                continue
            n, x = 1, multiply(g, p)
            while x in pts:
                n, x = n + 1, multiply(g, x)
            runs.append(n)
        acc = 0
        for n in runs:
            acc = gcd(acc, n)
        if acc != 1:
            return False
    return True


# --- verification ---------------------------------------------------------


def test_z_example_verifies():
    assert verify_family(Z_FAMILY, Z_WITNESS, Z_SYSTEM)
    empty = FiniteFamily.of(set(), set(), set(), m=1)
    assert verify_family(empty, Z_WITNESS, Z_SYSTEM)
    bad = verify_family(Z_FAMILY, ((1,), (1,), (1,)), Z_SYSTEM)
    assert not bad and bad.diagnostics[0].startswith("statement 1")


def test_coset_example_verifies():
    space = CosetSpace(2, (1,))
    fam = FiniteFamily.of({IDENTITY}, {(1, 2)}, {(2,)}, coset=space)
    sys = CongruenceSystem(3, (Statement.cong({1}, {3}), Statement.cong({3}, {2}), Statement.cong({1, 3}, {1, 2})))
    assert verify_family(fam, ((2,), (1,), (1,)), sys)
    with pytest.raises(NonCanonicalElement):
        verify_family(FiniteFamily.of({(1,)}, set(), set(), coset=space), ((2,), (1,), (1,)), sys)


def test_family_validation():
    with pytest.raises(ValueError):
        FiniteFamily.of({IDENTITY}, {IDENTITY})
    with pytest.raises(ArityMismatch):
        verify_family(Z_FAMILY, ((1,),), Z_SYSTEM)


def test_normalize():
    norm = normalize_family(Z_FAMILY)
    assert norm.sets == (frozenset({(1,)}), frozenset({IDENTITY}), frozenset({(1, 1)}))
    assert verify_family(norm, Z_WITNESS, Z_SYSTEM)
    assert normalize_family(norm) == norm
    assert normalize_family(FiniteFamily.of({(1, 2)})).sets == (frozenset({IDENTITY}),)
    with pytest.raises(EmptyFamily):
        normalize_family(FiniteFamily.of(set(), m=1))


def test_theoretical_bound():
    assert theoretical_bound(1, 1, 3) == (3, 64)
    assert theoretical_bound(2, 1, 2) == (5, 243)
    assert theoretical_bound(1, 0, 1) == (1, 2)
    n, b = theoretical_bound(2, 3, 4)
    assert n == 1 + 4 + 16 + 64 and b == 5**85


# --- search ---------------------------------------------------------------


def test_search_z_example():
    res = search_family(Z_SYSTEM, Z_WITNESS, 3)
    assert isinstance(res, Sat)
    assert verify_family(res.family, Z_WITNESS, Z_SYSTEM)
    # first solution in length-lex order with values ascending, frozen from a run
    assert res.family.sets == (frozenset({(-1, -1, -1)}), frozenset({(-1, -1, -1, -1)}), frozenset({(-1, -1)}))
    norm = normalize_family(res.family)
    assert verify_family(norm, Z_WITNESS, Z_SYSTEM)
    assert norm.sets == (frozenset({(-1,)}), frozenset({(-1, -1)}), frozenset({IDENTITY}))
    assert cut_and_splice_audit(res.family, Z_WITNESS, Z_SYSTEM) == []


def test_search_trivial_and_identity_shortcut():
    one = CongruenceSystem(1, (Statement.cong({1}, {1}),))
    res = search_family(one, (IDENTITY,), 0, m=1)
    assert isinstance(res, Sat) and res.family.sets == (frozenset({IDENTITY}),)
    kill = CongruenceSystem(2, (Statement.cong({1}, {2}),))
    assert search_family(kill, (IDENTITY,), 3, m=1) == UnsatWithin(3, complete=True)


def test_search_budget():
    with pytest.raises(BudgetExceeded):
        search_family(Z_SYSTEM, Z_WITNESS, 3, max_nodes=2)
    assert isinstance(search_family(Z_SYSTEM, Z_WITNESS, 3, max_nodes=100), Sat)


def test_cp3_named_witnesses():
    assert isinstance(search_family(make_cp(3), ((1,), (2,), (1, 2)), 3), UnsatWithin)


def test_non_weak_two_set_is_sat():
    sys = CongruenceSystem(2, (Statement.cong({1}, {2}),))
    res = search_family(sys, ((1,),), 2)
    assert isinstance(res, Sat)


def test_four_set_fixture_unsat_exhaustive():
    # every witness tuple with words of length <= 2 over F_2, search radius 3
    sat = [wt for wt in witness_tuples(2, 2, 4) if isinstance(search_family(FOUR_SET, wt, 3, m=2), Sat)]
    assert sat == []


@settings(max_examples=40, deadline=None)
@given(st.lists(words(2, 2), min_size=3, max_size=3), st.integers(0, 2))
def test_sat_results_always_verify(wit, radius):
    sys = CongruenceSystem(3, (Statement.cong({1}, {2}), Statement.sub({2}, {1, 3}), Statement.cong({1, 3}, {2, 3})))
    res = search_family(sys, wit, radius, m=2)
    if isinstance(res, Sat):
        assert verify_family(res.family, wit, sys) and not res.family.is_empty()
        assert verify_family(normalize_family(res.family), wit, sys)


def test_ball_action_matches_multiply():
    words_ = ball(2, 3)
    for g in [(1,), (-2, 1), (1, 2, -1)]:
        act = ball_action(2, 3, g)
        for k, w in enumerate(words_):
            y = multiply(g, w)
            assert (act[k] == -1) == (len(y) > 3)
            if act[k] >= 0:
                assert words_[act[k]] == y
        assert not act.flags.writeable


def test_forced_shift_examples():
    assert check_forced_shift(Z_FAMILY, F, FI)
    assert check_forced_shift(FiniteFamily.of(set(), set(), set(), m=1), F, FI)
    with pytest.raises(PreconditionFailed):
        check_forced_shift(Z_FAMILY, FI, FI)


def test_forced_shift_random_witness_pairs():
    rng = random.Random(54)
    pool = ball(2, 3)
    sats = 0
    for _ in range(100):
        rho, sigma = rng.choice(pool), rng.choice(pool)
        res = search_family(SHIFT_SYSTEM, (rho, sigma), 3, m=2)
        if isinstance(res, Sat):
            sats += 1
            assert check_forced_shift(res.family, rho, sigma)
    assert sats > 0


def test_splice_and_audit_soundness():
    sys = CongruenceSystem(2, (Statement.cong({1}, {2}),))
    fam = FiniteFamily.of({(2, 1, 1)}, {(1, 2, 1, 1)}, m=2)
    assert verify_family(fam, ((1,),), sys)
    for f in cut_and_splice_audit(fam, ((1,),), sys):
        assert verify_family(f.family, ((1,),), sys) and f.total_length < total_length(fam)
    with pytest.raises(ValueError):
        splice(fam, (1,), (2,))


# --- shape predicates -----------------------------------------------------


def test_shape_examples():
    assert is_connected({IDENTITY, (1,), (2,)})
    assert not is_connected({(1,), (-1,)})
    assert is_connected({(1, 2)})
    f123 = {(1,), (1, 1), (1, 1, 1)}
    assert lines(f123, 1) == [[(1,), (1, 1), (1, 1, 1)]]
    assert not is_prime(f123) and not is_strongly_prime(f123)
    star = {IDENTITY, (1,), (2,)}
    assert sorted(map(len, lines(star, 1))) == [1, 2]
    assert is_prime(star) and is_strongly_prime(star)
    assert is_prime({IDENTITY}) and is_strongly_prime({(2, 1)})


def test_connected_sets_enumeration():
    sets = connected_sets(2, 4)
    assert len(sets) == len(set(sets))
    assert all(IDENTITY in s and is_connected(s) for s in sets)
    # level sizes of subtrees through e in the 4-regular tree: 1, 4, 18, 88
    assert [sum(1 for s in sets if len(s) == k) for k in range(1, 5)] == [1, 4, 18, 88]


@settings(max_examples=200, deadline=None)
@given(st.sets(words(2, 3), min_size=1, max_size=5))
def test_connected_matches_geodesic_oracle(P):
    assert is_connected(P) == _geodesic_connected(P)


def test_prime_matches_block_oracle():
    rng = random.Random(5)
    cands = connected_sets(2, 5)
    pool = ball(2, 2)
    cands += [frozenset(rng.sample(pool, rng.randint(1, 5))) for _ in range(300)]
    for P in cands:
        assert is_prime(P, 2) == _prime_by_blocks(P, 2)


def test_strongly_prime_matches_wide_scan():
    for P in connected_sets(2, 4):
        assert is_strongly_prime(P) == _strongly_prime_wide(P, 4)
    rng = random.Random(9)
    pool = ball(2, 2)
    for _ in range(100):
        P = frozenset(rng.sample(pool, rng.randint(1, 4)))
        assert is_strongly_prime(P) == _strongly_prime_wide(P, 4)


def test_connected_prime_implies_strongly_prime_to_six():
    bad = [P for P in connected_sets(2, 6) if is_prime(P, 2) and not is_strongly_prime(P)]
    assert bad == []


def _exists_family_in_ball(sys, wit, m, big):
    """Brute force over every assignment of Ball(big) points to 0..r."""
    from itertools import product

    pts = ball(m, big)
    for assign in product(range(sys.r + 1), repeat=len(pts)):
        if not any(assign):
            continue
        sets = [frozenset(p for p, v in zip(pts, assign) if v == k) for k in range(1, sys.r + 1)]
        if verify_family(FiniteFamily(tuple(sets), m), wit, sys):
            return True
    return False


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.builds(
            Statement,
            st.sampled_from(["congruence", "subcongruence"]),
            st.frozensets(st.integers(1, 2), min_size=1),
            st.frozensets(st.integers(1, 2), min_size=1),
        ),
        min_size=1,
        max_size=2,
    ),
    st.data(),
)
def test_search_matches_brute_force_in_z(stmts, data):
    sys = CongruenceSystem(2, tuple(stmts))
    wit = [data.draw(st.sampled_from([(), (1,), (-1,), (1, 1), (-1, -1)])) for _ in stmts]
    radius = data.draw(st.integers(0, 2))
    big = radius + max(len(w) for w in wit)
    res = search_family(sys, wit, radius, m=1)
    assert isinstance(res, Sat) == _exists_family_in_ball(sys, wit, 1, big)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.builds(
            Statement,
            st.sampled_from(["congruence", "subcongruence"]),
            st.frozensets(st.integers(1, 2), min_size=1),
            st.frozensets(st.integers(1, 2), min_size=1),
        ),
        min_size=1,
        max_size=3,
    ),
    st.data(),
)
def test_search_matches_brute_force_in_f2(stmts, data):
    sys = CongruenceSystem(2, tuple(stmts))
    wit = [data.draw(st.sampled_from([(1,), (-1,), (2,), (-2,)])) for _ in stmts]
    res = search_family(sys, wit, 0, m=2)
    assert isinstance(res, Sat) == _exists_family_in_ball(sys, wit, 2, 1)
