import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadcong.errors import RegionTooLarge
from quadcong.intvec import norm_sq, vec_key
from quadcong.modmath import is_square_mod, make_modulus
from quadcong.oracle import (
    BruteResult,
    brute_min_square,
    brute_min_zero,
    coprime_count,
    diff_gcd_count,
    oracle_scan,
    rank_two_family_form,
    rank_two_family_min,
    restriction_coprime_count,
    root_count_mod,
    sample_forms,
    worst_min_zero,
)
from quadcong.qforms import BinaryForm, TernaryForm, det_gram2
from quadcong.solver import solve_ternary, square_value_binary

IDENTITY = TernaryForm(1, 1, 1, 0, 0, 0)


def test_brute_min_zero_frozen():
    assert brute_min_zero(IDENTITY, make_modulus(5)) == BruteResult(5, (0, 1, 2), 0)
    assert brute_min_zero(IDENTITY, make_modulus(7)) == BruteResult(14, (1, 2, 3), 0)
    assert brute_min_zero(IDENTITY, make_modulus(15)).norm_sq == 30
    assert brute_min_zero(TernaryForm(1, 2, 3, 1, 1, 1), make_modulus(15)) == BruteResult(5, (1, 0, 2), 0)


def test_brute_min_zero_is_canonical_minimum():
    mod = make_modulus(11)
    res = brute_min_zero(IDENTITY, mod)
    best = None
    for x in range(-6, 7):
        for y in range(-6, 7):
            for z in range(-6, 7):
                v = (x, y, z)
                if v == (0, 0, 0) or IDENTITY.evaluate(v) % 11 != 0:
                    continue
                key = (norm_sq(v), vec_key(v))
                if best is None or key < best:
                    best = key
    assert (res.norm_sq, vec_key(res.witness)) == best


def test_brute_min_square_frozen():
    res = brute_min_square(IDENTITY, make_modulus(5))
    assert res == BruteResult(1, (0, 0, 1), 1)
    b = brute_min_square(BinaryForm(2, 3, 1), make_modulus(5))
    assert (b.norm_sq, b.witness) == (1, (0, 1))
    assert b.t * b.t % 5 == BinaryForm(2, 3, 1).evaluate(b.witness) % 5


def test_brute_square_agrees_with_pipeline_search():
    rng = random.Random(2)
    for _ in range(30):
        q = rng.choice([5, 7, 11, 13, 15, 21, 33, 35])
        mod = make_modulus(q)
        f = BinaryForm(rng.randrange(q), rng.randrange(q), rng.randrange(q))
        got = square_value_binary(f, mod)
        want = brute_min_square(f, mod)
        assert norm_sq(got) == want.norm_sq
        assert got == want.witness  # same canonical tie-break


def test_brute_min_zero_bound_proves_absence():
    # x^2 + y^2 + z^2 = 0 mod 7 has no solution with norm < 14
    res = brute_min_zero(IDENTITY, make_modulus(7), bound_sq=13)
    assert res is None


def test_budget_guard():
    with pytest.raises(RegionTooLarge):
        brute_min_zero(IDENTITY, make_modulus(10**6 + 3), budget=1000)


def test_rank_two_family_form_values():
    f = rank_two_family_form(3, 2)
    for x in [(1, 0, 0), (2, 1, 0), (5, 2, 1), (-1, 3, 2)]:
        expect = (x[0] - 2 * x[1]) ** 2 - 3 * (x[1] - 2 * x[2]) ** 2
        assert f.evaluate(x) == expect


def test_rank_two_family_min_reference_growth():
    # a non-residue: the only small zeros come from the global line, so the
    # minimum sits near p^(2/3) in euclidean norm
    mod = make_modulus(101)
    res = rank_two_family_min(2, 5, mod)
    assert res.norm_sq == 417
    assert rank_two_family_form(2, 5).evaluate(res.witness) % 101 == 0


def test_diff_gcd_count_frozen():
    res = diff_gcd_count(3, 6, 1)
    assert (res.total, res.degenerate, res.nondegenerate) == (12, 6, 6)


def test_diff_gcd_count_brute():
    from itertools import product as iproduct

    from quadcong.charsum import diff_products

    k, h, r = 5, 8, 1
    res = diff_gcd_count(k, h, r)
    total = degenerate = nondeg = 0
    for ns in iproduct(range(1, h + 1), repeat=2 * r):
        g = diff_products(ns).overall_gcd
        if g == 0:
            degenerate += 1
            total += 1
        elif g % k == 0:
            nondeg += 1
            total += 1
    assert (res.total, res.degenerate, res.nondegenerate) == (total, degenerate, nondeg)


def test_coprime_count_linear_frozen():
    res = coprime_count(lambda v: v[0], 1, make_modulus(3), 9)
    assert res.count == 6
    assert res.prediction == Fraction(6)
    assert res.roots == {3: 1}
    assert res.relative_gap() == 0


def test_root_count_mod():
    assert root_count_mod(lambda v: v[0], 1, 3) == 1
    assert root_count_mod(lambda v: v[0] * v[1], 2, 3) == 5  # union of two lines
    assert root_count_mod(lambda v: 1, 1, 5) == 0


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 10**6))
def test_coprime_count_matches_enumeration(seed):
    rng = random.Random(seed)
    q = rng.choice([3, 5, 15])
    mod = make_modulus(q)
    box = rng.randrange(2, 9)
    coeffs = [rng.randrange(-4, 5) for _ in range(3)]

    def f(v):
        return coeffs[0] * v[0] * v[0] + coeffs[1] * v[0] * v[1] + coeffs[2] * v[1] + 1

    res = coprime_count(f, 2, mod, box)
    brute = sum(
        1
        for a in range(1, box + 1)
        for b in range(1, box + 1)
        if gcd(f((a, b)), q) == 1
    )
    assert res.count == brute


def test_restriction_coprime_count_matches_generic():
    """The vectorized 6-variable count must equal the generic enumerator."""
    from quadcong.qforms import restrict

    form = TernaryForm(1, 1, 1, 0, 0, 0)
    mod = make_modulus(15)
    box = 3

    def det4_of_restriction(v):
        r = restrict(form, (v[0], v[2], v[4]), (v[1], v[3], v[5]))
        return r.det4()

    fast = restriction_coprime_count(form, mod, box)
    slow = coprime_count(det4_of_restriction, 6, mod, box)
    assert fast.count == slow.count
    assert fast.roots == slow.roots
    assert fast.prediction == slow.prediction


def test_restriction_coprime_count_gap_small():
    form = TernaryForm(2, 3, 5, 1, 0, 1)
    mod = make_modulus(15)
    res = restriction_coprime_count(form, mod, 8)
    assert res.relative_gap() < Fraction(1, 5)


def test_sample_forms_deterministic_and_nonsingular():
    mod = make_modulus(105)
    a = sample_forms(mod, 5, "seed")
    b = sample_forms(mod, 5, "seed")
    assert a == b
    c = sample_forms(mod, 5, "other")
    assert a != c
    for f in a:
        assert gcd(det_gram2(f), 105) == 1
        assert all(0 <= co < 105 for co in f.coeffs())


def test_oracle_scan_dominated_by_solver():
    mod = make_modulus(35)
    rows = oracle_scan(mod, 4, "scan")
    assert len(rows) == 4
    for row in rows:
        assert row.q == 35
        tr = solve_ternary(row.form, mod)
        # the exhaustive minimum can never exceed the pipeline output
        assert row.min_zero.norm_sq <= norm_sq(tr.solution)
        assert row.min_square.norm_sq <= row.min_zero.norm_sq
        assert row.form.evaluate(row.min_zero.witness) % 35 == 0
        assert is_square_mod(row.form.evaluate(row.min_square.witness), mod)
    assert worst_min_zero(rows) == max(r.min_zero.norm_sq for r in rows)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_brute_min_square_leq_min_zero(seed):
    rng = random.Random(seed)
    q = rng.choice([5, 7, 13, 15, 21])
    mod = make_modulus(q)
    f = sample_forms(mod, 1, f"sq:{seed}")[0]
    z = brute_min_zero(f, mod)
    s = brute_min_square(f, mod)
    assert s.norm_sq <= z.norm_sq  # zero values are squares
