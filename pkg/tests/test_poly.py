from fractions import Fraction as F

from randlab.poly import (
    UnivariatePoly,
    constant,
    count_roots_open,
    nonneg_on_unit_interval,
    squarefree_part,
    sturm_chain,
)


def poly(*coeffs):
    return UnivariatePoly([F(c) for c in coeffs])


def test_trailing_zeros_trimmed():
    assert poly(1, 2, 0, 0).coeffs == (F(1), F(2))
    assert poly(0, 0).is_zero()


def test_evaluation_and_arithmetic():
    p = poly(1, -3, 2)  # (1-x)(1-2x)
    assert p(F(1)) == 0 and p(F(1, 2)) == 0 and p(F(0)) == 1
    q = poly(0, 1) * poly(0, 1)
    assert q.coeffs == (F(0), F(0), F(1))
    assert (p - p).is_zero()


def test_divmod_exact():
    p = poly(0, -1, 1)  # x^2 - x
    d = poly(-1, 2)  # 2x - 1
    q, r = p.divmod(d)
    assert q.coeffs == (F(-1, 4), F(1, 2))
    assert r.coeffs == (F(-1, 4),)


def test_sturm_counts_roots_in_interval():
    # (x - 1/4)(x - 3/4) has two roots in (0, 1)
    p = poly(F(3, 16), -1, 1)
    chain = sturm_chain(p)
    assert count_roots_open(chain, F(0), F(1)) == 2
    assert count_roots_open(chain, F(0), F(1, 2)) == 1
    assert count_roots_open(chain, F(1, 2), F(1)) == 1


def test_sturm_endpoint_roots_excluded_from_open_count():
    p = poly(0, 1)  # root at 0
    chain = sturm_chain(p)
    assert count_roots_open(chain, F(0), F(1)) == 0


def test_squarefree_part_drops_multiplicity():
    double = poly(F(1, 4), -1, 1)  # (x - 1/2)^2
    sf = squarefree_part(double)
    assert sf.degree == 1


def test_nonneg_decisions():
    assert nonneg_on_unit_interval(poly(1)) == (True, None)
    assert nonneg_on_unit_interval(UnivariatePoly([])) == (True, None)
    ok, witness = nonneg_on_unit_interval(poly(1, -2))  # 1 - 2x
    assert not ok and poly(1, -2)(witness) < 0
    # tangential zero inside the interval stays nonnegative
    assert nonneg_on_unit_interval(poly(F(1, 4), -1, 1)) == (True, None)
    # its negation dips below zero
    ok2, witness2 = nonneg_on_unit_interval(poly(F(-1, 4), 1, -1))
    assert not ok2 and poly(F(-1, 4), 1, -1)(witness2) < 0
    # zeros at both endpoints, positive inside
    assert nonneg_on_unit_interval(poly(0, 1, -1)) == (True, None)


def test_nonneg_negative_dip_between_positive_endpoints():
    # (x-1/3)(x-2/3) scaled: positive at 0 and 1, negative in the middle
    p = poly(F(2, 9), -1, 1)
    ok, witness = nonneg_on_unit_interval(p)
    assert not ok and p(witness) < 0


def test_nonneg_high_multiplicity_touch():
    # (x - 1/2)^4
    single = poly(F(-1, 2), 1)
    p = single * single * single * single
    assert nonneg_on_unit_interval(p) == (True, None)


def test_nonneg_root_exactly_at_sample_midpoint():
    # root at 1/2 with odd multiplicity and negative right side
    p = poly(F(1, 2), -1)  # 1/2 - x
    ok, witness = nonneg_on_unit_interval(p)
    assert not ok and p(witness) < 0


def test_constant_helper():
    assert constant(F(3, 7))(F(5)) == F(3, 7)


def _to_sympy(p, x, sympy):
    expr = sum(
        sympy.Rational(c.numerator, c.denominator) * x ** i
        for i, c in enumerate(p.coeffs)
    )
    return sympy.Poly(expr, x, domain="QQ")


def _rational_between(a, b, sympy):
    lo, hi = sympy.Rational(0), sympy.Rational(1)
    while True:
        mid = (lo + hi) / 2
        if a < mid < b:
            return mid
        if mid <= a:
            lo = mid
        else:
            hi = mid


def test_root_counts_match_sympy():
    import random

    import sympy

    x = sympy.symbols("x")
    rng = random.Random(123)
    checked = 0
    while checked < 60:
        deg = rng.randint(1, 6)
        p = UnivariatePoly(
            [F(rng.randint(-6, 6), rng.choice((1, 2, 3, 4))) for _ in range(deg + 1)]
        )
        if p.is_zero():
            continue
        sf = squarefree_part(p)
        chain = sturm_chain(sf)
        a = F(rng.randint(0, 7), 8)
        b = min(a + F(rng.randint(1, 8), 8), F(1))
        if a >= b:
            continue
        sp = _to_sympy(sf, x, sympy)
        expected = (
            sp.count_roots(a, b)
            - (1 if sf(a) == 0 else 0)
            - (1 if sf(b) == 0 else 0)
        )
        assert count_roots_open(chain, a, b) == expected
        checked += 1


def test_nonneg_decision_matches_sympy_root_isolation():
    import random

    import sympy

    x = sympy.symbols("x")
    rng = random.Random(321)

    def oracle(p):
        if p.is_zero():
            return True
        if p(F(0)) < 0 or p(F(1)) < 0:
            return False
        roots = sorted(set(_to_sympy(p, x, sympy).real_roots()))
        points = [sympy.Rational(0)]
        points += [r for r in roots if 0 <= r <= 1]
        points.append(sympy.Rational(1))
        for lo, hi in zip(points, points[1:]):
            if lo == hi:
                continue
            s = _rational_between(lo, hi, sympy)
            if p(F(int(s.p), int(s.q))) < 0:
                return False
        return True

    for _ in range(60):
        deg = rng.randint(0, 6)
        p = UnivariatePoly(
            [F(rng.randint(-6, 6), rng.choice((1, 2, 3, 4))) for _ in range(deg + 1)]
        )
        ok, witness = nonneg_on_unit_interval(p)
        if not ok:
            assert p(witness) < 0
        assert ok == oracle(p)
