import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freqalloc.golden import (
    GoldenNumber,
    cmp,
    constants,
    floor_linear,
    parse_exact,
)

C = constants()


def bisection_floor(x: GoldenNumber) -> int:
    """Independent floor oracle: narrow a rational bracket of sqrt(5) until
    both endpoint evaluations land in the same integer gap."""
    if x.b == 0:
        return math.floor(x.a)
    lo, hi = Fraction(2), Fraction(3)
    while True:
        ends = sorted((x.a + x.b * lo, x.a + x.b * hi))
        flo, fhi = math.floor(ends[0]), math.floor(ends[1])
        if flo == fhi:
            return flo
        mid = (lo + hi) / 2
        if mid * mid < 5:
            lo = mid
        else:
            hi = mid


rationals = st.fractions(
    min_value=-50, max_value=50, max_denominator=60
)
goldens = st.builds(GoldenNumber, rationals, rationals)


class TestConstants:
    def test_values(self):
        assert C.alpha == GoldenNumber(Fraction(7, 11), Fraction(-1, 11))
        assert C.rho == GoldenNumber(Fraction(-3, 11), Fraction(2, 11))
        assert C.r0 == GoldenNumber(Fraction(18, 11), Fraction(-1, 11))

    def test_identities(self):
        assert C.phi * C.phi == C.phi + 1
        assert 1 / C.phi == C.phi - 1
        assert C.rho * C.phi == C.beta
        assert C.alpha == C.beta * 2
        assert C.alpha + 1 == C.r0
        assert C.beta / C.phi == C.rho
        assert C.alpha * 2 + C.beta * 2 + C.rho == C.r0

    def test_sum_rule(self):
        assert C.alpha + C.alpha == GoldenNumber(
            Fraction(14, 11), Fraction(-2, 11)
        )


class TestArithmetic:
    def test_add_componentwise(self):
        assert GoldenNumber(1) + GoldenNumber(0, 1) == GoldenNumber(1, 1)

    def test_identity_elements(self):
        x = GoldenNumber(Fraction(3, 7), Fraction(-2, 5))
        assert x + 0 == x
        assert x * 1 == x

    @given(goldens, goldens, goldens)
    @settings(max_examples=150, deadline=None)
    def test_field_laws(self, x, y, z):
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z

    @given(goldens)
    @settings(max_examples=80, deadline=None)
    def test_division_inverts(self, x):
        if x.sign() != 0:
            assert (GoldenNumber(1) / x) * x == GoldenNumber(1)


class TestComparison:
    def test_examples(self):
        assert cmp(3, GoldenNumber.sqrt5()) == 1
        assert cmp(C.phi, C.phi) == 0
        assert cmp(C.alpha, Fraction(1, 2)) == -1

    @given(goldens, goldens, goldens)
    @settings(max_examples=150, deadline=None)
    def test_order_translation_invariant(self, x, y, z):
        if x < y:
            assert x + z < y + z

    @given(goldens, goldens)
    @settings(max_examples=150, deadline=None)
    def test_trichotomy(self, x, y):
        assert (x < y) + (x == y) + (y < x) == 1

    @given(goldens)
    @settings(max_examples=100, deadline=None)
    def test_sign_matches_float(self, x):
        # float approximates well away from zero; exact sign must agree
        approx = float(x)
        if abs(approx) > 1e-6:
            assert x.sign() == (1 if approx > 0 else -1)


class TestFloor:
    def test_examples(self):
        assert (GoldenNumber(7) - GoldenNumber.sqrt5()).floor() == 4
        assert (-GoldenNumber.sqrt5()).floor() == -3
        assert GoldenNumber(3).floor() == 3

    def test_floor_linear_matches_class(self):
        rng = random.Random(11)
        for _ in range(2000):
            u = rng.randint(-10**6, 10**6)
            v = rng.randint(-10**5, 10**5)
            w = rng.randint(1, 10**4)
            got = floor_linear(u, v, w)
            want = bisection_floor(
                GoldenNumber(Fraction(u, w), Fraction(v, w))
            )
            assert got == want, (u, v, w)

    @given(goldens)
    @settings(max_examples=200, deadline=None)
    def test_floor_definition(self, x):
        n = x.floor()
        assert GoldenNumber(n) <= x < GoldenNumber(n + 1)

    def test_against_bisection_oracle(self):
        rng = random.Random(7)
        for _ in range(20_000):
            x = GoldenNumber(
                Fraction(rng.randint(-9999, 9999), rng.randint(1, 99)),
                Fraction(rng.randint(-9999, 9999), rng.randint(1, 99)),
            )
            assert x.floor() == bisection_floor(x)


class TestParseRender:
    @pytest.mark.parametrize(
        "text,value",
        [
            ("2", GoldenNumber(2)),
            ("3/2", GoldenNumber(Fraction(3, 2))),
            ("1.42", GoldenNumber(Fraction(71, 50))),
            ("R0", C.r0),
            ("phi", C.phi),
            ("sqrt5", GoldenNumber(0, 1)),
            ("10/7-1/100", GoldenNumber(Fraction(993, 700))),
            ("18/11-1/11*sqrt5", C.r0),
            ("-3/11+2/11*sqrt5", C.rho),
        ],
    )
    def test_parse(self, text, value):
        assert parse_exact(text) == value

    @given(goldens)
    @settings(max_examples=200, deadline=None)
    def test_roundtrip(self, x):
        assert parse_exact(str(x)) == x

    @pytest.mark.parametrize("bad", ["", "nope", "1//2", "sqrt7", "+", "1.2.3"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_exact(bad)
