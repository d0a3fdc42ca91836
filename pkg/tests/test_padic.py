from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from padicdyn.errors import (
    DigitRange,
    DivisionByZero,
    InsufficientPrecision,
    ParseError,
    PrecisionExhausted,
)
from padicdyn.padic import (
    PAdic,
    check_prime,
    equal_mod,
    from_rational,
    parse,
    parse_rational,
    rational_truncate,
    rational_valuation,
)

primes = st.sampled_from([2, 3, 5, 7, 11, 97])


@st.composite
def padics(draw, p=None, min_n=1, max_n=24):
    if p is None:
        p = draw(primes)
    v = draw(st.integers(-8, 8))
    n = draw(st.integers(min_n, max_n))
    digits = [draw(st.integers(1, p - 1))]
    digits += draw(st.lists(st.integers(0, p - 1), min_size=n - 1, max_size=n - 1))
    unit = 0
    for d in reversed(digits):
        unit = unit * p + d
    return PAdic(p, v, unit, n)


def rationals(max_num=1000, max_den=60):
    return st.fractions(
        min_value=-max_num, max_value=max_num, max_denominator=max_den
    )


@st.composite
def padic_pairs(draw):
    p = draw(primes)
    return draw(padics(p=p)), draw(padics(p=p))


def class_subset(fine: PAdic, coarse: PAdic) -> bool:
    # does every value in fine's residue class lie in coarse's?
    if coarse.is_zero:
        return fine.is_zero
    if coarse.is_flagged:
        if fine.is_zero:
            return True
        if fine.is_flagged:
            return fine.v >= coarse.v
        return fine.v >= coarse.v and fine.known_mod >= coarse.v
    if not fine.n:
        return False
    return (
        fine.v == coarse.v
        and fine.n >= coarse.n
        and fine.unit % coarse.p ** coarse.n == coarse.unit
    )


def test_prime_check():
    from padicdyn.errors import InputError

    check_prime(2)
    check_prime(97)
    for bad in (1, 0, -3, 4, 91, 2.0, "3"):
        with pytest.raises(InputError):
            check_prime(bad)


def test_from_rational_one_half_q3():
    x = from_rational(Fraction(1, 2), 3, 4)
    assert (x.v, x.digits) == (0, (2, 1, 1, 1))


def test_from_rational_minus_one_q2():
    x = from_rational(Fraction(-1), 2, 5)
    assert (x.v, x.digits) == (0, (1, 1, 1, 1, 1))


def test_from_rational_five_sixths_q3():
    x = from_rational(Fraction(5, 6), 3, 3)
    assert x.v == -1
    assert x.unit == 5 * pow(2, -1, 27) % 27
    assert x.digits == (1, 2, 1)


def test_from_rational_zero_is_exact():
    x = from_rational(Fraction(0), 5, 8)
    assert x.is_zero and not x.is_flagged


def test_add_valuations_differ():
    one = from_rational(Fraction(1), 3, 6)
    two = from_rational(Fraction(2), 3, 6)
    s = one + two
    assert s.v == 1 and s.digits[0] == 1


def test_add_halves():
    h = from_rational(Fraction(1, 2), 3, 6)
    assert equal_mod(h + h, from_rational(Fraction(1), 3, 6), 6)


def test_add_inverse_flags_zero():
    x = from_rational(Fraction(7, 5), 3, 6)
    d = x + (-x)
    assert d.is_flagged and d.v == 6


def test_flagged_zero_consumption():
    x = from_rational(Fraction(4), 7, 3)
    d = x - x
    with pytest.raises(PrecisionExhausted):
        d.valuation()
    with pytest.raises(DivisionByZero):
        d.inv()
    with pytest.raises(PrecisionExhausted):
        d.render()


def test_mul_examples():
    two = from_rational(Fraction(2), 3, 2)
    four = two * two
    assert four.digits == (1, 1)
    p1 = from_rational(Fraction(3), 3, 4)
    pm1 = from_rational(Fraction(5, 3), 3, 4)
    assert (p1 * pm1).v == 0


def test_inv_examples():
    two = from_rational(Fraction(2), 3, 4)
    assert two.inv().digits == (2, 1, 1, 1)
    one = from_rational(Fraction(1), 3, 4)
    assert one.inv() == one
    three = from_rational(Fraction(3), 3, 4)
    assert three.inv().v == -1
    assert equal_mod(two * two.inv(), one, 4)
    with pytest.raises(DivisionByZero):
        PAdic.zero(3).inv()


def test_norm_examples():
    assert from_rational(Fraction(12), 3, 5).norm() == Fraction(1, 3)
    assert from_rational(Fraction(5, 6), 3, 5).norm() == 3
    assert PAdic.zero(3).norm() == 0


def test_render_examples():
    assert from_rational(Fraction(1, 2), 3, 4).render() == "3:0:2,1,1,1"
    assert parse("2:inf:").is_zero
    with pytest.raises(DigitRange):
        parse("3:0:3,0")


def test_parse_positions():
    with pytest.raises(ParseError) as e:
        parse("3:x:1")
    assert e.value.pos == 2
    with pytest.raises(ParseError) as e:
        parse("3:0:1,?")
    assert e.value.pos == 6
    with pytest.raises(ParseError) as e:
        parse("4:0:1")
    assert e.value.pos == 0
    with pytest.raises(ParseError):
        parse("3:0:0,1")
    with pytest.raises(ParseError):
        parse("3:0:")
    with pytest.raises(ParseError):
        parse("3:inf:1")
    with pytest.raises(ParseError):
        parse("not a literal")


def test_parse_rational():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational("14") == 14
    with pytest.raises(ParseError):
        parse_rational("1/0")
    with pytest.raises(ParseError):
        parse_rational("1.5")


def test_equal_mod_windows():
    a = from_rational(Fraction(1), 5, 4)
    b = from_rational(Fraction(1 + 5 ** 3), 5, 4)
    assert equal_mod(a, b, 3)
    assert not equal_mod(a, b, 4)
    d = a - a
    assert equal_mod(a, a, 4)
    with pytest.raises(InsufficientPrecision):
        equal_mod(a, a, 5)
    assert d.is_flagged


def test_rational_truncate():
    assert rational_truncate(Fraction(1, 2), 3, 2) == 5
    assert rational_truncate(Fraction(5, 6), 3, 1) == Fraction(7, 3)
    assert rational_truncate(Fraction(27), 3, 2) == 0
    assert rational_valuation(Fraction(5, 6), 3) == -1


@given(padics())
def test_roundtrip(x):
    assert parse(x.render()) == x


@given(rationals(), primes, st.integers(1, 20))
def test_embed_window(q, p, n):
    x = from_rational(q, p, n)
    if q == 0:
        assert x.is_zero
    else:
        v = rational_valuation(q, p)
        assert x.v == v and x.n == n
        assert rational_truncate(q, p, v + n) == Fraction(x.unit) * Fraction(p) ** v


@given(rationals(), rationals(), primes)
def test_ring_oracle_add(a, b, p):
    x, y = from_rational(a, p, 12), from_rational(b, p, 12)
    s = x + y
    if s.is_zero:
        assert a + b == 0
    elif s.is_flagged:
        assert rational_truncate(a + b, p, s.v) == 0
    else:
        assert rational_truncate(a + b, p, s.known_mod) == Fraction(s.unit) * Fraction(p) ** s.v


@given(rationals(), rationals(), primes)
def test_ring_oracle_mul(a, b, p):
    x, y = from_rational(a, p, 12), from_rational(b, p, 12)
    m = x * y
    if m.is_zero:
        assert a * b == 0
    else:
        assert rational_truncate(a * b, p, m.known_mod) == Fraction(m.unit) * Fraction(p) ** m.v


@given(rationals(), primes)
def test_ring_oracle_inv(a, p):
    assume(a != 0)
    x = from_rational(a, p, 12)
    assert x.inv() == from_rational(1 / a, p, 12)


@given(padic_pairs())
def test_ultrametric(pair):
    x, y = pair
    s = x + y
    bound = max(x.norm(), y.norm())
    if s.is_flagged:
        assert Fraction(s.p) ** (-s.v) <= bound
    else:
        assert s.norm() <= bound
        if x.norm() != y.norm():
            assert s.norm() == bound


@given(padic_pairs())
def test_norm_multiplicative(pair):
    x, y = pair
    assert (x * y).norm() == x.norm() * y.norm()


@given(rationals(), rationals(), rationals(), primes, st.integers(2, 10))
def test_precision_soundness(a, b, c, p, n):
    assume(c != 0)

    def pipeline(prec):
        xa, xb = from_rational(a, p, prec), from_rational(b, p, prec)
        xc = from_rational(c, p, prec)
        return (xa + xb) * xc - xa * xc.inv()

    coarse, fine = pipeline(n), pipeline(2 * n)
    assert class_subset(fine, coarse)


@given(padics())
def test_neg_is_additive_inverse(x):
    d = x + (-x)
    assert d.is_flagged and d.v == x.known_mod


@given(padics(min_n=2))
def test_truncate_shrinks(x):
    t = x.truncate(x.n - 1)
    assert class_subset(x, t)
    assert x.truncate(0).is_flagged
