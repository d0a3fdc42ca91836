"""Exact finite-precision arithmetic in Q_p.

A value is a residue class.  A normal value with valuation ``v`` and
``n`` known base-p digits stands for the class ``p**v * unit`` modulo
``p**(v+n)``: every p-adic number agreeing with the known window.
Operations return the smallest class containing all possible outcomes,
so the true result always lies in the reported class and digits are
never fabricated.

Full cancellation in an addition produces a value that is zero *at
working precision*.  That state is kept distinct from exact zero (the
class ``{0}``): it records only ``value ≡ 0 (mod p**e)`` and raises
``PrecisionExhausted`` when an operation needs its leading digit, and
``DivisionByZero`` when inverted.  Exact zero arises only from embedding
the rational 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DigitRange,
    DivisionByZero,
    InputError,
    InsufficientPrecision,
    ParseError,
    PrecisionExhausted,
)

DEFAULT_PRECISION = 32

_known_primes: set[int] = set()


def check_prime(p) -> int:
    """Validate by trial division that p is prime; primes here are small.

    Raises:
        InputError: if p is not a prime integer.
    """
    if not isinstance(p, int) or isinstance(p, bool) or p < 2:
        raise InputError(f"not a prime: {p!r}")
    if p in _known_primes:
        return p
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise InputError(f"not a prime: {p}")
        d += 1
    _known_primes.add(p)
    return p


@dataclass(frozen=True, slots=True)
class PAdic:
    """One residue class in Q_p, in one of three states.

    * exact zero: ``v is None``, ``unit == n == 0``; the class {0}.
    * normal: ``n >= 1``; value ``p**v * unit`` known modulo
      ``p**(v+n)``, with ``0 < unit < p**n`` and ``unit % p != 0``.
    * flagged zero: ``n == 0`` with ``v`` an integer; known only to
      satisfy ``value ≡ 0 (mod p**v)``.

    Instances are immutable and hashable; equality is bit-exact
    (same state, same window), not congruence.  Use :func:`equal_mod`
    for certified congruence.
    """

    p: int
    v: int | None
    unit: int
    n: int

    def __post_init__(self):
        check_prime(self.p)
        if self.v is None or self.n == 0:
            if self.unit != 0 or self.n != 0:
                raise ValueError("zero states carry no digits")
        elif not (0 < self.unit < self.p ** self.n) or self.unit % self.p == 0:
            raise ValueError("unit part must be normalized")

    @staticmethod
    def zero(p: int) -> "PAdic":
        return PAdic(check_prime(p), None, 0, 0)

    @staticmethod
    def flagged_zero(p: int, e: int) -> "PAdic":
        """The state 'zero at working precision': value ≡ 0 mod p**e."""
        return PAdic(check_prime(p), e, 0, 0)

    @property
    def is_zero(self) -> bool:
        return self.v is None

    @property
    def is_flagged(self) -> bool:
        return self.v is not None and self.n == 0

    @property
    def known_mod(self) -> int | None:
        """Exponent e such that the value is known modulo p**e.

        None means known exactly (only exact zero).
        """
        if self.v is None:
            return None
        return self.v + self.n

    @property
    def digits(self) -> tuple[int, ...]:
        """Base-p digits of the unit part, least significant first."""
        u, p, out = self.unit, self.p, []
        for _ in range(self.n):
            u, d = divmod(u, p)
            out.append(d)
        return tuple(out)

    def valuation(self) -> int:
        """The exact p-adic valuation.

        Raises:
            PrecisionExhausted: for a flagged zero (valuation is only
                bounded below, never certified).
            ValueError: for exact zero.
        """
        if self.v is None:
            raise ValueError("exact zero has no finite valuation")
        if self.n == 0:
            raise PrecisionExhausted(
                f"value ≡ 0 mod {self.p}^{self.v}; valuation not certified"
            )
        return self.v

    def norm(self) -> Fraction:
        """|x|_p as an exact rational; Fraction(0) for exact zero."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.p) ** (-self.valuation())

    def shift(self, k: int) -> "PAdic":
        """Multiply by p**k.  Exact: no digit is lost."""
        if self.is_zero or k == 0:
            return self
        return PAdic(self.p, self.v + k, self.unit, self.n)

    def truncate(self, n: int) -> "PAdic":
        """Forget all but the first n digits (precision only shrinks)."""
        if self.n <= n:
            return self
        if n <= 0:
            return PAdic(self.p, self.v, 0, 0)
        return PAdic(self.p, self.v, self.unit % self.p ** n, n)

    def _require_same_field(self, other: "PAdic"):
        if not isinstance(other, PAdic):
            raise TypeError(f"expected PAdic, got {type(other).__name__}")
        if self.p != other.p:
            raise InputError(f"mixed primes: {self.p} and {other.p}")

    def __add__(self, other: "PAdic") -> "PAdic":
        self._require_same_field(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        base = min(self.v, other.v)
        hi = min(self.known_mod, other.known_mod)
        m = hi - base
        if m <= 0:
            return PAdic(self.p, hi, 0, 0)
        s = 0
        if self.n:
            s += self.unit * self.p ** (self.v - base)
        if other.n:
            s += other.unit * self.p ** (other.v - base)
        return _from_window(self.p, base, s % self.p ** m, m)

    def __neg__(self) -> "PAdic":
        if self.n == 0:
            return self
        return PAdic(self.p, self.v, self.p ** self.n - self.unit, self.n)

    def __sub__(self, other: "PAdic") -> "PAdic":
        return self + (-other)

    def __mul__(self, other: "PAdic") -> "PAdic":
        self._require_same_field(other)
        if self.is_zero or other.is_zero:
            return PAdic.zero(self.p)
        if self.n == 0 or other.n == 0:
            return PAdic(self.p, self.v + other.v, 0, 0)
        n = min(self.n, other.n)
        return PAdic(
            self.p, self.v + other.v, (self.unit * other.unit) % self.p ** n, n
        )

    def inv(self) -> "PAdic":
        """The multiplicative inverse, by modular inversion of the unit.

        Raises:
            DivisionByZero: on exact zero or a flagged zero.
        """
        if self.is_zero or self.is_flagged:
            raise DivisionByZero("inverse of a value not certified nonzero")
        return PAdic(self.p, -self.v, pow(self.unit, -1, self.p ** self.n), self.n)

    def render(self) -> str:
        """Bit-exact literal `p:v:d0,d1,...`; exact zero renders `p:inf:`."""
        if self.is_zero:
            return f"{self.p}:inf:"
        if self.is_flagged:
            raise PrecisionExhausted(
                f"value ≡ 0 mod {self.p}^{self.v} has no literal form"
            )
        return f"{self.p}:{self.v}:" + ",".join(map(str, self.digits))

    def __str__(self):
        if self.is_flagged:
            return f"<{self.p}-adic ≡ 0 mod {self.p}^{self.v}>"
        return self.render()


def _from_window(p: int, base: int, s: int, m: int) -> PAdic:
    # value ≡ p**base * s  (mod p**(base+m)),  0 <= s < p**m
    if s == 0:
        return PAdic(p, base + m, 0, 0)
    t = 0
    while s % p == 0:
        s //= p
        t += 1
    return PAdic(p, base + t, s, m - t)


def _split_unit(q: Fraction, p: int) -> tuple[int, int, int]:
    # q = p**v * num/den with num, den coprime to p
    num, den, v = q.numerator, q.denominator, 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, num, den


def from_rational(q, p: int, n: int = DEFAULT_PRECISION) -> PAdic:
    """Embed an exact rational as a PAdic with n known digits.

    The result is the unique class with value ≡ q mod p**(v+n), where
    v = ν_p(q).  Zero embeds as exact zero.
    """
    check_prime(p)
    if n < 1:
        raise ValueError("precision must be at least 1 digit")
    q = Fraction(q)
    if q == 0:
        return PAdic.zero(p)
    v, num, den = _split_unit(q, p)
    pn = p ** n
    return PAdic(p, v, num * pow(den, -1, pn) % pn, n)


def rational_valuation(q: Fraction, p: int) -> int:
    """ν_p of a nonzero exact rational."""
    if q == 0:
        raise ValueError("zero has no finite valuation")
    return _split_unit(Fraction(q), p)[0]


def rational_truncate(q: Fraction, p: int, m: int) -> Fraction:
    """Canonical representative of q modulo p**m.

    Returns the finite digit sum Σ d_i p^i over positions i < m of the
    expansion of q: the unique representative of q + p**m Z_p supported
    on digits below position m.  Exact rational in, exact rational out.
    """
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    v, num, den = _split_unit(q, p)
    k = m - v
    if k <= 0:
        return Fraction(0)
    pk = p ** k
    return Fraction(num * pow(den, -1, pk) % pk) * Fraction(p) ** v


def equal_mod(x: PAdic, y: PAdic, k: int) -> bool:
    """Certified congruence x ≡ y (mod p**k).

    Raises:
        InsufficientPrecision: if the difference is flagged zero with a
            window too shallow to decide (never answers unsoundly).
    """
    d = x - y
    if d.is_zero:
        return True
    if d.is_flagged:
        if d.v >= k:
            return True
        raise InsufficientPrecision(
            f"difference ≡ 0 mod {d.p}^{d.v}: congruence mod {d.p}^{k} undecidable"
        )
    return d.v >= k


_INT_RE = re.compile(r"[+-]?\d+\Z")
_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?\Z")


def parse(text: str) -> PAdic:
    """Parse the literal grammar `p:v:d0,d1,...` (exact zero: `p:inf:`).

    Round-trips with :meth:`PAdic.render` bit-exactly.

    Raises:
        ParseError: malformed literal, with offset of the offending part.
        DigitRange: digit outside 0..p-1.
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise ParseError("expected literal of shape p:v:digits", 0)
    p_txt, v_txt, d_txt = parts
    if not p_txt.isdigit():
        raise ParseError("prime must be a positive integer", 0)
    try:
        p = check_prime(int(p_txt))
    except InputError:
        raise ParseError(f"{p_txt} is not prime", 0) from None
    v_pos = len(p_txt) + 1
    d_pos = v_pos + len(v_txt) + 1
    if v_txt == "inf":
        if d_txt:
            raise ParseError("exact zero takes no digits", d_pos)
        return PAdic.zero(p)
    if not _INT_RE.match(v_txt):
        raise ParseError("valuation must be an integer or 'inf'", v_pos)
    if not d_txt:
        raise ParseError("at least one digit required", d_pos)
    digits = []
    pos = d_pos
    for piece in d_txt.split(","):
        if not piece.isdigit():
            raise ParseError("digit must be a nonnegative integer", pos)
        d = int(piece)
        if d >= p:
            raise DigitRange(f"digit {d} at offset {pos} out of range for p={p}")
        digits.append(d)
        pos += len(piece) + 1
    if digits[0] == 0:
        raise ParseError("leading digit must be nonzero (zero is p:inf:)", d_pos)
    unit = 0
    for d in reversed(digits):
        unit = unit * p + d
    return PAdic(p, int(v_txt), unit, len(digits))


def parse_rational(text: str) -> Fraction:
    """Parse `n` or `n/m` with m a positive integer."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ParseError(f"not a rational literal: {text!r}", 0)
    if m.group(2) is not None and int(m.group(2)) == 0:
        raise ParseError("zero denominator", text.index("/") + 1)
    return Fraction(int(m.group(1)), int(m.group(2)) if m.group(2) else 1)
