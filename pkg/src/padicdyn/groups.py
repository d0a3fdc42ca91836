"""The abelian groups on balls and spheres, and isomorphisms between them.

On a ball V_r(a):    x (+) y = x + y - a          (identity a)
On a sphere S_r(a):  x (*) y = r(x - a)(y - a) + a (identity 1/r + a)

The scalar r = p^e enters only as the p-adic number with unit digits
(1, 0, 0, ...), so multiplying or dividing by it is an exact digit
shift and loses nothing.  The chosen center a is part of the group
(two centers describing the same carrier give different, isomorphic,
operations), so groups keep a as given rather than canonicalized.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .errors import InputError, InsufficientPrecision, KindMismatch, NotInCarrier, PadicError
from .geometry import Ball, Sphere, canonical_ball, contains, embed
from .padic import DEFAULT_PRECISION, PAdic, check_prime, equal_mod

SAMPLE_DEPTH = DEFAULT_PRECISION


def _window_end(*values: PAdic) -> int | None:
    ends = [x.known_mod for x in values if x.known_mod is not None]
    return min(ends) if ends else None


@dataclass(frozen=True, slots=True)
class BallGroup:
    p: int
    e: int
    a: Fraction

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "a", Fraction(self.a))

    @property
    def carrier(self) -> Ball:
        return canonical_ball(self.a, self.e, p=self.p)

    @property
    def kind(self) -> str:
        return "ball"

    def _check_member(self, x: PAdic):
        if not contains(self.carrier, x):
            raise NotInCarrier(f"{x} is not in {self.carrier}")

    def identity(self) -> PAdic:
        return embed(self.a, self.p, -self.e + SAMPLE_DEPTH)

    def combine(self, x: PAdic, y: PAdic) -> PAdic:
        """x + y - a.  Closure is forced by the strong triangle inequality."""
        self._check_member(x)
        self._check_member(y)
        a = embed(self.a, self.p, _window_end(x, y))
        return x + y - a

    def inverse(self, x: PAdic) -> PAdic:
        """2a - x, the (+)-inverse of x."""
        self._check_member(x)
        a = embed(2 * self.a, self.p, _window_end(x))
        return a - x

    def sample(self, rng: Random, depth: int = SAMPLE_DEPTH) -> PAdic:
        t = [rng.randrange(self.p) for _ in range(depth)]
        return self._point(t, depth)

    def _point(self, t, depth):
        tv = sum(d * self.p ** i for i, d in enumerate(t))
        value = self.a + Fraction(self.p) ** (-self.e) * tv
        return embed(value, self.p, -self.e + depth)


@dataclass(frozen=True, slots=True)
class SphereGroup:
    p: int
    e: int
    a: Fraction

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "a", Fraction(self.a))

    @property
    def carrier(self) -> Sphere:
        return Sphere(self.p, self.e, self.a)

    @property
    def kind(self) -> str:
        return "sphere"

    @property
    def r_as_padic(self) -> PAdic:
        # p^e with unit digits (1, 0, 0, ...)
        return PAdic(self.p, self.e, 1, DEFAULT_PRECISION)

    def _check_member(self, x: PAdic):
        if not contains(self.carrier, x):
            raise NotInCarrier(f"{x} is not on {self.carrier}")

    def identity(self) -> PAdic:
        return embed(Fraction(self.p) ** (-self.e) + self.a, self.p, -self.e + SAMPLE_DEPTH)

    def combine(self, x: PAdic, y: PAdic) -> PAdic:
        """r(x - a)(y - a) + a; multiplication by r is an exact shift."""
        self._check_member(x)
        self._check_member(y)
        a = embed(self.a, self.p, _window_end(x, y))
        prod = ((x - a) * (y - a)).shift(self.e)
        return prod + embed(self.a, self.p, _window_end(prod))

    def inverse(self, x: PAdic) -> PAdic:
        """1/(r^2 (x - a)) + a.

        Division by zero cannot occur: carrier members have
        v(x - a) = -e exactly.
        """
        self._check_member(x)
        a = embed(self.a, self.p, _window_end(x))
        w = (x - a).inv().shift(-2 * self.e)
        return w + embed(self.a, self.p, _window_end(w))

    def sample(self, rng: Random, depth: int = SAMPLE_DEPTH) -> PAdic:
        t = [rng.randrange(1, self.p)]
        t += [rng.randrange(self.p) for _ in range(depth - 1)]
        return self._point(t, depth)

    def _point(self, t, depth):
        tv = sum(d * self.p ** i for i, d in enumerate(t))
        value = self.a + Fraction(self.p) ** (-self.e) * tv
        return embed(value, self.p, -self.e + depth)


Group = BallGroup | SphereGroup


def iso(src: Group, dst: Group, x: PAdic) -> PAdic:
    """h(x) = r1 (x - a1) / r2 + a2: the structure isomorphism src -> dst.

    Maps identity to identity and intertwines the two operations.

    Raises:
        KindMismatch: a ball group paired with a sphere group.
        NotInCarrier: x outside the source carrier.
    """
    if src.kind != dst.kind:
        raise KindMismatch(f"no isomorphism {src.kind} -> {dst.kind}")
    if src.p != dst.p:
        raise InputError(f"mixed primes: {src.p} and {dst.p}")
    src._check_member(x)
    a1 = embed(src.a, src.p, _window_end(x))
    shifted = (x - a1).shift(src.e - dst.e)
    return shifted + embed(dst.a, dst.p, _window_end(shifted))


def certified_equal(g: Group, lhs: PAdic, rhs: PAdic) -> bool:
    """Equality at the common knowledge window.

    Raises:
        InsufficientPrecision: the common window holds no carrier digit
            (never answers from a zero effective window).
    """
    k = _window_end(lhs, rhs)
    if k is None:
        return True
    if k <= -g.e:
        raise InsufficientPrecision("zero effective window in comparison")
    return equal_mod(lhs, rhs, k)


@dataclass(frozen=True, slots=True)
class LawReport:
    law: str
    trials: int
    failures: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "law": self.law,
            "trials": self.trials,
            "failures": list(self.failures),
        }


def _safe_render(x) -> str | None:
    if x is None:
        return None
    if isinstance(x, PAdic):
        try:
            return x.render()
        except PadicError:
            return str(x)
    return str(x)


def _failure(x, y, z, lhs, rhs) -> dict:
    return {
        "x": _safe_render(x),
        "y": _safe_render(y),
        "z": _safe_render(z),
        "lhs": _safe_render(lhs),
        "rhs": _safe_render(rhs),
    }


def check_group_axioms(g: Group, trials: int = 1000, seed: int = 0) -> list[LawReport]:
    """Randomized verification of the abelian group laws on g's carrier.

    Samples Haar-uniform carrier points and checks commutativity,
    associativity, identity, and inverse laws at the common precision
    window.  Each law reports its first counterexample, if any;
    evaluation errors count as counterexamples and are recorded in
    place of the offending side.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")

    def law_comm(x, y, z):
        return g.combine(x, y), g.combine(y, x)

    def law_assoc(x, y, z):
        return g.combine(g.combine(x, y), z), g.combine(x, g.combine(y, z))

    def law_identity(x, y, z):
        return g.combine(x, g.identity()), x

    def law_inverse(x, y, z):
        return g.combine(x, g.inverse(x)), g.identity()

    laws = [
        ("commutativity", law_comm, 2),
        ("associativity", law_assoc, 3),
        ("identity", law_identity, 1),
        ("inverse", law_inverse, 1),
    ]
    out = []
    for name, law, arity in laws:
        rng = Random(seed)
        failures: list[dict] = []
        ran = 0
        for _ in range(trials):
            x, y, z = (g.sample(rng) for _ in range(3))
            ran += 1
            args = [x, y if arity >= 2 else None, z if arity >= 3 else None]
            try:
                lhs, rhs = law(x, y, z)
                if certified_equal(g, lhs, rhs):
                    continue
                failures.append(_failure(*args, lhs, rhs))
            except PadicError as err:
                failures.append(_failure(*args, f"{type(err).__name__}: {err}", None))
            break
        out.append(LawReport(name, ran, tuple(failures)))
    return out
