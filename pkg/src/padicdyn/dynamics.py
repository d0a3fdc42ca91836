"""Dynamics of rational maps restricted to a sphere.

An isometry of a sphere that displaces every point by the same distance
p^-rho preserves each ball of radius p^rho around an orbit point, so it
descends to a permutation of the level-k cell partition for every
k <= e - (-rho).  Ergodicity with respect to the normalized measure is
decided level by level: a single cycle at level k means every invariant
clopen set built from level-k cells is trivial, while a split into two
or more cycles materializes an invariant set of intermediate measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .errors import (
    DivisionByZero,
    InputError,
    InsufficientPrecision,
    InvarianceFailed,
    NotInCarrier,
    NotPermutation,
    PrecisionError,
    PrecisionExhausted,
    ResourceLimit,
)
from .geometry import (
    DEFAULT_CELL_CAP,
    Ball,
    Sphere,
    canonical_ball,
    cell_center,
    cell_count,
    clopen,
    contains,
    embed,
    locate_cell,
    sphere_cells,
)
from .groups import SphereGroup
from .mapdsl import RationalMap, eval_map
from .measure import normalized_measure
from .padic import DEFAULT_PRECISION, PAdic

# displacement must vanish this many digits past the sphere radius
# before a point counts as fixed at working precision
FIXED_POINT_MARGIN = 8


@dataclass(frozen=True)
class IsometryCheck:
    passed: bool
    witness: dict | None
    trials: int


@dataclass(frozen=True)
class RhoResult:
    """Displacement profile of a self-map of a sphere.

    kind is "Constant" when every sampled point moves by exactly
    p^rho_exp, "NonConstant" when two sampled displacements differ, and
    "ZeroSomewhere" when a fixed point was found.  profile keeps the
    sampled (point, exponent) pairs for inspection.
    """

    kind: str
    rho_exp: int | None
    witness: dict | None
    profile: tuple


@dataclass(frozen=True)
class OrbitRecord:
    start: PAdic
    points: tuple
    displacement_exps: tuple
    period: int | None
    offset: int | None


@dataclass(frozen=True)
class CycleStructure:
    """Cycle decomposition of the permutation induced on level-k cells.

    cycles lists each cycle as a tuple of cell indices starting at its
    minimal element; lengths is the sorted multiset of cycle lengths.
    """

    level: int
    lengths: tuple
    cycles: tuple


@dataclass(frozen=True)
class ErgodicityVerdict:
    verdict: str
    p: int
    reason: str | None = None
    rho_exp: int | None = None
    criterion: Fraction | None = None
    level: int | None = None
    cycles: CycleStructure | None = None
    witness: dict | None = None
    rho_equals_radius: bool = False
    invariant_measure: Fraction | None = None

    def as_dict(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.reason is not None:
            out["reason"] = self.reason
        if self.rho_exp is not None:
            out["rho"] = "%d^%d" % (self.p, self.rho_exp)
        if self.criterion is not None:
            out["criterion_value"] = str(self.criterion)
        if self.level is not None:
            out["level"] = self.level
        if self.cycles is not None:
            out["cycles"] = list(self.cycles.lengths)
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _render(x: PAdic) -> str:
    try:
        return x.render()
    except PrecisionError:
        return str(x)


def _coverage(s: Sphere, depth: int, cap: int = 64) -> list:
    """Cell centers of every level whose cell count stays under cap.

    Deterministic probes that hit each coarse cell before random
    sampling takes over; centers are embedded with depth digits past
    the sphere radius.
    """
    pts = []
    k = 1
    while k <= 4 and cell_count(s.p, k) <= cap:
        for j in range(cell_count(s.p, k)):
            pts.append(embed(cell_center(s, k, j), s.p, -s.e + depth))
        k += 1
    return pts


def _sample_point(s: Sphere, pool: list, t: int, g: SphereGroup, rng: Random, depth: int) -> PAdic:
    if t < len(pool):
        return pool[t]
    return g.sample(rng, depth)


def verify_isometry(s: Sphere, f: RationalMap, trials: int = 200, seed: int = 0,
                    depth: int = DEFAULT_PRECISION) -> IsometryCheck:
    """Sampled check that f maps the sphere to itself preserving distances.

    Evaluation failures (division by zero on the carrier) and certified
    distance distortions are returned as witnesses, not raised.  A
    distortion too small to certify at the working window raises
    PrecisionExhausted.
    """
    g = SphereGroup(s.p, s.e, s.center)
    rng = Random(seed)
    pool = _coverage(s, depth)
    for t in range(trials):
        x = _sample_point(s, pool, t, g, rng, depth)
        y = g.sample(rng, depth)
        try:
            fx = eval_map(f, x)
            fy = eval_map(f, y)
        except DivisionByZero as err:
            return IsometryCheck(False, {
                "x": _render(x), "y": _render(y),
                "note": "evaluation failed: %s" % err,
            }, trials)
        if not contains(s, fx):
            return IsometryCheck(False, {
                "x": _render(x), "y": _render(y),
                "note": "image %s leaves the sphere" % _render(fx),
            }, trials)
        d_in = x - y
        if d_in.is_zero or d_in.is_flagged:
            continue
        d_out = fx - fy
        if d_out.is_zero or d_out.is_flagged:
            bound = d_out.v if d_out.is_flagged else None
            if bound is not None and bound <= d_in.v:
                raise PrecisionExhausted(
                    "cannot resolve |f(x)-f(y)| past p^-%d" % bound)
            return IsometryCheck(False, {
                "x": _render(x), "y": _render(y),
                "note": "distance p^%d contracted below window" % (-d_in.v),
            }, trials)
        if d_out.v != d_in.v:
            return IsometryCheck(False, {
                "x": _render(x), "y": _render(y),
                "note": "distance p^%d mapped to p^%d" % (-d_in.v, -d_out.v),
            }, trials)
    return IsometryCheck(True, None, trials)


def compute_rho(s: Sphere, f: RationalMap, trials: int = 200, seed: int = 0,
                depth: int = DEFAULT_PRECISION) -> RhoResult:
    """Displacement exponent survey: |f(x) - x| over sampled x."""
    g = SphereGroup(s.p, s.e, s.center)
    rng = Random(seed)
    pool = _coverage(s, depth)
    profile = []
    const_exp = None
    first = None
    for t in range(trials):
        x = _sample_point(s, pool, t, g, rng, depth)
        fx = eval_map(f, x)
        d = fx - x
        if d.is_zero or (d.is_flagged and d.v >= -s.e + FIXED_POINT_MARGIN):
            return RhoResult("ZeroSomewhere", None, {"x": _render(x)}, tuple(profile))
        if d.is_flagged:
            raise PrecisionExhausted(
                "displacement at %s vanishes through the window" % _render(x))
        exp = -d.v
        profile.append((_render(x), exp))
        if const_exp is None:
            const_exp = exp
            first = x
        elif exp != const_exp:
            return RhoResult("NonConstant", None, {
                "x": _render(first), "y": _render(x),
                "note": "displacements p^%d and p^%d" % (const_exp, exp),
            }, tuple(profile))
    return RhoResult("Constant", const_exp, None, tuple(profile))


def derivative_norm(f: RationalMap, x: PAdic, h_exp: int) -> int:
    """Exponent a with |f(x + p^h) - f(x)| / |p^h| = p^a.

    h_exp is h; the increment must stay inside the window of x.
    """
    if x.known_mod is None or h_exp >= x.known_mod:
        raise InsufficientPrecision("increment p^%d is below the window of x" % h_exp)
    step = PAdic(x.p, h_exp, 1, x.known_mod - h_exp)
    df = eval_map(f, x + step) - eval_map(f, x)
    if df.is_zero or df.is_flagged:
        raise PrecisionExhausted("difference quotient vanishes through the window")
    return h_exp - df.v


def orbit(f: RationalMap, x0: PAdic, n: int) -> OrbitRecord:
    """First n iterates of f from x0 with certified period detection.

    displacement_exps[i] is the exponent a with
    |points[i+1] - points[i]| = p^a, or None when the difference is
    flagged zero.  A revisited residue class is certified against the
    stored point before period/offset are reported; iteration stops at
    the first certified repeat.
    """
    points = [x0]
    exps: list = []
    period = offset = None
    key_depth = min(x0.n, 24) if x0.n else 1

    def key(x: PAdic):
        if x.v is None or x.n == 0:
            return ("z", x.v)
        return (x.v, x.unit % x.p ** min(x.n, key_depth))

    seen = {key(x0): 0}
    x = x0
    for i in range(1, n + 1):
        try:
            x = eval_map(f, x)
        except PrecisionError as err:
            raise PrecisionExhausted("iterate %d: %s" % (i, err)) from err
        d = x - points[-1]
        exps.append(None if (d.is_zero or d.is_flagged) else -d.v)
        points.append(x)
        k = key(x)
        if k in seen:
            j = seen[k]
            back = x - points[j]
            if back.is_zero or back.is_flagged:
                period, offset = i - j, j
                break
        else:
            seen[k] = i
    return OrbitRecord(x0, tuple(points), tuple(exps), period, offset)


def induced_cell_map(s: Sphere, f: RationalMap, k: int, guard: int = 8,
                     cap: int = DEFAULT_CELL_CAP) -> list:
    """Permutation that f induces on the level-k cells of s.

    images[j] is the index of the cell containing the image of cell j's
    center.  Raises NotPermutation when an image leaves the sphere or
    two cells collide, which refutes the isometry assumption.
    """
    count = cell_count(s.p, k)
    if count > cap:
        raise ResourceLimit("level %d needs %d cells, cap is %d" % (k, count, cap))
    images = []
    for j in range(count):
        c = embed(cell_center(s, k, j), s.p, -s.e + k + guard)
        fx = eval_map(f, c)
        try:
            images.append(locate_cell(s, k, fx).j)
        except InputError as err:
            raise NotPermutation(
                "image of cell %d at level %d leaves the sphere" % (j, k)) from err
    if sorted(images) != list(range(count)):
        hit: dict = {}
        for j, im in enumerate(images):
            if im in hit:
                raise NotPermutation(
                    "cells %d and %d at level %d share image cell %d"
                    % (hit[im], j, k, im))
            hit[im] = j
        raise NotPermutation("level %d images are not a permutation" % k)
    return images


def cycle_structure(perm: list, level: int) -> CycleStructure:
    n = len(perm)
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        j = start
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = perm[j]
        cycles.append(tuple(cyc))
    lengths = tuple(sorted(len(c) for c in cycles))
    return CycleStructure(level, lengths, tuple(cycles))


def minimal_invariant_ball(s: Sphere, f: RationalMap, rho_exp: int, x0: PAdic) -> Ball:
    """Smallest ball around x0 that a displacement-p^rho isometry preserves.

    The radius is exactly the displacement; invariance of the ball and
    of its cell in the quotient is verified, not assumed.
    """
    if not contains(s, x0):
        raise NotInCarrier("base point %s is not on the sphere" % _render(x0))
    ball = canonical_ball(x0, rho_exp)
    fx0 = eval_map(f, x0)
    if not contains(ball, fx0):
        raise InvarianceFailed(
            "f moves %s out of %s" % (_render(x0), ball))
    k = s.e - rho_exp
    if k >= 1:
        j = locate_cell(s, k, x0).j
        perm = induced_cell_map(s, f, k)
        if perm[j] != j:
            raise InvarianceFailed(
                "cell %d at level %d is not fixed" % (j, k))
    return ball


def _cycle_invariant_measure(s: Sphere, cs: CycleStructure, perm: list) -> Fraction:
    """Measure of the invariant clopen union over the shortest cycle.

    Materializes the union, re-checks that perm maps it onto itself,
    and returns its normalized measure.
    """
    cyc = min(cs.cycles, key=len)
    if set(perm[j] for j in cyc) != set(cyc):
        raise InvarianceFailed("cycle %s is not permutation-invariant" % (cyc,))
    balls = sphere_cells(s, cs.level)
    region = clopen(s, [balls[j] for j in cyc])
    mu = normalized_measure(s, region)
    if not 0 < mu < 1:
        raise InvarianceFailed("invariant set has trivial measure %s" % mu)
    return mu


def _verdict_once(s: Sphere, f: RationalMap, max_level: int, trials: int,
                  seed: int, depth: int, guard: int) -> ErgodicityVerdict:
    top = cell_count(s.p, max_level)
    if top > DEFAULT_CELL_CAP:
        raise ResourceLimit(
            "level %d needs %d cells, cap is %d" % (max_level, top, DEFAULT_CELL_CAP))
    iso = verify_isometry(s, f, trials=trials, seed=seed, depth=depth)
    if not iso.passed:
        return ErgodicityVerdict("NotIsometry", s.p, reason="IsometryFailed",
                                 witness=iso.witness)
    rho = compute_rho(s, f, trials=trials, seed=seed, depth=depth)
    if rho.kind != "Constant":
        return ErgodicityVerdict("AssumptionViolated", s.p, reason=rho.kind,
                                 witness=rho.witness)
    rho_exp = rho.rho_exp
    flat = rho_exp == s.e
    criterion = Fraction(s.p) ** (1 + rho_exp - s.e) / (s.p - 1)
    if criterion != 1:
        return ErgodicityVerdict("NotErgodic", s.p, reason="MeasureCriterion",
                                 rho_exp=rho_exp, criterion=criterion,
                                 rho_equals_radius=flat)
    for k in range(1, max_level + 1):
        perm = induced_cell_map(s, f, k, guard=guard)
        cs = cycle_structure(perm, k)
        if len(cs.cycles) >= 2:
            mu = _cycle_invariant_measure(s, cs, perm)
            return ErgodicityVerdict("NotErgodic", s.p, reason="CycleSplit",
                                     rho_exp=rho_exp, criterion=criterion,
                                     level=k, cycles=cs, rho_equals_radius=flat,
                                     invariant_measure=mu)
    return ErgodicityVerdict("ErgodicUpToLevel", s.p, rho_exp=rho_exp,
                             criterion=criterion, level=max_level,
                             rho_equals_radius=flat)


def ergodicity_verdict(s: Sphere, f: RationalMap, max_level: int = 8,
                       trials: int = 200, seed: int = 0) -> ErgodicityVerdict:
    """Decide ergodicity of f on s up to the level-max_level partition.

    Pipeline: sampled isometry check, displacement survey, exact
    measure criterion, then cycle structure of the induced permutation
    at each level.  On a precision failure every stage is retried once
    with doubled working precision before the error propagates.
    """
    if max_level < 1:
        raise InputError("max_level must be at least 1")
    try:
        return _verdict_once(s, f, max_level, trials, seed, DEFAULT_PRECISION, 8)
    except PrecisionError:
        return _verdict_once(s, f, max_level, trials, seed, 2 * DEFAULT_PRECISION, 16)
