"""Walls, chambers and wall crossing for b2+ = 1.

A wall is L^perp for a characteristic L with L.L equal to the square of the
canonical class K~ (index zero).  It is stored as the pair {L, -L}.  All
sign decisions are signs of exact rational pairings.

Crossing convention: moving from chamber A into chamber B across L^perp,
with L oriented so that L.B > 0, SW_B(L) = SW_A(L) - 1 and
SW_B(-L) = SW_A(-L) + 1.  Summed over walls this gives the closed form

    SW_C(L) = SW_C0(L) + (sign(L.C0) - sign(L.C)) / 2

so values do not depend on the path.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .basic_classes import enumerate_basic_classes
from .lattice import LatticeError, LatticeSpace, add, mat_vec, neg, pair_up, scale, sub
from .surfaces import SurfaceLattice, UnsupportedModel


class ChamberError(ValueError):
    pass


class OnWall(ChamberError):
    def __init__(self, point, wall):
        super().__init__(f"point {fmt_vec(point)} lies on the wall of {wall}")
        self.point = point
        self.wall = wall


def fmt_vec(v) -> str:
    return "(" + ", ".join(str(c) for c in v) + ")"


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _frac(v: Sequence) -> tuple:
    return tuple(Fraction(c) for c in v)


@dataclass(frozen=True)
class ChamberSystem:
    """Lattice, canonical class and a vector fixing the forward cone component."""

    space: LatticeSpace
    canonical: tuple[int, ...]
    reference: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.space.square(self.reference) <= 0:
            raise ChamberError("reference vector must have positive square")
        if not self.space.is_characteristic(self.canonical):
            raise ChamberError("canonical class is not characteristic")

    @classmethod
    def for_surface(cls, sl: SurfaceLattice) -> "ChamberSystem":
        if sl.model.b2_plus != 1:
            raise UnsupportedModel("chambers are only defined for b2+ = 1")
        if sl.model.kind != "general_type":
            raise UnsupportedModel("chamber computations need a general type model")
        return cls(sl.space, sl.canonical, sl.K0)

    @property
    def wall_square(self) -> int:
        return self.space.square(self.canonical)

    def component(self, x) -> int:
        sq = self.space.square(x)
        if sq <= 0:
            raise ChamberError(f"point {fmt_vec(x)} does not have positive square")
        return _sign(self.space.pairing(x, self.reference))

    def natural_xi(self, L) -> tuple[int, ...]:
        return tuple((a + b) // 2 for a, b in zip(L, self.canonical))


@dataclass(frozen=True)
class Chamber:
    point: tuple
    component_sign: int


@dataclass(frozen=True)
class Crossing:
    wall: tuple[int, ...]  # oriented so that wall . (far endpoint) > 0
    parameter: Fraction


@dataclass(frozen=True)
class ChamberSWFunction:
    chamber: Chamber
    values: Mapping = field(default_factory=dict)  # (L, Xi) -> int, zero entries dropped

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", {k: v for k, v in sorted(self.values.items()) if v})

    def value(self, L) -> int:
        for (l2, _), v in self.values.items():
            if l2 == tuple(L):
                return v
        return 0

    def by_L(self) -> dict:
        return {L: v for (L, _), v in self.values.items()}

    def support(self) -> list:
        return list(self.values)

    def negated(self) -> "ChamberSWFunction":
        ch = Chamber(tuple(-c for c in self.chamber.point), -self.chamber.component_sign)
        return ChamberSWFunction(ch, {k: -v for k, v in self.values.items()})


def lies_on_wall(system: ChamberSystem, v, square_target: Optional[int] = None) -> Optional[tuple]:
    """A characteristic L of the target square with L.v = 0, or None."""
    s = system.wall_square if square_target is None else square_target
    if system.space.square(v) <= 0:
        raise ChamberError("v must have positive square")
    found = system.space.enumerate_with_square(s, v, 0, characteristic_only=True)
    return pair_up(found[0]) if found else None


def _max_ratio(space: LatticeSpace, a, x0, x1) -> Fraction:
    """max over y on [x0, x1] of (a.y)^2 / y.y, exactly.

    With a.y = al + be t and y.y = q0 + 2 q1 t + q2 t^2 the derivative of the
    ratio vanishes where a.y = 0 or where a linear form in t vanishes.
    """
    d = sub(x1, x0)
    al, be = space.pairing(a, x0), space.pairing(a, d)
    q0, q1, q2 = space.square(x0), space.pairing(x0, d), space.square(d)
    ts = [Fraction(0), Fraction(1)]
    den = be * q1 - al * q2
    if den:
        t = Fraction(al * q1 - be * q0) / den
        if 0 < t < 1:
            ts.append(t)
    return max(Fraction((al + be * t) ** 2) / (q0 + 2 * q1 * t + q2 * t * t) for t in ts)


def walls_crossed(system: ChamberSystem, x0, x1, square_target: Optional[int] = None) -> list[Crossing]:
    """Walls strictly separating x0 from x1, ordered along the segment.

    A wall L^perp meeting the segment at y has |L.a| bounded through the
    negative definite form on y^perp, where a = x0 + x1; that bound feeds
    the ellipsoid enumeration.  Several walls may share a parameter.
    Crossings of distinct walls commute, so no perturbation is needed.
    """
    space = system.space
    s = system.wall_square if square_target is None else square_target
    x0, x1 = _frac(x0), _frac(x1)
    c0, c1 = system.component(x0), system.component(x1)
    if space.pairing(x0, x1) <= 0 or c0 != c1:
        raise ChamberError("endpoints lie in different components of the positive cone")
    for x in (x0, x1):
        hit = lies_on_wall(system, x, s) if s < 0 else None
        if hit is not None:
            raise OnWall(x, hit)
    if s >= 0 or x0 == x1:
        # a nonzero vector of square >= 0 cannot be orthogonal to a positive one
        return []
    a = add(x0, x1)
    aa = space.square(a)
    bound_sq = (-s) * (_max_ratio(space, a, x0, x1) - aa)
    out = []
    for L in space._enumerate(s, a, bound_sq, True):
        if L != pair_up(L):
            continue  # each wall once
        p0, p1 = space.pairing(L, x0), space.pairing(L, x1)
        if _sign(p0) == _sign(p1):
            continue
        if p1 < 0:
            L, p0, p1 = neg(L), -p0, -p1
        out.append(Crossing(L, Fraction(p0) / (p0 - p1)))
    out.sort(key=lambda c: (c.parameter, c.wall))
    return out


def distinguished_chamber(sl: SurfaceLattice) -> ChamberSWFunction:
    system = ChamberSystem.for_surface(sl)
    bset = enumerate_basic_classes(sl)
    values = {(c.L, c.Xi): c.sw for c in bset.classes}
    return ChamberSWFunction(Chamber(_frac(sl.K0), 1), values)


def standard_crossing(values: dict, L, xi_of) -> dict:
    out = dict(values)
    for cls_, delta in ((tuple(L), -1), (neg(L), 1)):
        key = (cls_, xi_of(cls_))
        out[key] = out.get(key, 0) + delta
    return out


def one_sided_crossing(values: dict, L, xi_of) -> dict:
    """Deliberately wrong crossing used as a regression fixture.

    Only the representative with positive last nonzero coordinate is
    updated, so reflection in the last exceptional class exposes it.
    """
    out = dict(values)
    rep = pair_up(tuple(L)[::-1])[::-1]
    delta = -1 if rep == tuple(L) else 1
    key = (rep, xi_of(rep))
    out[key] = out.get(key, 0) + delta
    return out


CrossingRule = Callable[[dict, tuple, Callable], dict]


def cross_wall(system: ChamberSystem, f: ChamberSWFunction, wall, target,
               crossing: CrossingRule = standard_crossing) -> ChamberSWFunction:
    space = system.space
    L = tuple(wall)
    if space.square(L) != system.wall_square or not space.is_characteristic(L):
        raise ChamberError(f"{fmt_vec(L)} is not a wall class")
    here, there = space.pairing(L, f.chamber.point), space.pairing(L, target)
    if here == 0 or there == 0:
        raise ChamberError("a chamber point lies on the wall")
    if _sign(here) == _sign(there):
        raise ChamberError(f"wall of {fmt_vec(L)} does not separate the chambers")
    if there < 0:
        L = neg(L)
    values = crossing(f.values, L, system.natural_xi)
    return ChamberSWFunction(Chamber(_frac(target), system.component(target)), values)


def propagate(system: ChamberSystem, start: ChamberSWFunction, target, via: Iterable = (),
              crossing: CrossingRule = standard_crossing) -> ChamberSWFunction:
    """Carry start along the polygonal path start -> via... -> target."""
    here, values = start.chamber.point, dict(start.values)
    for point in [*via, target]:
        point = _frac(point)
        for c in walls_crossed(system, here, point):
            values = crossing(values, c.wall, system.natural_xi)
        here = point
    return ChamberSWFunction(Chamber(here, system.component(here)), values)


def sw_for_chamber(sl: SurfaceLattice, target, via: Iterable = (),
                   crossing: CrossingRule = standard_crossing) -> ChamberSWFunction:
    system = ChamberSystem.for_surface(sl)
    target = _frac(target)
    via = [_frac(v) for v in via]
    if system.component(target) < 0:
        # SW on -C is -SW on C
        return sw_for_chamber(sl, neg(target), [neg(v) for v in via], crossing).negated()
    return propagate(system, distinguished_chamber(sl), target, via, crossing)


def check_c0_properties(f: ChamberSWFunction, sl: SurfaceLattice) -> dict:
    system = ChamberSystem.for_surface(sl)
    space = system.space
    vals = f.values
    Ls = [L for L, _ in vals]
    rep_i = all(v in (-1, 0, 1) for v in vals.values()) and len(set(Ls)) == len(Ls)
    rep_ii = len(vals) == 2 ** (sl.ell + 1)
    best, pairs = None, []
    for L1, L2 in itertools.combinations_with_replacement(sorted(set(Ls)), 2):
        q = Fraction(space.square(add(L1, L2)), 4)
        if best is None or q > best:
            best, pairs = q, [(L1, L2)]
        elif q == best:
            pairs.append((L1, L2))
    rep_iii = best is not None and best == sl.model.ksq
    rep_iv = rep_iii
    if rep_iv:
        for L1, L2 in pairs:
            p = add(L1, L2)
            if space.square(p) <= 0:
                rep_iv = False
                break
            if system.component(p) != f.chamber.component_sign:
                p = neg(p)
            try:
                if walls_crossed(system, f.chamber.point, p):
                    rep_iv = False
                    break
            except OnWall:
                rep_iv = False
                break
    return {"i": rep_i, "ii": rep_ii, "iii": rep_iii, "iv": rep_iv}


def _probe_directions(sl: SurfaceLattice) -> list[tuple[int, ...]]:
    dirs = [sl.K0, *sl.exceptionals]
    r0 = sl.space.rank - sl.ell
    if r0 >= 3:
        # a root of the first block orthogonal to K0
        dirs.append(tuple(1 if i == 1 else -1 if i == 2 else 0 for i in range(sl.space.rank)))
    return dirs


def probe_chambers(sl: SurfaceLattice, radius: int = 1, denominator: int = 1,
                   offset: Optional[Sequence] = None) -> dict:
    """SW functions of the forward chambers met by a probe grid.

    Grid points are x = offset + a K0 + sum b_i E_i + c v with coefficients
    in (1/denominator) Z of absolute value at most radius, where v is a
    fixed root orthogonal to K0 when the first block has room for one.
    Backward points are mirrored.  Chambers are keyed by the set of walls
    separating them from K0.
    """
    if radius < 0 or denominator < 1:
        raise ValueError("radius must be >= 0 and denominator >= 1")
    system = ChamberSystem.for_surface(sl)
    space = system.space
    dirs = _probe_directions(sl)
    base = _frac(offset) if offset is not None else (Fraction(0),) * space.rank
    steps = [Fraction(k, denominator) for k in range(-radius * denominator, radius * denominator + 1)]
    start = distinguished_chamber(sl)
    seen: dict = {}
    saw_point = False
    for coeffs in itertools.product(steps, repeat=len(dirs)):
        x = tuple(base[i] + sum((c * d[i] for c, d in zip(coeffs, dirs)), Fraction(0))
                  for i in range(space.rank))
        if space.square(x) <= 0:
            continue
        if system.component(x) < 0:
            x = neg(x)
        try:
            crossed = walls_crossed(system, start.chamber.point, x)
        except OnWall:
            continue
        saw_point = True
        key = frozenset(pair_up(c.wall) for c in crossed)
        if key in seen:
            continue
        values = dict(start.values)
        for c in crossed:
            values = standard_crossing(values, c.wall, system.natural_xi)
        seen[key] = ChamberSWFunction(Chamber(x, 1), values)
    if not saw_point:
        raise ChamberError("region contains no admissible point off the walls")
    return seen


def search_distinguished(sl: SurfaceLattice, radius: int = 1, denominator: int = 1,
                         offset: Optional[Sequence] = None) -> list[ChamberSWFunction]:
    """Probe chambers satisfying clauses (i)-(iii), listed with their mirrors.

    With 2-torsion present the lattice only sees c1, so a chamber is kept
    when its L-support matches that of the distinguished chamber.
    """
    found = probe_chambers(sl, radius, denominator, offset)
    c0_support = set(distinguished_chamber(sl).by_L())
    out = []
    for f in found.values():
        if sl.model.torsion2 != "none":
            keep = set(f.by_L()) == c0_support
        else:
            rep = check_c0_properties(f, sl)
            keep = rep["i"] and rep["ii"] and rep["iii"]
        if keep:
            out.extend([f, f.negated()])
    return out


def random_forward_point(system: ChamberSystem, rng: random.Random, directions: Sequence = (),
                         spread: int = 12, margin: Fraction = Fraction(1, 4)) -> tuple:
    """A random forward point off every wall.

    x = a ref + sum b_i d_i + w with w a small perturbation; taking the b_i
    of the same size as a pushes samples toward the cone boundary, where the
    walls are.  Points with x^2 < margin a^2 ref^2 are rejected: the number of
    walls met on a segment grows without bound as it nears the light cone.
    """
    space = system.space
    while True:
        a = rng.randint(spread // 2, spread)
        x = scale(a, system.reference)
        for d in directions:
            x = add(x, scale(rng.randint(-a, a), d))
        x = add(x, tuple(rng.choice((-1, 0, 0, 0, 1)) for _ in range(space.rank)))
        if space.square(x) <= max(0, margin * a * a * space.square(system.reference)) \
                or system.component(x) < 0:
            continue
        if system.wall_square >= 0 or lies_on_wall(system, x) is None:
            return _frac(x)


def transport(system: ChamberSystem, f: ChamberSWFunction, m) -> dict:
    """Push values along an isometry, keyed by L (b1 = 0 makes Xi redundant)."""
    return {mat_vec(m, L): v for (L, _), v in f.values.items()}


def reflection_equivariance_check(sl: SurfaceLattice, n, trials: int = 10, seed: int = 0,
                                  crossing: CrossingRule = standard_crossing) -> bool:
    system = ChamberSystem.for_surface(sl)
    space = system.space
    if space.square(n) != -1:
        raise ChamberError("n must have square -1")
    m = space.reflection_matrix(n)
    rng = random.Random(seed)
    for _ in range(trials):
        x = random_forward_point(system, rng, sl.exceptionals)
        rx = mat_vec(m, x)
        try:
            here = sw_for_chamber(sl, x, crossing=crossing)
            there = sw_for_chamber(sl, rx, crossing=crossing)
        except OnWall:
            return False
        if transport(system, here, m) != there.by_L():
            return False
    return True


def is_sw_trivial_chamber_possible(sl: SurfaceLattice, samples: int = 50, seed: int = 0) -> bool:
    """Whether some sampled chamber carries the zero SW function.

    Each sample is first moved by reflections in the E_i so that its E_i
    coefficients are nonpositive; K0 + sum E_i then pairs positively with
    it, no crossed wall equals +-(K0 + sum E_i), and the value at that class
    survives.  The function itself is computed as a cross-check.
    """
    system = ChamberSystem.for_surface(sl)
    space = system.space
    rng = random.Random(seed)
    Kt = sl.canonical
    for _ in range(samples):
        x = random_forward_point(system, rng, sl.exceptionals)
        for e in sl.exceptionals:
            if space.pairing(x, e) < 0:  # coefficient of e is -(x.e)
                x = tuple(a + 2 * space.pairing(x, e) * b for a, b in zip(x, e))
        f = sw_for_chamber(sl, x)
        if not f.values:
            return True
        if space.pairing(Kt, x) <= 0:
            return True
        if any(pair_up(c.wall) == pair_up(Kt) for c in walls_crossed(system, sl.K0, x)):
            return True
    return False


@dataclass(frozen=True)
class RationalFixture:
    """diag(1, -1^16) with K = -3H + sum E_i and a chamber carrying no basic classes."""

    system: ChamberSystem
    H: tuple[int, ...]
    K: tuple[int, ...]
    C: tuple[int, ...]
    omega0: tuple[int, ...]

    def zero_function(self) -> ChamberSWFunction:
        return ChamberSWFunction(Chamber(_frac(self.omega0), 1), {})


def rational_fixture(blowups: int = 16) -> RationalFixture:
    n = blowups + 1
    space = LatticeSpace.diagonal([1] + [-1] * blowups)
    H = tuple(int(i == 0) for i in range(n))
    ones = (0,) + (1,) * blowups
    K = add(scale(-3, H), ones)
    C = sub(scale(4, H), ones)
    omega0 = sub(scale(6, H), ones)
    return RationalFixture(ChamberSystem(space, K, H), H, K, C, omega0)


def fixture_sign_check(fx: Optional[RationalFixture] = None, crossing: CrossingRule = standard_crossing) -> dict:
    """Cross from the zero chamber through (-K)^perp and read SW at -K and K."""
    fx = fx or rational_fixture()
    sp = fx.system.space
    omega = add(fx.omega0, fx.C)
    if sp.pairing(omega, fx.K) <= 0 or sp.pairing(fx.omega0, fx.K) >= 0:
        raise LatticeError("fixture points do not straddle the wall of K")
    crossed = walls_crossed(fx.system, fx.omega0, omega)
    f = propagate(fx.system, fx.zero_function(), omega, crossing=crossing)
    return {
        "crossed_K": any(pair_up(c.wall) == pair_up(fx.K) for c in crossed),
        "sw_minus_K": f.value(neg(fx.K)),
        "sw_K": f.value(fx.K),
        "walls": len(crossed),
    }
