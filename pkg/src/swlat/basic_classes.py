"""Seiberg-Witten basic classes of the supported surfaces.

A basic class is stored as (L, Xi) with 2 Xi = L + K in the free lattice,
where K is the canonical class of the surface the set lives on.  Values
follow one sign convention throughout: the class on the -K side of the
polarization carries +1, and its partner (-L, Xi - L) carries
(-1)^((1 - b1 + b2+)/2) times that.  Blowups leave values unchanged, which
keeps the distinguished chamber invariant under reflection in each E_i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .lattice import LatticeSpace, add, neg, scale, sub
from .surfaces import SurfaceLattice, UnsupportedModel


@dataclass(frozen=True, order=True)
class SpincBasicClass:
    L: tuple[int, ...]
    Xi: tuple[int, ...]
    sw: int = 1
    mult: int = 1
    index: int = 0


@dataclass(frozen=True)
class BasicClassSet:
    space: LatticeSpace
    canonical: tuple[int, ...]
    classes: tuple[SpincBasicClass, ...]
    pg: int = 0
    q: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", tuple(sorted(self.classes)))
        keys = [(c.L, c.Xi) for c in self.classes]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate (L, Xi) pairs in basic class set")

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    @property
    def symmetry_sign(self) -> int:
        """(-1)^((1 - b1 + b2+)/2) with b1 = 2q, b2+ = 2pg + 1."""
        return -1 if (1 - self.q + self.pg) % 2 else 1

    def Ls(self) -> list[tuple[int, ...]]:
        return [c.L for c in self.classes]

    def transform(self, m: Sequence[Sequence[int]]) -> "BasicClassSet":
        """Push the set forward along an isometry given as a matrix."""
        from .lattice import mat_vec

        return BasicClassSet(
            self.space,
            mat_vec(m, self.canonical),
            tuple(SpincBasicClass(mat_vec(m, c.L), mat_vec(m, c.Xi), c.sw, c.mult, c.index)
                  for c in self.classes),
            self.pg,
            self.q,
        )


def index_of(space: LatticeSpace, L, canonical) -> int:
    num = space.square(L) - space.square(canonical)
    if num % 4:
        raise ValueError("L^2 - K^2 is not divisible by 4; L is not characteristic")
    return num // 4


def _make(space, canonical, L, sw, mult) -> SpincBasicClass:
    twice = add(L, canonical)
    if any(c % 2 for c in twice):
        raise ValueError("L + K is not divisible by 2")
    return SpincBasicClass(tuple(L), tuple(c // 2 for c in twice), sw, mult,
                           index_of(space, L, canonical))


def _sign_for(side: int, sym: int) -> int:
    return 1 if side <= 0 else sym


def minimal_general_type(sl: SurfaceLattice) -> BasicClassSet:
    m = sl.model
    if m.kind != "general_type":
        raise UnsupportedModel("minimal_general_type needs a general type surface")
    space, K0 = sl.space, sl.K0
    sym = -1 if (1 - m.q + m.pg) % 2 else 1
    classes = [_make(space, K0, neg(K0), 1, 1), _make(space, K0, K0, sym, 1)]
    return BasicClassSet(space, K0, tuple(classes), m.pg, m.q)


def _fiber_classes(sl: SurfaceLattice, degrees: Iterable[tuple[int, int]]) -> BasicClassSet:
    """Build classes L = (k - 2D) t from (D, multiplicity) pairs, merging collisions."""
    m, t = sl.model, sl.fiber.t
    k = m.canonical_degree
    sym = -1 if (1 - m.q + m.pg) % 2 else 1
    merged: dict[int, int] = {}
    for D, mult in degrees:
        merged[D] = merged.get(D, 0) + mult
    classes = []
    for D, mult in merged.items():
        c = k - 2 * D
        classes.append(_make(sl.space, sl.K0, scale(c, t), _sign_for(c, sym) if c else 1, mult))
    return BasicClassSet(sl.space, sl.K0, tuple(classes), m.pg, m.q)


def elliptic_divisor_tuples(m1: int, m2: int, a_range: Iterable[int]):
    """(a, b, c, D) with D = a f + b F1 + c F2 measured in t-units."""
    for a in a_range:
        for b in range(m1):
            for c in range(m2):
                yield a, b, c, a * m1 * m2 + b * m2 + c * m1


def elliptic_pg_positive(sl: SurfaceLattice) -> BasicClassSet:
    m = sl.model
    if m.kind != "elliptic" or m.pg < 1:
        raise UnsupportedModel("elliptic_pg_positive needs an elliptic surface with pg >= 1")
    tuples = elliptic_divisor_tuples(m.m1, m.m2, range(m.pg))
    return _fiber_classes(sl, ((D, comb(m.pg - 1, a)) for a, _, _, D in tuples))


def dolgachev(sl: SurfaceLattice) -> BasicClassSet:
    m = sl.model
    if m.kind != "elliptic" or m.pg != 0:
        raise UnsupportedModel("dolgachev needs an elliptic surface with pg = 0")
    k = m.canonical_degree
    # deg(K - 2D) >= 0 bounds a by k / (2 m1 m2)
    a_max = k // (2 * m.m1 * m.m2)
    half = [D for _, _, _, D in elliptic_divisor_tuples(m.m1, m.m2, range(a_max + 1)) if k - 2 * D >= 0]
    # the partner of K - 2D is K - 2(K - D)
    degrees = [(D, 1) for D in half] + [(k - D, 1) for D in half if 2 * D != k]
    return _fiber_classes(sl, degrees)


def minimal_basic_classes(sl: SurfaceLattice) -> BasicClassSet:
    m = sl.model
    if m.kind == "general_type":
        return minimal_general_type(sl)
    if m.pg >= 1:
        return elliptic_pg_positive(sl)
    return dolgachev(sl)


def blowup(bset: BasicClassSet, exceptionals: Sequence[Sequence[int]]) -> BasicClassSet:
    """Apply the blowup formula once per exceptional class.

    (L, Xi) becomes (L + sum eps_i E_i, Xi + sum_{eps_i = +1} E_i) for every
    sign vector eps; the canonical class gains sum E_i.
    """
    space = bset.space
    exceptionals = [tuple(e) for e in exceptionals]
    for e in exceptionals:
        if len(e) != space.rank or space.square(e) != -1:
            raise ValueError("exceptional class missing from the lattice")
    canonical = add(bset.canonical, *exceptionals) if exceptionals else bset.canonical
    out = []
    for c in bset.classes:
        for eps in itertools.product((1, -1), repeat=len(exceptionals)):
            L, Xi = c.L, c.Xi
            for sign, e in zip(eps, exceptionals):
                L = add(L, scale(sign, e))
                if sign > 0:
                    Xi = add(Xi, e)
            out.append(SpincBasicClass(L, Xi, c.sw, c.mult, index_of(space, L, canonical)))
    return BasicClassSet(space, canonical, tuple(out), bset.pg, bset.q)


def enumerate_basic_classes(sl: SurfaceLattice) -> BasicClassSet:
    return blowup(minimal_basic_classes(sl), sl.exceptionals)


def _effective(x: int, m1: int, m2: int) -> bool:
    """Is x t effective, i.e. a nonnegative combination of F2 = m1 t and F1 = m2 t."""
    if x < 0:
        return False
    return any((x - j * m2) % m1 == 0 for j in range(x // m2 + 1))


def has_irreducible_solution(sl: SurfaceLattice, L: Sequence[int], omega: Sequence[int]) -> bool:
    """Irreducible-solution criterion for a fiber-direction class L.

    L^2 >= K^2 and either (K+L)/2 effective with omega.L < 0 or (K-L)/2
    effective with omega.L > 0.  On omega.L = 0 only the torsion canonical
    class itself is accepted.
    """
    from .surfaces import degree

    m, space = sl.model, sl.space
    if sl.fiber is None:
        raise UnsupportedModel("effectivity is decided on elliptic models only")
    plus, minus = add(sl.K0, L), sub(sl.K0, L)
    if any(c % 2 for c in plus):
        raise ValueError("(K +- L)/2 is not integral")
    if space.square(L) < space.square(sl.K0):
        return False
    n = m.m1 * m.m2
    x_plus = degree(tuple(c // 2 for c in plus), sl) * n
    x_minus = degree(tuple(c // 2 for c in minus), sl) * n
    wl = space.pairing(omega, L)
    if wl < 0:
        return _effective(int(x_plus), m.m1, m.m2)
    if wl > 0:
        return _effective(int(x_minus), m.m1, m.m2)
    return not any(L) and not any(sl.K0)


def check_simple_type(bset: BasicClassSet) -> bool:
    return all(c.index == 0 for c in bset.classes)


def involution_partner(c: SpincBasicClass, sym: int) -> SpincBasicClass:
    return SpincBasicClass(neg(c.L), sub(c.Xi, c.L), sym * c.sw, c.mult, c.index)


def is_involution_closed(bset: BasicClassSet) -> bool:
    have = set(bset.classes)
    return all(involution_partner(c, bset.symmetry_sign) in have for c in bset.classes)


satisfies_prop21 = has_irreducible_solution
